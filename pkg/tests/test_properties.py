import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from unified_products import (
    EnumerationTask,
    ExtendingDatum,
    FiniteGroup,
    check_axioms,
    cyclic,
    enumerate_extending_data,
    equivalent,
    extract_datum,
    find_isomorphism,
    inverse_in_product,
    klein,
    parse_datum,
    parse_group,
    phi_isomorphism,
    retraction_from_transversal,
    right_transversal,
    serialize_datum,
    serialize_group,
    subgroup,
    unified_product,
    validate_group,
)
from unified_products.catalog import alternating, dihedral, symmetric
from unified_products.finite_group import subgroups

HOSTS = [cyclic(1), cyclic(2), cyclic(3), klein(), cyclic(4)]
AMBIENTS = [cyclic(6), symmetric(3), dihedral(4), alternating(4), dihedral(6), symmetric(4)]
AMBIENT_SUBGROUPS = {G.name: list(subgroups(G)) for G in AMBIENTS}
VALID = {(H.name, m): list(enumerate_extending_data(EnumerationTask(H, m)))
         for H, m in [(cyclic(2), 3), (cyclic(3), 2), (klein(), 2), (cyclic(4), 2)]}

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def normalized_datum(draw):
    H = draw(st.sampled_from(HOSTS))
    m = draw(st.integers(1, 3))
    n, e = H.order, H.identity
    star = np.zeros((m, m), dtype=np.int64)
    star[0, :] = np.arange(m)
    star[:, 0] = np.arange(m)
    ract = np.tile(np.arange(m)[:, None], (1, n))
    lact = np.tile(np.arange(n)[None, :], (m, 1))
    coc = np.full((m, m), e, dtype=np.int64)
    for a in range(1, m):
        for b in range(1, m):
            star[a, b] = draw(st.integers(0, m - 1))
            coc[a, b] = draw(st.integers(0, n - 1))
        for h in range(n):
            if h != e:
                ract[a, h] = draw(st.integers(0, m - 1))
                lact[a, h] = draw(st.integers(0, n - 1))
    return ExtendingDatum(H, star, ract, lact, coc)


@st.composite
def valid_datum(draw):
    key = draw(st.sampled_from(sorted(VALID)))
    return draw(st.sampled_from(VALID[key]))


@SETTINGS
@given(normalized_datum())
def test_axioms_hold_exactly_when_the_product_is_a_group(d):
    ok = check_axioms(d).ok
    assert ok == oracles.axioms_hold(d.host, d.star, d.ract, d.lact, d.cocycle)
    table = oracles.pair_table(d.host, d.star, d.ract, d.lact, d.cocycle)
    assert ok == oracles.is_group(table)


@SETTINGS
@given(valid_datum())
def test_valid_data_give_groups_with_formula_inverses(d):
    P = unified_product(d)
    assert validate_group(P.group.table, P.group.identity).ok
    for h in range(d.n):
        for s in range(d.m):
            hi, si = inverse_in_product(d, h, s)
            assert P.group.mul(P.code(h, s), P.code(hi, si)) == P.group.identity


@SETTINGS
@given(valid_datum())
def test_serialized_data_round_trip(d):
    text = serialize_datum(d)
    back = parse_datum(text)
    assert back == d and serialize_datum(back) == text


@st.composite
def ambient_with_transversal(draw):
    E = draw(st.sampled_from(AMBIENTS))
    members = draw(st.sampled_from(AMBIENT_SUBGROUPS[E.name]))
    seed = draw(st.integers(0, 10**6))
    H = subgroup(E, members)
    return E, H, right_transversal(E, H, seed=seed)


@SETTINGS
@given(ambient_with_transversal())
def test_extraction_recovers_the_ambient_group(args):
    E, H, T = args
    r = retraction_from_transversal(E, H, T)
    d = extract_datum(r)
    assert oracles.axioms_hold(H.group, d.star, d.ract, d.lact, d.cocycle)
    iso = phi_isomorphism(r, d)
    m = d.m
    # phi(h, s) = h s, checked element by element on the pair table
    table = oracles.pair_table(H.group, d.star, d.ract, d.lact, d.cocycle)
    fwd = [E.mul(H.members[c // m], r.fiber[c % m]) for c in range(E.order)]
    assert iso.forward.tolist() == fwd
    i, j = np.random.default_rng(len(fwd)).integers(0, E.order, size=(2, 64))
    assert all(E.mul(fwd[a], fwd[b]) == fwd[table[a][b]] for a, b in zip(i.tolist(), j.tolist()))


@st.composite
def relabeled_group(draw):
    G = draw(st.sampled_from(AMBIENTS + HOSTS))
    perm = draw(st.permutations(range(G.order)))
    t = np.empty_like(G.table)
    for a in range(G.order):
        for b in range(G.order):
            t[perm[a], perm[b]] = perm[G.table[a, b]]
    return G, FiniteGroup(t, perm[G.identity]), perm


@SETTINGS
@given(relabeled_group())
def test_relabeled_groups_are_isomorphic(args):
    G, R, _ = args
    phi = find_isomorphism(G, R)
    assert phi is not None
    phi = np.asarray(phi)
    assert sorted(phi.tolist()) == list(range(G.order))
    assert np.array_equal(phi[G.table], R.table[np.ix_(phi, phi)])


@SETTINGS
@given(relabeled_group())
def test_group_text_round_trip(args):
    _, R, _ = args
    text = serialize_group(R)
    back = parse_group(text)
    assert np.array_equal(back.table, R.table) and back.identity == R.identity


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(VALID[("Z2", 3)]), st.sampled_from(VALID[("Z2", 3)]))
def test_equivalence_is_reflexive_and_symmetric(a, b):
    assert equivalent(a, a) is not None
    assert (equivalent(a, b) is None) == (equivalent(b, a) is None)


@SETTINGS
@given(normalized_datum())
def test_quick_verdict_matches_full_axiom_detail(d):
    report = check_axioms(d)
    verdict = report.ok
    assert verdict == (report.total == 0) == (not report.failures)
    assert all(f.tag in report.counts for f in report.failures)


@st.composite
def small_table(draw):
    n = draw(st.integers(1, 4))
    rows = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    return np.array(rows), draw(st.integers(0, n - 1))


@SETTINGS
@given(small_table())
def test_quick_verdict_matches_full_group_detail(args):
    table, e = args
    report = validate_group(table, e)
    verdict = report.ok
    assert verdict == (report.total == 0) == (not report.failures)
    assert verdict == (oracles.is_group(table) and oracles.identity_of(table) == e)
