import itertools

import numpy as np
import pytest

import oracles
from conftest import s3_setup, trivial_ract, z4_datum
from unified_products import (
    CrossedSystem,
    EnumerationTask,
    ExtendingDatum,
    MatchedPair,
    UniversalCandidate,
    bicrossed_iso_check,
    cohomologous,
    crossed_iso_check,
    cyclic,
    enumerate_extending_data,
    equivalent,
    extract_datum,
    from_transition_map,
    h2_classes,
    k2_classes,
    klein,
    kuperberg_check,
    matched_pair_from_factorization,
    retraction_from_transversal,
    stabilizing_morphisms,
    subgroup,
    unified_product,
    verify_universal_C,
    verify_universal_D,
)
from unified_products.catalog import subgroup_by_labels, symmetric
from unified_products.classification import kuperberg_report, pair_report, psi_map
from unified_products.errors import (
    BudgetExhausted,
    NotAnObjectC,
    NotAnObjectD,
    NotExactFactorization,
    PreconditionFailed,
)


def _tables(d):
    return oracles.pair_table(d.host, d.star, d.ract, d.lact, d.cocycle)


def brute_pairs(d, d2, bijective_only=False):
    """Every (r, v) whose psi is a homomorphism fixing H, checked on full tables."""
    H, m, m2 = d.host, d.m, d2.m
    t1, t2 = _tables(d), _tables(d2)
    out = []
    for v_rest in itertools.product(range(m2), repeat=m - 1):
        v = (0,) + v_rest
        if bijective_only and (m != m2 or len(set(v)) != m):
            continue
        for r_rest in itertools.product(range(H.order), repeat=m - 1):
            r = (H.identity,) + r_rest
            psi = [H.mul(h, r[s]) * m2 + v[s] for h in range(H.order) for s in range(m)]
            if all(psi[t1[a][b]] == t2[psi[a]][psi[b]] for a in range(len(t1)) for b in range(len(t1))):
                out.append((r, v))
    return out


def brute_class_count(items, relate):
    classes = []
    for i, d in enumerate(items):
        for c in classes:
            if relate(items[c[0]], d):
                c.append(i)
                break
        else:
            classes.append([i])
    return len(classes)


def _valid(H, m):
    return list(enumerate_extending_data(EnumerationTask(H, m)))


def test_stabilizing_morphisms_match_brute_force(z4d):
    d0 = ExtendingDatum.trivial(cyclic(2), 2)
    for a in (d0, z4d):
        for b in (d0, z4d):
            got = {(p.r, p.v) for p in stabilizing_morphisms(a, b)}
            assert got == set(brute_pairs(a, b))


def test_stabilizing_morphisms_m3():
    items = _valid(cyclic(2), 3)
    for a, b in itertools.product(items[:4], repeat=2):
        got = {(p.r, p.v) for p in stabilizing_morphisms(a, b)}
        assert got == set(brute_pairs(a, b))


def test_equivalent_examples(z4d):
    d0 = ExtendingDatum.trivial(cyclic(2), 2)
    assert equivalent(d0, z4d) is None
    w = equivalent(z4d, z4d)
    assert w is not None and w.v == (0, 1)
    assert pair_report(z4d, z4d, w).ok


def test_pair_report_names_failures(z4d):
    from unified_products.classification import StabilizingPair

    report = pair_report(ExtendingDatum.trivial(cyclic(2), 2), z4d, StabilizingPair((0, 0), (0, 1)))
    assert report.tags() == ["r-cocycle"]
    assert [f.witness for f in report.by_tag("r-cocycle")] == [(1, 1)]


@pytest.mark.parametrize("H,m", [(cyclic(2), 2), (cyclic(3), 2), (cyclic(2), 3), (klein(), 2),
                                 (cyclic(4), 2)], ids=["Z2-2", "Z3-2", "Z2-3", "V4-2", "Z4-2"])
def test_k2_class_count_matches_brute_force(H, m):
    items = _valid(H, m)
    cls = k2_classes(H, m)
    assert len(cls.items) == len(items)
    expected = brute_class_count(items, lambda a, b: bool(brute_pairs(a, b, bijective_only=True)))
    assert len(cls) == expected
    # every witness is an isomorphism of the two products
    for (a, b), w in cls.witnesses.items():
        psi = psi_map(cls.items[a], w, m)
        Pa, Pb = unified_product(cls.items[a]).group, unified_product(cls.items[b]).group
        assert sorted(psi.tolist()) == list(range(Pa.order))
        assert np.array_equal(Pb.table[psi[:, None], psi[None, :]], psi[Pa.table])


def test_k2_representatives_are_distinct(z2):
    cls = k2_classes(z2, 2)
    assert len(cls) == 2
    reps = [cls.items[c[0]] for c in cls.classes]
    tables = [unified_product(d).group.table for d in reps]
    assert oracles.isomorphism(tables[0], tables[1]) is None
    assert cls.render().splitlines()[0].endswith("classes=2")


@pytest.mark.parametrize("H,m", [(cyclic(2), 2), (cyclic(2), 3), (cyclic(3), 2)],
                         ids=["Z2-2", "Z2-3", "Z3-2"])
def test_h2_classes_match_brute_force(H, m):
    items = _valid(H, m)
    racts = {d.ract.tobytes(): d.ract for d in items}
    for ract in racts.values():
        group = [d for d in items if np.array_equal(d.ract, ract)]
        cls = h2_classes(H, m, ract=ract)
        assert len(cls.items) == len(group)
        ident = tuple(range(m))
        expected = brute_class_count(
            group, lambda a, b: any(v == ident for _, v in brute_pairs(a, b, bijective_only=True)))
        assert len(cls) == expected


def test_h2_requires_common_right_action(z2):
    items = _valid(z2, 3)
    a = items[0]
    b = next(d for d in items if not np.array_equal(d.ract, a.ract))
    with pytest.raises(PreconditionFailed):
        cohomologous(a, b)
    with pytest.raises(PreconditionFailed):
        h2_classes(z2, 3)


def test_cohomologous_examples(z2, z4d):
    d0 = ExtendingDatum.trivial(z2, 2)
    assert cohomologous(d0, z4d) is None
    # f(1, 1) = 2 over Z3 is the coboundary of r = (0, 1)
    Z3 = cyclic(3)
    t0 = ExtendingDatum.trivial(Z3, 2)
    d = from_transition_map(Z3, t0.star, trivial_ract(2, 3), [0, 1])
    assert d.cocycle.tolist() == [[0, 0], [0, 2]]
    w = cohomologous(d, t0)
    assert w is not None and w.r == (0, 1)


def test_search_budget(z2):
    with pytest.raises(BudgetExhausted):
        equivalent(z4_datum(), z4_datum(), budget=1)


def test_crossed_iso_examples(z2, z4d):
    ext = CrossedSystem(z2, z2, [[0, 1], [0, 1]], [[0, 0], [0, 1]])
    w = crossed_iso_check(z4d, ext)
    assert w is not None and w.v == (0, 1)
    triv = CrossedSystem(z2, z2, [[0, 1], [0, 1]], [[0, 0], [0, 0]])
    assert crossed_iso_check(z4d, triv) is None
    assert crossed_iso_check(ExtendingDatum.trivial(z2, 2), triv) is not None


def test_bicrossed_iso_examples(z2, z4d):
    E, H, T = s3_setup()
    d = extract_datum(retraction_from_transversal(E, H, T))
    mp = matched_pair_from_factorization(E, H, subgroup(E, T.reps))
    assert bicrossed_iso_check(d, mp) is not None
    triv = MatchedPair(z2, z2, [[0, 1], [0, 1]], [[0, 0], [1, 1]])
    assert bicrossed_iso_check(z4d, triv) is None
    assert bicrossed_iso_check(ExtendingDatum.trivial(z2, 2), triv) is not None


def test_kuperberg_same_complement_is_identity():
    E = symmetric(3)
    A3 = subgroup_by_labels(E, ["(123)"], generate=True)
    S = subgroup_by_labels(E, ["e", "(12)"])
    w = kuperberg_check(E, A3, S, S)
    assert w is not None
    assert w.v == (0, 1) and w.r == (0, 0)


def test_kuperberg_two_complements():
    E = symmetric(3)
    A3 = subgroup(E, subgroup_by_labels(E, ["(123)"], generate=True))
    S = subgroup(E, subgroup_by_labels(E, ["e", "(12)"]))
    T = subgroup(E, subgroup_by_labels(E, ["e", "(13)"]))
    w = kuperberg_check(E, A3, S, T)
    assert w is not None
    for s in range(2):
        assert E.mul(A3.members[w.r[s]], T.members[w.v[s]]) == S.members[s]
    assert kuperberg_report(E, A3, S, T, w).ok


def test_kuperberg_rejects_non_factorization():
    Z4 = cyclic(4)
    with pytest.raises(NotExactFactorization):
        kuperberg_check(Z4, [0, 2], [0, 1], [0, 3])
    with pytest.raises(NotExactFactorization):
        kuperberg_check(Z4, [0, 2], [0, 2], [0, 2])


def _s3_tables():
    E = symmetric(3)
    return E, E.index("e"), E.index("(12)"), E.index("(13)")


@pytest.mark.parametrize("datum", [ExtendingDatum.trivial(cyclic(2), 2), z4_datum()], ids=["V4", "Z4"])
def test_universal_c_accepts(datum):
    P = unified_product(datum)
    cands = [UniversalCandidate(P.group, tuple(int(x) for x in P.i_H), tuple(int(x) for x in P.i_S)),
             UniversalCandidate(cyclic(1), (0, 0), (0, 0))]
    if datum.cocycle[1, 1] == 0:
        cands.append(UniversalCandidate(cyclic(2), (0, 1), (0, 0)))
        cands.append(UniversalCandidate(cyclic(2), (0, 0), (0, 1)))
    for c in cands:
        res = verify_universal_C(datum, c)
        assert res.unique
        assert all(res.map[h * datum.m] == c.u[h] for h in range(datum.n))
        assert all(res.map[s] == c.v[s] for s in range(datum.m))


def test_universal_c_rejects_non_commuting_images():
    E, e, t12, t13 = _s3_tables()
    d = ExtendingDatum.trivial(cyclic(2), 2)
    with pytest.raises(NotAnObjectC) as exc:
        verify_universal_C(d, UniversalCandidate(E, (e, t12), (e, t13)))
    assert "v-exchange" in exc.value.report.tags()


@pytest.mark.parametrize("datum", [ExtendingDatum.trivial(cyclic(2), 2), z4_datum()], ids=["V4", "Z4"])
def test_universal_d_accepts(datum):
    P = unified_product(datum)
    cands = [UniversalCandidate(P.group, tuple(int(x) for x in P.p_H), tuple(int(x) for x in P.pi_S)),
             UniversalCandidate(cyclic(1), (0,), (0,))]
    if datum.cocycle[1, 1] == 0:
        cands.append(UniversalCandidate(cyclic(2), (0, 1), (0, 0)))
        cands.append(UniversalCandidate(cyclic(2), (0, 0), (0, 1)))
    for c in cands:
        res = verify_universal_D(datum, c)
        assert res.unique
        assert res.map == tuple(c.u[g] * datum.m + c.v[g] for g in range(c.G.order))


def test_universal_d_rejects_bad_projection():
    d = ExtendingDatum.trivial(cyclic(2), 2)
    with pytest.raises(NotAnObjectD) as exc:
        verify_universal_D(d, UniversalCandidate(cyclic(2), (0, 1), (1, 1)))
    assert "v-product" in exc.value.report.tags()
