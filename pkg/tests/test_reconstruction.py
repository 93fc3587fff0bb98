import numpy as np
import pytest

import oracles
from conftest import s3_setup, z4_datum
from unified_products import (
    ExtendingDatum,
    cyclic,
    extract_datum,
    klein,
    phi_isomorphism,
    retraction_from_transversal,
    right_transversal,
    schreier_reconstruct,
    schreier_vs_unified,
    subgroup,
    unified_product,
)
from unified_products.catalog import alternating, dihedral, direct_product, subgroup_by_labels, symmetric
from unified_products.errors import NotExactFactorization, NotNormal
from unified_products.finite_group import all_transversals, is_normal, subgroups
from unified_products.reconstruction import check_exact_factorization

SMALL = [cyclic(1), cyclic(2), cyclic(3), klein(), cyclic(4), cyclic(6), symmetric(3), dihedral(4),
         cyclic(8), alternating(4), dihedral(5), dihedral(6)]
MEDIUM = [symmetric(4), direct_product(cyclic(2), alternating(4)), dihedral(12)]


def brute_extract(E, H, reps):
    """Loop-only extraction: factor every element as h * t by search."""
    members = list(H.members)
    fiber = [E.identity] + sorted(t for t in reps if t != E.identity)

    def factor(x):
        hits = [(i, j) for i, h in enumerate(members) for j, t in enumerate(fiber) if E.mul(h, t) == x]
        assert len(hits) == 1
        return hits[0]

    m, n = len(fiber), len(members)
    star = [[0] * m for _ in range(m)]
    coc = [[0] * m for _ in range(m)]
    ract = [[0] * n for _ in range(m)]
    lact = [[0] * n for _ in range(m)]
    for a in range(m):
        for b in range(m):
            coc[a][b], star[a][b] = factor(E.mul(fiber[a], fiber[b]))
        for h in range(n):
            lact[a][h], ract[a][h] = factor(E.mul(fiber[a], members[h]))
    return fiber, star, ract, lact, coc


def _check_round_trip(E, H, T):
    r = retraction_from_transversal(E, H, T)
    d = extract_datum(r)
    fiber, star, ract, lact, coc = brute_extract(E, H, T.reps)
    assert list(r.fiber) == fiber
    assert d.star.tolist() == star and d.ract.tolist() == ract
    assert d.lact.tolist() == lact and d.cocycle.tolist() == coc
    assert oracles.axioms_hold(H.group, star, ract, lact, coc)
    iso = phi_isomorphism(r, d)
    m = len(fiber)
    fwd = [E.mul(H.members[code // m], fiber[code % m]) for code in range(E.order)]
    assert iso.forward.tolist() == fwd
    ptab = oracles.pair_table(H.group, star, ract, lact, coc)
    assert all(E.mul(fwd[a], fwd[b]) == fwd[ptab[a][b]] for a in range(E.order) for b in range(E.order))


def test_z4_example():
    Z4 = cyclic(4)
    H = subgroup(Z4, [0, 2])
    r = retraction_from_transversal(Z4, H, right_transversal(Z4, H, reps=[0, 1]))
    assert r.p.tolist() == [0, 0, 1, 1]
    d = extract_datum(r)
    assert d == z4_datum(H.group)
    iso = phi_isomorphism(r, d)
    assert iso.forward[1 * 2 + 1] == 3
    assert iso.backward[3] == 3
    # the other transversal gives the same datum
    r2 = retraction_from_transversal(Z4, H, right_transversal(Z4, H, reps=[0, 3]))
    assert extract_datum(r2) == d


def test_s3_example():
    E, H, T = s3_setup()
    d = extract_datum(retraction_from_transversal(E, H, T))
    # A3 is normal, so the cocycle vanishes while conjugation by (12) swaps the 3-cycles
    assert np.all(d.cocycle == 0)
    assert d.ract[:, 1].tolist() == [0, 2, 1]
    _check_round_trip(E, H, T)
    assert oracles.isomorphism(unified_product(d).group.table, E.table) is not None


def test_v4_example():
    V = klein()
    H = subgroup(V, [0, 1])
    d = extract_datum(retraction_from_transversal(V, H, right_transversal(V, H, reps=[0, 2])))
    assert d == ExtendingDatum.trivial(H.group, 2)


def test_trivial_subgroup_recovers_ambient_table():
    E = symmetric(3)
    H = subgroup(E, [E.identity])
    d = extract_datum(retraction_from_transversal(E, H))
    assert E.identity == 0
    assert np.array_equal(d.star, E.table)
    assert np.all(d.cocycle == 0) and np.all(d.lact == 0)


def test_whole_group_gives_one_point_carrier():
    E = dihedral(4)
    H = subgroup(E, range(8))
    d = extract_datum(retraction_from_transversal(E, H))
    assert d.m == 1
    assert d.lact.tolist() == [list(range(8))]
    assert np.array_equal(unified_product(d).group.table, H.group.table)


@pytest.mark.parametrize("E", SMALL, ids=lambda G: G.name)
def test_round_trip_every_transversal(E):
    for members in subgroups(E):
        H = subgroup(E, members)
        for count, T in enumerate(all_transversals(E, H)):
            if count >= 64:
                break
            _check_round_trip(E, H, T)


@pytest.mark.parametrize("E", MEDIUM, ids=lambda G: G.name)
def test_round_trip_sampled_transversals(E):
    for members in subgroups(E):
        H = subgroup(E, members)
        for seed in range(2):
            _check_round_trip(E, H, right_transversal(E, H, seed=seed))


def test_schreier_z4():
    Z4 = cyclic(4)
    H = subgroup(Z4, [0, 2])
    sd = schreier_reconstruct(Z4, H)
    assert sd.quotient.order == 2
    assert sd.crossed.action.tolist() == [[0, 1], [0, 1]]
    assert sd.crossed.cocycle.tolist() == [[0, 0], [0, 1]]
    assert schreier_vs_unified(Z4, H).agree


def test_schreier_s3_alternating():
    E = symmetric(3)
    A3 = subgroup(E, subgroup_by_labels(E, ["(123)"], generate=True))
    sd = schreier_reconstruct(E, A3)
    # conjugation by an odd element inverts A3
    assert sd.crossed.action[1].tolist() == [0, 2, 1]
    assert schreier_vs_unified(E, A3).agree


@pytest.mark.parametrize("E", SMALL, ids=lambda G: G.name)
def test_schreier_agrees_for_every_normal_subgroup(E):
    for members in subgroups(E):
        H = subgroup(E, members)
        if not is_normal(E, H):
            continue
        for seed in (None, 1):
            T = right_transversal(E, H) if seed is None else right_transversal(E, H, seed=seed)
            cmp = schreier_vs_unified(E, H, T)
            assert cmp.agree, (E.name, members, cmp)
            sd = schreier_reconstruct(E, H, T)
            assert oracles.is_group(sd.quotient.table)


def test_schreier_rejects_non_normal():
    E, H, _ = s3_setup()
    with pytest.raises(NotNormal):
        schreier_reconstruct(E, H)


def test_exact_factorization_checks():
    Z4 = cyclic(4)
    H = subgroup(Z4, [0, 2])
    with pytest.raises(NotExactFactorization):
        check_exact_factorization(Z4, H, H)
    E = symmetric(3)
    with pytest.raises(NotExactFactorization):
        check_exact_factorization(E, subgroup(E, [0]), subgroup(E, [0]))
