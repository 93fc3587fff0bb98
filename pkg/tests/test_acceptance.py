"""The eight acceptance criteria, each timed against its runtime limit.

Every test prints one ``PASS``/``FAIL`` line; run with ``-s`` or read the
captured output to see them.
"""

import itertools
import time

import numpy as np
import pytest

import oracles
from unified_products import (
    CrossedSystem,
    EnumerationTask,
    ExtendingDatum,
    MatchedPair,
    UniversalCandidate,
    alternating,
    check_axioms,
    crossed_product,
    bicrossed_product,
    cyclic,
    dihedral,
    enumerate_extending_data,
    extract_datum,
    find_isomorphism,
    is_normal,
    k2_classes,
    klein,
    kuperberg_check,
    lift_crossed,
    lift_matched,
    lift_twisted,
    oracle_group_structures,
    phi_isomorphism,
    point_stabilizer_subgroup,
    retraction_from_transversal,
    right_transversal,
    schreier_reconstruct,
    schreier_vs_unified,
    subgroup,
    symmetric,
    twisted_product,
    unified_product,
    validate_group,
    verify_universal_C,
    verify_universal_D,
)
from unified_products.catalog import subgroup_by_labels
from unified_products.classification import kuperberg_report
from unified_products.enumeration import normalized_candidates
from unified_products.errors import NotAnObjectC, NotAnObjectD
from unified_products.extending import crossed_system_check, matched_pair_check, product_tables, twisted_check
from unified_products.finite_group import subgroups

HOSTS_UP_TO_3 = [cyclic(1), cyclic(2), cyclic(3)]


def _verdict(capsys, number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = ""):
    passed = ok and elapsed < limit
    line = (f"{'PASS' if passed else 'FAIL'} criterion {number}: {title} "
            f"({elapsed:.2f} s, limit {limit:g} s){' ' + detail if detail else ''}")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert elapsed < limit, line


def _is_hom(src_table, tgt_table, phi) -> bool:
    n = len(src_table)
    return all(phi[src_table[a][b]] == tgt_table[phi[a]][phi[b]] for a in range(n) for b in range(n))


# 1 ---------------------------------------------------------------------------------

def test_criterion_1_axioms_hold_exactly_when_the_pair_table_is_a_group(capsys):
    H = cyclic(2)
    prepared = {}
    for m in (2, 3):
        st, ra, la, co = normalized_candidates(H, m)
        tabs = product_tables(H.table, st, ra, la, co)
        prepared[m] = (st, ra, la, co, tabs)
    # the candidate stacks are exactly the normalized space: right size, no repeats
    st, ra, la, co, tabs = prepared[2]
    assert {tuple(np.concatenate([a.ravel() for a in t]).tolist()) for t in zip(st, ra, la, co)} == {
        tuple(np.concatenate([np.ravel(a) for a in t]).tolist()) for t in oracles.all_normalized(H, 2)}
    for m, expected in ((2, 16), (3, 46656)):
        st, ra, la, co, tabs = prepared[m]
        keys = {b"".join(a.tobytes() for a in t) for t in zip(st, ra, la, co)}
        assert len(st) == len(keys) == expected == EnumerationTask(H, m).naive_space
    # the pair tables are the literal multiplication rule
    for m in (2, 3):
        st, ra, la, co, tabs = prepared[m]
        picks = range(len(st)) if m == 2 else np.random.default_rng(0).choice(len(st), 2000, replace=False)
        for i in picks:
            assert tabs[i].tolist() == oracles.pair_table(H, st[i], ra[i], la[i], co[i])

    start = time.perf_counter()
    mismatches, groups = 0, 0
    for m in (2, 3):
        st, ra, la, co, tabs = prepared[m]
        for i in range(len(st)):
            is_group = validate_group(tabs[i], H.identity).ok
            axioms = check_axioms(ExtendingDatum(H, st[i], ra[i], la[i], co[i])).ok
            mismatches += is_group != axioms
            groups += is_group
    elapsed = time.perf_counter() - start
    _verdict(capsys, 1, "axioms hold exactly when the pair table is a group", mismatches == 0, elapsed, 10,
             f"[{16 + 46656} candidates, {groups} groups, {mismatches} mismatches]")


# 2 ---------------------------------------------------------------------------------

def test_criterion_2_k2_counts_match_the_structure_oracle(capsys):
    start = time.perf_counter()
    ok = True
    details = []
    for H, m in ((cyclic(2), 2), (cyclic(3), 2)):
        cls = k2_classes(H, m)
        oracle = oracle_group_structures(H, H.order * m)
        ok &= len(cls) == 2 == oracle.class_count
        fixed = {h: h * m for h in range(H.order)}
        products = [unified_product(cls.items[c[0]]).group for c in cls.classes]
        matched = []
        for k in range(oracle.class_count):
            rep = oracle.representative(k)
            hits = [j for j, P in enumerate(products) if find_isomorphism(rep, P, fixed=fixed) is not None]
            ok &= len(hits) == 1
            matched.extend(hits)
            # the oracle tables themselves are groups extending H's table
            ok &= oracles.is_group(rep.table)
            ok &= all(rep.table[a, b] == H.table[a, b] for a in range(H.order) for b in range(H.order))
        ok &= sorted(matched) == list(range(len(products)))
        details.append(f"{H.name} m={m}: k2={len(cls)} oracle={oracle.class_count}")
    elapsed = time.perf_counter() - start
    _verdict(capsys, 2, "k2 class counts equal the oracle's", ok, elapsed, 60, "[" + "; ".join(details) + "]")


# 3 ---------------------------------------------------------------------------------

def test_criterion_3_extraction_over_the_canonical_transversal_round_trips(capsys):
    start = time.perf_counter()
    checked = mismatches = 0
    for H in [cyclic(1), cyclic(2), cyclic(3), cyclic(4), klein()]:
        for m in (1, 2, 3):
            for d in enumerate_extending_data(EnumerationTask(H, m)):
                P = unified_product(d)
                E = P.group
                Hsub = subgroup(E, [int(x) for x in P.i_H])
                T = right_transversal(E, Hsub, reps=list(range(m)))
                back = extract_datum(retraction_from_transversal(E, Hsub, T))
                same = (np.array_equal(back.host.table, d.host.table)
                        and all(np.array_equal(a, b) for a, b in zip(back.tables(), d.tables())))
                checked += 1
                mismatches += not same
    elapsed = time.perf_counter() - start
    _verdict(capsys, 3, "extraction reproduces every enumerated datum", mismatches == 0 and checked > 0,
             elapsed, 120, f"[{checked} data, {mismatches} mismatches]")


# 4 ---------------------------------------------------------------------------------

def test_criterion_4_a6_over_a4(capsys):
    E = alternating(6)
    H = subgroup(E, point_stabilizer_subgroup(E, [5, 6]))
    assert H.order == 12 and E.order // H.order == 30
    start = time.perf_counter()
    ok = True
    nontrivial_cocycle = 0
    for seed in range(100):
        r = retraction_from_transversal(E, H, right_transversal(E, H, seed=seed))
        d = extract_datum(r)
        ok &= d.m == 30 and check_axioms(d).ok
        iso = phi_isomorphism(r, d)
        fwd = iso.forward
        ok &= len(set(fwd.tolist())) == E.order
        ok &= bool(np.array_equal(E.table[fwd[:, None], fwd[None, :]], fwd[iso.product.group.table]))
        nontrivial_cocycle += bool(np.any(d.cocycle != H.group.identity))
    elapsed = time.perf_counter() - start
    _verdict(capsys, 4, "A6 over A4 on 100 seeded transversals", ok and nontrivial_cocycle == 100,
             elapsed, 120, f"[{nontrivial_cocycle}/100 with nontrivial cocycle]")


# 5 ---------------------------------------------------------------------------------

def test_criterion_5_schreier_agrees_with_the_unified_product(capsys):
    start = time.perf_counter()
    ok = True
    cases = 0
    for E in (cyclic(4), symmetric(3), dihedral(4)):
        for members in subgroups(E):
            H = subgroup(E, members)
            if not is_normal(E, H):
                continue
            cases += 1
            sd = schreier_reconstruct(E, H)
            ok &= crossed_system_check(sd.crossed).ok
            C = crossed_product(sd.crossed)
            theta = sd.theta.tolist()
            ok &= len(set(theta)) == E.order and _is_hom(C.table.tolist(), E.table.tolist(), theta)
            ok &= schreier_vs_unified(E, H).agree
    elapsed = time.perf_counter() - start
    _verdict(capsys, 5, "Schreier crossed product agrees for every normal subgroup", ok, elapsed, 5,
             f"[{cases} normal subgroups]")


# 6 ---------------------------------------------------------------------------------

def _kuperberg_conditions_hold(E, H, S, T, r, v) -> bool:
    """Plain re-check from ambient arithmetic: s = r(s) v(s) and the four pair conditions."""
    hm, sm, tm = list(H.members), list(S.members), list(T.members)

    def split(x, first, second):
        hits = [(i, j) for i, a in enumerate(first) for j, b in enumerate(second) if E.mul(a, b) == x]
        assert len(hits) == 1
        return hits[0]

    # s h = (s |> h)(s <| h) over S, and t h likewise over T
    sl, sr = {}, {}
    tl, tr = {}, {}
    for h in range(len(hm)):
        for s in range(len(sm)):
            sl[s, h], sr[s, h] = split(E.mul(sm[s], hm[h]), hm, sm)
        for t in range(len(tm)):
            tl[t, h], tr[t, h] = split(E.mul(tm[t], hm[h]), hm, tm)
    pos_s = {x: i for i, x in enumerate(sm)}
    if any(E.mul(hm[r[s]], tm[v[s]]) != sm[s] for s in range(len(sm))):
        return False
    for s in range(len(sm)):
        for h in range(len(hm)):
            if v[sr[s, h]] != tr[v[s], h]:
                return False
            if E.mul(hm[sl[s, h]], hm[r[sr[s, h]]]) != E.mul(hm[r[s]], hm[tl[v[s], h]]):
                return False
    for s1 in range(len(sm)):
        for s2 in range(len(sm)):
            s12 = pos_s[E.mul(sm[s1], sm[s2])]
            if tm[v[s12]] != E.mul(tm[tr[v[s1], r[s2]]], tm[v[s2]]):
                return False
            if hm[r[s12]] != E.mul(hm[r[s1]], hm[tl[v[s1], r[s2]]]):
                return False
    return True


def test_criterion_6_kuperberg_witnesses(capsys):
    E = symmetric(3)
    A3 = subgroup(E, subgroup_by_labels(E, ["(123)"], generate=True))
    S = subgroup(E, subgroup_by_labels(E, ["e", "(12)"]))
    T = subgroup(E, subgroup_by_labels(E, ["e", "(13)"]))
    start = time.perf_counter()
    w = kuperberg_check(E, A3, S, T)
    ok = w is not None and kuperberg_report(E, A3, S, T, w).ok
    ok = ok and _kuperberg_conditions_hold(E, A3, S, T, w.r, w.v)
    same = kuperberg_check(E, A3, S, S)
    ok = ok and same is not None and same.v == (0, 1) and same.r == (A3.position[E.identity],) * 2
    ok = ok and _kuperberg_conditions_hold(E, A3, S, S, same.r, same.v)
    elapsed = time.perf_counter() - start
    _verdict(capsys, 6, "Kuperberg witness for <(12)> and <(13)> in S3", ok, elapsed, 1,
             f"[r={w.r if w else None} v={w.v if w else None}]")


# 7 ---------------------------------------------------------------------------------

def _lawful_C(d, cand) -> bool:
    """Some homomorphism out of the product restricts to u on H and v on S."""
    P = unified_product(d).group.table.tolist()
    G = cand.G.table.tolist()
    m = d.m
    for images in itertools.product(range(len(G)), repeat=len(P)):
        if all(images[h * m] == cand.u[h] for h in range(d.n)) and \
                all(images[s] == cand.v[s] for s in range(m)) and _is_hom(P, G, images):
            return True
    return False


def _lawful_D(d, cand) -> bool:
    """``g -> (u(g), v(g))`` is a homomorphism into the product."""
    P = unified_product(d).group.table.tolist()
    G = cand.G.table.tolist()
    return _is_hom(G, P, [cand.u[g] * d.m + cand.v[g] for g in range(len(G))])


def _count_homs(src, tgt, keep) -> int:
    return sum(1 for images in itertools.product(range(len(tgt)), repeat=len(src))
               if keep(images) and _is_hom(src, tgt, images))


def test_criterion_7_universality(capsys):
    d = ExtendingDatum.trivial(cyclic(2), 2)
    P = unified_product(d)
    V4, Z2, Z1, S3, Z4 = P.group, cyclic(2), cyclic(1), symmetric(3), cyclic(4)
    e, t12, t13 = S3.index("e"), S3.index("(12)"), S3.index("(13)")
    cands_C = [
        UniversalCandidate(V4, tuple(int(x) for x in P.i_H), tuple(int(x) for x in P.i_S)),
        UniversalCandidate(Z1, (0, 0), (0, 0)),
        UniversalCandidate(Z2, (0, 1), (0, 0)),
        UniversalCandidate(Z2, (0, 1), (0, 1)),
        UniversalCandidate(S3, (e, t12), (e, t13)),  # the images do not commute
    ]
    cands_D = [
        UniversalCandidate(V4, tuple(int(x) for x in P.p_H), tuple(int(x) for x in P.pi_S)),
        UniversalCandidate(Z1, (0,), (0,)),
        UniversalCandidate(Z2, (0, 1), (0, 0)),
        UniversalCandidate(Z4, (0, 0, 0, 0), (0, 1, 0, 1)),
        UniversalCandidate(Z2, (0, 1), (1, 1)),  # v misses the unit
    ]
    start = time.perf_counter()
    ok = True
    accepted = {"C": 0, "D": 0}
    lawful = {"C": 0, "D": 0}
    Pt = V4.table.tolist()
    for kind, cands, verify, lawful_fn, err in (("C", cands_C, verify_universal_C, _lawful_C, NotAnObjectC),
                                               ("D", cands_D, verify_universal_D, _lawful_D, NotAnObjectD)):
        for cand in cands:
            expect = lawful_fn(d, cand)
            lawful[kind] += expect
            try:
                res = verify(d, cand)
            except err:
                ok &= not expect
                continue
            accepted[kind] += 1
            ok &= expect and res.unique
            Gt = cand.G.table.tolist()
            if kind == "C":
                ok &= _is_hom(Pt, Gt, res.map)
                n_homs = _count_homs(Pt, Gt, lambda im, c=cand: all(im[h * 2] == c.u[h] for h in range(2))
                                     and all(im[s] == c.v[s] for s in range(2)))
            else:
                ok &= _is_hom(Gt, Pt, res.map)
                n_homs = _count_homs(Gt, Pt, lambda im, c=cand: all(
                    im[g] // 2 == c.u[g] and im[g] % 2 == c.v[g] for g in range(len(Gt))))
            ok &= cand.G.order <= 8 and n_homs == 1
    ok &= accepted == lawful == {"C": 4, "D": 4}
    elapsed = time.perf_counter() - start
    _verdict(capsys, 7, "universal properties on the trivial Z2, m=2 datum", ok, elapsed, 10,
             f"[accepted C={accepted['C']}/5 D={accepted['D']}/5]")


# 8 ---------------------------------------------------------------------------------

def _automorphisms(G):
    n = G.order
    t = G.table.tolist()
    return [p for p in itertools.permutations(range(n)) if _is_hom(t, t, p)]


def _crossed_candidates(H, G):
    """Rows of an action must be automorphisms and the cocycle must be normalized;
    every other input fails the crossed-system check."""
    n, k = H.order, G.order
    auts = _automorphisms(H)
    free = [(a, b) for a in range(1, k) for b in range(1, k)]
    for rows in itertools.product(auts, repeat=k):
        for vals in itertools.product(range(n), repeat=len(free)):
            coc = np.full((k, k), H.identity)
            for (a, b), x in zip(free, vals):
                coc[a, b] = x
            yield CrossedSystem(H, G, np.array(rows).reshape(k, n), coc)


def _matched_candidates(H, G):
    """Both maps must be actions: ``g |> -`` permutes H with ``1 |> -`` the identity,
    and ``- <| h`` permutes G with ``- <| 1`` the identity."""
    n, k = H.order, G.order
    hperms = list(itertools.permutations(range(n)))
    gperms = list(itertools.permutations(range(k)))
    for lrows in itertools.product(hperms, repeat=k - 1):
        left = np.array([tuple(range(n))] + list(lrows)).reshape(k, n)
        for rcols in itertools.product(gperms, repeat=n - 1):
            right = np.array([tuple(range(k))] + list(rcols)).reshape(n, k).T
            yield MatchedPair(H, G, left, right)


def _twisted_full_space(H, m):
    n = H.order
    star_free = [(a, b) for a in range(1, m) for b in range(1, m)]
    ract_free = [(a, h) for a in range(1, m) for h in range(n) if h != H.identity]
    for sv in itertools.product(range(m), repeat=len(star_free)):
        star = np.zeros((m, m), dtype=np.int64)
        star[0, :] = star[:, 0] = np.arange(m)
        for (a, b), x in zip(star_free, sv):
            star[a, b] = x
        for rv in itertools.product(range(m), repeat=len(ract_free)):
            ract = np.tile(np.arange(m)[:, None], (1, n))
            for (a, h), x in zip(ract_free, rv):
                ract[a, h] = x
            for cv in itertools.product(range(n), repeat=len(star_free)):
                coc = np.full((m, m), H.identity)
                for (a, b), x in zip(star_free, cv):
                    coc[a, b] = x
                yield star, ract, coc


def test_criterion_8_lifts_reproduce_the_special_products(capsys):
    start = time.perf_counter()
    ok = True
    counts = {"crossed": 0, "matched": 0, "twisted": 0}
    for H in HOSTS_UP_TO_3:
        for G in HOSTS_UP_TO_3:
            for c in _crossed_candidates(H, G):
                if not crossed_system_check(c).ok:
                    continue
                counts["crossed"] += 1
                C = crossed_product(c)
                U = unified_product(lift_crossed(c)).group
                ok &= C.identity == U.identity and bool(np.array_equal(C.table, U.table))
            for mp in _matched_candidates(H, G):
                if not matched_pair_check(mp).ok:
                    continue
                counts["matched"] += 1
                B = bicrossed_product(mp)
                U = unified_product(lift_matched(mp)).group
                ok &= B.identity == U.identity and bool(np.array_equal(B.table, U.table))
    for H in HOSTS_UP_TO_3:
        for m in (1, 2, 3):
            for d in enumerate_extending_data(EnumerationTask(H, m, frozenset({"trivial-lact"}))):
                ok &= twisted_check(H, d.star, d.ract, d.cocycle).ok
                counts["twisted"] += 1
                W = twisted_product(H, d.star, d.ract, d.cocycle)
                U = unified_product(lift_twisted(H, d.star, d.ract, d.cocycle)).group
                ok &= W.identity == U.identity and bool(np.array_equal(W.table, U.table))
    elapsed = time.perf_counter() - start
    _verdict(capsys, 8, "lifts are table-identical to the special products", ok and all(counts.values()),
             elapsed, 30, "[" + ", ".join(f"{k}={v}" for k, v in counts.items()) + "]")


@pytest.mark.parametrize("H,m", [(cyclic(2), 2), (cyclic(2), 3), (cyclic(3), 2)],
                         ids=["Z2-2", "Z2-3", "Z3-2"])
def test_twisted_check_selects_exactly_the_enumerated_twisted_data(H, m):
    """Supports criterion 8: on full candidate spaces, the twisted check accepts
    exactly the data the enumerator returns under the trivial-lact filter."""
    enumerated = {tuple(np.concatenate([d.star.ravel(), d.ract.ravel(), d.cocycle.ravel()]).tolist())
                  for d in enumerate_extending_data(EnumerationTask(H, m, frozenset({"trivial-lact"})))}
    accepted = {tuple(np.concatenate([s.ravel(), r.ravel(), c.ravel()]).tolist())
                for s, r, c in _twisted_full_space(H, m) if twisted_check(H, s, r, c).ok}
    assert accepted == enumerated


@pytest.mark.parametrize("H,G", [(cyclic(2), cyclic(2)), (cyclic(3), cyclic(1)), (cyclic(1), cyclic(3))],
                         ids=["Z2-Z2", "Z3-Z1", "Z1-Z3"])
def test_pruned_crossed_and_matched_spaces_lose_nothing(H, G):
    """Supports criterion 8: over every action and cocycle table, the valid inputs
    all lie in the pruned candidate spaces."""
    n, k = H.order, G.order
    pruned_c = {(c.action.tobytes(), c.cocycle.tobytes()) for c in _crossed_candidates(H, G)}
    pruned_m = {(mp.left.tobytes(), mp.right.tobytes()) for mp in _matched_candidates(H, G)}
    for a in itertools.product(range(n), repeat=k * n):
        action = np.array(a, dtype=np.int64).reshape(k, n)
        for f in itertools.product(range(n), repeat=k * k):
            c = CrossedSystem(H, G, action, np.array(f, dtype=np.int64).reshape(k, k))
            if crossed_system_check(c).ok:
                assert (c.action.tobytes(), c.cocycle.tobytes()) in pruned_c
        for rv in itertools.product(range(k), repeat=k * n):
            mp = MatchedPair(H, G, action, np.array(rv, dtype=np.int64).reshape(k, n))
            if matched_pair_check(mp).ok:
                assert (mp.left.tobytes(), mp.right.tobytes()) in pruned_m

