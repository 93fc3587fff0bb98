"""Morphisms between unified products that fix ``H``, and the induced classifications.

A pair ``(r, v)`` of unitary maps ``r: S -> H``, ``v: S -> S'`` induces

    psi(h, s) = (h r(s), v(s))

and ``psi`` is a homomorphism fixing ``H`` exactly when

    v-equivariant  v(s <| h) = v(s) <|' h
    r-action       (s |> h) r(s <| h) = r(s) (v(s) |>' h)
    v-product      v(s1 * s2) = (v(s1) <|' r(s2)) *' v(s2)
    r-cocycle      f(s1, s2) r(s1 * s2) = r(s1) (v(s1) |>' r(s2)) f'(v(s1) <|' r(s2), v(s2))

Searches enumerate ``v`` in lexicographic order and, for each ``v``, every
``r`` at once as a batch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AxiomViolation,
    BudgetExhausted,
    CrossedAxiomViolation,
    InternalInconsistency,
    MatchedPairViolation,
    NotAnObjectC,
    NotAnObjectD,
    NotExactFactorization,
    PreconditionFailed,
)
from .extending import (
    CrossedSystem,
    ExtendingDatum,
    MatchedPair,
    bicrossed_product,
    check_axioms,
    crossed_product,
    crossed_system_check,
    lift_matched,
    matched_pair_check,
    unified_product,
)
from .finite_group import FiniteGroup, SubgroupEmbedding, is_homomorphism, is_subgroup, subgroup
from .reports import LawFailure, LawReport

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class StabilizingPair:
    r: tuple[int, ...]
    v: tuple[int, ...]

    @property
    def is_bijective(self) -> bool:
        return len(set(self.v)) == len(self.v)

    def to_dict(self) -> dict:
        return {"r": list(self.r), "v": list(self.v)}


def _same_host(d: ExtendingDatum, d2: ExtendingDatum) -> None:
    if d.host != d2.host:
        raise PreconditionFailed("both data must extend the same group")


def _all_r(d: ExtendingDatum) -> np.ndarray:
    """All unitary ``r: S -> H`` as rows, lexicographic."""
    n, m = d.n, d.m
    free = np.array(list(itertools.product(range(n), repeat=m - 1)), dtype=np.int64).reshape(-1, m - 1)
    return np.hstack([np.full((len(free), 1), d.host.identity, dtype=np.int64), free])


def _pair_sides(d: ExtendingDatum, d2: ExtendingDatum, v: np.ndarray, R: np.ndarray) -> dict:
    Ht = d.host.table
    m, n = d.m, d.n
    s, h = np.arange(m)[:, None], np.arange(n)[None, :]
    s1, s2 = np.arange(m)[:, None], np.arange(m)[None, :]
    out = {}
    out["v-equivariant"] = (v[d.ract[s, h]], d2.ract[v[s], h])
    out["r-action"] = (Ht[d.lact[s, h], R[:, d.ract[s, h]]], Ht[R[:, s], d2.lact[v[s], h]])
    r2 = R[:, s2]
    moved = d2.ract[v[s1], r2]
    out["v-product"] = (np.broadcast_to(v[d.star[s1, s2]], moved.shape), d2.star[moved, v[s2]])
    out["r-cocycle"] = (Ht[d.cocycle[s1, s2], R[:, d.star[s1, s2]]],
                        Ht[Ht[R[:, s1], d2.lact[v[s1], r2]], d2.cocycle[moved, v[s2]]])
    return out


_PAIR_NAMES = {"v-equivariant": ("s", "h"), "r-action": ("s", "h"),
               "v-product": ("s1", "s2"), "r-cocycle": ("s1", "s2")}


def pair_report(d: ExtendingDatum, d2: ExtendingDatum, pair: StabilizingPair) -> LawReport:
    """Which pair conditions fail for ``pair``, with witnesses."""
    _same_host(d, d2)
    report = LawReport("stabilizing-pair")
    v = np.asarray(pair.v, dtype=np.int64)
    R = np.asarray(pair.r, dtype=np.int64)[None, :]
    if len(pair.r) != d.m or len(pair.v) != d.m or np.any(v >= d2.m) or np.any(v < 0):
        report.add(LawFailure("shape", (), (), note="r and v must be maps on the carrier"))
        return report
    if pair.r[0] != d.host.identity or pair.v[0] != 0:
        report.add(LawFailure("unitary", (), (), note="r(1_S) = 1_H and v(1_S) = 1_S' required"))
    for tag, (lhs, rhs) in _pair_sides(d, d2, v, R).items():
        if tag != "v-equivariant":
            lhs, rhs = lhs[0], rhs[0]
        report.add_mask(tag, _PAIR_NAMES[tag], lhs != rhs, lhs, rhs)
    return report


def psi_map(d: ExtendingDatum, pair: StabilizingPair, width: int) -> np.ndarray:
    """``psi(h, s) = (h r(s), v(s))`` on codes ``h*width + s``."""
    h = np.arange(d.n)[:, None]
    s = np.arange(d.m)[None, :]
    r = np.asarray(pair.r)
    v = np.asarray(pair.v)
    return (d.host.table[h, r[s]] * width + v[s]).ravel()


def _verify_psi(d, d2, pair, need_iso: bool) -> None:
    P, P2 = unified_product(d).group, unified_product(d2).group
    psi = psi_map(d, pair, d2.m)
    if not np.array_equal(P2.table[psi[:, None], psi[None, :]], psi[P.table]):
        raise InternalInconsistency(f"pair {pair} satisfies the conditions but psi is not multiplicative")
    if not np.array_equal(psi[np.arange(d.n) * d.m], np.arange(d.n) * d2.m):
        raise InternalInconsistency(f"psi of pair {pair} does not fix H")
    bijective = len(set(psi.tolist())) == P.order == P2.order
    if bijective != (pair.is_bijective and d.m == d2.m):
        raise InternalInconsistency(f"bijectivity of psi and of v disagree for {pair}")
    if need_iso and not bijective:
        raise InternalInconsistency(f"witness {pair} is not an isomorphism")


def _v_candidates(d: ExtendingDatum, d2: ExtendingDatum, bijective: bool):
    if bijective:
        if d.m != d2.m:
            return
        for rest in itertools.permutations(range(1, d.m)):
            yield (0,) + rest
    else:
        for rest in itertools.product(range(d2.m), repeat=d.m - 1):
            yield (0,) + rest


def _search(d, d2, bijective, budget, first_only, fixed_v=None):
    _same_host(d, d2)
    for x in (d, d2):
        report = check_axioms(x)
        if not report.ok:
            raise AxiomViolation(report)
    R = _all_r(d)
    if len(R) > budget:
        raise BudgetExhausted(f"{len(R)} maps r exceed the budget {budget}", 0, [])
    found: list[StabilizingPair] = []
    nodes = 0
    candidates = [fixed_v] if fixed_v is not None else _v_candidates(d, d2, bijective)
    for v in candidates:
        nodes += len(R)
        if nodes > budget:
            raise BudgetExhausted(f"pair search exceeded the budget {budget}", nodes - len(R), found,
                                  checkpoint={"v": list(v)})
        va = np.asarray(v, dtype=np.int64)
        sides = _pair_sides(d, d2, va, R)
        lhs, rhs = sides["v-equivariant"]
        if not np.array_equal(lhs, rhs):
            continue
        ok = np.ones(len(R), dtype=bool)
        for tag in ("r-action", "v-product", "r-cocycle"):
            lhs, rhs = sides[tag]
            ok &= np.all((lhs == rhs).reshape(len(R), -1), axis=1)
        for row in R[ok]:
            pair = StabilizingPair(tuple(int(x) for x in row), tuple(int(x) for x in v))
            _verify_psi(d, d2, pair, need_iso=bijective)
            found.append(pair)
            if first_only:
                return found
    return found


def stabilizing_morphisms(d: ExtendingDatum, d2: ExtendingDatum,
                          budget: int = DEFAULT_BUDGET) -> list[StabilizingPair]:
    """Every pair satisfying the pair conditions, each re-verified through ``psi``."""
    return _search(d, d2, bijective=False, budget=budget, first_only=False)


def invert_pair(d: ExtendingDatum, pair: StabilizingPair) -> StabilizingPair:
    """``r'(s') = r(v^-1(s'))^-1``, ``v' = v^-1``."""
    vinv = [0] * len(pair.v)
    for s, t in enumerate(pair.v):
        vinv[t] = s
    H = d.host
    return StabilizingPair(tuple(H.inv(pair.r[vinv[t]]) for t in range(len(vinv))), tuple(vinv))


def compose_pairs(d: ExtendingDatum, first: StabilizingPair, second: StabilizingPair) -> StabilizingPair:
    """Pair of ``psi_second o psi_first``: ``r(s) = r1(s) r2(v1(s))``, ``v = v2 o v1``."""
    H = d.host
    return StabilizingPair(
        tuple(H.mul(first.r[s], second.r[first.v[s]]) for s in range(len(first.v))),
        tuple(second.v[first.v[s]] for s in range(len(first.v))),
    )


def equivalent(d: ExtendingDatum, d2: ExtendingDatum,
               budget: int = DEFAULT_BUDGET) -> StabilizingPair | None:
    """First bijective-``v`` witness in lexicographic ``(v, r)`` order, or ``None``."""
    found = _search(d, d2, bijective=True, budget=budget, first_only=True)
    if not found:
        return None
    pair = found[0]
    back = invert_pair(d, pair)
    if not pair_report(d2, d, back).ok:
        raise InternalInconsistency(f"inverse of witness {pair} fails the pair conditions")
    return pair


# class sets --------------------------------------------------------------------

@dataclass
class EquivalenceClassSet:
    kind: str
    host: FiniteGroup
    m: int
    items: list[ExtendingDatum]
    classes: list[list[int]]
    witnesses: dict[tuple[int, int], StabilizingPair] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, i: int) -> int:
        for k, members in enumerate(self.classes):
            if i in members:
                return k
        raise KeyError(i)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "host": self.host.name or str(self.host.order),
            "m": self.m,
            "items": [d.digest() for d in self.items],
            "classes": [list(c) for c in self.classes],
            "witnesses": [
                {"from": a, "to": b, **w.to_dict()} for (a, b), w in sorted(self.witnesses.items())
            ],
        }

    def render(self) -> str:
        """The ``.cls`` text form."""
        lines = [f"# {self.kind} host={self.host.name or self.host.order} m={self.m} "
                 f"items={len(self.items)} classes={len(self.classes)}"]
        for i, d in enumerate(self.items):
            lines.append(f"item {i} {d.digest()}")
        for k, members in enumerate(self.classes):
            lines.append(f"class {k}: {' '.join(str(i) for i in members)}")
        for (a, b), w in sorted(self.witnesses.items()):
            lines.append(f"witness {a} -> {b} r={' '.join(map(str, w.r))} v={' '.join(map(str, w.v))}")
        return "\n".join(lines) + "\n"


def _spectrum(d: ExtendingDatum):
    return unified_product(d).group.order_spectrum


def _partition(kind, H, m, items, relate, verify):
    for d in items:
        if d.host != H or d.m != m:
            raise PreconditionFailed(f"every item must extend {H.name or 'H'} on {m} points")
    classes: list[list[int]] = []
    witnesses: dict[tuple[int, int], StabilizingPair] = {}
    spectra = [_spectrum(d) for d in items]
    for i, d in enumerate(items):
        for members in classes:
            rep = members[0]
            if spectra[rep] != spectra[i]:
                continue
            w = relate(items[rep], d)
            if w is not None:
                members.append(i)
                witnesses[(rep, i)] = w
                break
        else:
            classes.append([i])
    # chain consecutive members through the representative
    for members in classes:
        rep = members[0]
        for a, b in zip(members[1:], members[2:]):
            back = invert_pair(items[rep], witnesses[(rep, a)])
            chained = compose_pairs(items[rep], back, witnesses[(rep, b)])
            if not pair_report(items[a], items[b], chained).ok:
                raise InternalInconsistency(f"composed witness {a} -> {b} fails the pair conditions")
            verify(items[a], items[b], chained)
    return EquivalenceClassSet(kind, H, m, list(items), classes, witnesses)


def _all_items(H, m, budget):
    from .enumeration import EnumerationTask, enumerate_extending_data

    return list(enumerate_extending_data(EnumerationTask(H, m, budget=budget)))


def k2_classes(H: FiniteGroup, m: int, items=None, budget: int = DEFAULT_BUDGET) -> EquivalenceClassSet:
    """Partition under equivalence; ``items`` defaults to every valid datum."""
    items = _all_items(H, m, budget) if items is None else list(items)
    return _partition("k2", H, m, items, lambda a, b: equivalent(a, b, budget),
                      lambda a, b, w: _verify_psi(a, b, w, need_iso=True))


def cohomologous(d: ExtendingDatum, d2: ExtendingDatum,
                 budget: int = DEFAULT_BUDGET) -> StabilizingPair | None:
    """Witness with ``v`` the identity, or ``None``; both data must share ``<|``."""
    if not np.array_equal(d.ract, d2.ract):
        raise PreconditionFailed("cohomology classes need a common right action")
    found = _search(d, d2, bijective=True, budget=budget, first_only=True,
                    fixed_v=tuple(range(d.m)))
    return found[0] if found else None


def h2_classes(H: FiniteGroup, m: int, ract=None, items=None,
               budget: int = DEFAULT_BUDGET) -> EquivalenceClassSet:
    """Partition data with a fixed right action under the cohomologous relation."""
    if items is None:
        if ract is None:
            raise PreconditionFailed("give the right action or the items")
        items = [d for d in _all_items(H, m, budget) if np.array_equal(d.ract, ract)]
    items = list(items)
    if ract is None and items:
        ract = items[0].ract
    for i, d in enumerate(items):
        if not np.array_equal(d.ract, ract):
            raise PreconditionFailed(f"item {i} has a different right action")
    return _partition("h2", H, m, items, lambda a, b: cohomologous(a, b, budget),
                      lambda a, b, w: _verify_psi(a, b, w, need_iso=True))


# special targets ---------------------------------------------------------------

def crossed_iso_check(d: ExtendingDatum, c: CrossedSystem,
                      budget: int = DEFAULT_BUDGET) -> StabilizingPair | None:
    """``(r, v)`` with ``v: (S, *) -> G`` a group isomorphism and

        s |> h = r(s) (v(s) |>' h) r(s)^-1
        f(s1, s2) = r(s1) (v(s1) |>' r(s2)) f'(v(s1), v(s2)) r(s1 * s2)^-1

    or ``None``; needs a trivial right action on ``d``.
    """
    report = crossed_system_check(c)
    if not report.ok:
        raise CrossedAxiomViolation(report)
    if not check_axioms(d).ok:
        raise AxiomViolation(check_axioms(d))
    if d.host != c.H:
        raise PreconditionFailed("datum and crossed system must share H")
    m, n = d.m, d.n
    if not np.array_equal(d.ract, np.tile(np.arange(m)[:, None], (1, n))) or m != c.G.order:
        return None
    G = c.G
    Ht, Hinv = d.host.table, d.host.inverses
    R = _all_r(d)
    s, h = np.arange(m)[:, None], np.arange(n)[None, :]
    s1, s2 = np.arange(m)[:, None], np.arange(m)[None, :]
    nodes = 0
    for rest in itertools.permutations([g for g in range(m) if g != G.identity]):
        v = np.array((G.identity,) + rest, dtype=np.int64)
        nodes += len(R)
        if nodes > budget:
            raise BudgetExhausted(f"crossed search exceeded the budget {budget}", nodes - len(R))
        if not np.array_equal(v[d.star], G.table[v[s1], v[s2]]):
            continue
        rs = R[:, s]
        ok = np.all((d.lact[s, h] == Ht[Ht[rs, c.action[v[s], h]], Hinv[rs]]).reshape(len(R), -1), 1)
        rhs = Ht[Ht[Ht[R[:, s1], c.action[v[s1], R[:, s2]]], c.cocycle[v[s1], v[s2]]],
                 Hinv[R[:, d.star]]]
        ok &= np.all((d.cocycle[None] == rhs).reshape(len(R), -1), 1)
        for row in R[ok]:
            pair = StabilizingPair(tuple(int(x) for x in row), tuple(int(x) for x in v))
            _verify_target(d, pair, crossed_product(c), G.order)
            return pair
    return None


def _verify_target(d: ExtendingDatum, pair: StabilizingPair, target: FiniteGroup, k: int) -> None:
    """``psi`` must be a bijective homomorphism onto ``target`` (codes ``h*k + g``) fixing H."""
    P = unified_product(d).group
    psi = psi_map(d, pair, k)
    if len(set(psi.tolist())) != P.order or target.order != P.order:
        raise InternalInconsistency(f"witness {pair} is not bijective")
    if not np.array_equal(target.table[psi[:, None], psi[None, :]], psi[P.table]):
        raise InternalInconsistency(f"witness {pair} is not multiplicative")


def bicrossed_iso_check(d: ExtendingDatum, mp: MatchedPair,
                        budget: int = DEFAULT_BUDGET) -> StabilizingPair | None:
    """``(r, v)`` with ``v`` an isomorphism of right H-sets onto ``G`` and the
    pair conditions against trivial ``f'``, or ``None``."""
    report = matched_pair_check(mp)
    if not report.ok:
        raise MatchedPairViolation(report)
    if d.host != mp.H:
        raise PreconditionFailed("datum and matched pair must share H")
    target = lift_matched(mp)
    pair = equivalent(d, target, budget) if d.m == target.m else None
    if pair is not None:
        _verify_target(d, pair, bicrossed_product(mp), mp.G.order)
    return pair


@dataclass(frozen=True)
class KuperbergWitness:
    r: tuple[int, ...]
    v: tuple[int, ...]
    matched_s: MatchedPair
    matched_t: MatchedPair

    def to_dict(self) -> dict:
        return {"r": list(self.r), "v": list(self.v)}


def kuperberg_report(E: FiniteGroup, H: SubgroupEmbedding, S: SubgroupEmbedding,
                     T: SubgroupEmbedding, w: KuperbergWitness) -> LawReport:
    """Re-check a witness: ``s = r(s) v(s)`` in E (tag ``factor``) and the four
    pair conditions, using ambient arithmetic and the two matched pairs."""
    report = LawReport("kuperberg")
    hm, sm, tm = H.members, S.members, T.members
    A, B = w.matched_s, w.matched_t
    Hg, Sg = H.group, S.group
    r, v = w.r, w.v
    for s in range(S.order):
        if E.mul(hm[r[s]], tm[v[s]]) != sm[s]:
            report.add(LawFailure("factor", ("s",), (s,), lhs=E.mul(hm[r[s]], tm[v[s]]),
                                  rhs=sm[s]))
    for s in range(S.order):
        for h in range(H.order):
            lhs, rhs = v[A.right[s, h]], B.right[v[s], h]
            if lhs != rhs:
                report.add(LawFailure("v-equivariant", ("s", "h"), (s, h), lhs=lhs, rhs=rhs))
            lhs = Hg.mul(A.left[s, h], r[A.right[s, h]])
            rhs = Hg.mul(r[s], B.left[v[s], h])
            if lhs != rhs:
                report.add(LawFailure("r-action", ("s", "h"), (s, h), lhs=lhs, rhs=rhs))
    Tg = T.group
    for s1 in range(S.order):
        for s2 in range(S.order):
            s12 = Sg.mul(s1, s2)
            lhs, rhs = v[s12], Tg.mul(B.right[v[s1], r[s2]], v[s2])
            if lhs != rhs:
                report.add(LawFailure("v-product", ("s1", "s2"), (s1, s2), lhs=lhs, rhs=rhs))
            lhs, rhs = r[s12], Hg.mul(r[s1], B.left[v[s1], r[s2]])
            if lhs != rhs:
                report.add(LawFailure("r-cocycle", ("s1", "s2"), (s1, s2), lhs=lhs, rhs=rhs))
    return report


def kuperberg_check(E: FiniteGroup, H, S_sub, T_sub) -> KuperbergWitness | None:
    """Compare two exact factorizations ``E = H S = H T``.

    Tries unitary bijections ``v: S -> T`` with ``s v(s)^-1`` in ``H`` in
    lexicographic order and returns the first one passing the pair conditions with
    ``r(s) = s v(s)^-1``.
    """
    from .reconstruction import check_exact_factorization, matched_pair_from_factorization

    def embed(x, name):
        if isinstance(x, SubgroupEmbedding):
            return x
        if not is_subgroup(E, x):
            raise NotExactFactorization(f"{name} = {sorted(x)} is not a subgroup")
        return subgroup(E, x)

    H, S, T = embed(H, "H"), embed(S_sub, "S"), embed(T_sub, "T")
    check_exact_factorization(E, H, S, "S")
    check_exact_factorization(E, H, T, "T")
    A = matched_pair_from_factorization(E, H, S)
    B = matched_pair_from_factorization(E, H, T)
    hpos = H.position
    s_id, t_id = S.position[E.identity], T.position[E.identity]
    s_rest = [i for i in range(S.order) if i != s_id]
    t_rest = [i for i in range(T.order) if i != t_id]
    for perm in itertools.permutations(t_rest):
        v = [0] * S.order
        v[s_id] = t_id
        for s, t in zip(s_rest, perm):
            v[s] = t
        r = []
        for s in range(S.order):
            x = E.mul(S.members[s], E.inv(T.members[v[s]]))
            if x not in hpos:
                break
            r.append(hpos[x])
        else:
            w = KuperbergWitness(tuple(r), tuple(v), A, B)
            if kuperberg_report(E, H, S, T, w).ok:
                return w
    return None


# universality --------------------------------------------------------------------

@dataclass(frozen=True)
class UniversalCandidate:
    G: FiniteGroup
    u: tuple[int, ...]
    v: tuple[int, ...]


@dataclass(frozen=True)
class UniversalResult:
    map: tuple[int, ...]
    uniqueness: str
    commuting_homomorphisms: int | None

    @property
    def unique(self) -> bool:
        return self.uniqueness == "exhaustive" and self.commuting_homomorphisms == 1

    def to_dict(self) -> dict:
        return {"map": list(self.map), "uniqueness": self.uniqueness,
                "commuting_homomorphisms": self.commuting_homomorphisms}


UNIQUENESS_LIMIT = 12


def homomorphisms(src: FiniteGroup, tgt: FiniteGroup, fixed: dict[int, int] | None = None,
                  budget: int = 10**6):
    """Every homomorphism ``src -> tgt`` agreeing with ``fixed``, by backtracking."""
    N = src.order
    rows, trows = src.rows, tgt.rows
    images: list[int | None] = [None] * N
    fixed = fixed or {}
    out = []
    nodes = 0

    def consistent(x):
        ix = images[x]
        for y in range(N):
            iy = images[y]
            if iy is None:
                continue
            for a, b, ia, ib in ((x, y, ix, iy), (y, x, iy, ix)):
                p = images[rows[a][b]]
                if p is not None and p != trows[ia][ib]:
                    return False
        return True

    def go(x):
        nonlocal nodes
        if x == N:
            out.append(tuple(images))
            return
        choices = [fixed[x]] if x in fixed else range(tgt.order)
        for t in choices:
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted("homomorphism enumeration exceeded its budget", nodes, out)
            images[x] = t
            if consistent(x):
                go(x + 1)
            images[x] = None

    go(0)
    return out


def _object_c_report(d: ExtendingDatum, cand: UniversalCandidate) -> LawReport:
    H, G = d.host, cand.G
    u, v = cand.u, cand.v
    report = LawReport("object-C")
    if len(u) != d.n or len(v) != d.m:
        report.add(LawFailure("shape", (), (), note="u: H -> G and v: S -> G expected"))
        return report
    for a in range(d.n):
        for b in range(d.n):
            if u[H.mul(a, b)] != G.mul(u[a], u[b]):
                report.add(LawFailure("u-hom", ("h1", "h2"), (a, b),
                                      lhs=u[H.mul(a, b)], rhs=G.mul(u[a], u[b])))
    for s1 in range(d.m):
        for s2 in range(d.m):
            lhs = G.mul(v[s1], v[s2])
            rhs = G.mul(u[d.cocycle[s1, s2]], v[d.star[s1, s2]])
            if lhs != rhs:
                report.add(LawFailure("v-product", ("s1", "s2"), (s1, s2), lhs=lhs, rhs=rhs))
    for s in range(d.m):
        for h in range(d.n):
            lhs = G.mul(v[s], u[h])
            rhs = G.mul(u[d.lact[s, h]], v[d.ract[s, h]])
            if lhs != rhs:
                report.add(LawFailure("v-exchange", ("s", "h"), (s, h), lhs=lhs, rhs=rhs))
    return report


def verify_universal_C(d: ExtendingDatum, cand: UniversalCandidate,
                       budget: int = 10**6) -> UniversalResult:
    """The induced ``phi(h, s) = u(h) v(s)`` out of the unified product."""
    report = _object_c_report(d, cand)
    if not report.ok:
        raise NotAnObjectC(report)
    P = unified_product(d)
    G = cand.G
    phi = tuple(G.mul(cand.u[h], cand.v[s]) for h in range(d.n) for s in range(d.m))
    if not is_homomorphism(P.group, G, phi):
        raise InternalInconsistency("induced map out of the unified product is not multiplicative")
    if any(phi[int(P.i_H[h])] != cand.u[h] for h in range(d.n)) or \
            any(phi[int(P.i_S[s])] != cand.v[s] for s in range(d.m)):
        raise InternalInconsistency("induced map does not restrict to u and v")
    if G.order > UNIQUENESS_LIMIT:
        return UniversalResult(phi, "by-construction", None)
    fixed = {int(P.i_H[h]): cand.u[h] for h in range(d.n)}
    homs = [f for f in homomorphisms(P.group, G, budget=budget)
            if all(f[k] == val for k, val in fixed.items())
            and all(f[int(P.i_S[s])] == cand.v[s] for s in range(d.m))]
    if homs != [phi]:
        raise InternalInconsistency(f"{len(homs)} commuting homomorphisms instead of exactly one")
    return UniversalResult(phi, "exhaustive", len(homs))


def _object_d_report(d: ExtendingDatum, cand: UniversalCandidate) -> LawReport:
    H, G = d.host, cand.G
    u, v = cand.u, cand.v
    report = LawReport("object-D")
    if len(u) != G.order or len(v) != G.order:
        report.add(LawFailure("shape", (), (), note="u: G -> H and v: G -> S expected"))
        return report
    for x in range(G.order):
        for y in range(G.order):
            xy = G.mul(x, y)
            moved = int(d.ract[v[x], u[y]])
            rhs = H.product(u[x], int(d.lact[v[x], u[y]]), int(d.cocycle[moved, v[y]]))
            if u[xy] != rhs:
                report.add(LawFailure("u-product", ("x", "y"), (x, y), lhs=u[xy], rhs=rhs))
            rhs = int(d.star[moved, v[y]])
            if v[xy] != rhs:
                report.add(LawFailure("v-product", ("x", "y"), (x, y), lhs=v[xy], rhs=rhs))
    return report


def verify_universal_D(d: ExtendingDatum, cand: UniversalCandidate,
                       budget: int = 10**6) -> UniversalResult:
    """The induced ``psi(g) = (u(g), v(g))`` into the unified product."""
    report = _object_d_report(d, cand)
    if not report.ok:
        raise NotAnObjectD(report)
    P = unified_product(d)
    G = cand.G
    psi = tuple(cand.u[g] * d.m + cand.v[g] for g in range(G.order))
    if not is_homomorphism(G, P.group, psi):
        raise InternalInconsistency("induced map into the unified product is not multiplicative")
    if G.order > UNIQUENESS_LIMIT:
        return UniversalResult(psi, "by-construction", None)
    homs = [f for f in homomorphisms(G, P.group, budget=budget)
            if all(int(P.p_H[f[g]]) == cand.u[g] and int(P.pi_S[f[g]]) == cand.v[g]
                   for g in range(G.order))]
    if homs != [psi]:
        raise InternalInconsistency(f"{len(homs)} commuting homomorphisms instead of exactly one")
    return UniversalResult(psi, "exhaustive", len(homs))
