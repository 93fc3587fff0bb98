"""Recovering extending data from a subgroup ``H <= E`` and a transversal.

A right transversal ``T`` of ``H`` in ``E`` factors every ``x`` uniquely as
``x = h_x * t`` with ``t`` in ``T``; the map ``x -> h_x`` is the retraction
and ``T`` is its fiber over the identity. The fiber is ordered identity
first, then by ambient index, and that order fixes carrier positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CrossedAxiomViolation,
    InternalInconsistency,
    NotExactFactorization,
    NotNormal,
    PreconditionFailed,
)
from .extending import (
    CrossedSystem,
    ExtendingDatum,
    MatchedPair,
    UnifiedProduct,
    check_axioms,
    crossed_product,
    crossed_system_check,
    lift_crossed,
    unified_product,
)
from .finite_group import (
    FiniteGroup,
    SubgroupEmbedding,
    Transversal,
    is_normal,
    right_transversal,
)


@dataclass(frozen=True, eq=False)
class Retraction:
    """``p: E -> H`` (values are subgroup positions) with ``p(h x) = h p(x)``."""

    ambient: FiniteGroup
    subgroup: SubgroupEmbedding
    p: np.ndarray
    fiber: tuple[int, ...]
    source: Transversal

    @cached_property
    def fiber_position(self) -> np.ndarray:
        """Ambient index -> carrier position, ``-1`` off the fiber."""
        pos = np.full(self.ambient.order, -1, dtype=np.int64)
        pos[list(self.fiber)] = np.arange(len(self.fiber))
        return pos

    def factor(self, x: int) -> tuple[int, int]:
        """``x -> (p(x), position of p(x)^-1 x in the fiber)``."""
        E, H = self.ambient, self.subgroup
        h = int(self.p[x])
        s = E.mul(E.inv(H.members[h]), x)
        return h, int(self.fiber_position[s])


def retraction_from_transversal(E: FiniteGroup, H: SubgroupEmbedding,
                                T: Transversal | None = None) -> Retraction:
    if T is None:
        T = right_transversal(E, H)
    if T.ambient != E or T.subgroup != H:
        raise InternalInconsistency("transversal belongs to a different group pair")
    members = np.asarray(H.members)
    reps = np.asarray(T.reps)
    p = np.full(E.order, -1, dtype=np.int64)
    # x = h * t for h in H, t in T
    products = E.table[np.ix_(members, reps)]
    p[products.ravel()] = np.repeat(np.arange(len(members)), len(reps))
    if np.any(p < 0):
        raise InternalInconsistency("transversal does not cover the ambient group")
    fiber = (E.identity,) + tuple(sorted(int(t) for t in T.reps if t != E.identity))
    p.setflags(write=False)
    r = Retraction(E, H, p, fiber, T)
    _verify_retraction(r)
    return r


def _verify_retraction(r: Retraction) -> None:
    E, H = r.ambient, r.subgroup
    members = np.asarray(H.members)
    hp = H.group.table
    # p(h x) = h p(x)
    lhs = r.p[E.table[members[:, None], np.arange(E.order)[None, :]]]
    rhs = hp[np.arange(H.order)[:, None], r.p[None, :]]
    if not np.array_equal(lhs, rhs):
        raise InternalInconsistency("retraction is not left H-linear")
    if r.p[E.identity] != H.group.identity:
        raise InternalInconsistency("retraction is not unitary")
    if len(r.fiber) * H.order != E.order:
        raise InternalInconsistency("fiber size does not match the index")


def extract_datum(r: Retraction) -> ExtendingDatum:
    """Read ``*``, ``<|``, ``|>``, ``f`` off the ambient multiplication.

    ``s |> h = p(sh)``, ``s <| h = p(sh)^-1 sh``, ``f(s1, s2) = p(s1 s2)``,
    ``s1 * s2 = p(s1 s2)^-1 s1 s2``.
    """
    E, H = r.ambient, r.subgroup
    Et, Einv = E.table, E.inverses
    members = np.asarray(H.members)
    fiber = np.asarray(r.fiber)
    fpos = r.fiber_position

    sh = Et[np.ix_(fiber, members)]
    lact = r.p[sh]
    ract = fpos[Et[Einv[members[lact]], sh]]
    ss = Et[np.ix_(fiber, fiber)]
    cocycle = r.p[ss]
    star = fpos[Et[Einv[members[cocycle]], ss]]
    if np.any(ract < 0) or np.any(star < 0):
        raise InternalInconsistency("a derived carrier value left the fiber")
    d = ExtendingDatum(H.group, star, ract, lact, cocycle)
    report = check_axioms(d)
    if not report.ok:
        raise InternalInconsistency(f"extracted datum fails the axioms: {report.summary()}")
    return d


@dataclass(frozen=True, eq=False)
class PairIsomorphism:
    """``forward[h*m + s] = h s`` in E, and its inverse on ambient indices."""

    product: UnifiedProduct
    forward: np.ndarray
    backward: np.ndarray


def phi_isomorphism(r: Retraction, d: ExtendingDatum | None = None) -> PairIsomorphism:
    """Verified isomorphism from the unified product of the extracted datum onto E."""
    E, H = r.ambient, r.subgroup
    d = extract_datum(r) if d is None else d
    P = unified_product(d)
    m = d.m
    members = np.asarray(H.members)
    fiber = np.asarray(r.fiber)
    forward = E.table[np.ix_(members, fiber)].ravel()
    if len(set(forward.tolist())) != E.order:
        raise InternalInconsistency("h s is not a bijection onto E")
    # inverse x -> (p(x), p(x)^-1 x)
    x = np.arange(E.order)
    s = r.fiber_position[E.table[E.inverses[members[r.p]], x]]
    backward = r.p * m + s
    if np.any(s < 0) or not np.array_equal(backward[forward], np.arange(E.order)):
        raise InternalInconsistency("the stated inverse of h s does not invert it")
    if not np.array_equal(E.table[forward[:, None], forward[None, :]], forward[P.group.table]):
        raise InternalInconsistency("h s is not multiplicative")
    forward.setflags(write=False)
    backward.setflags(write=False)
    return PairIsomorphism(P, forward, backward)


# normal subgroups --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SchreierData:
    """Quotient ``G = E/H`` on cosets (indexed like the fiber), section ``chi``,
    the derived crossed system and ``theta(h, g) = h chi(g)`` on codes ``h*|G| + g``."""

    ambient: FiniteGroup
    subgroup: SubgroupEmbedding
    quotient: FiniteGroup
    section: tuple[int, ...]
    crossed: CrossedSystem
    theta: np.ndarray
    retraction: Retraction

    @cached_property
    def projection(self) -> np.ndarray:
        """Ambient index -> coset index."""
        r = self.retraction
        E, H = self.ambient, self.subgroup
        members = np.asarray(H.members)
        x = np.arange(E.order)
        return r.fiber_position[E.table[E.inverses[members[r.p]], x]]


def schreier_reconstruct(E: FiniteGroup, H: SubgroupEmbedding,
                         T: Transversal | None = None) -> SchreierData:
    if not is_normal(E, H):
        raise NotNormal(f"subgroup {list(H.members)} is not normal")
    r = retraction_from_transversal(E, H, T)
    Et, Einv = E.table, E.inverses
    members = np.asarray(H.members)
    hpos = np.full(E.order, -1, dtype=np.int64)
    hpos[members] = np.arange(len(members))
    chi = np.asarray(r.fiber)
    k = len(chi)
    x = np.arange(E.order)
    coset_of = r.fiber_position[Et[Einv[members[r.p]], x]]

    qtable = coset_of[Et[np.ix_(chi, chi)]]
    labels = tuple(E.label(int(c)) for c in chi)
    G = FiniteGroup.from_table(qtable, 0, labels, "quotient")
    if np.any(coset_of[chi] != np.arange(k)):
        raise InternalInconsistency("section is not a right inverse of the projection")

    # alpha(g)(h) = chi(g) h chi(g)^-1
    action = hpos[Et[Et[chi[:, None], members[None, :]], Einv[chi][:, None]]]
    # f(g1, g2) = chi(g1) chi(g2) chi(g1 g2)^-1
    cocycle = hpos[Et[Et[chi[:, None], chi[None, :]], Einv[chi[qtable]]]]
    if np.any(action < 0) or np.any(cocycle < 0):
        raise InternalInconsistency("conjugation or cocycle left the normal subgroup")
    c = CrossedSystem(H.group, G, action, cocycle)
    report = crossed_system_check(c)
    if not report.ok:
        raise InternalInconsistency(f"derived crossed system fails: {report.summary()}")

    theta = Et[np.ix_(members, chi)].ravel()
    Cp = crossed_product(c)
    if len(set(theta.tolist())) != E.order or not np.array_equal(
            Et[theta[:, None], theta[None, :]], theta[Cp.table]):
        raise InternalInconsistency("theta is not an isomorphism")
    theta.setflags(write=False)
    return SchreierData(E, H, G, tuple(int(v) for v in chi), c, theta, r)


@dataclass(frozen=True)
class SchreierComparison:
    right_action_trivial: bool
    datum_is_lift: bool
    tables_equal: bool
    iso_verified: bool

    @property
    def agree(self) -> bool:
        return self.right_action_trivial and self.datum_is_lift and self.tables_equal \
            and self.iso_verified

    def to_dict(self) -> dict:
        return {
            "agree": self.agree,
            "right_action_trivial": self.right_action_trivial,
            "datum_is_lift": self.datum_is_lift,
            "tables_equal": self.tables_equal,
            "iso_verified": self.iso_verified,
        }


def schreier_vs_unified(E: FiniteGroup, H: SubgroupEmbedding,
                        T: Transversal | None = None) -> SchreierComparison:
    """Compare the unified product of the extracted datum with the crossed product.

    The comparison map is ``theta^-1 o phi`` taken element by element; it
    must fix ``H`` pointwise and be multiplicative.
    """
    sd = schreier_reconstruct(E, H, T)
    r = sd.retraction
    d = extract_datum(r)
    iso = phi_isomorphism(r, d)
    P = iso.product.group
    C = crossed_product(sd.crossed)

    theta_inv = np.empty(E.order, dtype=np.int64)
    theta_inv[sd.theta] = np.arange(E.order)
    comp = theta_inv[iso.forward]
    n = H.order
    fixes_h = np.array_equal(comp[np.arange(n) * d.m], np.arange(n) * C.order // n)
    hom = np.array_equal(C.table[comp[:, None], comp[None, :]], comp[P.table])
    bij = len(set(comp.tolist())) == E.order

    trivial_ract = np.array_equal(d.ract, np.tile(np.arange(d.m)[:, None], (1, n)))
    try:
        is_lift = lift_crossed(sd.crossed) == d
    except (CrossedAxiomViolation, PreconditionFailed):
        is_lift = False
    return SchreierComparison(bool(trivial_ract), bool(is_lift),
                              bool(np.array_equal(P.table, C.table)), bool(fixes_h and hom and bij))


# factorizations ----------------------------------------------------------------

def check_exact_factorization(E: FiniteGroup, H: SubgroupEmbedding, K: SubgroupEmbedding,
                              name: str = "S") -> None:
    if H.order * K.order != E.order:
        raise NotExactFactorization(
            f"|H| * |{name}| = {H.order * K.order} differs from |E| = {E.order}")
    common = set(H.members) & set(K.members)
    if common != {E.identity}:
        raise NotExactFactorization(
            f"H and {name} intersect in {sorted(common)}, not just the identity")


def matched_pair_from_factorization(E: FiniteGroup, H: SubgroupEmbedding,
                                    G: SubgroupEmbedding) -> MatchedPair:
    """Actions read off ``g h = (g |> h)(g <| h)`` for an exact factorization ``E = H G``."""
    check_exact_factorization(E, H, G, "G")
    hm, gm = np.asarray(H.members), np.asarray(G.members)
    hpos = np.full(E.order, -1, dtype=np.int64)
    hpos[hm] = np.arange(len(hm))
    gpos = np.full(E.order, -1, dtype=np.int64)
    gpos[gm] = np.arange(len(gm))
    # x = a * b with a in H, b in G
    split = np.full((E.order, 2), -1, dtype=np.int64)
    prods = E.table[np.ix_(hm, gm)]
    split[prods.ravel(), 0] = np.repeat(np.arange(len(hm)), len(gm))
    split[prods.ravel(), 1] = np.tile(np.arange(len(gm)), len(hm))
    gh = E.table[np.ix_(gm, hm)]
    return MatchedPair(H.group, G.group, split[gh, 0], split[gh, 1])
