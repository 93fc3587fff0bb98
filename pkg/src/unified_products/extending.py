"""Extending data of a group, their axioms, and unified products.

An extending datum of a group ``H`` on the pointed set ``S = {0..m-1}``
(basepoint ``0``) is four tables:

* ``star[s1, s2]``   the operation ``s1 * s2`` on ``S``
* ``ract[s, h]``     the right action ``s <| h`` (values in ``S``)
* ``lact[s, h]``     the left action ``s |> h`` (values in ``H``)
* ``cocycle[s1, s2]`` the cocycle ``f(s1, s2)`` (values in ``H``)

The unified product lives on pair codes ``(h, s) -> h*m + s`` with

    (h1, s1)(h2, s2) = (h1 (s1 |> h2) f(s1 <| h2, s2), (s1 <| h2) * s2)

The axiom kernels below work on stacks of tables with a leading batch axis
so that enumeration can test many candidates in one pass; the single-datum
entry points call them with a batch of one.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    AxiomViolation,
    CrossedAxiomViolation,
    InternalInconsistency,
    MatchedPairViolation,
    NotNormalized,
    OutOfRangeEntry,
    PreconditionFailed,
    TransitionIncompatible,
    TwistedViolation,
)
from .finite_group import FiniteGroup
from .reports import LawFailure, LawReport

AXIOM_TAGS = ("ES1", "ES2", "ES3", "ES4", "ES5", "ES6", "ES7")
AXIOM_NAMES = {
    "ES1": ("s", "h1", "h2"),
    "ES2": ("s1", "s2", "s3"),
    "ES3": ("s", "h1", "h2"),
    "ES4": ("s1", "s2", "h"),
    "ES5": ("s1", "s2", "h"),
    "ES6": ("s1", "s2", "s3"),
    "ES7": ("s",),
}


@dataclass(frozen=True)
class PointedSet:
    size: int
    basepoint: int = 0

    def __post_init__(self):
        if self.size < 1 or self.basepoint != 0:
            raise OutOfRangeEntry("a pointed set needs size >= 1 and basepoint 0")


def _frozen(arr, shape, bound, what) -> np.ndarray:
    a = np.array(arr, dtype=np.int64)
    if a.shape != shape:
        raise OutOfRangeEntry(f"{what} table must have shape {shape}, got {a.shape}")
    if a.size and (a.min() < 0 or a.max() >= bound):
        bad = np.argwhere((a < 0) | (a >= bound))
        idx = tuple(int(i) for i in bad[0])
        raise OutOfRangeEntry(f"{what}{list(idx)} = {int(a[idx])} outside 0..{bound - 1}")
    a.setflags(write=False)
    return a


def normalization_failures(host: FiniteGroup, star, ract, lact, cocycle) -> list[str]:
    """Human-readable list of broken normalization conditions (first witness each)."""
    e = host.identity
    m = star.shape[0]
    rm, rn = list(range(m)), list(range(host.order))
    if (star[:, 0].tolist() == rm and star[0].tolist() == rm and ract[:, e].tolist() == rm
            and lact[0].tolist() == rn and not ract[0].any() and np.all(lact[:, e] == e)
            and np.all(cocycle[:, 0] == e) and np.all(cocycle[0] == e)):
        return []
    ar_m = np.arange(m)
    ar_n = np.arange(host.order)
    out = []

    def first(mask, fmt):
        idx = np.flatnonzero(mask)
        if len(idx):
            out.append(fmt(int(idx[0])))

    first(star[:, 0] != ar_m, lambda s: f"s * 1_S != s at s={s}")
    first(star[0, :] != ar_m, lambda s: f"1_S * s != s at s={s}")
    first(ract[:, e] != ar_m, lambda s: f"s <| 1_H != s at s={s}")
    first(ract[0, :] != 0, lambda h: f"1_S <| h != 1_S at h={h}")
    first(lact[0, :] != ar_n, lambda h: f"1_S |> h != h at h={h}")
    first(lact[:, e] != e, lambda s: f"s |> 1_H != 1_H at s={s}")
    first(cocycle[:, 0] != e, lambda s: f"f(s, 1_S) != 1_H at s={s}")
    first(cocycle[0, :] != e, lambda s: f"f(1_S, s) != 1_H at s={s}")
    return out


@dataclass(frozen=True, eq=False)
class ExtendingDatum:
    """An extending datum of ``host``; normalization is enforced here."""

    host: FiniteGroup
    star: np.ndarray
    ract: np.ndarray
    lact: np.ndarray
    cocycle: np.ndarray

    def __post_init__(self):
        n = self.host.order
        star = np.asarray(self.star)
        m = star.shape[0] if star.ndim == 2 else 0
        if m < 1:
            raise OutOfRangeEntry("the carrier must have at least one element")
        object.__setattr__(self, "star", _frozen(self.star, (m, m), m, "star"))
        object.__setattr__(self, "ract", _frozen(self.ract, (m, n), m, "ract"))
        object.__setattr__(self, "lact", _frozen(self.lact, (m, n), n, "lact"))
        object.__setattr__(self, "cocycle", _frozen(self.cocycle, (m, m), n, "cocycle"))
        problems = normalization_failures(self.host, self.star, self.ract, self.lact, self.cocycle)
        if problems:
            raise NotNormalized("; ".join(problems))

    @property
    def m(self) -> int:
        return self.star.shape[0]

    @property
    def n(self) -> int:
        return self.host.order

    @property
    def carrier(self) -> PointedSet:
        return PointedSet(self.m)

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.star, self.ract, self.lact, self.cocycle

    def __eq__(self, other):
        if not isinstance(other, ExtendingDatum):
            return NotImplemented
        return self.host == other.host and all(
            np.array_equal(a, b) for a, b in zip(self.tables(), other.tables()))

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        return f"<ExtendingDatum host={self.host.name or self.n} m={self.m} {self.digest()[:12]}>"

    @cached_property
    def _digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.n}:{self.host.identity}:{self.m}:".encode())
        h.update(np.ascontiguousarray(self.host.table, dtype=np.int64).tobytes())
        for t in self.tables():
            h.update(np.ascontiguousarray(t, dtype=np.int64).tobytes())
        return h.hexdigest()

    def digest(self) -> str:
        """Content hash of the host table and the four datum tables."""
        return self._digest

    @cached_property
    def axiom_report(self) -> LawReport:
        return _axiom_report(self)

    @classmethod
    def trivial(cls, host: FiniteGroup, carrier: FiniteGroup | int) -> "ExtendingDatum":
        """Direct-product datum; ``carrier`` is a group (identity at 0) or a size.

        With an integer size ``m`` the operation is addition mod ``m``.
        """
        if isinstance(carrier, int):
            ar = np.arange(carrier)
            star = (ar[:, None] + ar[None, :]) % carrier
        else:
            if carrier.identity != 0:
                raise PreconditionFailed("carrier group must have its identity at index 0")
            star = carrier.table
        m = star.shape[0]
        n = host.order
        return cls(host, star,
                   np.tile(np.arange(m)[:, None], (1, n)),
                   np.tile(np.arange(n)[None, :], (m, 1)),
                   np.full((m, m), host.identity))


# batched kernels -------------------------------------------------------------

def _at(arr, *idx):
    """``arr[k, *idx]`` with the batch index broadcast against ``idx``; an
    unbatched ``arr`` is indexed directly."""
    if arr.ndim == len(idx):
        return arr[idx]
    nd = max(np.ndim(i) for i in idx)
    b = np.arange(arr.shape[0]).reshape((-1,) + (1,) * (nd - 1))
    return arr[(b,) + idx]


def _grid(nd, axis, size):
    shape = [1] * nd
    shape[axis] = size
    return np.arange(size).reshape(shape)


def axiom_sides(host_table, star, ract, lact, coc, tags=AXIOM_TAGS) -> dict:
    """Both sides of the listed axioms for a stack of data.

    Inputs have shapes ``(K, m, m)``, ``(K, m, n)``, ``(K, m, n)``, ``(K, m, m)``.
    Returns ``{tag: (lhs, rhs)}`` for ES1..ES6 and ``{"ES7": mask}`` where
    ``mask[k, s]`` marks an element without a left inverse. Tables an
    axiom does not mention may hold placeholders.
    """
    Ht = np.asarray(host_table)
    m = star.shape[1]
    n = Ht.shape[0]
    out = {}

    s, h1, h2 = _grid(4, 1, m), _grid(4, 2, n), _grid(4, 3, n)
    if "ES1" in tags:
        out["ES1"] = (_at(ract, s, Ht[h1, h2]), _at(ract, _at(ract, s, h1), h2))
    if "ES3" in tags:
        out["ES3"] = (_at(lact, s, Ht[h1, h2]),
                      Ht[_at(lact, s, h1), _at(lact, _at(ract, s, h1), h2)])

    s1, s2, s3 = _grid(4, 1, m), _grid(4, 2, m), _grid(4, 3, m)
    if "ES2" in tags or "ES6" in tags:
        f23 = _at(coc, s2, s3)
        st23 = _at(star, s2, s3)
        st12 = _at(star, s1, s2)
        r1f = _at(ract, s1, f23)
        if "ES2" in tags:
            out["ES2"] = (_at(star, st12, s3), _at(star, r1f, st23))
        if "ES6" in tags:
            out["ES6"] = (Ht[_at(coc, s1, s2), _at(coc, st12, s3)],
                          Ht[_at(lact, s1, f23), _at(coc, r1f, st23)])

    s1, s2, h = _grid(4, 1, m), _grid(4, 2, m), _grid(4, 3, n)
    if "ES4" in tags or "ES5" in tags:
        l2h = _at(lact, s2, h)
        r2h = _at(ract, s2, h)
        r1l = _at(ract, s1, l2h)
        st12 = _at(star, s1, s2)
        if "ES4" in tags:
            out["ES4"] = (_at(ract, st12, h), _at(star, r1l, r2h))
        if "ES5" in tags:
            out["ES5"] = (Ht[_at(lact, s1, l2h), _at(coc, r1l, r2h)],
                          Ht[_at(coc, s1, s2), _at(lact, st12, h)])

    if "ES7" in tags:
        out["ES7"] = ~np.any(star == 0, axis=-2)
    return out


def axioms_hold(host_table, star, ract, lact, coc, tags=AXIOM_TAGS) -> np.ndarray:
    """Boolean vector over the batch: all listed axioms hold."""
    sides = axiom_sides(host_table, star, ract, lact, coc, tags)
    ok = np.ones(max(t.shape[0] for t in (star, ract, lact, coc)), dtype=bool)
    for tag in tags:
        if tag == "ES7":
            ok &= ~np.any(sides["ES7"], axis=1)
        else:
            eq = np.equal(*sides[tag])
            ok &= np.all(eq.reshape(eq.shape[0], -1), axis=1)
    return ok


def product_tables(host_table, star, ract, lact, coc) -> np.ndarray:
    """Unified-product Cayley tables (K, n*m, n*m) in pair coding."""
    Ht = np.asarray(host_table)
    k, m = star.shape[0], star.shape[1]
    n = Ht.shape[0]
    h1 = _grid(5, 1, n)
    s1 = _grid(5, 2, m)
    h2 = _grid(5, 3, n)
    s2 = _grid(5, 4, m)
    a = _at(lact, s1, h2)
    r = _at(ract, s1, h2)
    h = Ht[Ht[h1, a], _at(coc, r, s2)]
    s = _at(star, r, s2)
    codes = np.broadcast_to(h * m + s, (k, n, m, n, m))
    return codes.reshape(k, n * m, n * m)


def _stack(d: ExtendingDatum):
    return d.star[None], d.ract[None], d.lact[None], d.cocycle[None]


@lru_cache(maxsize=64)
def _single_grids(m: int, n: int):
    return (np.arange(m)[:, None, None], np.arange(n)[None, :, None], np.arange(n)[None, None, :],
            np.arange(m)[None, :, None], np.arange(m)[None, None, :])


def _single_sides(Ht, star, ract, lact, coc):
    """Unbatched ``axiom_sides`` as ``(tag, lhs, rhs)`` triples, sharing
    subexpressions; ES1/ES3 on ``(s, h1, h2)``, ES2/ES6 on ``(s1, s2, s3)``,
    ES4/ES5 on ``(s1, s2, h)``.  Lazy so callers can stop at the first mismatch."""
    a, hb, hc, b, c = _single_grids(star.shape[0], Ht.shape[0])
    r1 = ract[a, hb]
    h12 = Ht[hb, hc]
    yield "ES1", ract[a, h12], ract[r1, hc]
    yield "ES3", lact[a, h12], Ht[lact[a, hb], lact[r1, hc]]

    f23 = coc[b, c]
    st23 = star[b, c]
    st12 = star[a, b]
    f12 = coc[a, b]
    r1f = ract[a, f23]
    yield "ES2", star[st12, c], star[r1f, st23]
    yield "ES6", Ht[f12, coc[st12, c]], Ht[lact[a, f23], coc[r1f, st23]]

    l2h = lact[b, hc]
    r1l = ract[a, l2h]
    r2h = ract[b, hc]
    yield "ES4", ract[st12, hc], star[r1l, r2h]
    yield "ES5", Ht[lact[a, l2h], coc[r1l, r2h]], Ht[f12, lact[st12, hc]]


def _axiom_report(d: ExtendingDatum) -> LawReport:
    no_unit = ~np.any(d.star == 0, axis=0)
    ok = not no_unit.any() and all(
        np.array_equal(lhs, rhs) for _, lhs, rhs in _single_sides(d.host.table, d.star, d.ract,
                                                                   d.lact, d.cocycle))

    def fill(report: LawReport) -> None:
        for tag, lhs, rhs in _single_sides(d.host.table, d.star, d.ract, d.lact, d.cocycle):
            report.add_mask(tag, AXIOM_NAMES[tag], lhs != rhs, lhs, rhs)
        for s in np.flatnonzero(no_unit):
            prods = ", ".join(f"{t}*{s}={int(d.star[t, s])}" for t in range(d.m))
            report.add(LawFailure("ES7", ("s",), (int(s),), note=f"no s' with s'*s=1_S ({prods})"))

    return LawReport.deferred("axioms", ok, fill)


# single-datum operations -----------------------------------------------------

def check_axioms(d: ExtendingDatum) -> LawReport:
    """Exhaustive check of ES1..ES7; the report is empty iff the datum is a
    group extending structure."""
    return d.axiom_report


@dataclass(frozen=True, eq=False)
class UnifiedProduct:
    group: FiniteGroup
    source: ExtendingDatum

    @property
    def m(self) -> int:
        return self.source.m

    def code(self, h: int, s: int) -> int:
        return h * self.m + s

    def decode(self, x: int) -> tuple[int, int]:
        return divmod(int(x), self.m)

    @cached_property
    def i_H(self) -> np.ndarray:
        return np.arange(self.source.n) * self.m

    @cached_property
    def i_S(self) -> np.ndarray:
        return self.source.host.identity * self.m + np.arange(self.m)

    @cached_property
    def p_H(self) -> np.ndarray:
        return np.arange(self.group.order) // self.m

    @cached_property
    def pi_S(self) -> np.ndarray:
        return np.arange(self.group.order) % self.m


def unified_product(d: ExtendingDatum) -> UnifiedProduct:
    report = check_axioms(d)
    if not report.ok:
        raise AxiomViolation(report)
    table = product_tables(d.host.table, *_stack(d))[0]
    labels = tuple(f"({d.host.label(h)},{s})" for h in range(d.n) for s in range(d.m))
    G = FiniteGroup(table, d.host.identity * d.m, labels, "unified")
    return UnifiedProduct(G, d)


def left_inverse_map(d: ExtendingDatum) -> tuple[int, ...]:
    """``s -> s'`` with ``s' * s = 1_S``."""
    report = check_axioms(d)
    if not report.ok:
        raise AxiomViolation(report)
    out = []
    for s in range(d.m):
        cands = np.flatnonzero(d.star[:, s] == 0)
        if len(cands) != 1:
            raise InternalInconsistency(f"element {s} has left inverses {list(cands)}")
        out.append(int(cands[0]))
    return tuple(out)


def inverse_in_product(d: ExtendingDatum, h: int, s: int) -> tuple[int, int]:
    """Inverse of ``(h, s)``: ``(f(s', s)^-1 (s' |> h^-1), s' <| h^-1)``."""
    H = d.host
    sp = left_inverse_map(d)[s]
    hi = H.inv(h)
    first = H.mul(H.inv(int(d.cocycle[sp, s])), int(d.lact[sp, hi]))
    return first, int(d.ract[sp, hi])


def recognize(d: ExtendingDatum) -> dict[str, bool]:
    """Which special case the literal tables fall into."""
    m, n = d.m, d.n
    crossed = bool(np.array_equal(d.ract, np.tile(np.arange(m)[:, None], (1, n))))
    bicrossed = bool(np.all(d.cocycle == d.host.identity))
    twisted = bool(np.array_equal(d.lact, np.tile(np.arange(n)[None, :], (m, 1))))
    return {
        "is_crossed": crossed,
        "is_bicrossed": bicrossed,
        "is_twisted": twisted,
        "is_direct": crossed and bicrossed and twisted,
    }


# crossed systems ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CrossedSystem:
    """``(H, G, alpha, f)`` with ``alpha[g, h] = g |> h`` and ``f[g1, g2]`` in H."""

    H: FiniteGroup
    G: FiniteGroup
    action: np.ndarray
    cocycle: np.ndarray

    def __post_init__(self):
        n, k = self.H.order, self.G.order
        object.__setattr__(self, "action", _frozen(self.action, (k, n), n, "action"))
        object.__setattr__(self, "cocycle", _frozen(self.cocycle, (k, k), n, "cocycle"))


def crossed_system_check(c: CrossedSystem) -> LawReport:
    """Automorphism property, WA, CC, and normalization ``f(1,1) = 1``."""
    H, G = c.H, c.G
    Ht, Gt, Hinv = H.table, G.table, H.inverses
    a, f = c.action, c.cocycle
    k, n = G.order, H.order
    report = LawReport("crossed")

    for g in range(k):
        if len(set(a[g].tolist())) != n:
            report.add(LawFailure("automorphism", ("g",), (g,), note=f"alpha({g}) is not bijective"))
    g, h1, h2 = _grid(3, 0, k), _grid(3, 1, n), _grid(3, 2, n)
    lhs = a[g, Ht[h1, h2]]
    rhs = Ht[a[g, h1], a[g, h2]]
    report.add_mask("automorphism", ("g", "h1", "h2"), lhs != rhs, lhs, rhs)

    g1, g2, h = _grid(3, 0, k), _grid(3, 1, k), _grid(3, 2, n)
    f12 = f[g1, g2]
    lhs = a[g1, a[g2, h]]
    rhs = Ht[Ht[f12, a[Gt[g1, g2], h]], Hinv[f12]]
    report.add_mask("WA", ("g1", "g2", "h"), lhs != rhs, lhs, rhs)

    g1, g2, g3 = _grid(3, 0, k), _grid(3, 1, k), _grid(3, 2, k)
    lhs = Ht[f[g1, g2], f[Gt[g1, g2], g3]]
    rhs = Ht[a[g1, f[g2, g3]], f[g1, Gt[g2, g3]]]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    report.add_mask("CC", ("g1", "g2", "g3"), lhs != rhs, lhs, rhs)

    e_g = G.identity
    if f[e_g, e_g] != H.identity:
        report.add(LawFailure("normalized", ("g1", "g2"), (e_g, e_g),
                              lhs=int(f[e_g, e_g]), rhs=H.identity, note="f(1,1) != 1"))
    return report


_CROSSED_GROUP_TAGS = ("automorphism", "WA", "CC")


def crossed_product(c: CrossedSystem) -> FiniteGroup:
    """``(h1,g1)(h2,g2) = (h1 (g1|>h2) f(g1,g2), g1 g2)`` on codes ``h*|G| + g``.

    The unit is ``(f(1,1)^-1, 1)``; normalization is not required here.
    """
    report = crossed_system_check(c)
    if any(t in report.counts for t in _CROSSED_GROUP_TAGS):
        raise CrossedAxiomViolation(report)
    H, G = c.H, c.G
    n, k = H.order, G.order
    Ht = H.table
    h1, g1, h2, g2 = _grid(4, 0, n), _grid(4, 1, k), _grid(4, 2, n), _grid(4, 3, k)
    hh = Ht[Ht[h1, c.action[g1, h2]], c.cocycle[g1, g2]]
    gg = G.table[g1, g2]
    table = np.broadcast_to(hh * k + gg, (n, k, n, k)).reshape(n * k, n * k)
    e = G.identity
    unit = int(H.inverses[c.cocycle[e, e]]) * k + e
    return FiniteGroup(table, unit, None, "crossed")


def lift_crossed(c: CrossedSystem) -> ExtendingDatum:
    """Datum with trivial right action, ``* = G``, ``|> = alpha``, same cocycle."""
    report = crossed_system_check(c)
    if not report.ok:
        raise CrossedAxiomViolation(report)
    if c.G.identity != 0:
        raise PreconditionFailed("the acting group must have its identity at index 0")
    k, n = c.G.order, c.H.order
    return ExtendingDatum(c.H, c.G.table, np.tile(np.arange(k)[:, None], (1, n)),
                          c.action, c.cocycle)


# matched pairs -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MatchedPair:
    """``(H, G, |>, <|)`` with ``left[g, h] = g |> h`` in H and ``right[g, h] = g <| h`` in G."""

    H: FiniteGroup
    G: FiniteGroup
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        n, k = self.H.order, self.G.order
        object.__setattr__(self, "left", _frozen(self.left, (k, n), n, "left action"))
        object.__setattr__(self, "right", _frozen(self.right, (k, n), k, "right action"))


def matched_pair_check(mp: MatchedPair) -> LawReport:
    H, G = mp.H, mp.G
    Ht, Gt = H.table, G.table
    L, R = mp.left, mp.right
    n, k = H.order, G.order
    eH, eG = H.identity, G.identity
    report = LawReport("matched-pair")

    bad = np.flatnonzero(L[eG] != np.arange(n))
    for h in bad[:1]:
        report.add(LawFailure("left-action", ("h",), (int(h),), lhs=int(L[eG, h]), rhs=int(h),
                              note="1 |> h != h"), count=len(bad))
    g1, g2, h = _grid(3, 0, k), _grid(3, 1, k), _grid(3, 2, n)
    lhs = L[Gt[g1, g2], h]
    rhs = L[g1, L[g2, h]]
    report.add_mask("left-action", ("g1", "g2", "h"), lhs != rhs, lhs, rhs)

    bad = np.flatnonzero(R[:, eH] != np.arange(k))
    for g in bad[:1]:
        report.add(LawFailure("right-action", ("g",), (int(g),), lhs=int(R[g, eH]), rhs=int(g),
                              note="g <| 1 != g"), count=len(bad))
    g, h1, h2 = _grid(3, 0, k), _grid(3, 1, n), _grid(3, 2, n)
    lhs = R[g, Ht[h1, h2]]
    rhs = R[R[g, h1], h2]
    report.add_mask("right-action", ("g", "h1", "h2"), lhs != rhs, lhs, rhs)

    lhs = L[g, Ht[h1, h2]]
    rhs = Ht[L[g, h1], L[R[g, h1], h2]]
    report.add_mask("left-compat", ("g", "h1", "h2"), lhs != rhs, lhs, rhs)

    g1, g2, h = _grid(3, 0, k), _grid(3, 1, k), _grid(3, 2, n)
    lhs = R[Gt[g1, g2], h]
    rhs = Gt[R[g1, L[g2, h]], R[g2, h]]
    report.add_mask("right-compat", ("g1", "g2", "h"), lhs != rhs, lhs, rhs)
    return report


def bicrossed_product(mp: MatchedPair) -> FiniteGroup:
    """``(h1,g1)(h2,g2) = (h1 (g1|>h2), (g1<|h2) g2)`` on codes ``h*|G| + g``."""
    report = matched_pair_check(mp)
    if not report.ok:
        raise MatchedPairViolation(report)
    H, G = mp.H, mp.G
    n, k = H.order, G.order
    h1, g1, h2, g2 = _grid(4, 0, n), _grid(4, 1, k), _grid(4, 2, n), _grid(4, 3, k)
    hh = H.table[h1, mp.left[g1, h2]]
    gg = G.table[mp.right[g1, h2], g2]
    table = np.broadcast_to(hh * k + gg, (n, k, n, k)).reshape(n * k, n * k)
    return FiniteGroup(table, H.identity * k + G.identity, None, "bicrossed")


def lift_matched(mp: MatchedPair) -> ExtendingDatum:
    """Datum with trivial cocycle, ``* = G``, ``<|``, ``|>`` from the matched pair."""
    report = matched_pair_check(mp)
    if not report.ok:
        raise MatchedPairViolation(report)
    if mp.G.identity != 0:
        raise PreconditionFailed("the second group must have its identity at index 0")
    k = mp.G.order
    return ExtendingDatum(mp.H, mp.G.table, mp.right, mp.left,
                          np.full((k, k), mp.H.identity))


# twisted products --------------------------------------------------------------

def twisted_check(H: FiniteGroup, star, ract, cocycle) -> LawReport:
    """Conditions under which trivial ``|>`` gives a group extending structure."""
    m = np.asarray(star).shape[0]
    d = ExtendingDatum(H, star, ract, np.tile(np.arange(H.order)[None, :], (m, 1)), cocycle)
    Ht, Hinv = H.table, H.inverses
    star, ract, f = d.star, d.ract, d.cocycle
    n = H.order
    report = LawReport("twisted")

    sides = axiom_sides(Ht, *_stack(d))
    lhs, rhs = sides["ES1"]
    report.add_mask("action", AXIOM_NAMES["ES1"], (lhs != rhs)[0], lhs[0], rhs[0])
    lhs, rhs = sides["ES2"]
    report.add_mask("twisted-assoc", ("s1", "s2", "s3"), (lhs != rhs)[0], lhs[0], rhs[0])

    s1, s2, h = _grid(3, 0, m), _grid(3, 1, m), _grid(3, 2, n)
    lhs = f[ract[s1, h], ract[s2, h]]
    rhs = Ht[Ht[Hinv[h], f[s1, s2]], h]
    report.add_mask("cocycle-equivariant", ("s1", "s2", "h"), lhs != rhs, lhs, rhs)
    lhs = ract[star[s1, s2], h]
    rhs = star[ract[s1, h], ract[s2, h]]
    report.add_mask("star-equivariant", ("s1", "s2", "h"), lhs != rhs, lhs, rhs)

    s1, s2, s3 = _grid(3, 0, m), _grid(3, 1, m), _grid(3, 2, m)
    f23 = f[s2, s3]
    lhs = Ht[f[s1, s2], f[star[s1, s2], s3]]
    rhs = Ht[f23, f[ract[s1, f23], star[s2, s3]]]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    report.add_mask("cocycle", ("s1", "s2", "s3"), lhs != rhs, lhs, rhs)

    for s in np.flatnonzero(sides["ES7"][0]):
        report.add(LawFailure("invertible", ("s",), (int(s),), note="no s' with s'*s=1_S"))
    return report


def twisted_product(H: FiniteGroup, star, ract, cocycle) -> FiniteGroup:
    """``(h1,s1)(h2,s2) = (h1 h2 f(s1<|h2, s2), (s1<|h2) * s2)`` on codes ``h*m + s``."""
    report = twisted_check(H, star, ract, cocycle)
    if not report.ok:
        raise TwistedViolation(report)
    star, ract, f = (np.asarray(t) for t in (star, ract, cocycle))
    m, n = star.shape[0], H.order
    h1, s1, h2, s2 = _grid(4, 0, n), _grid(4, 1, m), _grid(4, 2, n), _grid(4, 3, m)
    r = ract[s1, h2]
    hh = H.table[H.table[h1, h2], f[r, s2]]
    ss = star[r, s2]
    table = np.broadcast_to(hh * m + ss, (n, m, n, m)).reshape(n * m, n * m)
    return FiniteGroup(table, H.identity * m, None, "twisted")


def lift_twisted(H: FiniteGroup, star, ract, cocycle) -> ExtendingDatum:
    report = twisted_check(H, star, ract, cocycle)
    if not report.ok:
        raise TwistedViolation(report)
    m = np.asarray(star).shape[0]
    return ExtendingDatum(H, star, ract, np.tile(np.arange(H.order)[None, :], (m, 1)), cocycle)


# transition maps ---------------------------------------------------------------

def transition_check(H: FiniteGroup, star, ract, gamma) -> LawReport:
    star, ract, gamma = (np.asarray(t, dtype=np.int64) for t in (star, ract, gamma))
    m, n = star.shape[0], H.order
    Ht, Hinv = H.table, H.inverses
    report = LawReport("transition")
    if gamma[0] != H.identity:
        report.add(LawFailure("gamma-unit", ("s",), (0,), lhs=int(gamma[0]), rhs=H.identity,
                              note="gamma(1_S) != 1_H"))
    ar = np.arange(m)
    bad = np.flatnonzero((star[:, 0] != ar) | (star[0, :] != ar))
    for s in bad[:1]:
        report.add(LawFailure("unit", ("s",), (int(s),), note="1_S is not a unit for *"),
                   count=len(bad))
    bad = np.flatnonzero(ract[:, H.identity] != ar)
    for s in bad[:1]:
        report.add(LawFailure("action", ("s",), (int(s),), note="s <| 1_H != s"), count=len(bad))
    s, h1, h2 = _grid(3, 0, m), _grid(3, 1, n), _grid(3, 2, n)
    lhs = ract[s, Ht[h1, h2]]
    rhs = ract[ract[s, h1], h2]
    report.add_mask("action", ("s", "h1", "h2"), lhs != rhs, lhs, rhs)

    x, y, z = _grid(3, 0, m), _grid(3, 1, m), _grid(3, 2, m)
    f_yz = Ht[Ht[gamma[y], gamma[z]], Hinv[gamma[star[y, z]]]]
    lhs = star[star[x, y], z]
    rhs = star[ract[x, f_yz], star[y, z]]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    report.add_mask("twisted-assoc", ("x", "y", "z"), lhs != rhs, lhs, rhs)

    x, y, g = _grid(3, 0, m), _grid(3, 1, m), _grid(3, 2, n)
    t = Ht[Ht[gamma[y], g], Hinv[gamma[ract[y, g]]]]
    lhs = ract[star[x, y], g]
    rhs = star[ract[x, t], ract[y, g]]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    report.add_mask("twisted-action", ("x", "y", "g"), lhs != rhs, lhs, rhs)
    return report


def from_transition_map(H: FiniteGroup, star, ract, gamma) -> ExtendingDatum:
    """Datum with ``x |> g = gamma(x) g gamma(x<|g)^-1`` and
    ``f(x, y) = gamma(x) gamma(y) gamma(x*y)^-1``.

    Besides the two compatibilities this also requires every element of
    ``(S, *)`` to be left invertible; without it the result is not a group
    extending structure and the ES7 witnesses are reported.
    """
    report = transition_check(H, star, ract, gamma)
    if not report.ok:
        raise TransitionIncompatible(report)
    star, ract, gamma = (np.asarray(t, dtype=np.int64) for t in (star, ract, gamma))
    m, n = star.shape[0], H.order
    Ht, Hinv = H.table, H.inverses
    x, g = _grid(2, 0, m), _grid(2, 1, n)
    lact = Ht[Ht[gamma[x], g], Hinv[gamma[ract[x, g]]]]
    x, y = _grid(2, 0, m), _grid(2, 1, m)
    f = Ht[Ht[gamma[x], gamma[y]], Hinv[gamma[star[x, y]]]]
    d = ExtendingDatum(H, star, ract, lact, f)
    axioms = check_axioms(d)
    if not axioms.ok:
        raise TransitionIncompatible(axioms)
    return d
