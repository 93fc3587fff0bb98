"""Built-in named groups, generated from permutation composition.

Permutations act on ``0..k-1``; the product ``x*y`` is the composite
``x o y`` (apply ``y`` first). Labels use 1-based cycle notation, ``e`` for
the identity.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

import numpy as np

from .errors import InputError, InvalidGroup
from .finite_group import FiniteGroup, closure, validate_group


def compose(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x[i] for i in y)


def cycle_label(p: tuple[int, ...]) -> str:
    seen = set()
    parts = []
    sep = "" if len(p) <= 9 else ","
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(str(i + 1))
            i = p[i]
        parts.append("(" + sep.join(cyc) + ")")
    return "".join(parts) or "e"


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Inverse of :func:`cycle_label` for degrees up to 9."""
    p = list(range(degree))
    if text == "e":
        return tuple(p)
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(c) - 1 for c in (cyc.split(",") if "," in cyc else cyc)]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    return tuple(p)


def permutation_group(perms, name: str | None = None) -> FiniteGroup:
    """Cayley table of a closed set of permutations, sorted lexicographically."""
    elems = sorted(set(tuple(p) for p in perms))
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[compose(x, y)] for y in elems] for x in elems]
    identity = index[tuple(range(len(elems[0])))]
    return FiniteGroup(np.array(table), identity, tuple(cycle_label(p) for p in elems), name)


def generated_permutation_group(gens, name: str | None = None) -> FiniteGroup:
    gens = [tuple(g) for g in gens]
    k = len(gens[0])
    seen = {tuple(range(k))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return permutation_group(seen, name)


def _parity(p) -> int:
    inv = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            inv += p[i] > p[j]
    return inv % 2


def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, 0, tuple(str(i) for i in range(n)), f"Z{n}")


def klein() -> FiniteGroup:
    table = [[a ^ b for b in range(4)] for a in range(4)]
    return FiniteGroup(np.array(table), 0, ("e", "a", "b", "c"), "V4")


def symmetric(k: int) -> FiniteGroup:
    return permutation_group(itertools.permutations(range(k)), f"S{k}")


def alternating(k: int) -> FiniteGroup:
    perms = [p for p in itertools.permutations(range(k)) if _parity(p) == 0]
    return permutation_group(perms, f"A{k}")


def dihedral(k: int) -> FiniteGroup:
    """Symmetries of a regular k-gon (order 2k), as vertex permutations."""
    if k < 3:
        raise InputError("dihedral groups need k >= 3; use V4 for order 4")
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    return generated_permutation_group([rot, ref], f"D{k}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    """``G1 x G2`` with pair coding ``(a, b) -> a*|G2| + b``."""
    n2 = G2.order
    t1 = G1.table[:, None, :, None]
    t2 = G2.table[None, :, None, :]
    table = (t1 * n2 + t2).reshape(G1.order * n2, G1.order * n2)
    labels = tuple(f"({G1.label(a)},{G2.label(b)})" for a in range(G1.order) for b in range(n2))
    return FiniteGroup(table, G1.identity * n2 + G2.identity, labels,
                       f"{G1.name or 'G'}x{G2.name or 'G'}")


def trivial() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), 0, ("e",), "Z1")


_NAMED = re.compile(r"^(Z|C|S|A|D)(\d+)$")


@lru_cache(maxsize=None)
def named_group(name: str) -> FiniteGroup:
    """Look up a built-in group by name (Z_n, V4, S_n, A_n, D_n, n bounded).

    The table is validated on first use.
    """
    key = name.replace("_", "")
    if key in ("V4", "K4"):
        G = klein()
    elif key in ("1", "Z1", "C1", "trivial"):
        G = trivial()
    else:
        m = _NAMED.match(key)
        if not m:
            raise InputError(f"unknown group name {name!r}")
        kind, k = m.group(1), int(m.group(2))
        if kind in "ZC":
            if not 1 <= k <= 1000:
                raise InputError("cyclic groups are limited to order 1000")
            G = cyclic(k)
        elif kind == "S":
            if not 1 <= k <= 6:
                raise InputError("symmetric groups are limited to degree 6")
            G = symmetric(k)
        elif kind == "A":
            if not 1 <= k <= 6:
                raise InputError("alternating groups are limited to degree 6")
            G = alternating(k)
        else:
            if not 3 <= k <= 500:
                raise InputError("dihedral groups D_k need 3 <= k <= 500")
            G = dihedral(k)
    report = validate_group(G.table, G.identity)
    if not report.ok:
        raise InvalidGroup(report)
    return G


def point_stabilizer_subgroup(G: FiniteGroup, points) -> tuple[int, ...]:
    """Elements of a permutation group fixing every point in ``points`` (1-based)."""
    members = []
    for x, lab in enumerate(G.labels):
        moved = set()
        for cyc in re.findall(r"\(([^)]*)\)", lab):
            moved.update(int(c) for c in (cyc.split(",") if "," in cyc else cyc))
        if not moved & set(points):
            members.append(x)
    return tuple(members)


def subgroup_by_labels(G: FiniteGroup, labels, generate: bool = False) -> tuple[int, ...]:
    idx = [G.index(lab) for lab in labels]
    return closure(G, idx) if generate else tuple(sorted(set(idx)))
