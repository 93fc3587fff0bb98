"""Finite groups as dense Cayley tables.

Elements are the indices ``0..n-1``; ``table[x, y]`` is the index of ``x*y``.
The identity is stored explicitly and need not be ``0``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    BudgetExhausted,
    InternalInconsistency,
    InvalidGroup,
    NotASubgroup,
    NotATransversal,
    OutOfRangeEntry,
)
from .reports import LawFailure, LawReport

# associativity is checked in slabs of this many left factors to bound memory
_ASSOC_CHUNK_CELLS = 4_000_000


def _as_table(table) -> np.ndarray:
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise OutOfRangeEntry(f"Cayley table must be a non-empty square array, got shape {arr.shape}")
    if arr.dtype.kind not in "iu":
        if arr.size and not np.all(np.equal(np.mod(arr, 1), 0)):
            raise OutOfRangeEntry("Cayley table entries must be integers")
    arr = arr.astype(np.int64, copy=False)
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        bad = np.argwhere((arr < 0) | (arr >= n))
        x, y = (int(v) for v in bad[0])
        raise OutOfRangeEntry(f"entry table[{x}][{y}] = {int(arr[x, y])} outside 0..{n - 1}")
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table.

    Construct through :meth:`from_table` unless the table is known to be a
    group; the plain constructor only checks shape and range.
    """

    table: np.ndarray
    identity: int = 0
    labels: tuple[str, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        arr = _as_table(self.table)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)
        object.__setattr__(self, "identity", int(self.identity))
        if not 0 <= self.identity < arr.shape[0]:
            raise OutOfRangeEntry(f"identity {self.identity} outside 0..{arr.shape[0] - 1}")
        if self.labels is not None:
            labels = tuple(str(lab) for lab in self.labels)
            if len(labels) != arr.shape[0] or len(set(labels)) != len(labels):
                raise OutOfRangeEntry("labels must be n distinct strings")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_table(cls, table, identity: int | None = None, labels=None, name=None,
                   check: bool = True) -> "FiniteGroup":
        arr = _as_table(table)
        if identity is None:
            identity = _find_identity(arr)
            if identity is None:
                report = LawReport("group")
                report.add(LawFailure("identity", ("x",), (0,), note="no two-sided identity element"))
                raise InvalidGroup(report)
        if check:
            report = validate_group(arr, identity)
            if not report.ok:
                raise InvalidGroup(report)
        return cls(arr, identity, labels, name)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.order == other.order and self.identity == other.identity
                and bool(np.array_equal(self.table, other.table)))

    def __hash__(self) -> int:
        return hash((self.identity, self.table.tobytes()))

    def __repr__(self) -> str:
        tag = self.name or "FiniteGroup"
        return f"<{tag} of order {self.order}>"

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """The table as nested tuples, for fast scalar lookups."""
        return tuple(tuple(row) for row in self.table.tolist())

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == self.identity, axis=1)
        inv.setflags(write=False)
        return inv

    @cached_property
    def inverse_list(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.inverses)

    def mul(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def inv(self, x: int) -> int:
        return self.inverse_list[x]

    def product(self, *xs: int) -> int:
        acc = self.identity
        for x in xs:
            acc = self.rows[acc][x]
        return acc

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.identity:
                y = self.rows[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def order_spectrum(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_orders))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def index(self, label) -> int:
        """Element index for a label (or a plain index)."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.order:
                raise OutOfRangeEntry(f"element {label} outside 0..{self.order - 1}")
            return int(label)
        if self.labels is not None and label in self.labels:
            return self.labels.index(label)
        if isinstance(label, str) and label.isdigit() and int(label) < self.order:
            return int(label)
        raise OutOfRangeEntry(f"unknown element label {label!r}")

    def relabeled(self, labels=None, name=None) -> "FiniteGroup":
        return FiniteGroup(self.table, self.identity, labels, name or self.name)


def _find_identity(arr: np.ndarray) -> int | None:
    n = arr.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(arr[e], ar) and np.array_equal(arr[:, e], ar):
            return e
    return None


def validate_group(table, identity: int) -> LawReport:
    """Check every group law and report one witness per broken law.

    Raises ``OutOfRangeEntry`` for tables that are not square index arrays.
    """
    arr = _as_table(table.table if isinstance(table, FiniteGroup) else table)
    n = arr.shape[0]
    identity = int(identity)
    if not 0 <= identity < n:
        raise OutOfRangeEntry(f"identity {identity} outside 0..{n - 1}")
    ar = _arange(n)
    # unit, permutation rows and associativity already force a group
    ok = (np.array_equal(arr[identity], ar) and np.array_equal(arr[:, identity], ar)
          and np.array_equal(np.sort(arr, axis=1), np.broadcast_to(ar, arr.shape))
          and _associativity_failures(arr)[0] == 0)
    if ok:
        return LawReport("group")
    snapshot = arr.copy()  # the caller may reuse its buffer before the details are read
    return LawReport.deferred("group", False, lambda report: _group_failures(report, snapshot, identity))


@lru_cache(maxsize=256)
def _arange(n: int) -> np.ndarray:
    ar = np.arange(n)
    ar.flags.writeable = False
    return ar


def _group_failures(report: LawReport, arr: np.ndarray, identity: int) -> None:
    ar = _arange(arr.shape[0])
    sorted_rows = np.sort(arr, axis=1)
    bad_rows = np.nonzero(np.any(sorted_rows != ar, axis=1))[0]
    for x in bad_rows[:1]:
        v = _first_repeat(arr[x])
        report.add(LawFailure("latin-row", ("row",), (int(x),), note=f"value {v} repeats in row {x}"),
                   count=len(bad_rows))
    sorted_cols = np.sort(arr, axis=0)
    bad_cols = np.nonzero(np.any(sorted_cols != ar[:, None], axis=0))[0]
    for y in bad_cols[:1]:
        v = _first_repeat(arr[:, y])
        report.add(LawFailure("latin-column", ("column",), (int(y),),
                              note=f"value {v} repeats in column {y}"), count=len(bad_cols))

    bad_unit = np.nonzero((arr[identity] != ar) | (arr[:, identity] != ar))[0]
    for x in bad_unit[:1]:
        report.add(LawFailure("identity", ("x",), (int(x),),
                              lhs=int(arr[identity, x]), rhs=int(arr[x, identity]),
                              note=f"{identity} is not a two-sided unit for element {x}"),
                   count=len(bad_unit))

    no_inv = np.nonzero(~np.any(arr == identity, axis=1))[0]
    for x in no_inv[:1]:
        report.add(LawFailure("inverse", ("x",), (int(x),), note=f"no inverse for element {x}"),
                   count=len(no_inv))

    total, first = _associativity_failures(arr)
    if total:
        x, y, z = first
        report.add(LawFailure("associativity", ("x", "y", "z"), (x, y, z),
                              lhs=int(arr[arr[x, y], z]), rhs=int(arr[x, arr[y, z]])),
                   count=total)


def _first_repeat(values) -> int:
    seen = set()
    for v in values:
        v = int(v)
        if v in seen:
            return v
        seen.add(v)
    return -1


def _associativity_failures(arr: np.ndarray) -> tuple[int, tuple[int, int, int] | None]:
    n = arr.shape[0]
    step = max(1, _ASSOC_CHUNK_CELLS // (n * n))
    total = 0
    first = None
    for start in range(0, n, step):
        xs = arr[start:start + step]                 # rows x*?
        lhs = arr[xs]                                # (x*y)*z  shape (k, n, n)
        rhs = xs[:, arr]                             # x*(y*z)  shape (k, n, n)
        bad = lhs != rhs
        c = int(np.count_nonzero(bad))
        if c:
            total += c
            if first is None:
                k, y, z = (int(v) for v in np.argwhere(bad)[0])
                first = (start + k, y, z)
    return total, first


def group_laws_hold(tables: np.ndarray, identity) -> np.ndarray:
    """Vectorized group test over a stack of tables of shape (K, N, N).

    Returns a boolean vector; ``True`` exactly when :func:`validate_group`
    would return an empty report for that table.
    """
    tables = np.asarray(tables)
    k, n, _ = tables.shape
    ar = np.arange(n)
    ident = np.broadcast_to(np.asarray(identity), (k,))
    b = np.arange(k)
    ok = np.all(np.sort(tables, axis=2) == ar, axis=(1, 2))
    ok &= np.all(np.sort(tables, axis=1) == ar[:, None], axis=(1, 2))
    ok &= np.all(tables[b, ident] == ar, axis=1)
    ok &= np.all(tables[b, :, ident] == ar, axis=1)
    ok &= np.all(np.any(tables == ident[:, None, None], axis=2), axis=1)
    step = max(1, _ASSOC_CHUNK_CELLS // (n ** 3))
    for start in range(0, k, step):
        t = tables[start:start + step]
        bb = np.arange(t.shape[0])[:, None, None, None]
        lhs = t[bb, t[:, :, :, None], ar[None, None, None, :]]
        rhs = t[bb, ar[None, :, None, None], t[:, None, :, :]]
        ok[start:start + step] &= np.all(lhs == rhs, axis=(1, 2, 3))
    return ok


def is_homomorphism(source: FiniteGroup, target: FiniteGroup, phi: Sequence[int]) -> bool:
    phi = np.asarray(phi, dtype=np.int64)
    if phi.shape != (source.order,):
        return False
    return bool(np.array_equal(phi[source.table], target.table[phi[:, None], phi[None, :]]))


def homomorphism_failure(source: FiniteGroup, target: FiniteGroup, phi) -> tuple[int, int] | None:
    phi = np.asarray(phi, dtype=np.int64)
    bad = np.argwhere(phi[source.table] != target.table[phi[:, None], phi[None, :]])
    if len(bad):
        return int(bad[0][0]), int(bad[0][1])
    return None


# subgroups -----------------------------------------------------------------

def closure(E: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by ``gens``, as a sorted tuple of indices."""
    rows = E.rows
    gens = [int(g) for g in gens]
    seen = {E.identity}
    queue = deque([E.identity])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = rows[a][g]
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return tuple(sorted(seen))


def is_subgroup(E: FiniteGroup, subset: Iterable[int]) -> bool:
    members = set(int(x) for x in subset)
    if not members:
        return False
    if any(not 0 <= x < E.order for x in members):
        raise OutOfRangeEntry(f"subset indices must lie in 0..{E.order - 1}")
    rows = E.rows
    for x in members:
        if E.inv(x) not in members:
            return False
        for y in members:
            if rows[x][y] not in members:
                return False
    return True


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    """A subgroup ``H <= E`` as a sorted list of ambient indices.

    Position ``i`` of the subgroup is ambient element ``members[i]``.
    """

    ambient: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(int(x) for x in self.members)))
        object.__setattr__(self, "members", members)
        if not is_subgroup(self.ambient, members):
            raise NotASubgroup(f"{list(members)} is not closed under products and inverses")
        if self.ambient.order % len(members):
            raise NotASubgroup(f"|H| = {len(members)} does not divide |E| = {self.ambient.order}")

    def __eq__(self, other):
        if not isinstance(other, SubgroupEmbedding):
            return NotImplemented
        return self.ambient == other.ambient and self.members == other.members

    def __hash__(self):
        return hash((self.ambient, self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index_map(self) -> tuple[int, ...]:
        return self.members

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.members)}

    def __contains__(self, x: int) -> bool:
        return x in self.position

    @cached_property
    def group(self) -> FiniteGroup:
        """The subgroup as a standalone group on positions ``0..|H|-1``."""
        E = self.ambient
        idx = np.asarray(self.members)
        pos = np.full(E.order, -1, dtype=np.int64)
        pos[idx] = np.arange(len(idx))
        sub = pos[E.table[np.ix_(idx, idx)]]
        labels = None if E.labels is None else tuple(E.labels[x] for x in self.members)
        return FiniteGroup(sub, self.position[E.identity], labels)


def subgroup(E: FiniteGroup, members: Iterable[int]) -> SubgroupEmbedding:
    return SubgroupEmbedding(E, tuple(members))


def subgroups(E: FiniteGroup) -> list[tuple[int, ...]]:
    """All subgroups, each a sorted tuple; sorted by (order, members)."""
    found = {closure(E, [x]) for x in range(E.order)}
    frontier = set(found)
    cyclic = sorted(found)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclic:
                if not set(C) <= set(H):
                    J = closure(E, H + C)
                    if J not in found:
                        new.add(J)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), s))


def is_normal(E: FiniteGroup, H: SubgroupEmbedding) -> bool:
    members = set(H.members)
    rows = E.rows
    for x in range(E.order):
        xi = E.inv(x)
        for h in H.members:
            if rows[rows[x][h]][xi] not in members:
                return False
    return True


def right_cosets(E: FiniteGroup, H: SubgroupEmbedding) -> list[tuple[int, ...]]:
    """Right cosets ``H*x`` ordered by their smallest element; ``H`` first."""
    rows = E.rows
    seen = set()
    cosets = []
    for x in range(E.order):
        if x in seen:
            continue
        coset = tuple(sorted(rows[h][x] for h in H.members))
        seen.update(coset)
        cosets.append(coset)
    cosets.sort(key=lambda c: (E.identity not in c, c[0]))
    return cosets


@dataclass(frozen=True, eq=False)
class Transversal:
    """One representative per right coset ``H*x``; ``reps[0]`` is the identity."""

    ambient: FiniteGroup
    subgroup: SubgroupEmbedding
    reps: tuple[int, ...]

    def __post_init__(self):
        E, H = self.ambient, self.subgroup
        reps = [int(r) for r in self.reps]
        if E.identity not in reps:
            raise NotATransversal("a transversal must contain the identity")
        reps.remove(E.identity)
        reps.insert(0, E.identity)
        if len(reps) * H.order != E.order:
            raise NotATransversal(
                f"{len(reps)} representatives for {E.order // H.order} right cosets")
        rows = E.rows
        covered = {}
        for r in reps:
            if not 0 <= r < E.order:
                raise OutOfRangeEntry(f"representative {r} outside 0..{E.order - 1}")
            for h in H.members:
                x = rows[h][r]
                if x in covered:
                    raise NotATransversal(
                        f"representatives {covered[x]} and {r} lie in the same right coset")
                covered[x] = r
        object.__setattr__(self, "reps", tuple(reps))

    def __len__(self) -> int:
        return len(self.reps)


def right_transversal(E: FiniteGroup, H: SubgroupEmbedding, reps: Sequence[int] | None = None,
                      seed: int | None = None) -> Transversal:
    """Choose a right transversal.

    ``reps`` gives an explicit list; otherwise ``seed`` selects one
    representative per coset uniformly at random; with neither, the lowest
    index of each coset is used (the identity for ``H`` itself).
    """
    if reps is not None:
        return Transversal(E, H, tuple(reps))
    cosets = right_cosets(E, H)
    if seed is None:
        chosen = [E.identity] + [c[0] for c in cosets[1:]]
    else:
        rng = random.Random(seed)
        chosen = [E.identity] + [rng.choice(c) for c in cosets[1:]]
    return Transversal(E, H, tuple(chosen))


def all_transversals(E: FiniteGroup, H: SubgroupEmbedding) -> Iterator[Transversal]:
    import itertools

    cosets = right_cosets(E, H)
    for choice in itertools.product(*cosets[1:]):
        yield Transversal(E, H, (E.identity,) + choice)


# isomorphism search ---------------------------------------------------------

def find_isomorphism(G1: FiniteGroup, G2: FiniteGroup, budget: int = 1_000_000,
                     fixed: Mapping[int, int] | None = None) -> tuple[int, ...] | None:
    """Search for an isomorphism ``G1 -> G2``.

    ``fixed`` pins the images of some elements (used to look for
    isomorphisms that restrict to a given map on a subgroup). Returns the map
    as a tuple ``phi[x]`` or ``None`` when none exists. Raises
    ``BudgetExhausted`` if more than ``budget`` search nodes are needed.
    """
    n = G1.order
    if n != G2.order or G1.order_spectrum != G2.order_spectrum:
        return None
    fixed = {int(k): int(v) for k, v in (fixed or {}).items()}
    ord1, ord2 = G1.element_orders, G2.element_orders
    if any(ord1[k] != ord2[v] for k, v in fixed.items()):
        return None

    # generators: the pinned elements first, then greedy picks of high order
    gens = list(fixed)
    current = set(closure(G1, gens))
    free_gens = []
    while len(current) < n:
        best = max((x for x in range(n) if x not in current), key=lambda x: (ord1[x], -x))
        free_gens.append(best)
        gens.append(best)
        current = set(closure(G1, gens))
    candidates = {g: [y for y in range(n) if ord2[y] == ord1[g]] for g in free_gens}

    rows1, rows2 = G1.rows, G2.rows
    nodes = 0

    def extend(images: dict[int, int], assigned: list[int]) -> dict[int, int] | None:
        # close the partial map over the subgroup generated by ``assigned``
        img = {G1.identity: G2.identity}
        used = {G2.identity: G1.identity}
        queue = deque([G1.identity])
        while queue:
            a = queue.popleft()
            for g in assigned:
                b = rows1[a][g]
                ib = rows2[img[a]][images[g]]
                if b in img:
                    if img[b] != ib:
                        return None
                    continue
                if ib in used:
                    return None
                img[b] = ib
                used[ib] = b
                queue.append(b)
        for g in assigned:
            if img.get(g, images[g]) != images[g]:
                return None
        return img

    base = extend(fixed, list(fixed))
    if base is None:
        return None

    def search(i: int, images: dict[int, int]):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted(f"isomorphism search exceeded {budget} nodes", explored=nodes)
        assigned = gens[: len(fixed) + i]
        img = extend(images, assigned)
        if img is None:
            return None
        if i == len(free_gens):
            return img if len(img) == n else None
        g = free_gens[i]
        for y in candidates[g]:
            if y in img.values():
                continue
            images[g] = y
            found = search(i + 1, images)
            if found is not None:
                return found
            del images[g]
        return None

    img = search(0, dict(fixed))
    if img is None:
        return None
    phi = tuple(img[x] for x in range(n))
    if not is_homomorphism(G1, G2, phi) or len(set(phi)) != n:
        raise InternalInconsistency("isomorphism search produced a map that does not verify")
    return phi


def isomorphic(G1: FiniteGroup, G2: FiniteGroup, budget: int = 1_000_000) -> bool:
    return find_isomorphism(G1, G2, budget) is not None
