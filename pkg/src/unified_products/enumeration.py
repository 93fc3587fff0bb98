"""Exhaustive generators over small cases, and an independent table oracle.

``enumerate_extending_data`` builds normalized tables in four stages
(right action, left action, operation, cocycle) and discards a partial
choice as soon as an axiom that mentions only the chosen tables fails.

``oracle_group_structures`` never looks at extending data: it completes
Cayley tables of order ``N`` around a fixed copy of ``H`` by backtracking.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BudgetExhausted, InternalInconsistency, ParseError, PreconditionFailed
from .extending import ExtendingDatum, axioms_hold, check_axioms, product_tables, recognize
from .finite_group import (
    FiniteGroup,
    SubgroupEmbedding,
    Transversal,
    all_transversals,
    find_isomorphism,
    is_subgroup,
    right_transversal,
    validate_group,
)

FILTERS = ("trivial-ract", "trivial-lact", "trivial-cocycle")


@dataclass(frozen=True)
class EnumerationTask:
    host: FiniteGroup
    m: int
    filters: frozenset[str] = frozenset()
    budget: int = 10**8
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "filters", frozenset(self.filters))
        unknown = self.filters - set(FILTERS)
        if unknown:
            raise PreconditionFailed(f"unknown filters {sorted(unknown)}; known: {list(FILTERS)}")
        if self.m < 1:
            raise PreconditionFailed("the carrier needs at least one element")

    @property
    def naive_space(self) -> int:
        """Number of normalized table choices before any axiom filter."""
        n, m = self.host.order, self.m
        total = 1
        for kind in ("star", "ract", "lact", "cocycle"):
            total *= _choices(kind, n, m) ** _free_cells(kind, n, m)
        return total


def _free_cells(kind: str, n: int, m: int) -> int:
    return (m - 1) * (m - 1) if kind in ("star", "cocycle") else (m - 1) * (n - 1)


def _choices(kind: str, n: int, m: int) -> int:
    return m if kind in ("star", "ract") else n


def candidate_tables(kind: str, H: FiniteGroup, m: int, trivial: bool = False,
                     injective_columns: bool = False) -> np.ndarray:
    """All normalized tables of one kind, lexicographic in row-major order.

    With ``injective_columns`` only operations whose columns are
    permutations are produced; right multiplication by a fixed element is
    injective in every unified product, so no valid datum is lost.
    """
    n, e = H.order, H.identity
    if kind == "star" and injective_columns:
        cols = []
        for t in range(1, m):
            rest = [x for x in range(m) if x != t]
            cols.append([(t,) + p for p in itertools.permutations(rest)])
        out = []
        for choice in itertools.product(*cols):
            table = np.empty((m, m), dtype=np.int64)
            table[:, 0] = np.arange(m)
            for t, col in enumerate(choice, 1):
                table[:, t] = col
            out.append(table)
        out = np.array(out, dtype=np.int64).reshape(-1, m, m)
        return out[np.lexsort(out.reshape(len(out), -1).T[::-1])]
    if kind in ("star", "cocycle"):
        shape = (m, m)
        if kind == "star":
            base = np.zeros(shape, dtype=np.int64)
            base[0, :] = np.arange(m)
            base[:, 0] = np.arange(m)
        else:
            base = np.full(shape, e, dtype=np.int64)
        free = [(a, b) for a in range(1, m) for b in range(1, m)]
    else:
        shape = (m, n)
        if kind == "ract":
            base = np.zeros(shape, dtype=np.int64)
            base[:, e] = np.arange(m)
        else:
            base = np.full(shape, e, dtype=np.int64)
            base[0, :] = np.arange(n)
        free = [(a, b) for a in range(1, m) for b in range(n) if b != e]
    if trivial:
        if kind == "ract":
            base = np.tile(np.arange(m)[:, None], (1, n))
        elif kind == "lact":
            base = np.tile(np.arange(n)[None, :], (m, 1))
        elif kind == "star":
            raise PreconditionFailed("the operation has no trivial choice")
        return base[None].copy()
    if not free:
        return base[None].copy()
    values = np.array(list(itertools.product(range(_choices(kind, n, m)), repeat=len(free))),
                      dtype=np.int64)
    out = np.repeat(base[None], len(values), axis=0)
    rows, cols = zip(*free)
    out[:, list(rows), list(cols)] = values
    return out


def normalized_candidates(H: FiniteGroup, m: int):
    """Every normalized datum as four stacked arrays, lexicographic in
    ``(star, ract, lact, cocycle)``."""
    tabs = [candidate_tables(k, H, m) for k in ("star", "ract", "lact", "cocycle")]
    idx = np.indices([len(t) for t in tabs]).reshape(4, -1)
    return tuple(t[i] for t, i in zip(tabs, idx))


# staged enumeration ------------------------------------------------------------

@dataclass
class _Counter:
    budget: int
    nodes: int = 0

    def charge(self, k: int, stage: str, partial) -> None:
        self.nodes += k
        if self.nodes > self.budget:
            raise BudgetExhausted(f"enumeration exceeded the node budget {self.budget} at stage {stage}",
                                  self.nodes - k, partial, checkpoint={"stage": stage})


_CHUNK = 1 << 15


def _extend(H, prev: dict, kind: str, cands: np.ndarray, tags, counter, placeholders):
    """Cross every surviving partial choice with ``cands`` and keep those passing ``tags``."""
    k_prev = len(next(iter(prev.values()))) if prev else 1
    total = k_prev * len(cands)
    counter.charge(total, kind, None)
    keep_prev, keep_new = [], []
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(total, start + _CHUNK))
        ip, ic = np.divmod(flat, len(cands))
        cur = {key: arr[ip] for key, arr in prev.items()}
        cur[kind] = cands[ic]
        tables = [cur.get(key, placeholders[key]) for key in ("star", "ract", "lact", "cocycle")]
        ok = axioms_hold(H.table, *tables, tags=tags) if tags else np.ones(len(flat), bool)
        keep_prev.append(ip[ok])
        keep_new.append(ic[ok])
    ip = np.concatenate(keep_prev)
    ic = np.concatenate(keep_new)
    out = {key: arr[ip] for key, arr in prev.items()}
    out[kind] = cands[ic]
    return out


def _placeholders(H: FiniteGroup, m: int) -> dict:
    n = H.order
    ar_m = np.arange(m)
    return {
        "star": ((ar_m[:, None] + ar_m[None, :]) % m)[None],
        "ract": np.tile(ar_m[:, None], (1, n))[None],
        "lact": np.tile(np.arange(n)[None, :], (m, 1))[None],
        "cocycle": np.full((1, m, m), H.identity),
    }


def _stages(task: EnumerationTask, ract_subset=None, counter=None) -> dict:
    H, m = task.host, task.m
    counter = counter or _Counter(task.budget)
    ph = _placeholders(H, m)
    ract = candidate_tables("ract", H, m, "trivial-ract" in task.filters)
    if ract_subset is not None:
        ract = ract_subset
    state = _extend(H, {}, "ract", ract, ("ES1",), counter, ph)
    state = _extend(H, state, "lact",
                    candidate_tables("lact", H, m, "trivial-lact" in task.filters),
                    ("ES3",), counter, ph)
    state = _extend(H, state, "star", candidate_tables("star", H, m, injective_columns=True),
                    ("ES4", "ES7"), counter, ph)
    state = _extend(H, state, "cocycle",
                    candidate_tables("cocycle", H, m, "trivial-cocycle" in task.filters),
                    ("ES2", "ES5", "ES6"), counter, ph)
    return state


def _sorted_rows(state: dict) -> list[tuple]:
    keys = ("star", "ract", "lact", "cocycle")
    if not len(state["star"]):
        return []
    flat = np.hstack([state[k].reshape(len(state[k]), -1) for k in keys])
    order = np.lexsort(flat.T[::-1])
    return [tuple(state[k][i] for k in keys) for i in order]


def _shard(args):
    task, ract_subset = args
    return _stages(task, ract_subset)


def enumerate_extending_data(task: EnumerationTask):
    """Every valid normalized datum over ``(host, m)``, lexicographic in
    ``(star, ract, lact, cocycle)``. Each emitted datum is re-checked."""
    H, m = task.host, task.m
    if task.threads > 1:
        counter = _Counter(task.budget)
        ract = _extend(H, {}, "ract",
                       candidate_tables("ract", H, m, "trivial-ract" in task.filters),
                       ("ES1",), counter, _placeholders(H, m))["ract"]
        shards = [(task, part) for part in np.array_split(ract, task.threads) if len(part)]
        with ProcessPoolExecutor(max_workers=task.threads) as pool:
            parts = list(pool.map(_shard, shards))
        state = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    else:
        state = _stages(task)
    for star, ract, lact, coc in _sorted_rows(state):
        d = ExtendingDatum(H, star, ract, lact, coc)
        if not check_axioms(d).ok:
            raise InternalInconsistency("staged filter emitted a datum failing the axioms")
        yield d


def count_extending_data(task: EnumerationTask) -> int:
    return sum(1 for _ in enumerate_extending_data(task))


# result files ------------------------------------------------------------------

def _flag_text(d: ExtendingDatum) -> str:
    flags = recognize(d)
    on = [k[3:] for k in ("is_direct", "is_crossed", "is_bicrossed", "is_twisted") if flags[k]]
    return ",".join(on) or "-"


def render_summary(task: EnumerationTask, data: list[ExtendingDatum], files: list[str],
                   classes: list[list[int]] | None = None) -> str:
    """The ``.sum`` text: counts, one line per datum, optional class partition."""
    lines = [f"# enumeration host={task.host.name or task.host.order} m={task.m} "
             f"filters={','.join(sorted(task.filters)) or '-'} "
             f"naive_space={task.naive_space} valid={len(data)}"]
    for i, (d, name) in enumerate(zip(data, files)):
        lines.append(f"datum {i} {d.digest()} {name} {_flag_text(d)}")
    for k, members in enumerate(classes or []):
        lines.append(f"class {k}: {' '.join(str(i) for i in members)}")
    return "\n".join(lines) + "\n"


def write_results(task: EnumerationTask, data: list[ExtendingDatum], outdir,
                  classes: list[list[int]] | None = None) -> Path:
    """Write one ``.esd`` per datum plus ``summary.sum`` into ``outdir``."""
    from .formats import serialize_datum

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = [f"datum_{i:05d}.esd" for i in range(len(data))]
    for d, name in zip(data, files):
        (outdir / name).write_text(serialize_datum(d), encoding="utf-8")
    path = outdir / "summary.sum"
    path.write_text(render_summary(task, data, files, classes), encoding="utf-8")
    return path


def read_summary(path) -> list[ExtendingDatum]:
    """Load the data listed in a ``.sum`` file, checking each content hash."""
    from .formats import load_datum

    path = Path(path)
    out = []
    for no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] != "datum":
            continue
        if len(parts) < 4:
            raise ParseError("datum lines need an index, a hash and a file name", no, 1)
        d = load_datum(path.parent / parts[3])
        if d.digest() != parts[2]:
            raise ParseError(f"content hash mismatch for {parts[3]}", no, line.index(parts[2]) + 1)
        out.append(d)
    return out


# oracle --------------------------------------------------------------------------

@dataclass
class OracleResult:
    host: FiniteGroup
    order: int
    tables: list[np.ndarray]
    class_of: list[int]
    classes: list[list[int]]
    explored: int

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def representative(self, k: int) -> FiniteGroup:
        return FiniteGroup(self.tables[self.classes[k][0]], self.host.identity)


class _Completion:
    """Backtracking completion of an N x N Cayley table around a fixed block."""

    def __init__(self, H: FiniteGroup, N: int, budget: int):
        self.N = N
        self.full = (1 << N) - 1
        self.T = [[-1] * N for _ in range(N)]
        self.row_used = [0] * N
        self.col_used = [0] * N
        self.where: list[list[tuple[int, int]]] = [[] for _ in range(N)]
        self.trail: list[tuple[int, int]] = []
        self.budget = budget
        self.nodes = 0
        self.out: list[np.ndarray] = []
        e = H.identity
        pre = [(e, x, x) for x in range(N)] + [(x, e, x) for x in range(N)]
        pre += [(a, b, int(H.table[a, b])) for a in range(H.order) for b in range(H.order)]
        for x, y, v in pre:
            if self.T[x][y] == -1 and not self._assign(x, y, v):
                raise PreconditionFailed("the fixed block is inconsistent")

    def _set(self, x, y, v):
        self.T[x][y] = v
        self.row_used[x] |= 1 << v
        self.col_used[y] |= 1 << v
        self.where[v].append((x, y))
        self.trail.append((x, y))

    def _undo(self, mark):
        while len(self.trail) > mark:
            x, y = self.trail.pop()
            v = self.T[x][y]
            self.T[x][y] = -1
            self.row_used[x] &= ~(1 << v)
            self.col_used[y] &= ~(1 << v)
            self.where[v].pop()

    def _assign(self, x, y, v) -> bool:
        """Set a cell and propagate every associativity instance with three
        known cells; ``False`` on contradiction (caller undoes)."""
        queue = [(x, y, v)]
        T = self.T
        while queue:
            x, y, v = queue.pop()
            cur = T[x][y]
            if cur != -1:
                if cur != v:
                    return False
                continue
            if (self.row_used[x] >> v) & 1 or (self.col_used[y] >> v) & 1:
                return False
            self._set(x, y, v)
            forced = []
            N = self.N
            # (x y) c = x (y c)
            for c in range(N):
                L, q = T[v][c], T[y][c]
                R = T[x][q] if q != -1 else -1
                if q != -1:
                    if L != -1 and R != -1 and L != R:
                        return False
                    if L != -1 and R == -1:
                        forced.append((x, q, L))
                    elif R != -1 and L == -1:
                        forced.append((v, c, R))
            # (a b) y = a (b y) with a b = x
            for a, b in list(self.where[x]):
                q = T[b][y]
                if q == -1:
                    continue
                R = T[a][q]
                if R == -1:
                    forced.append((a, q, v))
                elif R != v:
                    return False
            # (a x) y = a (x y)
            for a in range(N):
                p, R = T[a][x], T[a][v]
                L = T[p][y] if p != -1 else -1
                if p != -1:
                    if L != -1 and R != -1 and L != R:
                        return False
                    if L != -1 and R == -1:
                        forced.append((a, v, L))
                    elif R != -1 and L == -1:
                        forced.append((p, y, R))
            # (x b) c = x (b c) with b c = y
            for b, c in list(self.where[y]):
                p = T[x][b]
                if p == -1:
                    continue
                L = T[p][c]
                if L == -1:
                    forced.append((p, c, v))
                elif L != v:
                    return False
            queue.extend(forced)
        return True

    def _pick(self):
        best, best_count = None, self.N + 1
        for x in range(self.N):
            for y in range(self.N):
                if self.T[x][y] == -1:
                    cands = self.full & ~(self.row_used[x] | self.col_used[y])
                    cnt = bin(cands).count("1")
                    if cnt < best_count:
                        best, best_count = (x, y, cands), cnt
                        if cnt <= 1:
                            return best
        return best

    def run(self):
        pick = self._pick()
        if pick is None:
            self.out.append(np.array(self.T, dtype=np.int64))
            return
        x, y, cands = pick
        for v in range(self.N):
            if not (cands >> v) & 1:
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExhausted(f"oracle exceeded the node budget {self.budget}",
                                      self.nodes, list(self.out))
            mark = len(self.trail)
            if self._assign(x, y, v):
                self.run()
            self._undo(mark)


def oracle_group_structures(H: FiniteGroup, N: int, budget: int = 10**7,
                            iso_budget: int = 10**6) -> OracleResult:
    """All group tables on ``0..N-1`` containing ``H``'s table at ``0..|H|-1``,
    split into classes under isomorphisms fixing ``H`` pointwise."""
    if N % H.order:
        raise PreconditionFailed(f"|H| = {H.order} does not divide N = {N}")
    if N > 12:
        raise PreconditionFailed("the oracle is limited to N <= 12")
    search = _Completion(H, N, budget)
    search.run()
    tables = search.out
    fixed = {h: h for h in range(H.order)}
    groups = []
    for t in tables:
        report = validate_group(t, H.identity)
        if not report.ok:
            raise InternalInconsistency(f"oracle produced a non-group: {report.summary()}")
        groups.append(FiniteGroup(t, H.identity))
    classes: list[list[int]] = []
    class_of = []
    for i, G in enumerate(groups):
        for k, members in enumerate(classes):
            if find_isomorphism(groups[members[0]], G, iso_budget, fixed=fixed) is not None:
                members.append(i)
                class_of.append(k)
                break
        else:
            classes.append([i])
            class_of.append(len(classes) - 1)
    return OracleResult(H, N, tables, class_of, classes, search.nodes)


# cross validation ---------------------------------------------------------------

@dataclass
class StructureCrossCheck:
    host: str
    m: int
    data_count: int
    oracle_tables: int
    oracle_classes: int
    k2_classes: int
    unmatched_oracle_classes: list[int] = field(default_factory=list)
    oracle_class_to_k2: dict[int, int] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return not self.unmatched_oracle_classes and self.oracle_classes == self.k2_classes \
            and len(set(self.oracle_class_to_k2.values())) == self.k2_classes

    def to_dict(self) -> dict:
        return {
            "agree": self.agree,
            "host": self.host,
            "m": self.m,
            "data_count": self.data_count,
            "oracle_tables": self.oracle_tables,
            "oracle_classes": self.oracle_classes,
            "k2_classes": self.k2_classes,
            "unmatched_oracle_classes": self.unmatched_oracle_classes,
            "oracle_class_to_k2": {str(k): v for k, v in sorted(self.oracle_class_to_k2.items())},
        }


def cross_validate_structures(H: FiniteGroup, m: int, budget: int = 10**7) -> StructureCrossCheck:
    """Every oracle structure arises from some datum up to an isomorphism
    fixing H, and the two class counts agree."""
    from .classification import k2_classes

    data = list(enumerate_extending_data(EnumerationTask(H, m, budget=budget)))
    oracle = oracle_group_structures(H, H.order * m, budget)
    k2 = k2_classes(H, m, data, budget)
    report = StructureCrossCheck(H.name or str(H.order), m, len(data), len(oracle.tables),
                            oracle.class_count, len(k2))
    if not data:
        report.unmatched_oracle_classes = list(range(oracle.class_count))
        return report
    tabs = product_tables(H.table, *(np.stack(t) for t in zip(*(x.tables() for x in data))))
    products = [FiniteGroup(t, H.identity * m) for t in tabs]
    for k in range(oracle.class_count):
        rep = oracle.representative(k)
        fixed = {h: h * m for h in range(H.order)}
        for reps_k2, members in enumerate(k2.classes):
            if find_isomorphism(rep, products[members[0]], fixed=fixed) is not None:
                report.oracle_class_to_k2[k] = reps_k2
                break
        else:
            report.unmatched_oracle_classes.append(k)
    return report


# transversal survey -------------------------------------------------------------

@dataclass
class SurveyReport:
    samples: int = 0
    axioms_pass: int = 0
    crossed: int = 0
    bicrossed: int = 0
    twisted: int = 0
    direct: int = 0
    fiber_subgroup: int = 0
    reps: list[tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "axioms_pass": self.axioms_pass,
            "crossed": self.crossed,
            "bicrossed": self.bicrossed,
            "twisted": self.twisted,
            "direct": self.direct,
            "fiber_subgroup": self.fiber_subgroup,
        }


def sample_transversals(E: FiniteGroup, H: SubgroupEmbedding, policy: str = "all",
                        k: int = 100, seed: int = 0) -> list[Transversal]:
    """``all`` transversals, or ``k`` seeded ones (seeds ``seed .. seed+k-1``)."""
    if policy == "all":
        return list(all_transversals(E, H))
    if policy == "random":
        return [right_transversal(E, H, seed=s) for s in range(seed, seed + k)]
    raise PreconditionFailed(f"unknown sample policy {policy!r}")


def survey_transversals(E: FiniteGroup, H: SubgroupEmbedding, policy: str = "all",
                        k: int = 100, seed: int = 0) -> SurveyReport:
    from .reconstruction import extract_datum, retraction_from_transversal

    out = SurveyReport()
    for T in sample_transversals(E, H, policy, k, seed):
        r = retraction_from_transversal(E, H, T)
        d = extract_datum(r)
        flags = recognize(d)
        out.samples += 1
        out.axioms_pass += check_axioms(d).ok
        out.crossed += flags["is_crossed"]
        out.bicrossed += flags["is_bicrossed"]
        out.twisted += flags["is_twisted"]
        out.direct += flags["is_direct"]
        out.fiber_subgroup += is_subgroup(E, r.fiber)
        out.reps.append(T.reps)
    return out
