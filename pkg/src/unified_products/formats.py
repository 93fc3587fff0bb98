"""Text formats: groups (.grp), extending data (.esd), retractions (.ret).

All parsers report problems as :class:`ParseError` carrying a 1-based line
and column.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .catalog import named_group
from .errors import InputError, InvalidGroup, ParseError, UnifiedProductsError
from .extending import ExtendingDatum
from .finite_group import FiniteGroup, Transversal, right_transversal, subgroup
from .reports import LawFailure, LawReport

_TOKEN = re.compile(r"\S+")


def _content_lines(text: str, start: int = 1) -> list[tuple[int, str]]:
    out = []
    for no, line in enumerate(text.splitlines(), start):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append((no, line))
    return out


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


# groups ------------------------------------------------------------------------

def _parse_group_lines(lines: list[tuple[int, str]], end_line: int, name=None,
                       check: bool = True) -> FiniteGroup:
    if not lines:
        raise ParseError("empty group description", end_line)
    no, line = lines[0]
    toks = _tokens(line)
    if len(toks) != 1 or not toks[0][1].isdigit():
        raise ParseError("first line must be the group order", no, toks[0][0] if toks else 1)
    n = int(toks[0][1])
    if n < 1:
        raise ParseError("group order must be positive", no, toks[0][0])
    if len(lines) < 2:
        raise ParseError("missing label header", end_line)
    no, line = lines[1]
    header = _tokens(line)
    if len(header) != n:
        raise ParseError(f"header has {len(header)} labels but the order is {n}", no, 1)
    index = {}
    for col, lab in header:
        if lab in index:
            raise ParseError(f"duplicate label {lab!r} in header", no, col)
        index[lab] = len(index)
    rows = lines[2:]
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else end_line
        raise ParseError(f"expected {n} table rows after the header, found {len(rows)}", where)
    table = np.zeros((n, n), dtype=np.int64)
    for x, (no, line) in enumerate(rows):
        toks = _tokens(line)
        if len(toks) != n:
            raise ParseError(f"row {x} has {len(toks)} entries, expected {n}", no, 1)
        for y, (col, lab) in enumerate(toks):
            if lab not in index:
                raise ParseError(f"unknown label {lab!r}", no, col)
            table[x, y] = index[lab]
    ar = np.arange(n)
    ids = [x for x in range(n) if np.array_equal(table[x], ar)]
    if len(ids) != 1:
        # a law failure, not a syntax problem
        report = LawReport("group")
        report.add(LawFailure("identity", ("x",), (ids[1] if ids else 0,),
                              note=f"{len(ids)} rows equal the header; a group has exactly one"))
        raise InvalidGroup(report)
    return FiniteGroup.from_table(table, ids[0], tuple(lab for _, lab in header), name, check=check)


def parse_group(text: str, name: str | None = None, check: bool = True) -> FiniteGroup:
    """Parse a .grp table. With ``check=False`` the group laws are not verified."""
    lines = _content_lines(text)
    return _parse_group_lines(lines, len(text.splitlines()) or 1, name, check)


def serialize_group(G: FiniteGroup) -> str:
    labels = [G.label(x) for x in range(G.order)]
    if any(not lab or _TOKEN.fullmatch(lab) is None for lab in labels) or len(set(labels)) != G.order:
        labels = [str(x) for x in range(G.order)]
    out = [str(G.order), " ".join(labels)]
    for row in G.rows:
        out.append(" ".join(labels[y] for y in row))
    return "\n".join(out) + "\n"


def load_group(ref: str, base: Path | None = None, check: bool = True) -> FiniteGroup:
    """``builtin:NAME``, a bare built-in name, or a path to a .grp file."""
    if ref.startswith("builtin:"):
        return named_group(ref[len("builtin:"):])
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if path.exists():
        return parse_group(path.read_text(encoding="utf-8"), name=path.stem, check=check)
    try:
        return named_group(ref)
    except InputError:
        raise InputError(f"no such group file or built-in group: {ref!r}") from None


# extending data ----------------------------------------------------------------

_SECTION = re.compile(r"^\s*\[(H|S|STAR|RACT|LACT|F)\]\s*(.*)$")


def _int_rows(lines, rows, cols, bound, section, end_line) -> np.ndarray:
    if len(lines) != rows:
        where = lines[rows][0] if len(lines) > rows else end_line
        raise ParseError(f"[{section}] needs {rows} rows, found {len(lines)}", where)
    out = np.zeros((rows, cols), dtype=np.int64)
    for i, (no, line) in enumerate(lines):
        toks = _tokens(line)
        if len(toks) != cols:
            raise ParseError(f"[{section}] row {i} has {len(toks)} entries, expected {cols}", no, 1)
        for j, (col, tok) in enumerate(toks):
            if not tok.isdigit():
                raise ParseError(f"[{section}] entry {tok!r} is not an index", no, col)
            val = int(tok)
            if val >= bound:
                raise ParseError(f"[{section}] entry {val} outside 0..{bound - 1}", no, col)
            out[i, j] = val
    return out


def parse_datum(text: str) -> ExtendingDatum:
    raw = text.splitlines()
    end_line = len(raw) or 1
    sections: dict[str, tuple[int, str, list]] = {}
    current = None
    for no, line in enumerate(raw, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _SECTION.match(line)
        if m:
            key = m.group(1)
            if key in sections:
                raise ParseError(f"duplicate section [{key}]", no, 1)
            sections[key] = (no, m.group(2).strip(), [])
            current = key
            continue
        if stripped.startswith("["):
            raise ParseError(f"unknown section {stripped!r}", no, line.index("[") + 1)
        if current is None:
            raise ParseError("content before the first section", no, 1)
        sections[current][2].append((no, line))
    for key in ("H", "S", "STAR", "RACT", "LACT", "F"):
        if key not in sections:
            raise ParseError(f"missing section [{key}]", end_line)

    no, arg, body = sections["H"]
    if arg:
        if body:
            raise ParseError("[H] takes either a built-in name or an embedded table", body[0][0], 1)
        try:
            H = named_group(arg)
        except InputError as exc:
            raise ParseError(str(exc), no, line_col(raw[no - 1], arg)) from None
    else:
        H = _parse_group_lines(body, no)

    no, arg, body = sections["S"]
    if body or not arg.isdigit() or int(arg) < 1:
        raise ParseError("[S] must be followed by a positive carrier size on the same line", no, 1)
    m, n = int(arg), H.order

    def table(key, cols, bound):
        no, arg, body = sections[key]
        if arg:
            raise ParseError(f"[{key}] takes no argument", no, line_col(raw[no - 1], arg))
        return _int_rows(body, m, cols, bound, key, no)

    return ExtendingDatum(H, table("STAR", m, m), table("RACT", n, m),
                          table("LACT", n, n), table("F", m, n))


def line_col(line: str, fragment: str) -> int:
    pos = line.find(fragment)
    return pos + 1 if pos >= 0 else 1


def _host_block(H: FiniteGroup) -> str:
    """A built-in reference when the host is exactly that built-in, else the inline table."""
    if H.name:
        try:
            ref = named_group(H.name)
        except UnifiedProductsError:
            ref = None
        if ref is not None and ref.identity == H.identity and np.array_equal(ref.table, H.table) \
                and ref.labels == H.labels:
            return f"[H] {H.name}\n"
    return f"[H]\n{serialize_group(H)}"


def serialize_datum(d: ExtendingDatum) -> str:
    def rows(a):
        return "\n".join(" ".join(str(int(v)) for v in row) for row in a)

    return (f"{_host_block(d.host)}[S] {d.m}\n"
            f"[STAR]\n{rows(d.star)}\n[RACT]\n{rows(d.ract)}\n"
            f"[LACT]\n{rows(d.lact)}\n[F]\n{rows(d.cocycle)}\n")


def load_datum(path) -> ExtendingDatum:
    return parse_datum(Path(path).read_text(encoding="utf-8"))


# retractions -------------------------------------------------------------------

def parse_retraction(text: str, base: Path | None = None) -> Transversal:
    """Lines ``ambient REF``, ``members L...``, ``reps L...`` (labels or indices)."""
    fields = {}
    for no, line in _content_lines(text):
        toks = _tokens(line)
        key = toks[0][1]
        if key not in ("ambient", "members", "reps"):
            raise ParseError(f"unknown key {key!r}", no, toks[0][0])
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", no, toks[0][0])
        fields[key] = (no, toks[1:])
    for key in ("ambient", "members", "reps"):
        if key not in fields:
            raise ParseError(f"missing {key!r} line", len(text.splitlines()) or 1)
    no, toks = fields["ambient"]
    if len(toks) != 1:
        raise ParseError("ambient takes exactly one group reference", no, 1)
    E = load_group(toks[0][1], base)

    def elems(key):
        no, toks = fields[key]
        out = []
        for col, tok in toks:
            try:
                out.append(E.index(tok))
            except (KeyError, ValueError, IndexError, InputError):
                raise ParseError(f"unknown element {tok!r}", no, col) from None
        return out

    H = subgroup(E, elems("members"))
    return right_transversal(E, H, reps=elems("reps"))


def serialize_retraction(T: Transversal, ambient_ref: str) -> str:
    E = T.ambient
    return (f"ambient {ambient_ref}\n"
            f"members {' '.join(E.label(x) for x in T.subgroup.members)}\n"
            f"reps {' '.join(E.label(x) for x in T.reps)}\n")


def load_retraction(path) -> Transversal:
    path = Path(path)
    return parse_retraction(path.read_text(encoding="utf-8"), path.parent)


__all__ = [
    "parse_group", "serialize_group", "load_group",
    "parse_datum", "serialize_datum", "load_datum",
    "parse_retraction", "serialize_retraction", "load_retraction",
]
