"""Witness-carrying reports for law checks."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

MAX_WITNESSES = 8


@dataclass(frozen=True)
class LawFailure:
    """One failed instance of a law: the tag, the variable binding, both sides."""

    tag: str
    names: tuple[str, ...]
    witness: tuple[int, ...]
    lhs: object = None
    rhs: object = None
    note: str = ""

    def render(self) -> str:
        names = ",".join(self.names)
        values = ",".join(str(v) for v in self.witness)
        text = f"{self.tag} FAIL at ({names})=({values})"
        if self.note:
            text += f": {self.note}"
        if self.lhs is not None or self.rhs is not None:
            text += f": lhs={self.lhs}, rhs={self.rhs}"
        return text

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "names": list(self.names),
            "witness": [int(v) for v in self.witness],
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
            "note": self.note,
        }


def _plain(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


@dataclass
class LawReport:
    """Violations grouped by tag.

    ``counts`` is exact; ``failures`` keeps at most ``MAX_WITNESSES`` entries
    per tag, sorted lexicographically by witness.  A report built with
    :meth:`deferred` answers ``ok`` from a short-circuiting test and runs the
    full check only when counts or witnesses are read.
    """

    kind: str = "laws"
    _counts: dict[str, int] = field(default_factory=dict, repr=False)
    _failures: list[LawFailure] = field(default_factory=list, repr=False)
    # masks recorded by add_mask; witnesses are built on first access
    _pending: list = field(default_factory=list, repr=False)
    _fill: Callable[["LawReport"], None] | None = field(default=None, repr=False)
    _ok: bool | None = field(default=None, repr=False)

    @classmethod
    def deferred(cls, kind: str, ok: bool, fill: Callable[["LawReport"], None]) -> "LawReport":
        """``fill`` must record violations exactly when ``ok`` is False."""
        report = cls(kind)
        report._ok = ok
        if not ok:
            report._fill = fill
        return report

    def _run_fill(self) -> None:
        fill, self._fill = self._fill, None
        if fill is not None:
            fill(self)

    @property
    def counts(self) -> dict[str, int]:
        self._run_fill()
        return self._counts

    @property
    def failures(self) -> list[LawFailure]:
        self._run_fill()
        while self._pending:
            tag, names, sel, lhs, rhs, note = self._pending.pop(0)
            k = len(sel[0])
            lv = [None] * k if lhs is None else lhs[sel].tolist()
            rv = [None] * k if rhs is None else rhs[sel].tolist()
            for w, a, b in zip(zip(*(i.tolist() for i in sel)), lv, rv):
                self._failures.append(LawFailure(tag, names, w, a, b, note))
        return self._failures

    @property
    def ok(self) -> bool:
        if self._fill is not None:
            return bool(self._ok)
        return not self._counts

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def tags(self) -> list[str]:
        return sorted(self.counts)

    def by_tag(self, tag: str) -> list[LawFailure]:
        return [f for f in self.failures if f.tag == tag]

    def add(self, failure: LawFailure, count: int = 1) -> None:
        self._run_fill()
        tag = failure.tag
        self._counts[tag] = self._counts.get(tag, 0) + count
        held = sum(1 for f in self._failures if f.tag == tag) + \
            sum(len(p[2][0]) for p in self._pending if p[0] == tag)
        if held < MAX_WITNESSES:
            self._failures.append(failure)

    def add_mask(self, tag, names, mask, lhs=None, rhs=None, note="") -> None:
        """Record every True cell of ``mask`` as a violation of ``tag``.

        ``lhs``/``rhs`` are arrays of the mask's shape giving both sides.
        """
        self._run_fill()
        idx = np.nonzero(mask)
        count = int(idx[0].size)
        if not count:
            return
        self._counts[tag] = self._counts.get(tag, 0) + count
        sel = tuple(i[:MAX_WITNESSES] for i in idx)
        shape = np.shape(mask)
        if lhs is not None and np.shape(lhs) != shape:
            lhs = np.broadcast_to(lhs, shape)
        if rhs is not None and np.shape(rhs) != shape:
            rhs = np.broadcast_to(rhs, shape)
        self._pending.append((tag, tuple(names), sel, lhs, rhs, note))

    def merge(self, other: "LawReport") -> None:
        self._run_fill()
        for tag, count in other.counts.items():
            self._counts[tag] = self._counts.get(tag, 0) + count
        for f in other.failures:
            if len(self.by_tag(f.tag)) < MAX_WITNESSES:
                self.failures.append(f)

    def summary(self) -> str:
        if self.ok:
            return "OK (0 violations)"
        parts = [f"{tag}: {self.counts[tag]}" for tag in self.tags()]
        return f"{self.total} violations ({', '.join(parts)})"

    def render(self) -> str:
        if self.ok:
            return "OK (0 violations)"
        lines = [self.summary()]
        for tag in self.tags():
            for f in sorted(self.by_tag(tag), key=lambda f: f.witness):
                lines.append(f.render())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "total": self.total,
            "counts": {k: self.counts[k] for k in self.tags()},
            "failures": [f.to_dict() for f in sorted(self.failures, key=lambda f: (f.tag, f.witness))],
        }
