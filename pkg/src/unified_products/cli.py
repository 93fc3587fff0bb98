"""Command line front end.

Exit status is a function of the result category only:
0 affirmative, 1 definite negative (with witnesses), 2 input error,
3 budget exhausted, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalog import point_stabilizer_subgroup
from .classification import (
    DEFAULT_BUDGET,
    UniversalCandidate,
    cohomologous,
    equivalent,
    h2_classes,
    k2_classes,
    kuperberg_check,
    kuperberg_report,
    verify_universal_C,
    verify_universal_D,
)
from .enumeration import (
    FILTERS,
    EnumerationTask,
    cross_validate_structures,
    enumerate_extending_data,
    oracle_group_structures,
    read_summary,
    survey_transversals,
    write_results,
)
from .errors import (
    BudgetExhausted,
    InputError,
    InternalInconsistency,
    UnifiedProductsError,
    Violation,
)
from .extending import (
    CrossedSystem,
    ExtendingDatum,
    MatchedPair,
    bicrossed_product,
    check_axioms,
    crossed_product,
    recognize,
    twisted_product,
    unified_product,
)
from .finite_group import FiniteGroup, closure, is_normal, right_transversal, subgroup
from .formats import load_datum, load_group, load_retraction, serialize_datum, serialize_group
from .reconstruction import (
    extract_datum,
    phi_isomorphism,
    retraction_from_transversal,
    schreier_vs_unified,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4
STATUS_NAMES = {EXIT_OK: "ok", EXIT_NEGATIVE: "negative", EXIT_INPUT: "input-error",
                EXIT_BUDGET: "budget-exhausted", EXIT_INTERNAL: "internal-error"}
VERBS = ("validate", "build", "axioms", "reconstruct", "recognize", "classify", "enumerate",
         "kuperberg", "universal", "survey")


@dataclass
class Outcome:
    """Result of one run: exit status, machine payload, human text."""

    status: int
    payload: dict
    text: str
    artifact: str | None = None  # written to --out when set


def report_render(outcome: Outcome, fmt: str = "text") -> str:
    """``json`` is the stable machine form (sorted keys); ``text`` is for people."""
    if fmt == "json":
        body = dict(outcome.payload)
        body["exit_code"] = outcome.status
        body["status"] = STATUS_NAMES[outcome.status]
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    return outcome.text.rstrip("\n") + "\n"


# argument helpers ---------------------------------------------------------------

def _split(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text.strip()) if t]


def _element_list(G: FiniteGroup, text: str) -> list[int]:
    return [G.index(tok) for tok in _split(text)]


def _subgroup(E: FiniteGroup, selector: str | None, what: str = "--sub"):
    """``stab:P,Q`` (permutation point stabilizer) or generating element labels."""
    if selector is None:
        raise InputError(f"{what} is required")
    if selector.startswith("stab:"):
        points = [int(p) for p in _split(selector[5:])]
        return subgroup(E, point_stabilizer_subgroup(E, points))
    return subgroup(E, closure(E, _element_list(E, selector)))


def _selector(args):
    sel = args.transversal
    if sel == "lowest":
        return ("lowest", None)
    if sel.startswith("random:"):
        try:
            return ("random", int(sel[7:]))
        except ValueError:
            raise InputError(f"bad seed in --transversal {sel!r}") from None
    if sel.startswith("file:"):
        return ("file", sel[5:])
    raise InputError(f"--transversal must be lowest, random:<seed> or file:<path>, not {sel!r}")


def _ambient_and_transversal(args):
    kind, val = _selector(args)
    if kind == "file":
        T = load_retraction(val)
        return T.ambient, T.subgroup, T
    if args.ambient is None:
        raise InputError("an ambient group is required unless --transversal file:<path> is given")
    E = load_group(args.ambient)
    H = _subgroup(E, args.sub)
    return E, H, right_transversal(E, H, seed=val)


def _host_name(G: FiniteGroup) -> str:
    return G.name or str(G.order)


def _tables(d: ExtendingDatum) -> dict:
    return {"star": d.star.tolist(), "ract": d.ract.tolist(), "lact": d.lact.tolist(),
            "cocycle": d.cocycle.tolist()}


def _flags_text(flags: dict) -> str:
    return " ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(flags.items()))


# verbs --------------------------------------------------------------------------

def _validate(args) -> Outcome:
    from .errors import InvalidGroup

    try:
        G = load_group(args.group)
    except InvalidGroup as exc:
        return Outcome(EXIT_NEGATIVE, {"verb": "validate", "group": args.group, "is_group": False,
                                       "report": exc.report.to_dict()},
                       f"not a group\n{exc.report.render()}")
    return Outcome(EXIT_OK, {"verb": "validate", "group": args.group, "is_group": True,
                             "order": G.order, "identity": G.identity,
                             "abelian": G.is_abelian(),
                             "order_spectrum": list(G.order_spectrum)},
                   f"group of order {G.order}, identity {G.label(G.identity)}\nOK (0 violations)")


def _build(args) -> Outcome:
    d = load_datum(args.datum)
    flags = recognize(d)
    H, m, n = d.host, d.m, d.n
    if args.kind == "unified":
        G = unified_product(d).group
    else:
        need = {"crossed": "is_crossed", "bicrossed": "is_bicrossed", "twisted": "is_twisted"}[args.kind]
        report = check_axioms(d)
        if not report.ok or not flags[need]:
            why = report.render() if not report.ok else f"datum is not {args.kind}: {_flags_text(flags)}"
            return Outcome(EXIT_NEGATIVE, {"verb": "build", "kind": args.kind, "built": False,
                                           "flags": flags, "axioms": report.to_dict()},
                           f"cannot build a {args.kind} product\n{why}")
        if args.kind == "crossed":
            S = FiniteGroup.from_table(d.star, 0)
            G = crossed_product(CrossedSystem(H, S, d.lact, d.cocycle))
        elif args.kind == "bicrossed":
            S = FiniteGroup.from_table(d.star, 0)
            G = bicrossed_product(MatchedPair(H, S, d.lact, d.ract))
        else:
            G = twisted_product(H, d.star, d.ract, d.cocycle)
    same = bool(np.array_equal(G.table, unified_product(d).group.table))
    text = serialize_group(G)
    lines = [f"{args.kind} product of order {G.order} on pair codes h*{m}+s "
             f"(identity code {G.identity})",
             f"table identical to the unified product: {'yes' if same else 'no'}"]
    if not args.out:
        lines.append(text.rstrip("\n"))
    return Outcome(EXIT_OK, {"verb": "build", "kind": args.kind, "built": True, "order": G.order,
                             "identity": G.identity, "host_order": n, "m": m,
                             "table": G.table.tolist(), "matches_unified": same},
                   "\n".join(lines), artifact=text)


def _axioms(args) -> Outcome:
    d = load_datum(args.datum)
    report = check_axioms(d)
    return Outcome(EXIT_OK if report.ok else EXIT_NEGATIVE,
                   {"verb": "axioms", "digest": d.digest(), "report": report.to_dict()},
                   report.render())


def _reconstruct(args) -> Outcome:
    E, H, T = _ambient_and_transversal(args)
    r = retraction_from_transversal(E, H, T)
    d = extract_datum(r)
    iso = phi_isomorphism(r, d)
    flags = recognize(d)
    payload = {
        "verb": "reconstruct", "ambient_order": E.order, "subgroup": list(H.members),
        "reps": [int(x) for x in T.reps], "fiber": [int(x) for x in r.fiber],
        "digest": d.digest(), "datum": _tables(d), "flags": flags,
        "axioms": check_axioms(d).to_dict(), "phi": iso.forward.tolist(),
        "phi_verified": True,
    }
    lines = [f"ambient order {E.order}, subgroup order {H.order}, carrier size {d.m}",
             "representatives: " + " ".join(E.label(x) for x in T.reps),
             f"axioms: {check_axioms(d).summary()}",
             "phi(h, s) = h s: verified bijective homomorphism",
             f"flags: {_flags_text(flags)}",
             f"digest: {d.digest()}"]
    if is_normal(E, H):
        cmp = schreier_vs_unified(E, H, T)
        payload["schreier"] = cmp.to_dict()
        lines.append(f"normal subgroup; crossed product comparison: "
                     f"{'agree' if cmp.agree else 'DISAGREE'}")
        if not cmp.agree:
            raise InternalInconsistency(f"crossed product comparison failed: {cmp.to_dict()}")
    text = serialize_datum(d)
    if not args.out:
        lines.append(text.rstrip("\n"))
    return Outcome(EXIT_OK, payload, "\n".join(lines), artifact=text)


def _recognize(args) -> Outcome:
    d = load_datum(args.datum)
    flags = recognize(d)
    report = check_axioms(d)
    return Outcome(EXIT_OK, {"verb": "recognize", "digest": d.digest(), "flags": flags,
                             "axioms_ok": report.ok},
                   f"{_flags_text(flags)}\naxioms: {report.summary()}")


def _load_items(paths: list[str]) -> list[ExtendingDatum]:
    out = []
    for p in paths:
        out.extend(read_summary(p) if p.endswith(".sum") else [load_datum(p)])
    return out


def _host_and_m(args, items):
    if args.host is not None:
        H = load_group(args.host)
    elif items:
        H = items[0].host
    else:
        raise InputError("--host is required when no items are given")
    if args.m is not None:
        m = args.m
    elif items:
        m = items[0].m
    else:
        raise InputError("--m is required when no items are given")
    return H, m


def _classify(args) -> Outcome:
    budget = args.budget or DEFAULT_BUDGET
    if args.mode in ("equiv", "cohomologous"):
        if len(args.items) != 2:
            raise InputError(f"classify {args.mode} takes exactly two .esd files")
        d1, d2 = (load_datum(p) for p in args.items)
        rel = equivalent if args.mode == "equiv" else cohomologous
        w = rel(d1, d2, budget)
        m, n = d1.m, d1.n
        space = {"v": 1 if args.mode == "cohomologous" else math.factorial(m - 1),
                 "r": n ** (m - 1)}
        payload = {"verb": "classify", "mode": args.mode, "related": w is not None,
                   "witness": None if w is None else w.to_dict(), "search_space": space}
        if w is None:
            return Outcome(EXIT_NEGATIVE, payload,
                           f"not {'equivalent' if args.mode == 'equiv' else 'cohomologous'}: "
                           f"exhausted {space['v']} maps v x {space['r']} maps r")
        return Outcome(EXIT_OK, payload,
                       f"related by r={' '.join(map(str, w.r))} v={' '.join(map(str, w.v))}")

    items = _load_items(args.items) if args.items else None
    H, m = _host_and_m(args, items)
    if args.mode == "k2":
        sets = [k2_classes(H, m, items, budget)]
    else:
        if items is None:
            items = list(enumerate_extending_data(EnumerationTask(H, m, budget=budget)))
        by_ract: dict[bytes, list[ExtendingDatum]] = {}
        for d in items:
            by_ract.setdefault(d.ract.tobytes(), []).append(d)
        sets = [h2_classes(H, m, group[0].ract, group, budget) for group in by_ract.values()]
    total = sum(len(s) for s in sets)
    cls_text = "".join(s.render() for s in sets)
    lines = [f"{total} classes"] + [
        f"{s.kind} host={_host_name(H)} m={m}: {len(s.items)} items, {len(s)} classes" for s in sets]
    if not args.out:
        lines.append(cls_text.rstrip("\n"))
    return Outcome(EXIT_OK, {"verb": "classify", "mode": args.mode, "host": _host_name(H), "m": m,
                             "class_count": total, "sets": [s.to_dict() for s in sets]},
                   "\n".join(lines), artifact=cls_text)


def _enumerate(args) -> Outcome:
    H = load_group(args.host) if args.host else None
    if H is None or args.m is None:
        raise InputError("enumerate needs --host and --m")
    budget = args.budget or 10**8
    if args.mode == "data":
        task = EnumerationTask(H, args.m, frozenset(args.filter or ()), budget, args.threads)
        print(f"naive space {task.naive_space}", file=sys.stderr)
        data = list(enumerate_extending_data(task))
        written = None
        if args.out:
            written = str(write_results(task, data, args.out))
        lines = [f"host {_host_name(H)} m={args.m}: naive space {task.naive_space}, "
                 f"{len(data)} valid data"]
        lines += [f"datum {i} {d.digest()} {_flags_text(recognize(d))}" for i, d in enumerate(data)]
        return Outcome(EXIT_OK, {"verb": "enumerate", "mode": "data", "host": _host_name(H),
                                 "m": args.m, "filters": sorted(task.filters),
                                 "naive_space": task.naive_space, "count": len(data),
                                 "digests": [d.digest() for d in data], "summary": written},
                       "\n".join(lines))
    if args.mode == "oracle":
        res = oracle_group_structures(H, H.order * args.m, budget)
        return Outcome(EXIT_OK, {"verb": "enumerate", "mode": "oracle", "host": _host_name(H),
                                 "m": args.m, "tables": len(res.tables),
                                 "class_count": res.class_count,
                                 "classes": [list(c) for c in res.classes]},
                       f"oracle: {len(res.tables)} group tables on {H.order * args.m} elements "
                       f"extending {_host_name(H)}, {res.class_count} classes")
    rep = cross_validate_structures(H, args.m, budget)
    d = rep.to_dict()
    return Outcome(EXIT_OK if rep.agree else EXIT_NEGATIVE,
                   {"verb": "enumerate", "mode": "crosscheck", **d},
                   f"{'agree' if rep.agree else 'DISAGREE'}: {rep.data_count} data, "
                   f"{rep.k2_classes} classes vs oracle {rep.oracle_classes} classes "
                   f"({rep.oracle_tables} tables)")


def _kuperberg(args) -> Outcome:
    E = load_group(args.ambient)
    H, S, T = (_subgroup(E, selector, flag) for selector, flag in
               ((args.h, "--h"), (args.s, "--s"), (args.t, "--t")))
    w = kuperberg_check(E, H, S, T)
    if w is None:
        return Outcome(EXIT_NEGATIVE, {"verb": "kuperberg", "witness": None},
                       "no witness: every unitary bijection v with s v(s)^-1 in H was tried")
    report = kuperberg_report(E, H, S, T, w)
    if not report.ok:
        raise InternalInconsistency(f"witness fails re-verification: {report.summary()}")
    return Outcome(EXIT_OK, {"verb": "kuperberg", "witness": w.to_dict(),
                             "reverification": report.to_dict()},
                   f"witness r={' '.join(map(str, w.r))} v={' '.join(map(str, w.v))}\n"
                   f"re-verification: {report.summary()}")


def _universal(args) -> Outcome:
    d = load_datum(args.datum)
    G = load_group(args.group)
    if args.u is None or args.v is None:
        raise InputError("--u and --v are required")
    if args.category == "C":
        u = tuple(_element_list(G, args.u))
        v = tuple(_element_list(G, args.v))
        res = verify_universal_C(d, UniversalCandidate(G, u, v), args.budget or 10**6)
    else:
        u = tuple(_element_list(d.host, args.u))
        v = tuple(int(x) for x in _split(args.v))
        if any(not 0 <= x < d.m for x in v):
            raise InputError(f"--v entries must lie in 0..{d.m - 1}")
        res = verify_universal_D(d, UniversalCandidate(G, u, v), args.budget or 10**6)
    return Outcome(EXIT_OK, {"verb": "universal", "category": args.category, **res.to_dict()},
                   f"induced homomorphism: {' '.join(map(str, res.map))}\n"
                   f"uniqueness: {res.uniqueness}"
                   + (f" ({res.commuting_homomorphisms} commuting homomorphism)"
                      if res.commuting_homomorphisms is not None else ""))


def _survey(args) -> Outcome:
    kind, val = _selector(args)
    if kind == "file":
        raise InputError("survey samples transversals itself; use lowest or random:<seed>")
    E = load_group(args.ambient)
    H = _subgroup(E, args.sub)
    if kind == "random":
        rep = survey_transversals(E, H, "random", args.samples, val)
    else:
        rep = survey_transversals(E, H, "all")
    d = rep.to_dict()
    lines = [f"{k}: {d[k]}" for k in sorted(d)]
    status = EXIT_OK if rep.axioms_pass == rep.samples else EXIT_INTERNAL
    return Outcome(status, {"verb": "survey", **d}, "\n".join(lines))


# parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the produced file (.grp, .esd, .cls, or a directory)")
    common.add_argument("--budget", type=int, help="node limit for bounded searches")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--transversal", default="lowest",
                        help="lowest | random:<seed> | file:<path.ret>")

    p = _Parser(prog="unified-products", description="Unified products of finite groups.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a group table")
    s.add_argument("group", help=".grp path or built-in name")

    s = sub.add_parser("build", parents=[common], help="product group of an extending datum")
    s.add_argument("kind", choices=("unified", "crossed", "bicrossed", "twisted"))
    s.add_argument("datum")

    s = sub.add_parser("axioms", parents=[common], help="check ES1..ES7 with witnesses")
    s.add_argument("datum")

    s = sub.add_parser("reconstruct", parents=[common], help="datum from a group and a subgroup")
    s.add_argument("ambient", nargs="?")
    s.add_argument("--sub", help="generators (labels) or stab:<points>")

    s = sub.add_parser("recognize", parents=[common], help="special-case flags")
    s.add_argument("datum")

    s = sub.add_parser("classify", parents=[common], help="equivalence classes of data")
    s.add_argument("mode", choices=("k2", "h2", "equiv", "cohomologous"))
    s.add_argument("items", nargs="*", help=".esd or .sum files")
    s.add_argument("--host")
    s.add_argument("--m", type=int)

    s = sub.add_parser("enumerate", parents=[common], help="exhaustive enumeration")
    s.add_argument("mode", nargs="?", default="data", choices=("data", "oracle", "crosscheck"))
    s.add_argument("--host")
    s.add_argument("--m", type=int)
    s.add_argument("--filter", action="append", choices=FILTERS)

    s = sub.add_parser("kuperberg", parents=[common], help="compare two exact factorizations")
    s.add_argument("ambient")
    s.add_argument("--h", required=True)
    s.add_argument("--s", required=True)
    s.add_argument("--t", required=True)

    s = sub.add_parser("universal", parents=[common], help="check a universal-property candidate")
    s.add_argument("category", choices=("C", "D"))
    s.add_argument("datum")
    s.add_argument("--group", required=True)
    s.add_argument("--u")
    s.add_argument("--v")

    s = sub.add_parser("survey", parents=[common], help="statistics over transversals")
    s.add_argument("ambient")
    s.add_argument("--sub")
    s.add_argument("--samples", type=int, default=100)
    return p


_HANDLERS = {"validate": _validate, "build": _build, "axioms": _axioms,
             "reconstruct": _reconstruct, "recognize": _recognize, "classify": _classify,
             "enumerate": _enumerate, "kuperberg": _kuperberg, "universal": _universal,
             "survey": _survey}


def _error_outcome(verb, exc: Exception, status: int) -> Outcome:
    code = getattr(exc, "code", "internal-error")
    payload = {"verb": verb, "error": {"code": code, "message": str(exc)}}
    lines = [f"error [{code}]: {exc}"]
    report = getattr(exc, "report", None)
    if report is not None:
        payload["report"] = report.to_dict()
        lines.append(report.render())
    if isinstance(exc, BudgetExhausted):
        payload["explored"] = exc.explored
        payload["checkpoint"] = exc.checkpoint
    return Outcome(status, payload, "\n".join(lines))


def execute(argv: list[str]) -> tuple[Outcome, str]:
    """Parse and dispatch; returns the outcome and the chosen format."""
    fmt = "json" if "--format=json" in argv or _after(argv, "--format") == "json" else "text"
    verb = next((a for a in argv if a in VERBS), None)
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        if args.budget is not None and args.budget < 1:
            raise InputError("--budget must be positive")
        outcome = _HANDLERS[args.verb](args)
        if outcome.artifact is not None and args.out:
            Path(args.out).write_text(outcome.artifact, encoding="utf-8")
    except Violation as exc:
        outcome = _error_outcome(verb, exc, EXIT_NEGATIVE)
    except BudgetExhausted as exc:
        outcome = _error_outcome(verb, exc, EXIT_BUDGET)
    except InputError as exc:
        outcome = _error_outcome(verb, exc, EXIT_INPUT)
    except OSError as exc:
        outcome = _error_outcome(verb, exc, EXIT_INPUT)
    except UnifiedProductsError as exc:
        outcome = _error_outcome(verb, exc, exc.exit_status)
    except Exception as exc:  # noqa: BLE001 - any other failure is a bug
        traceback.print_exc(file=sys.stderr)
        outcome = _error_outcome(verb, exc, EXIT_INTERNAL)
    return outcome, fmt


def _after(argv, flag):
    try:
        return argv[argv.index(flag) + 1]
    except (ValueError, IndexError):
        return None


def run(argv: list[str] | None = None) -> int:
    """Run one command, print its report to stdout, return the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    outcome, fmt = execute(argv)
    sys.stdout.write(report_render(outcome, fmt))
    return outcome.status


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))
