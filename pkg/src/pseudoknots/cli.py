"""Command-line front end.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_mod
from .bounds import all_bounds
from .diagram import ParseError, canonical_text, carrier_genus, parse_gauss, serialize
from .invariants import intersection_indices, odd_set, summary
from .numbers import NumberContext, characteristic_report, cl_vir_bounds
from .oracle import Budget, Oracle

ENV = {"max_crossings": "PSEUDOKNOTS_MAX_CROSSINGS", "max_states": "PSEUDOKNOTS_MAX_STATES",
       "exact_limit": "PSEUDOKNOTS_EXACT_LIMIT"}


class UsageError(Exception):
    pass


def read_diagram(arg: str):
    """A Gauss code, or ``@path`` to a file holding one."""
    text = arg
    if arg.startswith("@"):
        path = arg[1:]
        try:
            with open(path) as fh:
                raw = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        lines = [ln.strip() for ln in raw.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines:
            raise UsageError(f"{path} holds no diagram")
        text = lines[0].partition("=")[2].strip() if "=" in lines[0] else lines[0]
    return parse_gauss(text)


def _budget(args) -> Budget:
    return Budget(max_crossings=args.max_crossings, max_states=args.max_states)


def _emit(args, obj: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(obj))
    else:
        print("\n".join(lines))


def cmd_parse(args) -> int:
    d = read_diagram(args.diagram)
    print(canonical_text(d) if args.canonical else serialize(d))
    return 0


def cmd_invariants(args) -> int:
    d = read_diagram(args.diagram)
    ind = intersection_indices(d)
    obj = {"n": d.n, "carrier_genus": carrier_genus(d), "odd": sorted(c + 1 for c in odd_set(d)),
           "ind": list(ind)}
    if d.is_resolved:
        values = summary(d)
        values["odd"] = [c + 1 for c in values["odd"]]
        obj.update(values)
    lines = [f"{k} = {v}" for k, v in obj.items()]
    _emit(args, obj, lines)
    return 0


def cmd_numbers(args) -> int:
    d = read_diagram(args.diagram)
    ctx = NumberContext(d, Oracle(_budget(args)), args.exact_limit)
    report = characteristic_report(d, ctx)
    cl_b, vir_b = cl_vir_bounds(d)
    obj = {"diagram": serialize(d, keep_labels=True), "report": report.to_json(d.labels),
           "bounds": {"cl": cl_b.to_json(), "vir": vir_b.to_json()}}
    lines = [f"{k} = {v}" for k, v in report.summary().items()]
    lines.append(f"cl >= {cl_b.lower}; vir <= {'inf' if vir_b.upper is None else vir_b.upper}")
    _emit(args, obj, lines)
    return 0


def cmd_bounds(args) -> int:
    d = read_diagram(args.diagram)
    if not d.is_resolved:
        raise UsageError("bounds need every crossing resolved")
    reports = all_bounds(d, Oracle(_budget(args)))
    obj = {"diagram": serialize(d), "bounds": [r.to_json() for r in reports]}
    lines = [f"{r.quantity} <= {r.upper}  [{r.tag}]  verified={r.verified}" for r in reports]
    _emit(args, obj, lines)
    return 0


def _config(args) -> census_mod.CensusConfig:
    return census_mod.CensusConfig(max_n=args.max_n, canonical=args.canonical, realizable=args.realizable,
                                   connected=args.connected, budget=_budget(args),
                                   exact_limit=args.exact_limit, workers=args.workers)


def cmd_census(args) -> int:
    if args.max_n > 8:
        raise UsageError(f"--max-n {args.max_n} exceeds the enumeration limit 8")
    cfg = _config(args)
    to_stdout = args.output == "-"
    done = census_mod.completed_codes(args.output) if args.resume and not to_stdout else []
    if to_stdout:
        sink = sys.stdout
    else:
        if done:
            _truncate_to_complete(args.output, len(done))
        sink = open(args.output, "a" if done else "w")
    try:
        for line in census_mod.run_census(cfg, done):
            sink.write(line + "\n")
            sink.flush()
    finally:
        if not to_stdout:
            sink.close()
    return 0


def _truncate_to_complete(path: str, keep: int) -> None:
    """Drop a torn last line left by an interrupted run."""
    with open(path) as fh:
        lines = fh.readlines()[:keep]
    with open(path, "w") as fh:
        fh.writelines(ln if ln.endswith("\n") else ln + "\n" for ln in lines)


def cmd_verify(args) -> int:
    try:
        records = census_mod.read_census(args.census)
    except OSError as exc:
        raise UsageError(f"cannot read {args.census}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.census} is not a census file: {exc}") from None
    cfg = _config(args)
    result = census_mod.verify_records(records, cfg)
    width = max((len(k) for k in result.table), default=5)
    print(f"{'check':<{width}}  pass  fail")
    for name, (good, bad) in result.table.items():
        print(f"{name:<{width}}  {good:>4}  {bad:>4}  {'PASS' if not bad else 'FAIL'}")
    print(f"{len(records)} records")
    if not result.ok:
        code, name = result.first_failure
        print(f"first failure: {name} on {code}")
        return 1
    return 0


def _env_int(name: str, default):
    value = os.environ.get(ENV[name])
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{ENV[name]} must be an integer, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--max-crossings", type=int, default=None,
                        help="crossing cap for move search (default: crossings + 2)")
    budget.add_argument("--max-states", type=int, default=None, help="states per search (default 200000)")
    budget.add_argument("--exact-limit", type=int, default=None,
                        help="most precrossings for exhaustive numbers (default 14)")
    budget.add_argument("--json", action="store_true", help="print one JSON object")

    p = argparse.ArgumentParser(prog="pseudoknots", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, func, helptext in (("parse", cmd_parse, "print the diagram in canonical text"),
                                 ("invariants", cmd_invariants, "v2, J, p_t, Seifert data and f"),
                                 ("numbers", cmd_numbers, "tr, kn, cl, vir, virtr and ubtr"),
                                 ("bounds", cmd_bounds, "unknotting, virtual unknotting and genus bounds")):
        sp = sub.add_parser(name, parents=[budget], help=helptext)
        sp.add_argument("diagram", help="Gauss code such as O1+U2+O3+U1+O2+U3+, or @file")
        sp.set_defaults(func=func)
        if name == "parse":
            sp.add_argument("--as-given", dest="canonical", action="store_false",
                            help="keep the basepoint instead of printing the canonical form")

    sp = sub.add_parser("census", parents=[budget], help="enumerate shadows and write one record per line")
    _census_flags(sp)
    sp.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    sp.add_argument("--resume", action="store_true", help="skip canonical codes already in the output")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify", parents=[budget], help="recompute a census file and check every theorem")
    sp.add_argument("census", help="census file written by the census command")
    _census_flags(sp, need_n=False)
    sp.set_defaults(func=cmd_verify)
    return p


def _census_flags(sp, need_n: bool = True) -> None:
    sp.add_argument("--max-n", type=int, required=need_n, default=8, help="largest chord count")
    sp.add_argument("--canonical", action=argparse.BooleanOptionalAction, default=True,
                    help="one shadow per rotation and reflection class")
    sp.add_argument("--realizable", action="store_true", help="only classically realizable shadows")
    sp.add_argument("--connected", action="store_true", help="only connected interlacement graphs")
    sp.add_argument("--workers", type=int, default=1)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.max_crossings = args.max_crossings if args.max_crossings is not None else _env_int("max_crossings", None)
        args.max_states = args.max_states if args.max_states is not None else _env_int("max_states", 200_000)
        args.exact_limit = args.exact_limit if args.exact_limit is not None else _env_int("exact_limit", 14)
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
