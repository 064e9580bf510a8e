"""Command-line front end.

Every command writes line-delimited JSON records to stdout (``--pretty``
switches to a short human format).  Exit codes: 0 success or equivalent,
1 inequivalent or failed check, 2 usage, parse or type error, 3 a verdict
affected by fuel or depth truncation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .contexts import ContextStep, Interaction, LinearContext, ProgramStep, classify_lcr, synthesize_s_context
from .errors import LinctxError, ParseError, TypeCheckError, UnclassifiableReduction
from .generate import GenConfig
from .grammar import parse_term, parse_trace, parse_type, print_term, print_trace, print_type
from .lts import EquivKind, TraceEngine, trace_equiv
from .metatheory import Bounds, check_names, run_check
from .pool import ArgumentPool, parse_pool
from .reduction import evaluate
from .typecheck import check_linear_context, check_program

HOLE = "HOLE"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    fuel: int = 1000
    depth: int = 5
    pool_file: Optional[str] = None
    pool_size: int = 2
    seed: int = 0
    count: int = 500
    fragment: str = "NLPCF"

    def __post_init__(self):
        for name in ("fuel", "depth", "pool_size", "count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    def pool(self) -> ArgumentPool:
        if self.pool_file is None:
            return ArgumentPool(self.pool_size)
        return parse_pool(_read(self.pool_file), self.pool_size)


class _Out:
    def __init__(self, pretty: bool):
        self.pretty = pretty

    def emit(self, record: dict):
        if self.pretty:
            print("  ".join(f"{k}: {_pretty(v)}" for k, v in record.items()))
        else:
            print(json.dumps(record, ensure_ascii=False, sort_keys=False))


def _pretty(v) -> str:
    if isinstance(v, list):
        return "{" + ", ".join(_pretty(x) for x in v) + "}"
    return str(v)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _with_file(err: ParseError, path: str) -> ParseError:
    new = ParseError(f"{path}: {err}")
    new.line, new.column = err.line, err.column
    return new


def _load_term(path: str):
    try:
        return parse_term(_read(path))
    except ParseError as err:
        raise _with_file(err, path) from None


def _load_program(path: str):
    e = _load_term(path)
    try:
        return e, check_program(e)
    except TypeCheckError as err:
        raise type(err)(f"{path}: {err}") from None


def _load_context(path: str, holetype) -> LinearContext:
    body = _load_term(path)
    try:
        result = check_linear_context(body, HOLE, holetype)
    except TypeCheckError as err:
        raise type(err)(f"{path}: {err}") from None
    return LinearContext(body, HOLE, holetype, result)


def _sorted_terms(terms) -> List[str]:
    return sorted(print_term(t) for t in terms)


# ---------------------------------------------------------------- commands

def cmd_typecheck(args, cfg: RunConfig, out: _Out) -> int:
    e, ty = _load_program(args.file)
    out.emit({"command": "typecheck", "file": args.file, "type": print_type(ty)})
    return EXIT_OK


def cmd_eval(args, cfg: RunConfig, out: _Out) -> int:
    e, ty = _load_program(args.file)
    res = evaluate(e, cfg.fuel)
    incomplete = res.timed_out and not res.cycle_detected
    out.emit({"command": "eval", "file": args.file, "type": print_type(ty),
              "outcomes": _sorted_terms(res.values), "timed_out": res.timed_out,
              "cycle_detected": res.cycle_detected, "steps": res.steps_used})
    return EXIT_INCOMPLETE if incomplete else EXIT_OK


def cmd_traces(args, cfg: RunConfig, out: _Out) -> int:
    e, ty = _load_program(args.file)
    ts = TraceEngine(cfg.pool(), cfg.fuel).traces(e, cfg.depth, ty)
    from .lts import _trace_order
    for s in sorted(ts.traces, key=_trace_order):
        out.emit({"trace": print_trace(s), "length": len(s)})
    out.emit({"command": "traces", "file": args.file, "count": len(ts.traces),
              "complete": ts.complete,
              "truncated_after": sorted(print_trace(s) for s in ts.truncated)})
    return EXIT_OK if ts.complete else EXIT_INCOMPLETE


def cmd_equiv(args, cfg: RunConfig, out: _Out) -> int:
    e1, _ = _load_program(args.file1)
    e2, _ = _load_program(args.file2)
    v = trace_equiv(e1, e2, cfg.depth, cfg.pool(), cfg.fuel)
    rec = {"command": "equiv", "files": [args.file1, args.file2], "verdict": v.kind.value,
           "forward": v.forward.kind.value, "backward": v.backward.kind.value}
    cx = v.counterexample
    if cx is not None:
        rec["counterexample"] = {"direction": cx[0], "trace": print_trace(cx[1])}
    out.emit(rec)
    return {EquivKind.Equivalent: EXIT_OK, EquivKind.Inequivalent: EXIT_FAIL,
            EquivKind.Incomplete: EXIT_INCOMPLETE}[v.kind]


def _show_context(c) -> str:
    if isinstance(c, LinearContext):
        return f"{print_term(c.body)} [hole {c.hole} : {print_type(c.holetype)}]"
    return print_term(c)


def cmd_lcr(args, cfg: RunConfig, out: _Out) -> int:
    holetype = parse_type(args.hole_type)
    c = _load_context(args.context, holetype)
    e, ty = _load_program(args.program)
    if ty != holetype:
        raise TypeCheckError(f"{args.program}: program has type {print_type(ty)}, "
                             f"hole expects {print_type(holetype)}")
    try:
        forms = classify_lcr(c, e)
    except UnclassifiableReduction as err:
        out.emit({"command": "lcr", "error": "UnclassifiableReduction", "message": str(err)})
        return EXIT_FAIL
    for f in forms:
        rec = {"successor": print_term(f.successor), "rule": f.tag}
        if isinstance(f, ContextStep):
            rec.update(form="context-step", next_context=_show_context(f.next))
        elif isinstance(f, ProgramStep):
            rec.update(form="program-step", next_program=print_term(f.next_program))
        elif isinstance(f, Interaction):
            rec.update(form="interaction", action=print_trace((f.action,)),
                       next_context=_show_context(f.next_context),
                       next_program=print_term(f.next_program), absorbed=f.absorbed)
        out.emit(rec)
    out.emit({"command": "lcr", "successors": len(forms)})
    return EXIT_OK


def cmd_scontext(args, cfg: RunConfig, out: _Out) -> int:
    holetype = parse_type(args.hole_type)
    try:
        s = parse_trace(_read(args.trace).strip())
    except ParseError as err:
        raise _with_file(err, args.trace) from None
    c = synthesize_s_context(s, holetype, hole=HOLE)
    out.emit({"command": "scontext", "trace": print_trace(s), "context": print_term(c.body),
              "hole": HOLE, "hole_type": print_type(holetype), "result_type": print_type(c.result)})
    return EXIT_OK


def cmd_check(args, cfg: RunConfig, out: _Out) -> int:
    gcfg = GenConfig(seed=cfg.seed, count=cfg.count, fragment=cfg.fragment)
    bounds = Bounds(fuel=cfg.fuel, depth=min(cfg.depth, args.trace_depth), pool_size=cfg.pool_size,
                    exhaustive_size=args.max_size)
    rep = run_check(args.name, gcfg, bounds)
    rec = rep.to_dict()
    rec["failures"] = rec["failures"][:20]
    rec = {"command": "check", **rec}
    out.emit(rec)
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=1000, help="internal reduction bound")
    common.add_argument("--depth", type=int, default=5, help="trace depth bound")
    common.add_argument("--pool", dest="pool_file", help="argument pool file")
    common.add_argument("--pool-size", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=500)
    common.add_argument("--fragment", choices=("LPCF", "NLPCF"), default="NLPCF")
    common.add_argument("--pretty", action="store_true", help="human-readable output")

    p = argparse.ArgumentParser(prog="linctx", description="Linear PCF toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("typecheck", parents=[common])
    s.add_argument("file")
    s = sub.add_parser("eval", parents=[common])
    s.add_argument("file")
    s = sub.add_parser("traces", parents=[common])
    s.add_argument("file")
    s = sub.add_parser("equiv", parents=[common])
    s.add_argument("file1")
    s.add_argument("file2")
    s = sub.add_parser("lcr", parents=[common])
    s.add_argument("context")
    s.add_argument("program")
    s.add_argument("--hole-type", required=True)
    s = sub.add_parser("scontext", parents=[common])
    s.add_argument("--trace", required=True, help="file holding one trace")
    s.add_argument("--hole-type", required=True)
    s = sub.add_parser("check", parents=[common])
    s.add_argument("name", help="one of: " + ", ".join(check_names()))
    s.add_argument("--max-size", type=int, default=5, help="exhaustive sweep size")
    s.add_argument("--trace-depth", type=int, default=4)
    return p


COMMANDS = {"typecheck": cmd_typecheck, "eval": cmd_eval, "traces": cmd_traces,
            "equiv": cmd_equiv, "lcr": cmd_lcr, "scontext": cmd_scontext, "check": cmd_check}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = _Out(args.pretty)
    seed = int(os.environ["LINCTX_SEED"]) if os.environ.get("LINCTX_SEED") else args.seed
    try:
        cfg = RunConfig(args.fuel, args.depth, args.pool_file, args.pool_size, seed,
                        args.count, args.fragment)
        return COMMANDS[args.command](args, cfg, out)
    except (LinctxError, ValueError, OSError) as err:
        rec = {"error": type(err).__name__, "message": str(err)}
        if isinstance(err, ParseError) and err.line is not None:
            rec.update(line=err.line, column=err.column)
        out.emit(rec)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
