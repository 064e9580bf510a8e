"""Reproduce the worked example: f1 and f2 are trace equivalent, yet a
non-linear context tells them apart."""
from pathlib import Path

from linctx.grammar import parse_term, print_term, print_trace
from linctx.lts import TraceEngine, _trace_order, trace_equiv
from linctx.pool import ArgumentPool
from linctx.reduction import evaluate
from linctx.typecheck import check_program

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def main():
    f1 = parse_term((PROGRAMS / "f1.lpcf").read_text())
    f2 = parse_term((PROGRAMS / "f2.lpcf").read_text())
    pool = ArgumentPool(1)
    engine = TraceEngine(pool, 100)
    for name, e in (("f1", f1), ("f2", f2)):
        ts = engine.traces(e, 5, check_program(e))
        print(f"{name}: {print_term(e)}")
        for s in sorted(ts.traces, key=_trace_order):
            print("   ", print_trace(s))
    v = trace_equiv(f1, f2, 5, pool, 100)
    print("verdict:", v.kind.value)
    for name in ("distinguisher_f1", "distinguisher_f2"):
        out = evaluate(parse_term((PROGRAMS / f"{name}.lpcf").read_text()), fuel=200)
        print(f"{name}: {sorted(print_term(t) for t in out.values)}")


if __name__ == "__main__":
    main()
