"""Run every metatheory check over both fragments and print a summary table."""
import argparse
import time

from linctx.generate import GenConfig
from linctx.metatheory import Bounds, check_names, run_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--fuel", type=int, default=500)
    ap.add_argument("--only", nargs="*", help="subset of checks")
    args = ap.parse_args()
    bounds = Bounds(fuel=args.fuel, depth=args.depth, exhaustive_size=args.max_size)
    names = args.only or check_names()
    print(f"{'fragment':8} {'check':28} {'checked':>8} {'fail':>5} {'incompl':>8} {'secs':>7}")
    for frag in ("LPCF", "NLPCF"):
        cfg = GenConfig(seed=args.seed, count=args.count, fragment=frag)
        for name in names:
            t0 = time.perf_counter()
            rep = run_check(name, cfg, bounds)
            print(f"{frag:8} {name:28} {rep.checked:8} {len(rep.failures):5} {rep.incomplete:8} "
                  f"{time.perf_counter() - t0:7.2f}", flush=True)
            for f in rep.failures[:3]:
                print("    ", f.input, "| expected", f.expected, "| got", f.observed)


if __name__ == "__main__":
    main()
