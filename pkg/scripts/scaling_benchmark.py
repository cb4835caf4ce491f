"""Wall time of the exact nucleolus solver as n and the maximum weight grow.

    python3 scripts/scaling_benchmark.py --points 10,10 20,20 30,30 --repeats 5
"""

import argparse
import math
import random
import statistics
import time

from nucleo.instances import scaling_game
from nucleo.solver import NucleolusSolver


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", nargs="+", default=["10,10", "20,20", "30,30"], help="n,W pairs")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7007)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = []
    print(f"{'n':>4} {'W':>4} {'median s':>9} {'max s':>8} {'stages':>7} {'cuts':>6} {'oracle':>7}")
    for point in args.points:
        n, w = (int(v) for v in point.split(","))
        times, stages, cuts, calls = [], [], [], []
        for _ in range(args.repeats):
            solver = NucleolusSolver(scaling_game(rng, n, w))
            start = time.perf_counter()
            _, hist = solver.run()
            times.append(time.perf_counter() - start)
            stages.append(len(hist))
            cuts.append(max(r.cuts for r in hist))
            calls.append(sum(r.oracle_calls for r in hist))
        med = statistics.median(times)
        rows.append((n * w, med))
        print(
            f"{n:>4} {w:>4} {med:>9.3f} {max(times):>8.3f} {statistics.median(stages):>7} "
            f"{statistics.median(cuts):>6} {statistics.median(calls):>7}"
        )
    if len(rows) > 1:
        fit = statistics.linear_regression([math.log(a) for a, _ in rows], [math.log(t) for _, t in rows])
        print(f"log-log slope of median time against n*W: {fit.slope:.2f}")


if __name__ == "__main__":
    main()
