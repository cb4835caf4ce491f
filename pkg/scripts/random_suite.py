"""Compare the solver against brute-force enumeration on seeded random games.

    python3 scripts/random_suite.py --games 200 --max-n 8 --max-weight 6
"""

import argparse
import random
import time
from collections import Counter

from nucleo.enumeration import brute_stages
from nucleo.instances import random_game
from nucleo.solver import NucleolusSolver, SolverConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--games", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--max-weight", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--debug", action="store_true", help="cross-check boundary oracle calls")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    mismatches = 0
    stage_hist = Counter()
    kinds = Counter()
    t_solver = t_brute = 0.0
    for k in range(args.games):
        g = random_game(rng, args.max_n, args.max_weight)
        start = time.perf_counter()
        solver = NucleolusSolver(g, SolverConfig(debug=args.debug, record_verdicts=True))
        eta, hist = solver.run()
        t_solver += time.perf_counter() - start
        start = time.perf_counter()
        ref = brute_stages(g)
        t_brute += time.perf_counter() - start
        stage_hist[len(hist)] += 1
        kinds.update(v.verdict.kind for v in solver.verdicts)
        same = (
            tuple(eta) == tuple(ref[-1].point)
            and [r.epsilon for r in hist] == [s.epsilon for s in ref]
            and [r.tight_count for r in hist] == [len(s.tight) for s in ref]
        )
        if not same:
            mismatches += 1
            print(f"mismatch on game {k}: {g}")
    print(f"games: {args.games}, mismatches: {mismatches}")
    print(f"solver {t_solver:.2f}s, enumeration {t_brute:.2f}s")
    print("stages per game:", dict(sorted(stage_hist.items())))
    print("violated verdicts by kind:", dict(kinds))


if __name__ == "__main__":
    main()
