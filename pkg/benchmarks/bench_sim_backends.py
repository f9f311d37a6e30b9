#!/usr/bin/env python3
"""Compare the Monte Carlo trial-loop backends (numba kernel vs pure Python)
and confirm they produce bit-identical results.

Usage: python3 benchmarks/bench_sim_backends.py [trials]
"""

import os
import sys
import time

from urnsolitaire.montecarlo import SimConfig, simulate
from urnsolitaire.urnproc import UrnState


def timed(backend, config):
    os.environ["URNSOLITAIRE_BACKEND"] = backend
    simulate(SimConfig(config.start, config.variant, 10, config.seed))  # warm up
    t0 = time.perf_counter()
    stats = simulate(config)
    return time.perf_counter() - t0, stats


def main():
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500_000
    for m, n, variant in [(3, 3, "returning"), (10, 10, "returning"),
                          (10, 10, "simple")]:
        config = SimConfig(UrnState(m, n), variant=variant, trials=trials,
                           seed=42)
        t_py, s_py = timed("python", config)
        try:
            t_nb, s_nb = timed("numba", config)
        except ImportError:
            print(f"({m},{n}) {variant}: python {t_py:.2f}s; numba unavailable")
            continue
        tag = "identical" if s_py == s_nb else "MISMATCH"
        print(f"({m},{n}) {variant}: python {t_py:.2f}s, numba {t_nb:.2f}s, "
              f"speedup {t_py / t_nb:.0f}x, results {tag}")


if __name__ == "__main__":
    main()
