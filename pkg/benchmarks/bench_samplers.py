"""Throughput comparison of the numba and pure-numpy sampling backends.

Run without arguments to benchmark both backends (each in a fresh
subprocess, since the backend is chosen at import time via the
``COMPSTRUCT_NO_NUMBA`` environment variable) and print a side-by-side
table.  Run with ``--backend current`` to benchmark only the backend the
current environment selects.
"""

import argparse
import json
import os
import subprocess
import sys
import time
from fractions import Fraction as F


def bench_current(n, draws, repeats):
    import numpy as np

    from compstruct._kernels import backend_name
    from compstruct.laws import two_param_stationary_pair
    from compstruct.stochastic import (RngStream, batch_arrangements,
                                       batch_ewens_strings,
                                       batch_markov_compositions,
                                       batch_poisson_construction,
                                       batch_renewal_strings,
                                       batch_uniform_construction,
                                       sample_partition_batch)

    pair = two_param_stationary_pair(F(1, 2), 1)
    parts = sample_partition_batch(F(1, 2), F(1, 2), n, draws, RngStream(1))

    kernels = {
        "ewens-string": lambda s: batch_ewens_strings(1.0, n, draws, s),
        "renewal-string": lambda s: batch_renewal_strings(0.5, n, draws, s),
        "markov-chain": lambda s: batch_markov_compositions(pair, n, draws, s),
        "uniform-set": lambda s: batch_uniform_construction(1.0, n, draws, s),
        "poisson-set": lambda s: batch_poisson_construction(1.0, n, draws, s),
        "arrangement": lambda s: batch_arrangements(parts, n, 0.5, 0.5, s),
    }
    results = {}
    for name, fn in kernels.items():
        fn(RngStream(0))  # warmup (and JIT compile under numba)
        best = min(_timed(fn, RngStream(i + 1)) for i in range(repeats))
        results[name] = draws / best
    return backend_name(), results


def _timed(fn, stream):
    t0 = time.perf_counter()
    fn(stream)
    return time.perf_counter() - t0


def _run_subprocess(no_numba, args):
    env = dict(os.environ, COMPSTRUCT_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run(
        [sys.executable, __file__, "--backend", "current", "--json",
         "--n", str(args.n), "--draws", str(args.draws),
         "--repeats", str(args.repeats)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--backend", choices=("both", "current"), default="both")
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--draws", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    if args.backend == "current":
        name, results = bench_current(args.n, args.draws, args.repeats)
        if args.json:
            print(json.dumps({"backend": name, "rates": results}))
        else:
            print(f"backend: {name}  (n={args.n}, draws={args.draws})")
            for k, v in results.items():
                print(f"  {k:16s} {v:12.0f} draws/s")
        return

    fast = _run_subprocess(False, args)
    slow = _run_subprocess(True, args)
    print(f"n={args.n}, draws={args.draws}, best of {args.repeats}")
    print(f"{'kernel':16s} {fast['backend']:>12s} {slow['backend']:>12s} {'speedup':>8s}")
    for k in fast["rates"]:
        a, b = fast["rates"][k], slow["rates"][k]
        print(f"{k:16s} {a:12.0f} {b:12.0f} {a / b:7.1f}x")


if __name__ == "__main__":
    main()
