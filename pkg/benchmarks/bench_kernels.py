"""Compare the numba kernels with the pure-Python fallback.

Each backend runs in its own interpreter, because the choice is fixed at import
time by GEOSHOOT_DISABLE_NUMBA.  Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOAD = r"""
import json, sys, time
from geoshoot import SolverConfig, backend, builtin, exp_map_with_jacobian, integrate_reference, solve

repeat = int(sys.argv[1])
hp = builtin("half-plane")
sphere = builtin("sphere-chart")

def best_of(fn):
    fn()  # warm-up, includes JIT compile or cache load
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

results = {
    "backend": backend(),
    "rk4 10^4 steps": best_of(lambda: integrate_reference(hp, (0.5, 0.5), (0.05, 0.1), 1.0, 10_000)),
    "dual recurrence n=7": best_of(lambda: exp_map_with_jacobian(sphere, (0.5, 0.5), (-0.5, 0.1), 7)),
    "solve sphere row": best_of(lambda: solve(sphere, (0.5, 0.5), (-1 / 3, 2 / 3), SolverConfig(verify=False))),
}
print(json.dumps(results))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, GEOSHOOT_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(repeat)], env=env, check=True, capture_output=True, text=True
    ).stdout
    return json.loads(out.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'workload':<22} {fast['backend']:>12} {slow['backend']:>12} {'speed-up':>9}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<22} {fast[key]:>11.4f}s {slow[key]:>11.4f}s {slow[key] / fast[key]:>8.1f}x")
    print(f"(total wall time {time.perf_counter() - t0:.1f}s, best of {args.repeat})")


if __name__ == "__main__":
    main()
