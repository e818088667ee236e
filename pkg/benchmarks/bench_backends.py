"""Compare the compiled stepping kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_backends.py [--steps N] [--repeat R]

Times simulate_tree on the shipped double pendulum and simulate_points on a
small gravitating cluster, prints per-step costs and the speedup. Exits with
a note instead of failing when the extension is not built.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from screwmech import _kernels_py
from screwmech.engine import pack_tree_state, tree_arrays
from screwmech.model import load_model

MODELS = os.path.join(os.path.dirname(__file__), "..", "models")


def tree_case(model_path):
    m = load_model(model_path)
    y0 = pack_tree_state(m.tree, m.state0)
    args = tree_arrays(m.tree) + (m.gravity, m.wrench_times, m.wrench_values)
    return y0, args


def points_case(n=8, seed=4):
    rng = np.random.default_rng(seed)
    y0 = np.concatenate([rng.uniform(-2, 2, 3 * n), rng.uniform(-0.5, 0.5, 3 * n)])
    args = (
        rng.uniform(0.5, 2.0, n),
        np.zeros(n),
        np.zeros((n, 3)),
        1.0,
        np.zeros(3),
        np.zeros((n, 3)),
    )
    return y0, args


def run(fn, y0, steps, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(y0, 0.0, 1e-3, steps, steps, *args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ns = ap.parse_args()

    try:
        from screwmech import _kernels as _kernels_c
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return 0

    ty0, targs = tree_case(os.path.join(MODELS, "double_pendulum.json"))
    py0, pargs = points_case()

    rows = []
    for name, y0, args, pyfn, cfn in (
        ("tree (double pendulum, k=2)", ty0, targs, _kernels_py.simulate_tree, _kernels_c.simulate_tree),
        ("points (n=8 cluster)", py0, pargs, _kernels_py.simulate_points, _kernels_c.simulate_points),
    ):
        tp = run(pyfn, y0, ns.steps, args, ns.repeat)
        tc = run(cfn, y0, ns.steps, args, ns.repeat)
        rows.append((name, tp, tc))

    print(f"{ns.steps} RK4 steps, best of {ns.repeat}:")
    for name, tp, tc in rows:
        print(
            f"  {name:30s} python {tp * 1e3:8.1f} ms ({tp / ns.steps * 1e6:7.2f} us/step)   "
            f"compiled {tc * 1e3:7.1f} ms ({tc / ns.steps * 1e6:6.2f} us/step)   "
            f"speedup {tp / tc:5.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
