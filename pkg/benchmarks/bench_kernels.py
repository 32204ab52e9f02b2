"""Compiled core against the pure-Python fallback on the four hot loops.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json out.json]

Prints one line per kernel with the best-of-N wall time of each backend, the
speedup and the largest relative difference between the two results.
"""
from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from locbounds import _kernels_py as py

try:
    from locbounds import _kernels_c as cy
except ImportError:
    cy = None


def cases():
    coeffs = np.array([1.0, 0.5, 0.25])
    ax = np.arange(-60, 61, dtype=float)
    pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), -1).reshape(-1, 2)
    rad = np.linalg.norm(pts, axis=1)
    inside = np.ascontiguousarray(pts[rad < 10])
    outside = np.ascontiguousarray(pts[(rad >= 10) & (rad <= 60)])
    rng = np.random.default_rng(0)
    J = rng.normal(size=(14, 14))
    J = np.ascontiguousarray(0.5 * (J + J.T))
    np.fill_diagonal(J, 0.0)
    return [
        ("conv_sum R=1e5", "conv_sum", (1.5, 0.7, 100_000, coeffs)),
        ("fse_sum_1d R=1e5", "fse_sum_1d", (3.0, 2.0, 100_000, coeffs)),
        ("pair_sum D=2 R=10", "pair_sum", (inside, outside, 5.0, 5.0, coeffs)),
        ("zz_diagonal N=14", "zz_diagonal", (J, 14)),
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", help="write the results to this file")
    args = p.parse_args(argv)
    if cy is None:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    rows = []
    print(f"{'kernel':<22}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max rel diff':>14}")
    for label, fn, argsk in cases():
        t_py = min(timeit.repeat(lambda: getattr(py, fn)(*argsk), number=1, repeat=args.repeat))
        ref = np.asarray(getattr(py, fn)(*argsk))
        row = {"kernel": label, "python_s": t_py, "cython_s": None, "speedup": None,
               "max_rel_diff": None}
        if cy is not None:
            t_cy = min(timeit.repeat(lambda: getattr(cy, fn)(*argsk), number=1, repeat=args.repeat))
            out = np.asarray(getattr(cy, fn)(*argsk))
            diff = float(np.max(np.abs(out - ref) / np.maximum(np.abs(ref), 1e-300)))
            row.update(cython_s=t_cy, speedup=t_py / t_cy, max_rel_diff=diff)
            print(f"{label:<22}{t_py:>12.4g}{t_cy:>12.4g}{t_py / t_cy:>10.1f}{diff:>14.2e}")
        else:
            print(f"{label:<22}{t_py:>12.4g}{'-':>12}{'-':>10}{'-':>14}")
        rows.append(row)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
