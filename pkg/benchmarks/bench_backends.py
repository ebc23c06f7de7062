#!/usr/bin/env python3
"""Compare the compiled kernel backend against the pure-numpy fallback.

Each backend runs in a child process with HYPERVOTE_BACKEND forced, so the
normal import-time selection is exercised. Workloads cover the two regimes
that dominate real use: many small models (wide populations on narrow data)
and few large models (high interaction order on wide data).

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import os
import subprocess
import sys
import time


def _workloads():
    from hypervote.data_io import iris_path, load_csv
    from hypervote.ensemble import EnsembleConfig
    from hypervote.evaluate import cross_validate
    from hypervote.synth import gaussian_mixture

    iris = load_csv(iris_path(), "species")
    wide = gaussian_mixture(7, 16, 135, separation=0.8, seed=3)
    return [
        (
            "iris order-1, 2000 models, 5-fold",
            lambda: cross_validate(
                iris, EnsembleConfig(n_widths=200, n_origins=10, order=1, seed=8), 5, 8
            ),
        ),
        (
            "iris order-2, 400 models, 5-fold",
            lambda: cross_validate(
                iris, EnsembleConfig(n_widths=40, n_origins=10, order=2, seed=8), 5, 8
            ),
        ),
        (
            "945x16 order-3, 50 models, 5-fold",
            lambda: cross_validate(
                wide, EnsembleConfig(n_widths=10, n_origins=5, order=3, seed=4), 5, 4
            ),
        ),
    ]


def _run_child(repeats: int) -> int:
    from hypervote.kernels import BACKEND

    for name, fn in _workloads():
        best = min(_time_once(fn) for _ in range(repeats))
        print(f"{BACKEND}\t{name}\t{best:.3f}", flush=True)
    return 0


def _time_once(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def _run_parent(repeats: int) -> int:
    results = {}
    for backend in ("python", "cython"):
        env = dict(os.environ, HYPERVOTE_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child", str(repeats)],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(f"{backend} backend unavailable:\n{proc.stderr}", file=sys.stderr)
            continue
        for line in proc.stdout.strip().splitlines():
            name_backend, workload, seconds = line.split("\t")
            results.setdefault(workload, {})[name_backend] = float(seconds)

    print(f"{'workload':<40} {'python':>9} {'cython':>9} {'speedup':>8}")
    for workload, times in results.items():
        py = times.get("python")
        cy = times.get("cython")
        row = f"{workload:<40} "
        row += f"{py:>8.3f}s" if py is not None else f"{'n/a':>9}"
        row += f" {cy:>8.3f}s" if cy is not None else f" {'n/a':>9}"
        if py is not None and cy is not None:
            row += f" {py / cy:>7.2f}x"
        print(row)
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3, help="best-of-N timing")
    parser.add_argument("--child", type=int, default=None, help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.child is not None:
        return _run_child(args.child)
    return _run_parent(args.repeats)


if __name__ == "__main__":
    sys.exit(main())
