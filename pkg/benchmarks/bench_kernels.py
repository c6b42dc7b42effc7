"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lllmatch import kernels
from lllmatch.config_model import BLOCK, DegreeSequence, _block_choices


def _sampling(kern):
    d = DegreeSequence.regular(100, 3)
    choices = np.ascontiguousarray(_block_choices(1, 0, d.N)[: BLOCK // 2])
    vertex_of = np.ascontiguousarray(d.partition().zero_based())
    out = np.zeros(len(choices), dtype=np.int32)
    kern.sample_girths(choices, vertex_of, d.n, out)
    return int(out.sum())


def _enumeration(kern):
    d = DegreeSequence.regular(4, 3)
    vertex_of = np.ascontiguousarray(d.partition().zero_based())
    hist = np.zeros(d.N + 1, dtype=np.int64)
    for first in range(1, d.N):
        kern.girth_histogram(vertex_of, d.n, first, hist)
    return int(hist.sum())


def _cycle_types(kern):
    hist = np.zeros(1 << 9, dtype=np.int64)
    kern.cycle_mask_histogram(8, hist)
    return int(hist.sum())


CASES = [
    ("sample_girths  (512 trials, 3-regular n=100)", _sampling),
    ("girth_histogram (all 10395 pairings, N=12)", _enumeration),
    ("cycle_mask_histogram (8! permutations)", _cycle_types),
]


def best_of(fn, kern, repeat: int) -> tuple[float, int]:
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(kern)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = kernels.available()
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':48s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in CASES:
        times, results = [], []
        for name in names:
            t, r = best_of(fn, kernels.get_backend(name), args.repeat)
            times.append(t)
            results.append(r)
        if len(set(results)) != 1:
            raise SystemExit(f"{label}: backends disagree: {results}")
        row = f"{label:48s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
