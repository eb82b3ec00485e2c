"""Compare the compiled and pure Python box-evaluation kernels.

Run:  python3 benchmarks/bench_kernels.py

Times a realistic workload (the full minor system of a 7-line subprogram
evaluated over a cascade of bisected boxes) on both backends and checks that
they return bit-identical enclosures.
"""

import time

import numpy as np

from optpack.boxelim import Box, compile_system, feasible_box
from optpack.boxkernel_py import eval_box as eval_py
from optpack.orbits import enumerate_reps
from optpack.psatz import build_subprogram_system

try:
    from optpack._boxkernel import eval_box as eval_compiled
except ImportError:
    eval_compiled = None


def workload():
    S = enumerate_reps(2, 5).representatives[30]
    sys = build_subprogram_system(S, 5, full_minors=True)
    fs, gs = compile_system(sys)
    polys = fs + gs
    boxes = [feasible_box(sys)]
    for _ in range(9):
        nxt = []
        for b in boxes:
            nxt.extend(b.split(b.widest()))
        boxes = nxt[:64]
    bounds = [b.float_bounds() for b in boxes]
    return polys, bounds


def run(kernel, polys, bounds, repeats=5):
    out = []
    t0 = time.perf_counter()
    for _ in range(repeats):
        out = [
            kernel(clo, chi, exps, blo, bhi)
            for blo, bhi in bounds
            for clo, chi, exps in polys
        ]
    return (time.perf_counter() - t0) / repeats, out


def main():
    polys, bounds = workload()
    n_evals = len(polys) * len(bounds)
    t_py, out_py = run(eval_py, polys, bounds)
    print(f"python   backend: {t_py:8.4f} s  ({n_evals} evaluations)")
    if eval_compiled is None:
        print("compiled backend: unavailable")
        return
    t_c, out_c = run(eval_compiled, polys, bounds)
    print(f"compiled backend: {t_c:8.4f} s  ({n_evals} evaluations)")
    print(f"speedup: {t_py / t_c:.1f}x")
    assert out_py == out_c, "backends disagree"
    print("backends agree bit-for-bit")


if __name__ == "__main__":
    main()
