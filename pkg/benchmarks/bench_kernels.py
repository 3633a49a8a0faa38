"""Time the compiled and pure-Python kernels on large lifted arrays.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best-of-N wall time per kernel and backend, and the
speedup of the compiled backend when it is available.
"""

import argparse
import timeit

from mapda import kernels, mn_mapda

CASES = [(20, 1, 5, 7), (8, 4, 3, 5), (10, 3, 2, 4)]


def _calls(impl, a, u0, S1, group):
    ptr, rows, cols = a.occurrence_index()
    return {
        "column_repeat": lambda: impl.column_repeat(a.cells, a.max_value),
        "pair_scan": lambda: impl.pair_scan(a.cells, ptr, rows, cols),
        "row_counts": lambda: impl.row_counts(a.cells, ptr, rows, cols),
        "relabel": lambda: impl.relabel(u0.cells, S1, group),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = kernels.backends()
    names = sorted(backends, reverse=True)
    print(f"{'array':<22} {'kernel':<14}" + "".join(f"{n:>12}" for n in names) + "   speedup")
    for case in CASES:
        tr = mn_mapda(*case)
        a = tr.p
        label = f"{case} {a.F}x{a.K}"
        timings = {}
        for name in names:
            for kernel, fn in _calls(backends[name], a, tr.u0, tr.params.S1, case[3] - case[2]).items():
                best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                timings.setdefault(kernel, {})[name] = best
        for kernel, t in timings.items():
            cells = "".join(f"{t[n] * 1e3:>10.2f}ms" for n in names)
            speed = f"{t['python'] / t['compiled']:8.1f}x" if "compiled" in t else "       -"
            print(f"{label:<22} {kernel:<14}{cells}  {speed}")


if __name__ == "__main__":
    main()
