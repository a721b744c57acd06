"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel and workload with the best-of-N time for each
backend and the speedup of the compiled one.
"""

import argparse
import sys
import timeit
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from gen import random_convex, random_tree  # noqa: E402
from fuzzfta import _backend  # noqa: E402
from fuzzfta.fuzzy import OP_CODES, level_buckets  # noqa: E402


def workloads(rng):
    for n_be in (12, 16, 20):
        tree = random_tree(rng, n_be, dag=True)
        args = tree._compiled + (n_be,)
        yield f"structure_table n={n_be}", "structure_table", args
        table = _backend.available()["python"].structure_table(*args)
        yield f"cutset_probability n={n_be}", "cutset_probability", (table, rng.uniform(size=n_be))
    for points in (500, 2000):
        fx, fy = random_convex(rng), random_convex(rng)
        xs = [np.linspace(*f.support_hint(), points) for f in (fx, fy)]
        buckets = [level_buckets(f.membership(x), 100).astype(np.int64) for f, x in zip((fx, fy), xs)]
        for op in ("add", "mul"):
            yield (
                f"level_extremes {points}x{points} {op}",
                "level_extremes",
                (xs[0], buckets[0], xs[1], buckets[1], OP_CODES[op], 100),
            )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    opts = parser.parse_args()
    backends = _backend.available()
    if "cython" not in backends:
        print("compiled kernels are not built; only the fallback will be timed")
    names = sorted(backends)
    print(f"{'workload':34s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, kernel, args in workloads(np.random.default_rng(opts.seed)):
        best = {}
        for name in names:
            func = getattr(backends[name], kernel)
            best[name] = min(timeit.repeat(lambda: func(*args), number=1, repeat=opts.repeat))
        row = f"{label:34s}" + "".join(f"{best[n] * 1e3:10.2f}ms" for n in names)
        if len(names) > 1:
            row += f"{best['python'] / best['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
