"""Time the compiled kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Each kernel is run on the same inputs through both backends.  The table
reports the best wall time of ``--repeat`` runs and the speedup.
"""

import argparse
import timeit

import numpy as np

from iltmoments import _fallback
from iltmoments.combinatorics import REFERENCE_MATRICES
from iltmoments.multigraph import graph_from_matrix, symanzik

try:
    from iltmoments import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(n, rng):
    G = graph_from_matrix(REFERENCE_MATRICES["f6"])
    mono = symanzik(G).index_array
    E = G.edge_count
    x = np.concatenate([rng.uniform(1e-6, 2.0, n // 2), rng.uniform(2.0, 40.0, n - n // 2)])
    alpha = rng.random((n, E))
    simplex = rng.dirichlet(np.ones(E), n)
    cube = rng.random((n, 2 * E - 1))
    return {
        "k0k1": lambda k: k.k0k1(x),
        "symanzik_eval": lambda k: k.symanzik_eval(alpha, mono),
        "simplex_integrand": lambda k: k.simplex_integrand(simplex, mono, -1.0),
        "sector_integrand": lambda k: k.sector_integrand(cube, mono, -1.0, 5),
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="points per kernel call")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for name, run in cases(args.n, rng).items():
        t_py = best(lambda: run(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:<20}{1e3 * t_py:12.2f}{'n/a':>13}{'':>9}")
            continue
        t_c = best(lambda: run(_kernels), args.repeat)
        print(f"{name:<20}{1e3 * t_py:12.2f}{1e3 * t_c:13.2f}{t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
