"""Time the numba and numpy backends of the hot kernels against each other.

    python benchmarks/bench_kernels.py [--repeat 5] [--nodes 8 32 64]

Each kernel is called once untimed (JIT warm-up), then the best of
``--repeat`` runs is reported together with the max deviation between backends.
"""
import argparse
import time

import numpy as np

from bloch_interp import _kernels
from bloch_interp.quadrature import audit_grid, grid_points


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nodes", type=int, nargs="+", default=[8, 32, 64])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; nothing to compare")
        return 0
    _kernels.configure_threads()
    rng = np.random.default_rng(args.seed)
    z = grid_points(audit_grid()).reshape(-1)
    print(f"{'kernel':<18}{'nodes':>6}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}{'max dev':>10}")
    for n in args.nodes:
        r = np.sqrt(rng.uniform(0, 0.99, n))
        c = r * np.exp(2j * np.pi * rng.uniform(size=n))
        cases = [
            ("moebius_product", _kernels.moebius_product, (z, c, -1)),
            ("pairwise_rho", _kernels.pairwise_rho, (c,)),
        ]
        for name, kern, argv_ in cases:
            t_np = best_of(lambda: kern.numpy_impl(*argv_), args.repeat)
            t_nb = best_of(lambda: kern.numba_impl(*argv_), args.repeat)
            a, b = kern.numpy_impl(*argv_), kern.numba_impl(*argv_)
            a, b = (a, b) if isinstance(a, tuple) else ((a,), (b,))
            dev = max(float(np.max(np.abs(x - y))) for x, y in zip(a, b))
            print(f"{name:<18}{n:>6}{1e3 * t_np:>13.3f}{1e3 * t_nb:>13.3f}"
                  f"{t_np / t_nb:>9.1f}{dev:>10.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
