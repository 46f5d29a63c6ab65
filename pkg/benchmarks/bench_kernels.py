"""Compare the compiled and pure-Python pentagon kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
Prints one line per category with both timings, the speed-up and the agreement of the
returned residuals.
"""
import argparse
import time

import numpy as np

from fuscat import catalog, kernels
from fuscat.skeleton import _dense_F

CATEGORIES = ['fib', 'ising', 'vecz3', 'mm:fib:2', 'mm:ising:2', 'mm:fib:3']


def _time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument('--repeat', type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if 'compiled' not in backends:
        print('compiled kernels not built; only the pure-Python backend is available')
    print(f"{'category':12s} {'rank':>4s} {'python [s]':>11s} {'compiled [s]':>12s} "
          f"{'speed-up':>9s} {'|diff|':>9s}")
    for name in CATEGORIES:
        skel = catalog.load_any(name)
        F6 = _dense_F(skel)
        N = (skel.ring.N > 0).astype(np.uint8)
        tp, rp = _time(lambda: kernels.pentagon(F6, N, backend='python'), args.repeat)
        if 'compiled' in backends:
            tc, rc = _time(lambda: kernels.pentagon(F6, N, backend='compiled'), args.repeat)
            diff = abs(rp[0] - rc[0])
            print(f'{name:12s} {skel.ring.rank:4d} {tp:11.4f} {tc:12.5f} {tp / tc:9.1f} {diff:9.1e}')
        else:
            print(f'{name:12s} {skel.ring.rank:4d} {tp:11.4f} {"-":>12s} {"-":>9s} {"-":>9s}')


if __name__ == '__main__':
    main()
