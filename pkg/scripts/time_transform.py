"""Time the fast transform round trip on Walsh and (2,3) bases.

    python scripts/time_transform.py --max-size 2097152
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from vilenkin import GridFunction, build_basis, forward, inverse


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-size", type=int, default=2**21)
    p.add_argument("--seed", type=int, default=0)
    return p.parse_args()


def sizes(pattern, max_size):
    N = 1
    while True:
        b = build_basis(pattern, N)
        if b.size > max_size:
            return
        yield b
        N += 1


def bench():
    args = parse_args()
    rng = np.random.default_rng(args.seed)
    print("pattern,N,M_N,seconds,relative_error")
    for pattern in ((2,), (2, 3)):
        for b in sizes(pattern, args.max_size):
            v = rng.standard_normal(b.size) + 1j * rng.standard_normal(b.size)
            t0 = time.perf_counter()
            back = inverse(forward(GridFunction(b, v))).values
            dt = time.perf_counter() - t0
            err = np.max(np.abs(back - v)) / np.max(np.abs(v))
            print(f"{'-'.join(map(str, pattern))},{b.N},{b.size},{dt:.4f},{err:.2e}")


if __name__ == "__main__":
    bench()
