"""Recompute the frozen regression values in tests/frozen_values.json.

Every number is produced by the independent routines in tests/oracles.py,
never by the package itself.  Run from the repository root:

    python scripts/freeze_values.py
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
import oracles  # noqa: E402

WALSH = (2,)


def kernel_growth(N=17, a_max=8):
    norms, ratios = [], []
    H = oracles.harmonic_table(oracles.special_index(WALSH, a_max))
    for A in range(1, a_max + 1):
        q = oracles.special_index(WALSH, A)
        F = oracles.theta_fft(WALSH, N, q, H) / float(H[q])
        nF = float(np.mean(np.abs(F)))
        norms.append(nF)
        ratios.append(nF / math.log(q))
    return {"resolution": N, "norm_F": norms, "ratio": ratios, "floor": min(ratios)}


def block_coeffs(N, lo, hi, value=1.0):
    c = np.zeros(oracles.powers(WALSH, N)[-1])
    c[lo:hi] = value
    return c


def sharpness(N=17, nk_max=8):
    M = oracles.powers(WALSH, N)
    H = oracles.harmonic_table(oracles.special_index(WALSH, nk_max))
    h1, ratio = [], []
    for n in range(1, nk_max + 1):
        c = block_coeffs(N, M[2 * n], M[2 * n + 1])
        f = oracles.fft_inverse(c, WALSH, N)
        h1.append(oracles.h1_norm(f, WALSH, N))
        q = oracles.special_index(WALSH, n)
        L = oracles.log_mean_spectral(c, WALSH, N, q, H)
        phi = max(1.0, math.sqrt(math.log1p(q)))
        ratio.append(float(np.mean(np.abs(L))) / phi)
    return {"resolution": N, "h1_norm": h1, "ratio_sqrt_log": ratio}


def divergence(N, alpha):
    M = oracles.powers(WALSH, N)
    c = np.zeros(M[-1])
    for a in alpha:
        c[M[2 * a]: M[2 * a + 1]] = a**-0.5
    H = oracles.harmonic_table(oracles.special_index(WALSH, alpha[-1]))
    norms = []
    for a in alpha:
        q = oracles.special_index(WALSH, a)
        norms.append(float(np.mean(np.abs(oracles.log_mean_spectral(c, WALSH, N, q, H)))))
    return {"resolution": N, "alpha": list(alpha), "norm_L": norms}


def maximal_trend(lo=8, hi=14, samples=6, seed=0):
    out = {}
    for N in range(lo, hi + 1):
        size = 2**N
        rng = np.random.default_rng(seed + N)
        ratios = []
        for _ in range(samples):
            c = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2)
            f = oracles.fft_inverse(c, WALSH, N)
            sup = oracles.partial_sum_sup(c, WALSH, N, math.log1p, size)
            ratios.append(float(np.mean(sup)) / oracles.h1_norm(f, WALSH, N))
        out[str(N)] = ratios
        print(f"  trend N={N}: max {max(ratios):.6f}", flush=True)
    return {"samples": samples, "seed": seed, "ratios": out}


def main():
    values = {
        "kernel_growth_walsh": kernel_growth(),
        "sharpness_walsh": sharpness(),
        "divergence_strict_walsh": divergence(12, (1, 5)),
        "divergence_relaxed_walsh": divergence(14, (1, 2, 3, 4, 5, 6)),
        "maximal_trend_walsh": maximal_trend(),
    }
    path = ROOT / "tests" / "frozen_values.json"
    path.write_text(json.dumps(values, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
