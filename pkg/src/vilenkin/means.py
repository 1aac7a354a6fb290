"""Partial sums, Norlund and logarithmic means, weighted maximal operators.

All means are spectral multipliers.  Ranges run over ``k = 1..n-1`` and the
Norlund normalizer defaults to the sum of the weights actually used, so every
mean reproduces constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from numba import njit
from scipy.signal import fftconvolve

from .errors import ConfigError, OutOfRangeError, UndefinedMeanError
from .group import VilenkinBasis, harmonic_numbers
from .signal import GridFunction
from .transform import Multiplier, _phase_scale, _roots, apply_multiplier, character_table, forward

# points per block when tabulating characters for maximal operators
_BLOCK_ELEMS = 2**21


@dataclass(frozen=True)
class NorlundWeights:
    """Weight sequence ``q_0, q_1, ...`` of a Norlund mean."""

    tag: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def __call__(self, k: np.ndarray) -> np.ndarray:
        w = np.asarray(self.func(np.asarray(k, dtype=np.float64)), dtype=np.float64)
        if np.any(w < 0):
            raise ValueError(f"Norlund weights must be nonnegative ({self.tag})")
        return w

    @classmethod
    def fejer(cls) -> NorlundWeights:
        return cls("constant-one", np.ones_like)

    @classmethod
    def logarithmic(cls) -> NorlundWeights:
        return cls("reciprocal", lambda k: 1.0 / k)

    @classmethod
    def custom(cls, values) -> NorlundWeights:
        table = np.asarray(values, dtype=np.float64)
        if np.any(table < 0):
            raise ValueError("Norlund weights must be nonnegative")
        return cls("custom", lambda k: table[k.astype(np.int64)])


@dataclass(frozen=True)
class WeightFunction:
    """Normalizer ``phi`` of a weighted maximal operator.

    Presets: ``constant`` (1), ``log1p`` (``log(n+1)``, the exact normalizer of
    the bounded operator, below 1 at n = 1), ``sqrt-log`` and ``pow-log:g``
    (``max(1, log(n+1)**g)``).
    """

    name: str
    gamma: float = 1.0

    PRESETS = ("constant", "log1p", "sqrt-log", "pow-log")

    def __post_init__(self):
        if self.name not in self.PRESETS:
            raise ConfigError(f"unknown weight preset {self.name!r}; choose from {self.PRESETS}")
        if self.name == "pow-log" and not self.gamma > 0:
            raise ConfigError("pow-log exponent must be positive")

    @classmethod
    def parse(cls, text: str) -> WeightFunction:
        name, _, g = text.partition(":")
        if name == "sqrt-log":
            return cls(name, 0.5)
        if name == "pow-log":
            if not g:
                raise ConfigError("pow-log needs an exponent, e.g. pow-log:0.5")
            return cls(name, float(g))
        return cls(name)

    def __str__(self) -> str:
        return f"pow-log:{self.gamma!r}" if self.name == "pow-log" else self.name

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        if self.name == "constant":
            return np.ones_like(n)
        lg = np.log1p(n)
        if self.name == "log1p":
            return lg
        return np.maximum(1.0, lg**self.gamma)

    def log_growth_exponent(self) -> float:
        """``g`` with ``phi(n) ~ log(n)**g``; 0 for the constant preset."""
        return {"constant": 0.0, "log1p": 1.0}.get(self.name, self.gamma)

    def satisfies_divergence_condition(self) -> bool:
        """Whether ``limsup log(n+1) / phi(n) = +inf``."""
        return self.log_growth_exponent() < 1.0


# --- multipliers --------------------------------------------------------------

def _check_range(basis: VilenkinBasis, n: int, lo: int) -> None:
    if n < lo:
        if lo >= 2:
            raise UndefinedMeanError(f"mean needs n >= {lo}, got {n}")
        raise OutOfRangeError(f"n must be >= {lo}, got {n}")
    if n > basis.size:
        raise OutOfRangeError(f"n={n} exceeds M_N={basis.size}")


def partial_sum_multiplier(n: int, size: int) -> Multiplier:
    w = np.zeros(size)
    w[:n] = 1.0
    return Multiplier(w)


def log_mean_multiplier(n: int, size: int) -> Multiplier:
    """``l_{n-v} / l_n`` for ``v <= n-2``."""
    H = harmonic_numbers(n)
    w = np.zeros(size)
    v = np.arange(n - 1)
    w[: n - 1] = H[n - v - 1] / H[n - 1]
    return Multiplier(w)


def norlund_multiplier(n: int, size: int, weights: NorlundWeights,
                       normalizer: Literal["used", "harmonic"] = "used") -> Multiplier:
    """``w(v) = (1/Q) sum_{k=max(v+1,1)}^{n-1} q_{n-k}``.

    ``normalizer='used'`` takes ``Q = sum_{k=1}^{n-1} q_{n-k}``; ``'harmonic'``
    takes ``Q = l_n`` as literally displayed for general weights.
    """
    k = np.arange(1, n)
    qk = weights(n - k)
    # tail[v] = sum_{k=v+1}^{n-1} q_{n-k}
    tail = np.concatenate((np.cumsum(qk[::-1])[::-1], [0.0]))
    Q = tail[0] if normalizer == "used" else harmonic_numbers(n)[n - 1]
    if Q == 0:
        raise UndefinedMeanError(f"Norlund normalizer vanishes at n={n}")
    w = np.zeros(size)
    w[: n - 1] = tail[: n - 1] / Q
    return Multiplier(w)


def fejer_multiplier(n: int, size: int) -> Multiplier:
    """Multiplier of ``sigma_n = (1/n) sum_{k=1}^n S_k``."""
    w = np.zeros(size)
    w[:n] = (n - np.arange(n)) / n
    return Multiplier(w)


# --- means --------------------------------------------------------------------

def partial_sum(f: GridFunction, n: int) -> GridFunction:
    """``S_n f = sum_{k<n} f^(k) psi_k``."""
    _check_range(f.basis, n, 0)
    return apply_multiplier(f, partial_sum_multiplier(n, f.basis.size))


def fejer_mean(f: GridFunction, n: int) -> GridFunction:
    _check_range(f.basis, n, 1)
    return apply_multiplier(f, fejer_multiplier(n, f.basis.size))


def norlund_mean(f: GridFunction, n: int, weights: NorlundWeights,
                 normalizer: Literal["used", "harmonic"] = "used") -> GridFunction:
    _check_range(f.basis, n, 2)
    return apply_multiplier(f, norlund_multiplier(n, f.basis.size, weights, normalizer))


def log_mean(f: GridFunction, n: int) -> GridFunction:
    """``L_n f = (1/l_n) sum_{j=1}^{n-1} S_j f / (n-j)``."""
    _check_range(f.basis, n, 2)
    return apply_multiplier(f, log_mean_multiplier(n, f.basis.size))


def partial_sum_stack(f: GridFunction, n_max: int) -> np.ndarray:
    """Rows ``S_0 f .. S_{n_max} f`` by direct character summation (oracle path)."""
    b = f.basis
    _check_range(b, n_max, 0)
    coeffs = forward(f).coeffs
    out = np.zeros((n_max + 1, b.size), dtype=np.complex128)
    for k in range(n_max):
        out[k + 1] = out[k] + coeffs[k] * character_table(b, np.array([k]))[0]
    return out


def log_mean_naive(f: GridFunction, n: int) -> GridFunction:
    """Weighted sum of explicit partial sums; oracle for :func:`log_mean`."""
    _check_range(f.basis, n, 2)
    S = partial_sum_stack(f, n - 1)
    j = np.arange(1, n)
    w = 1.0 / (n - j)
    return GridFunction(f.basis, (w @ S[1:]) / w.sum())


def norlund_mean_naive(f: GridFunction, n: int, weights: NorlundWeights) -> GridFunction:
    _check_range(f.basis, n, 2)
    S = partial_sum_stack(f, n - 1)
    w = weights(n - np.arange(1, n))
    return GridFunction(f.basis, (w @ S[1:]) / w.sum())


# --- maximal operators --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MaximalPair:
    """Cellwise ``sup_n |S_n f| / phi(n)`` and ``sup_n |L_n f| / phi(n)``."""

    partial: GridFunction
    log: GridFunction


def _character_blocks(basis: VilenkinBasis, n_max: int):
    """Yield ``(points, psi)`` with ``psi[v, i] = psi_v(points[i])`` for ``v < n_max``.

    A block is a rank-j cylinder: its points share the digits above ``j``, so
    ``psi_v(x) = psi_{v_hi}(x_hi) * psi_{v_lo}(x_lo)`` factors into a column of
    high-digit characters times the small low-digit character matrix.
    """
    j = 0
    while j < basis.N and n_max * basis.M[j + 1] <= _BLOCK_ELEMS:
        j += 1
    Mj = basis.M[j]
    low = character_table(basis, np.arange(Mj), np.arange(Mj))
    n_hi = -(-n_max // Mj)
    v_hi = np.arange(n_hi) * Mj
    for start in range(0, basis.size, Mj):
        hi = character_table(basis, v_hi, np.array([start]))[:, 0]
        psi = (hi[:, None, None] * low[None, :, :]).reshape(n_hi * Mj, Mj)[:n_max]
        yield np.arange(start, start + Mj), psi


def _maximal_blocks(coeffs: np.ndarray, basis: VilenkinBasis, n_max: int, phi: WeightFunction,
                    want_log: bool):
    """Sweep point blocks; per block tabulate ``S_1..S_{n_max}`` by cumulative sums.

    ``coeffs`` may hold several spectra as rows; the character table of each
    block is shared between them.
    """
    coeffs = np.atleast_2d(coeffs)
    ns = np.arange(1, n_max + 1)
    inv_phi = 1.0 / phi(ns)
    H = harmonic_numbers(n_max)
    h = 1.0 / ns[:-1]
    sup_s = np.zeros((coeffs.shape[0], basis.size))
    sup_l = np.zeros((coeffs.shape[0], basis.size))
    for pts, psi in _character_blocks(basis, n_max):
        for r, c in enumerate(coeffs):
            S = np.cumsum(c[:n_max, None] * psi, axis=0)  # row i is S_{i+1}
            a = np.abs(S)
            a *= inv_phi[:, None]
            sup_s[r, pts] = a.max(axis=0)
            if want_log and n_max >= 2:
                # T_n = sum_{j=1}^{n-1} S_j / (n-j) sits at row n-2 of the convolution
                T = fftconvolve(S[:-1], h[:, None], axes=0)[: n_max - 1]
                a = np.abs(T)
                a *= (inv_phi[1:] / H[1:n_max])[:, None]
                sup_l[r, pts] = a.max(axis=0)
    return sup_s, sup_l


@njit(cache=True)
def _sup_partial_kernel(coeffs, inv_phi2, lowest, steps, roots, out):
    n_spec, n_max = coeffs.shape
    L = roots.shape[0]
    n_pts = steps.shape[0]
    acc = np.zeros(n_spec, dtype=np.complex128)
    best = np.zeros(n_spec)
    for x in range(n_pts):
        acc[:] = 0.0
        best[:] = 0.0
        phase = 0
        for v in range(n_max):
            if v > 0:
                phase += steps[x, lowest[v]]
                if phase >= L:
                    phase -= L
            psi = roots[phase]
            w = inv_phi2[v]
            for r in range(n_spec):
                acc[r] += coeffs[r, v] * psi
                a2 = (acc[r].real * acc[r].real + acc[r].imag * acc[r].imag) * w
                if a2 > best[r]:
                    best[r] = a2
        for r in range(n_spec):
            out[r, x] = np.sqrt(best[r])


def _sup_partial_sums(coeffs: np.ndarray, basis: VilenkinBasis, n_max: int,
                      phi: WeightFunction) -> np.ndarray:
    """Cellwise ``sup_{1<=n<=n_max} |S_n f| / phi(n)`` for each spectrum row.

    Walks ``v`` with a mixed-radix counter.  Going from ``v-1`` to ``v`` the
    phase ``sum_k v_k x_k L/m_k`` gains ``sum_{k<=c} x_k L/m_k`` (mod ``L``),
    where ``c`` is the lowest nonzero digit of ``v``: every digit below ``c``
    wrapped from ``m_k - 1`` to 0, which is the same as adding one more step.
    """
    coeffs = np.ascontiguousarray(np.atleast_2d(coeffs)[:, :n_max])
    L = basis.phase_modulus
    steps = np.cumsum(basis.digit_table * _phase_scale(basis), axis=1) % L
    v = np.arange(n_max)
    digits = (v[:, None] // np.array(basis.M[:-1])) % np.array(basis.m)
    lowest = np.argmax(digits != 0, axis=1)
    inv_phi2 = 1.0 / phi(v + 1) ** 2
    out = np.empty((coeffs.shape[0], basis.size))
    _sup_partial_kernel(coeffs, inv_phi2, lowest, steps, np.ascontiguousarray(_roots(L)), out)
    return out


def maximal_pair(f: GridFunction, n_max: int, phi: WeightFunction) -> MaximalPair:
    _check_range(f.basis, n_max, 2)
    s, l = _maximal_blocks(forward(f).coeffs, f.basis, n_max, phi, True)
    return MaximalPair(GridFunction(f.basis, s[0]), GridFunction(f.basis, l[0]))


def maximal_pairs(fs: list[GridFunction], n_max: int, phi: WeightFunction) -> list[MaximalPair]:
    """Batched :func:`maximal_pair` over functions sharing one basis."""
    b = fs[0].basis
    _check_range(b, n_max, 2)
    coeffs = np.stack([forward(f).coeffs for f in fs])
    s, l = _maximal_blocks(coeffs, b, n_max, phi, True)
    return [MaximalPair(GridFunction(b, si), GridFunction(b, li)) for si, li in zip(s, l)]


def partial_sum_maximals(fs: list[GridFunction], n_max: int, phi: WeightFunction) -> list[GridFunction]:
    """Batched partial-sum maximal operator (compiled sweep)."""
    b = fs[0].basis
    _check_range(b, n_max, 1)
    coeffs = np.stack([forward(f).coeffs for f in fs])
    return [GridFunction(b, row) for row in _sup_partial_sums(coeffs, b, n_max, phi)]


def maximal_ratio(f: GridFunction, n_max: int, phi: WeightFunction,
                  method: Literal["partial-sum", "log-mean"] = "partial-sum") -> GridFunction:
    """Cellwise ``sup |method_n f| / phi(n)`` over ``n_lo <= n <= n_max``.

    ``n_lo`` is 1 for partial sums and 2 for logarithmic means.
    """
    if method == "partial-sum":
        return partial_sum_maximals([f], n_max, phi)[0]
    if method == "log-mean":
        return maximal_pair(f, n_max, phi).log
    raise ValueError(f"unknown method {method!r}")


def maximal_ratio_naive(f: GridFunction, n_max: int, phi: WeightFunction,
                        method: Literal["partial-sum", "log-mean"] = "partial-sum") -> GridFunction:
    """One spectral mean per ``n``; oracle for :func:`maximal_ratio`."""
    if method == "partial-sum":
        terms = (np.abs(partial_sum(f, n).values) / phi(n) for n in range(1, n_max + 1))
    else:
        terms = (np.abs(log_mean(f, n).values) / phi(n) for n in range(2, n_max + 1))
    out = np.zeros(f.basis.size)
    for t in terms:
        np.maximum(out, t, out=out)
    return GridFunction(f.basis, out)
