"""Vilenkin characters and the mixed-radix Vilenkin-Fourier transform.

The fast transform runs one small cyclic DFT per digit axis.  Axis ``k``
couples the ``m_k`` cells that differ only in digit ``k`` (stride ``M_k``), so
a full pass costs ``O(M_N * sum_k m_k)``.  Forward carries the Haar factor
``1/M_N``; inverse carries none.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IncompatibleOperandsError, OracleSizeError, OutOfRangeError
from .group import VilenkinBasis
from .signal import GridFunction

ORACLE_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class Spectrum:
    basis: VilenkinBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if c.shape[0] != self.basis.size:
            raise ValueError(f"expected {self.basis.size} coefficients, got {c.shape[0]}")
        if not np.all(np.isfinite(c)):
            raise ValueError("spectrum entries must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def unit(cls, basis: VilenkinBasis, v: int) -> Spectrum:
        c = np.zeros(basis.size, dtype=np.complex128)
        c[v] = 1.0
        return cls(basis, c)


@dataclass(frozen=True, eq=False)
class Multiplier:
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.complex128, copy=True).reshape(-1)
        if not np.all(np.isfinite(w)):
            raise ValueError("multiplier weights must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


@lru_cache(maxsize=64)
def _roots(L: int) -> np.ndarray:
    """``exp(2 pi i j / L)`` with the quarter turns snapped to exact values."""
    j = np.arange(L)
    r = np.exp(2j * np.pi * j / L)
    exact = {0: 1.0, L / 4: 1j, L / 2: -1.0, 3 * L / 4: -1j}
    for pos, val in exact.items():
        if float(pos).is_integer():
            r[int(pos)] = val
    r.flags.writeable = False
    return r


def _phase_scale(basis: VilenkinBasis) -> np.ndarray:
    L = basis.phase_modulus
    return np.array([L // mk for mk in basis.m], dtype=np.int64)


def character(basis: VilenkinBasis, n: int) -> GridFunction:
    """``psi_n(x) = exp(2 pi i sum_k n_k x_k / m_k)``."""
    if not 0 <= n < basis.size:
        raise OutOfRangeError(f"character index {n} outside [0, {basis.size})")
    return GridFunction(basis, character_table(basis, np.array([n]))[0])


def character_table(basis: VilenkinBasis, ns: np.ndarray, points: np.ndarray | None = None) -> np.ndarray:
    """Values ``psi_n(x)`` for ``n`` in ``ns`` (rows) and ``x`` in ``points`` (cols)."""
    L = basis.phase_modulus
    ns = np.asarray(ns, dtype=np.int64)
    nd = (ns[:, None] // np.array(basis.M[:-1])) % np.array(basis.m)
    if points is None:
        xd = basis.digit_table
    else:
        xd = basis.digit_table[np.asarray(points, dtype=np.int64)]
    # float matmul is exact here: every partial sum is far below 2**53
    phase = (nd * _phase_scale(basis)).astype(np.float64) @ xd.T.astype(np.float64)
    return _roots(L)[np.mod(phase.astype(np.int64), L)]


@lru_cache(maxsize=64)
def _dft_matrix(m: int, sign: int) -> np.ndarray:
    r = _roots(m)
    k = np.arange(m)
    W = r[(sign * np.outer(k, k)) % m]
    W.flags.writeable = False
    return W


def _axis_pass(x: np.ndarray, m: int, stride: int, sign: int) -> np.ndarray:
    """Apply the ``m``-point DFT with kernel ``exp(sign 2 pi i jk/m)`` along one digit axis."""
    x = x.reshape(-1, m, stride)
    if m == 2:
        a, b = x[:, 0, :], x[:, 1, :]
        return np.stack((a + b, a - b), axis=1)
    W = _dft_matrix(m, sign)
    out = np.empty_like(x)
    for i in range(m):
        acc = x[:, 0, :].copy()
        for j in range(1, m):
            acc += W[i, j] * x[:, j, :]
        out[:, i, :] = acc
    return out


def _fast(values: np.ndarray, basis: VilenkinBasis, sign: int) -> np.ndarray:
    x = np.asarray(values, dtype=np.complex128)
    for mk, Mk in zip(basis.m, basis.M):
        x = _axis_pass(x, mk, Mk, sign)
    return x.reshape(-1)


def forward(f: GridFunction) -> Spectrum:
    """Fourier coefficients ``f^(n) = int f * conj(psi_n) dmu``."""
    b = f.basis
    return Spectrum(b, _fast(f.values, b, -1) / b.size)


def inverse(s: Spectrum) -> GridFunction:
    """``sum_v s(v) psi_v``."""
    return GridFunction(s.basis, _fast(s.coeffs, s.basis, +1))


def _oracle_guard(basis: VilenkinBasis) -> None:
    if basis.size > ORACLE_LIMIT:
        raise OracleSizeError(f"naive transform limited to M_N <= {ORACLE_LIMIT}, got {basis.size}")


def naive_forward(f: GridFunction) -> Spectrum:
    """Quadratic-cost transform built row by row from explicit characters."""
    b = f.basis
    _oracle_guard(b)
    coeffs = np.empty(b.size, dtype=np.complex128)
    for n in range(b.size):
        psi = character_table(b, np.array([n]))[0]
        coeffs[n] = np.sum(f.values * np.conj(psi)) / b.size
    return Spectrum(b, coeffs)


def naive_inverse(s: Spectrum) -> GridFunction:
    b = s.basis
    _oracle_guard(b)
    out = np.zeros(b.size, dtype=np.complex128)
    for n in range(b.size):
        if s.coeffs[n] != 0:
            out += s.coeffs[n] * character_table(b, np.array([n]))[0]
    return GridFunction(b, out)


def apply_multiplier(f: GridFunction, w: Multiplier) -> GridFunction:
    if w.weights.shape[0] != f.basis.size:
        raise IncompatibleOperandsError(
            f"multiplier has {w.weights.shape[0]} weights, basis has {f.basis.size} frequencies")
    s = forward(f)
    return inverse(Spectrum(f.basis, w.weights * s.coeffs))
