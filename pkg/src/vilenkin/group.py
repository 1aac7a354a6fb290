"""Mixed-radix arithmetic for bounded Vilenkin groups.

Indices ``n`` and group points ``x`` share one encoding: the integer
``sum_k d_k * M_k`` where ``d_k`` is the k-th digit (``0 <= d_k < m_k``) and
``M_k`` the generalized power.  Digit 0 therefore has stride 1.

Harmonic sums follow the convention ``l_n = 1 + 1/2 + ... + 1/(n-1)``, so the
weights ``1/(n-j)``, ``j = 1..n-1`` of a logarithmic mean add up to exactly
``l_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.special import digamma

from .errors import InvalidBasisError, OutOfRangeError, ResolutionTooLargeError, UndefinedMeanError

INDEX_LIMIT = np.iinfo(np.int64).max
EXACT_HARMONIC_LIMIT = 10_000


@dataclass(frozen=True)
class VilenkinBasis:
    """Generating sequence truncated at resolution ``N``.

    ``m`` holds ``m_0..m_{N-1}``; ``M`` holds ``M_0..M_N``.  ``pattern`` is the
    cyclic seed the basis was built from and is kept for metadata only.
    """

    m: tuple[int, ...]
    M: tuple[int, ...]
    pattern: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.m)

    @property
    def size(self) -> int:
        """Number of rank-N cells, ``M_N``."""
        return self.M[-1]

    @property
    def m_max(self) -> int:
        return max(self.m)

    @property
    def shape(self) -> tuple[int, ...]:
        # C-order axes: digit N-1 first, digit 0 last (stride 1)
        return tuple(reversed(self.m))

    def axis_of(self, k: int) -> int:
        return self.N - 1 - k

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``(M_N, N)`` array; row ``t`` holds the digits of ``t``."""
        t = np.arange(self.size, dtype=np.int64)
        out = np.empty((self.size, self.N), dtype=np.int64)
        for k, (mk, Mk) in enumerate(zip(self.m, self.M)):
            out[:, k] = (t // Mk) % mk
        return out

    @cached_property
    def phase_modulus(self) -> int:
        """Common denominator ``L = lcm(m_k)`` for character phases."""
        return math.lcm(*set(self.m))

    def describe(self) -> dict:
        return {"pattern": list(self.pattern), "resolution": self.N, "size": self.size}


@dataclass(frozen=True)
class DigitExpansion:
    digits: tuple[int, ...]
    order: int

    def value(self, basis: VilenkinBasis) -> int:
        return sum(d * Mk for d, Mk in zip(self.digits, basis.M))


def build_basis(pattern: Sequence[int], N: int) -> VilenkinBasis:
    """Repeat ``pattern`` cyclically to length ``N`` and precompute powers."""
    pattern = tuple(int(p) for p in pattern)
    if not pattern:
        raise InvalidBasisError("empty generating pattern")
    if any(p < 2 for p in pattern):
        raise InvalidBasisError(f"every m_k must be >= 2, got {pattern}")
    if N < 1:
        raise InvalidBasisError(f"resolution must be >= 1, got {N}")
    m = tuple(pattern[k % len(pattern)] for k in range(N))
    M = [1]
    for mk in m:
        nxt = M[-1] * mk
        if nxt > INDEX_LIMIT:
            raise ResolutionTooLargeError(f"M_{len(M)} exceeds the int64 range")
        M.append(nxt)
    return VilenkinBasis(m=m, M=tuple(M), pattern=pattern)


def walsh(N: int) -> VilenkinBasis:
    return build_basis((2,), N)


def expand(basis: VilenkinBasis, n: int) -> DigitExpansion:
    if not 0 <= n < basis.size:
        raise OutOfRangeError(f"index {n} outside [0, {basis.size})")
    digits = []
    for mk in basis.m:
        n, d = divmod(n, mk)
        digits.append(d)
    order = max((k for k, d in enumerate(digits) if d), default=-1)
    return DigitExpansion(tuple(digits), order)


def digit_add(basis: VilenkinBasis, a: int, b: int) -> int:
    """Group sum of two indices: digitwise addition mod ``m_k``."""
    da, db = expand(basis, a).digits, expand(basis, b).digits
    return sum(((x + y) % mk) * Mk for x, y, mk, Mk in zip(da, db, basis.m, basis.M))


def q_index(basis: VilenkinBasis, A: int) -> int:
    """``q_A = M_{2A} + M_{2A-2} + ... + M_0``; needs ``2A + 1 <= N``."""
    if A < 0 or 2 * A + 1 > basis.N:
        raise OutOfRangeError(f"level A={A} needs resolution >= {2 * A + 1}, have {basis.N}")
    return sum(basis.M[2 * j] for j in range(A + 1))


def harmonic(n: int) -> float:
    """``l_n = sum_{k=1}^{n-1} 1/k`` for ``n >= 2``."""
    if n < 2:
        raise UndefinedMeanError(f"harmonic sum needs n >= 2, got {n}")
    if n <= EXACT_HARMONIC_LIMIT:
        return math.fsum(1.0 / k for k in range(1, n))
    return float(digamma(n) + np.euler_gamma)


def harmonic_exact(n: int) -> Fraction:
    if n < 2:
        raise UndefinedMeanError(f"harmonic sum needs n >= 2, got {n}")
    if n > EXACT_HARMONIC_LIMIT:
        raise OutOfRangeError(f"exact harmonic sums are limited to n <= {EXACT_HARMONIC_LIMIT}")
    L = math.lcm(*range(1, n))
    return Fraction(sum(L // k for k in range(1, n)), L)


def harmonic_numbers(k_max: int) -> np.ndarray:
    """Standard harmonic numbers ``H_0..H_{k_max}`` (so ``l_n = H_{n-1}``).

    Uses ``H_k = digamma(k+1) + gamma`` which stays at full relative precision,
    unlike a running sum.
    """
    k = np.arange(k_max + 1, dtype=np.float64)
    H = digamma(k + 1.0) + np.euler_gamma
    H[0] = 0.0
    if k_max >= 1:
        H[1] = 1.0
    return H
