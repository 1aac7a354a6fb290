"""Dirichlet, Fejer, theta and logarithmic kernels.

Every kernel has two constructions.  The spectral one writes the closed-form
coefficient profile and runs one inverse transform::

    D_n:      1                      for v < n
    K_n:      (n - v) / n            for v < n
    theta_n:  l_{n-v} = H_{n-v-1}    for v <= n - 2
    F_n:      theta_n / l_n

The naive one sums explicit characters and is the oracle for the profiles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .errors import OracleSizeError, OutOfRangeError, UndefinedMeanError
from .group import VilenkinBasis, harmonic, harmonic_exact, harmonic_numbers, q_index
from .signal import GridFunction, norm_p, zeros
from .transform import Spectrum, character, character_table, inverse

Method = Literal["spectral", "naive"]
KINDS = ("dirichlet", "fejer", "theta", "log")

# the naive sums cost O(n * M_N)
NAIVE_WORK_LIMIT = 2**26


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    n: int
    basis: VilenkinBasis

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        lo = 2 if self.kind in ("theta", "log") else (1 if self.kind == "fejer" else 0)
        if self.n < lo:
            if lo == 2:
                raise UndefinedMeanError(f"{self.kind} kernel needs n >= 2, got {self.n}")
            raise OutOfRangeError(f"{self.kind} kernel needs n >= {lo}, got {self.n}")
        if self.n > self.basis.size:
            raise OutOfRangeError(f"n={self.n} exceeds spectral range M_N={self.basis.size}")

    def build(self, method: Method = "spectral") -> GridFunction:
        return _BUILDERS[self.kind](self.basis, self.n, method)


# --- coefficient profiles -----------------------------------------------------

def dirichlet_profile(n: int, size: int) -> np.ndarray:
    c = np.zeros(size)
    c[:n] = 1.0
    return c


def fejer_profile(n: int, size: int) -> np.ndarray:
    c = np.zeros(size)
    v = np.arange(n)
    c[:n] = (n - v) / n
    return c


def theta_profile(n: int, size: int) -> np.ndarray:
    c = np.zeros(size)
    if n >= 2:
        H = harmonic_numbers(n - 1)
        v = np.arange(n - 1)
        c[: n - 1] = H[n - v - 1]
    return c


# --- naive sums ---------------------------------------------------------------

def _naive_guard(basis: VilenkinBasis, n: int) -> None:
    if n * basis.size > NAIVE_WORK_LIMIT:
        raise OracleSizeError(f"naive kernel sum too large: n * M_N = {n * basis.size}")


def _naive_dirichlet_stack(basis: VilenkinBasis, n: int) -> np.ndarray:
    """Rows ``D_0, D_1, ..., D_n`` by running character sums."""
    _naive_guard(basis, n)
    out = np.zeros((n + 1, basis.size), dtype=np.complex128)
    for j in range(n):
        out[j + 1] = out[j] + character_table(basis, np.array([j]))[0]
    return out


def _check_n(basis: VilenkinBasis, n: int, lo: int) -> None:
    if n < lo:
        if lo >= 2:
            raise UndefinedMeanError(f"kernel needs n >= {lo}, got {n}")
        raise OutOfRangeError(f"kernel needs n >= {lo}, got {n}")
    if n > basis.size:
        raise OutOfRangeError(f"n={n} exceeds M_N={basis.size}")


def dirichlet(basis: VilenkinBasis, n: int, method: Method = "spectral") -> GridFunction:
    """``D_n = sum_{k<n} psi_k``."""
    _check_n(basis, n, 0)
    if method == "naive":
        return GridFunction(basis, _naive_dirichlet_stack(basis, n)[n])
    return inverse(Spectrum(basis, dirichlet_profile(n, basis.size)))


def fejer(basis: VilenkinBasis, n: int, method: Method = "spectral") -> GridFunction:
    """``K_n = (1/n) sum_{k=1}^n D_k``."""
    _check_n(basis, n, 1)
    if method == "naive":
        D = _naive_dirichlet_stack(basis, n)
        return GridFunction(basis, D[1:].sum(axis=0) / n)
    return inverse(Spectrum(basis, fejer_profile(n, basis.size)))


def theta(basis: VilenkinBasis, n: int, method: Method = "spectral") -> GridFunction:
    """``theta_n = sum_{j=1}^{n-1} D_j / (n - j)``."""
    _check_n(basis, n, 2)
    if method == "naive":
        D = _naive_dirichlet_stack(basis, n - 1)
        w = 1.0 / (n - np.arange(1, n))
        return GridFunction(basis, w @ D[1:])
    return inverse(Spectrum(basis, theta_profile(n, basis.size)))


def log_kernel(basis: VilenkinBasis, n: int, method: Method = "spectral") -> GridFunction:
    """Kernel ``F_n = theta_n / l_n`` of the logarithmic means."""
    return theta(basis, n, method) / harmonic(n)


_BUILDERS = {"dirichlet": dirichlet, "fejer": fejer, "theta": theta, "log": log_kernel}


def _theta_or_zero(basis: VilenkinBasis, n: int, method: Method) -> GridFunction:
    # theta_1 is the empty sum
    return zeros(basis) if n < 2 else theta(basis, n, method)


def _l_or_zero(n: int) -> float:
    return 0.0 if n < 2 else harmonic(n)


# --- identities ---------------------------------------------------------------

def theta_at_zero(n: int) -> Fraction:
    """``theta_n`` at the zero cell, summed from the definition (``D_j(0) = j``)."""
    if n < 2:
        raise UndefinedMeanError(f"theta needs n >= 2, got {n}")
    L = math.lcm(*range(1, n))
    return Fraction(sum((n - k) * (L // k) for k in range(1, n)), L)


def theta_at_zero_closed(n: int) -> Fraction:
    """``n * l_n - n + 1``."""
    return n * harmonic_exact(n) - n + 1


def shift_identity_check(basis: VilenkinBasis, j: int, n: int, atol: float = 1e-12) -> bool:
    """Check ``D_{j+M_n} = D_{M_n} + psi_{M_n} D_j`` for ``j < M_n`` cellwise."""
    if not 0 <= n < basis.N:
        raise OutOfRangeError(f"rank {n} must satisfy M_n < M_N")
    Mn = basis.M[n]
    if not 0 <= j < Mn or j + Mn > basis.size:
        raise OutOfRangeError(f"need 0 <= j < M_n={Mn} and j + M_n <= M_N, got j={j}")
    lhs = dirichlet(basis, j + Mn)
    rhs = dirichlet(basis, Mn) + character(basis, Mn) * dirichlet(basis, j)
    return lhs.allclose(rhs, atol)


@dataclass(frozen=True, eq=False)
class ThetaSplit:
    A: int
    q: int
    q_prev: int
    theta: GridFunction
    first: GridFunction
    second: GridFunction
    recombination_error: float
    second_norm: float
    abel_bound: float
    printed_bound: float


def abel_bound(q: int, q_prev: int) -> float:
    """L1 bound on the second piece from summation by parts and ``||K_n||_1 <= 2``.

    With ``M = q - q_prev`` the second piece equals
    ``M K_M / q_prev - sum_{j=1}^{M-1} j K_j / ((q-j)(q-j-1))``.
    """
    M = q - q_prev
    j = np.arange(1, M, dtype=np.float64)
    return 2.0 * M / q_prev + 2.0 * math.fsum(j / ((q - j) * (q - j - 1)))


def printed_abel_bound(q: int, q_prev: int) -> float:
    """The looser published form of the bound, kept for comparison."""
    k = np.arange(q_prev, q - 1, dtype=np.float64)
    return 2.0 / (q - 1) + 2.0 * (q - 2) / (q - 1) + 2.0 * math.fsum((q - k) / (k * (k + 1)))


def second_piece_abel(basis: VilenkinBasis, q: int, q_prev: int) -> GridFunction:
    """The second piece rebuilt from Fejer kernels via summation by parts."""
    M = q - q_prev
    out = fejer(basis, M) * (M / q_prev)
    for j in range(1, M):
        out = out - fejer(basis, j) * (j / ((q - j) * (q - j - 1)))
    return out


def theta_split(basis: VilenkinBasis, A: int, method: Method = "spectral") -> ThetaSplit:
    """Split ``theta_{q_A}`` by the summation index ``k`` at ``q_{A-1}``.

    ``first`` is the closed form ``l_{q_{A-1}} D_{M_2A} + r_{2A} theta_{q_{A-1}}``;
    ``second`` is built from its own coefficient profile
    ``H_{q-v-1} - H_{q_{A-1}-1}`` for ``v < M_{2A}``, so their sum against
    ``theta_{q_A}`` is a genuine check.  ``method='naive'`` sums both pieces
    directly over ``k`` instead.
    """
    if A < 1:
        raise OutOfRangeError(f"decomposition needs A >= 1, got {A}")
    q = q_index(basis, A)
    qp = q_index(basis, A - 1)
    M2A = basis.M[2 * A]
    if method == "naive":
        D = _naive_dirichlet_stack(basis, q)
        k1 = np.arange(1, qp)
        k2 = np.arange(qp, q)
        first = GridFunction(basis, (1.0 / k1) @ D[q - k1]) if qp > 1 else zeros(basis)
        second = GridFunction(basis, (1.0 / k2) @ D[q - k2])
        th = GridFunction(basis, (1.0 / np.arange(1, q)) @ D[q - np.arange(1, q)])
    else:
        th = theta(basis, q)
        first = dirichlet(basis, M2A) * _l_or_zero(qp) + character(basis, M2A) * _theta_or_zero(basis, qp, method)
        H = harmonic_numbers(q)
        c = np.zeros(basis.size)
        v = np.arange(M2A)
        c[:M2A] = H[q - v - 1] - H[qp - 1]
        second = inverse(Spectrum(basis, c))
    err = th.max_abs_diff(first + second)
    return ThetaSplit(
        A=A, q=q, q_prev=qp, theta=th, first=first, second=second,
        recombination_error=err, second_norm=norm_p(second, 1),
        abel_bound=abel_bound(q, qp), printed_bound=printed_abel_bound(q, qp),
    )


def iteration_lower_bound(basis: VilenkinBasis, A: int) -> float:
    """``(1/8) sum_{k=1}^{A-1} l_{q_k} / l_{q_A}`` from iterating the one-step estimate."""
    lA = harmonic(q_index(basis, A))
    return math.fsum(harmonic(q_index(basis, k)) for k in range(1, A)) / (8.0 * lA)
