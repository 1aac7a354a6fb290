"""Martingale maximal function, H1 norms, 1-atoms and the two counterexamples.

Martingales are represented by their rank-N truncations.  A logarithmic mean
``L_n`` of such a truncation is exact whenever ``n <= M_N``.

Atoms use the bound ``||a||_inf <= 1/mu(I)``.
"""
from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidAtomError, OutOfRangeError, ResolutionTooLargeError
from .group import VilenkinBasis, build_basis, harmonic, harmonic_numbers, q_index
from .kernels import dirichlet, theta
from .signal import GridFunction, constant, cylinder_indicator, norm_p, restrict_mean, zeros
from .transform import Spectrum, character, forward, inverse
from .means import log_mean, partial_sum

MEAN_TOL = 1e-14


def maximal_function(f: GridFunction) -> GridFunction:
    """``f*(x) = sup_n |mean of f over I_n(x)|``, ranks ``0..N``."""
    out = np.zeros(f.basis.size)
    for n in range(f.basis.N + 1):
        np.maximum(out, np.abs(restrict_mean(f, n).values), out=out)
    return GridFunction(f.basis, out)


def h1_norm(f: GridFunction) -> float:
    return norm_p(maximal_function(f), 1)


# --- atoms --------------------------------------------------------------------

@dataclass(frozen=True)
class Cylinder:
    """``I_rank(x)`` for the point with index ``point``; only ``point mod M_rank`` matters."""

    rank: int
    point: int = 0

    def measure(self, basis: VilenkinBasis) -> float:
        return 1.0 / basis.M[self.rank]

    def indicator(self, basis: VilenkinBasis) -> GridFunction:
        return cylinder_indicator(basis, self.rank, self.point)


@dataclass(frozen=True, eq=False)
class Atom:
    values: GridFunction
    support: Cylinder | None = None
    is_unit: bool = False

    @classmethod
    def unit(cls, basis: VilenkinBasis) -> Atom:
        return cls(constant(basis, 1.0), None, True)


@dataclass
class AtomReport:
    valid: bool
    violations: list[str] = field(default_factory=list)


def validate_atom(a: Atom) -> AtomReport:
    b = a.values.basis
    v = a.values.values
    if a.is_unit:
        ok = bool(np.all(v == 1.0))
        return AtomReport(ok, [] if ok else ["unit atom is not identically 1"])
    if a.support is None:
        return AtomReport(False, ["non-unit atom needs a support cylinder"])
    if not 0 <= a.support.rank <= b.N:
        raise OutOfRangeError(f"support rank {a.support.rank} exceeds resolution {b.N}")
    inside = a.support.indicator(b).values.real.astype(bool)
    problems = []
    if np.any(v[~inside] != 0):
        problems.append("support: nonzero values outside the cylinder")
    # integral over I, relative to mu(I) * ||a||_inf so the test is scale-free
    Mr = b.M[a.support.rank]
    mean_on_I = abs(v[inside].sum()) / b.size
    if mean_on_I > MEAN_TOL * max(1.0, np.abs(v).max(initial=0.0) / Mr):
        problems.append(f"mean: integral over the cylinder is {mean_on_I:.3e}, not 0")
    sup = float(np.abs(v).max(initial=0.0))
    if sup > Mr * (1 + 1e-14):
        problems.append(f"sup: ||a||_inf = {sup!r} exceeds 1/mu(I) = {Mr}")
    return AtomReport(not problems, problems)


def block_atom(basis: VilenkinBasis, k: int) -> Atom:
    """``(D_{M_{k+1}} - D_{M_k}) / m_k``, supported on ``I_k``."""
    if not 0 <= k < basis.N:
        raise OutOfRangeError(f"block atom needs 0 <= k < N, got {k}")
    # D_{M_j} = M_j 1_{I_j}, written exactly
    vals = (cylinder_indicator(basis, k + 1) * basis.M[k + 1]
            - cylinder_indicator(basis, k) * basis.M[k]) / basis.m[k]
    return Atom(vals, Cylinder(k, 0))


@dataclass(frozen=True, eq=False)
class Decomposition:
    bound: float
    function: GridFunction
    h1: float

    @property
    def ratio(self) -> float:
        """``h1 / bound``; the empirical constant of the atomic characterization."""
        return self.h1 / self.bound if self.bound else math.nan


def decomposition_bound(terms: Sequence[tuple[float, Atom]], basis: VilenkinBasis | None = None) -> Decomposition:
    """Assemble ``sum mu_k a_k`` and return ``sum |mu_k|`` alongside its H1 norm."""
    if not terms:
        if basis is None:
            raise ValueError("an empty decomposition needs an explicit basis")
        return Decomposition(0.0, zeros(basis), 0.0)
    b = terms[0][1].values.basis
    acc = np.zeros(b.size, dtype=np.complex128)
    for mu, a in terms:
        rep = validate_atom(a)
        if not rep.valid:
            raise InvalidAtomError("; ".join(rep.violations))
        acc += mu * a.values.values
    f = GridFunction(b, acc)
    return Decomposition(math.fsum(abs(mu) for mu, _ in terms), f, h1_norm(f))


# --- divergence construction ----------------------------------------------------

_CTX = decimal.Context(prec=60, Emax=decimal.MAX_EMAX)


def _power(pattern: Sequence[int], k: int) -> decimal.Decimal:
    """Generalized power ``M_k`` of the cyclic pattern, beyond any resolution, to 60 digits."""
    full, rest = divmod(k, len(pattern))
    return _CTX.multiply(_CTX.power(decimal.Decimal(math.prod(pattern)), full),
                         decimal.Decimal(math.prod(pattern[:rest])))


def _weight(pattern: Sequence[int], alpha: int) -> decimal.Decimal:
    """``M_{2 alpha} / sqrt(alpha)``."""
    return _CTX.divide(_power(pattern, 2 * alpha), _CTX.sqrt(decimal.Decimal(alpha)))


def alpha_violations(pattern: Sequence[int], alpha: Sequence[int]) -> list[str]:
    """Failures of the lacunarity conditions.

    ``sum_{eta<k} M_{2a_eta}/sqrt(a_eta) < M_{2a_k}/sqrt(a_k)`` (growth) and
    ``M_{2a_{k-1}}/sqrt(a_{k-1}) < a_k`` (gap).
    """
    out = []
    total = decimal.Decimal(0)
    for k, a in enumerate(alpha):
        w = _weight(pattern, a)
        if not total < w:
            out.append(f"k={k}: growth condition fails ({total:.6g} >= {w:.6g})")
        if k > 0 and not _weight(pattern, alpha[k - 1]) < a:
            out.append(f"k={k}: gap condition fails ({_weight(pattern, alpha[k - 1]):.6g} >= {a})")
        total = _CTX.add(total, w)
    return out


@dataclass(frozen=True)
class CounterexampleSpec:
    alpha: tuple[int, ...]
    mode: Literal["strict", "relaxed"]
    basis: VilenkinBasis

    def __post_init__(self):
        if not self.alpha or any(a < 1 for a in self.alpha):
            raise ValueError("alpha must be a nonempty sequence of positive integers")
        if any(x >= y for x, y in zip(self.alpha, self.alpha[1:])):
            raise ValueError(f"alpha must be strictly increasing, got {self.alpha}")
        if self.mode not in ("strict", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "strict" and self.violations:
            raise ValueError("strict alpha violates: " + "; ".join(self.violations))

    @property
    def violations(self) -> list[str]:
        return alpha_violations(self.basis.pattern, self.alpha)

    def inverse_sqrt_partial_sums(self) -> list[float]:
        return list(np.cumsum([a**-0.5 for a in self.alpha]))

    def to_json(self) -> str:
        return json.dumps({
            "alpha": list(self.alpha), "mode": self.mode,
            "pattern": list(self.basis.pattern), "resolution": self.basis.N,
        })

    @classmethod
    def from_json(cls, text: str) -> CounterexampleSpec:
        d = json.loads(text)
        return cls(tuple(d["alpha"]), d["mode"], build_basis(d["pattern"], d["resolution"]))


ALPHA_CAP = 10**6


def greedy_alpha(pattern: Sequence[int], K: int, cap: int = ALPHA_CAP) -> list[int]:
    """Least sequence with ``alpha_0 = 1`` meeting both lacunarity conditions.

    Terms beyond ``cap`` lie past any resolution and raise instead of being searched.
    """
    alpha = [1]
    total = _weight(pattern, 1)
    for k in range(1, K + 1):
        w_prev = _weight(pattern, alpha[-1])
        if w_prev >= cap:
            raise ResolutionTooLargeError(
                f"alpha_{k} > {w_prev:.4e} lies beyond any resolution (alpha so far {alpha})")
        cand = max(alpha[-1] + 1, int(w_prev.to_integral_value(decimal.ROUND_FLOOR)) + 1)
        while not total < _weight(pattern, cand):
            cand += 1
        alpha.append(cand)
        total = _CTX.add(total, _weight(pattern, cand))
    return alpha


def build_alpha(basis: VilenkinBasis, K: int, mode: Literal["strict", "relaxed"] = "strict") -> CounterexampleSpec:
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    alpha = greedy_alpha(basis.pattern, K) if mode == "strict" else list(range(1, K + 2))
    need = 2 * alpha[-1] + 1
    if need > basis.N:
        raise ResolutionTooLargeError(
            f"alpha_{K} = {alpha[-1]} needs resolution {need}, have {basis.N} (alpha = {alpha})")
    return CounterexampleSpec(tuple(alpha), mode, basis)


def divergent_spectrum(spec: CounterexampleSpec) -> np.ndarray:
    b = spec.basis
    if 2 * spec.alpha[-1] + 1 > b.N:
        raise ResolutionTooLargeError(f"need resolution {2 * spec.alpha[-1] + 1}, have {b.N}")
    c = np.zeros(b.size)
    for a in spec.alpha:
        c[b.M[2 * a]: b.M[2 * a + 1]] = a**-0.5
    return c


def divergent_function(spec: CounterexampleSpec) -> GridFunction:
    """Coefficients ``1/sqrt(alpha_k)`` on each block ``[M_{2 alpha_k}, M_{2 alpha_k + 1})``."""
    return inverse(Spectrum(spec.basis, divergent_spectrum(spec)))


def divergent_atoms(spec: CounterexampleSpec) -> list[tuple[float, Atom]]:
    """The construction as ``sum lambda_k a_k`` with ``lambda_k = m_{2 alpha_k} / sqrt(alpha_k)``."""
    b = spec.basis
    return [(b.m[2 * a] / math.sqrt(a), block_atom(b, 2 * a)) for a in spec.alpha]


@dataclass(frozen=True, eq=False)
class DivergenceSplit:
    """``L_q f = I + II_1 + II_2`` at ``q = q_{alpha_k}``."""

    k: int
    alpha_k: int
    q: int
    q_prev: int
    mean: GridFunction
    low: GridFunction
    carry: GridFunction
    tail: GridFunction
    tail_closed: GridFunction
    recombination_error: float
    tail_closed_error: float
    low_bound: float
    carry_bound: float

    def row(self) -> dict:
        return {
            "k": self.k, "alpha_k": self.alpha_k, "q": self.q,
            "norm_L": norm_p(self.mean, 1), "norm_I": norm_p(self.low, 1),
            "norm_II1": norm_p(self.carry, 1), "norm_II2": norm_p(self.tail, 1),
            "recombination_error": self.recombination_error,
            "II2_closed_form_error": self.tail_closed_error,
        }


def divergence_split(spec: CounterexampleSpec, k: int) -> DivergenceSplit:
    """Split the summation range of ``L_{q_{alpha_k}} f`` at ``M_{2 alpha_k}``.

    ``I`` collects ``j < M``; on ``j >= M`` the partial sum is the completed
    lower blocks (``II_1``) plus the running block (``II_2``).  ``II_2`` is built
    from its own coefficients and compared with ``psi_M theta_{q'} / (l_q sqrt(alpha_k))``
    where ``q' = q - M`` is the previous special index.
    """
    b = spec.basis
    f = divergent_function(spec)
    a = spec.alpha[k]
    q = q_index(b, a)
    M = b.M[2 * a]
    qp = q - M
    H = harmonic_numbers(q)
    lq = H[q - 1]

    mean = log_mean(f, q)
    fc = forward(f).coeffs

    c_low = np.zeros(b.size)
    v = np.arange(M - 1)
    c_low[: M - 1] = (H[q - v - 1] - H[q - M]) / lq
    low = inverse(Spectrum(b, c_low * fc))

    carry = partial_sum(f, M) * (H[qp] / lq)

    c_tail = np.zeros(b.size)
    v = np.arange(M, q - 1)
    c_tail[M: q - 1] = H[q - v - 1] / (lq * math.sqrt(a))
    tail = inverse(Spectrum(b, c_tail))

    if qp >= 2:
        tail_closed = character(b, M) * theta(b, qp) / (lq * math.sqrt(a))
    else:
        tail_closed = zeros(b)

    lower = spec.alpha[:k]
    sup_lower = math.fsum((b.M[2 * e + 1] - b.M[2 * e]) / math.sqrt(e) for e in lower)
    low_bound = sup_lower * (H[q - 1] - H[qp]) / lq
    carry_bound = (H[qp] / lq) * math.fsum(2.0 / math.sqrt(e) for e in lower)

    return DivergenceSplit(
        k=k, alpha_k=a, q=q, q_prev=qp, mean=mean, low=low, carry=carry, tail=tail,
        tail_closed=tail_closed,
        recombination_error=mean.max_abs_diff(low + carry + tail),
        tail_closed_error=tail.max_abs_diff(tail_closed),
        low_bound=low_bound, carry_bound=carry_bound,
    )


# --- sharpness construction ---------------------------------------------------

def sharpness_function(basis: VilenkinBasis, n_k: int) -> GridFunction:
    """``D_{M_{2n+1}} - D_{M_{2n}}``."""
    if n_k < 0 or 2 * n_k + 1 > basis.N:
        raise ResolutionTooLargeError(f"n_k={n_k} needs resolution {2 * n_k + 1}, have {basis.N}")
    return dirichlet(basis, basis.M[2 * n_k + 1]) - dirichlet(basis, basis.M[2 * n_k])


def trichotomy_indices(basis: VilenkinBasis, n_k: int, extra: int = 0, seed: int = 0) -> list[int]:
    """Boundary indices of the partial-sum trichotomy plus ``extra`` random ones."""
    lo, hi = basis.M[2 * n_k], basis.M[2 * n_k + 1]
    picks = {0, 1, lo - 1, lo, lo + 1, lo + 2, (lo + hi) // 2, hi - 1, hi, hi + 1, basis.size}
    rng = np.random.default_rng(seed)
    picks.update(int(i) for i in rng.integers(0, basis.size + 1, size=extra))
    return sorted(i for i in picks if 0 <= i <= basis.size)


def trichotomy_error(basis: VilenkinBasis, n_k: int, indices: Sequence[int]) -> float:
    """Max deviation of ``S_i f`` from ``0`` / ``D_i - D_M`` / ``f`` over ``indices``."""
    f = sharpness_function(basis, n_k)
    lo, hi = basis.M[2 * n_k], basis.M[2 * n_k + 1]
    dlo = dirichlet(basis, lo)
    worst = 0.0
    for i in indices:
        s = partial_sum(f, i)
        if i <= lo:
            expected = zeros(basis)
        elif i < hi:
            expected = dirichlet(basis, i) - dlo
        else:
            expected = f
        worst = max(worst, s.max_abs_diff(expected))
    return worst


@dataclass(frozen=True)
class SharpnessIdentity:
    n_k: int
    q: int
    q_prev: int
    residual: float
    shifted_residual: float
    mean_norm: float


def sharpness_identity(basis: VilenkinBasis, n_k: int) -> SharpnessIdentity:
    """Compare ``|L_q f|`` with ``(l_{q'}/l_q)|F_{q'}|`` where ``q' = q_{n_k - 1}``.

    ``shifted_residual`` is the same comparison at ``q - 1``, which the
    derivation does not produce; it is reported for contrast.
    """
    if n_k < 1:
        raise OutOfRangeError(f"n_k must be >= 1, got {n_k}")
    f = sharpness_function(basis, n_k)
    q = q_index(basis, n_k)
    qp = q_index(basis, n_k - 1)
    lq = harmonic(q)
    mean = np.abs(log_mean(f, q).values)
    # (l_{q'}/l_q) |F_{q'}| = |theta_{q'}| / l_q, and theta_1 = 0
    rhs = np.abs(theta(basis, qp).values) / lq if qp >= 2 else np.zeros(basis.size)
    alt = np.abs(theta(basis, q - 1).values) / lq
    return SharpnessIdentity(
        n_k=n_k, q=q, q_prev=qp,
        residual=float(np.max(np.abs(mean - rhs))),
        shifted_residual=float(np.max(np.abs(mean - alt))),
        mean_norm=float(math.fsum(mean) / basis.size),
    )
