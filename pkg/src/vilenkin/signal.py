"""Functions on ``G_m`` that are constant on rank-N cylinders.

Cell ``t`` of a :class:`GridFunction` is the cylinder ``I_N(x)`` of the point
whose digits encode ``t``.  Every cell has Haar measure ``1 / M_N``, so
integrals are plain means and Lp norms are exact.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import IncompatibleOperandsError, InvalidExponentError, OutOfRangeError
from .group import VilenkinBasis, build_basis


@dataclass(frozen=True, eq=False)
class GridFunction:
    basis: VilenkinBasis
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if v.shape[0] != self.basis.size:
            raise ValueError(f"expected {self.basis.size} values, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __add__(self, other: GridFunction) -> GridFunction:
        return add(self, other)

    def __sub__(self, other: GridFunction) -> GridFunction:
        return add(self, scale(other, -1.0))

    def __neg__(self) -> GridFunction:
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, c) -> GridFunction:
        return scale(self, 1.0 / c)

    def __abs__(self) -> GridFunction:
        return modulus(self)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def allclose(self, other: GridFunction, atol: float = 1e-10) -> bool:
        _check_compatible(self, other)
        return bool(np.max(np.abs(self.values - other.values), initial=0.0) <= atol)

    def max_abs_diff(self, other: GridFunction) -> float:
        _check_compatible(self, other)
        return float(np.max(np.abs(self.values - other.values), initial=0.0))


def constant(basis: VilenkinBasis, c: complex = 1.0) -> GridFunction:
    return GridFunction(basis, np.full(basis.size, c, dtype=np.complex128))


def zeros(basis: VilenkinBasis) -> GridFunction:
    return constant(basis, 0.0)


def cylinder_indicator(basis: VilenkinBasis, rank: int, point: int = 0) -> GridFunction:
    """Indicator of ``I_rank(x)`` where ``x`` is the point with index ``point``."""
    if not 0 <= rank <= basis.N:
        raise OutOfRangeError(f"rank {rank} outside [0, {basis.N}]")
    Mn = basis.M[rank]
    t = np.arange(basis.size)
    return GridFunction(basis, (t % Mn == point % Mn).astype(np.complex128))


def _check_compatible(*fs: GridFunction) -> None:
    b = fs[0].basis
    for g in fs[1:]:
        if g.basis != b:
            raise IncompatibleOperandsError("operands live on different bases or resolutions")


def integrate(f: GridFunction) -> complex:
    return complex(math.fsum(f.values.real) / f.basis.size, math.fsum(f.values.imag) / f.basis.size)


def norm_p(f: GridFunction, p: float = 1.0) -> float:
    """Lp (quasi-)norm for ``0 < p <= inf``."""
    if not p > 0:
        raise InvalidExponentError(f"exponent must be positive, got {p}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max(initial=0.0))
    if p == 1:
        return math.fsum(a) / f.basis.size
    if p == 2:
        return math.sqrt(math.fsum(a * a) / f.basis.size)
    return (math.fsum(a**p) / f.basis.size) ** (1.0 / p)


def norm_1_exact(basis: VilenkinBasis, values: Sequence[Fraction | int]) -> Fraction:
    """Exact L1 norm of a real grid function given by rational cell values."""
    if len(values) != basis.size:
        raise ValueError(f"expected {basis.size} values, got {len(values)}")
    return sum((abs(Fraction(v)) for v in values), Fraction(0)) / basis.size


def add(f: GridFunction, g: GridFunction) -> GridFunction:
    _check_compatible(f, g)
    return GridFunction(f.basis, f.values + g.values)


def scale(f: GridFunction, c: complex) -> GridFunction:
    return GridFunction(f.basis, c * f.values)


def multiply(f: GridFunction, g: GridFunction) -> GridFunction:
    _check_compatible(f, g)
    return GridFunction(f.basis, f.values * g.values)


def modulus(f: GridFunction) -> GridFunction:
    return GridFunction(f.basis, np.abs(f.values))


def sup_envelope(fs: Iterable[GridFunction]) -> GridFunction:
    fs = list(fs)
    if not fs:
        raise ValueError("sup_envelope of an empty family")
    _check_compatible(*fs)
    out = np.abs(fs[0].values)
    for g in fs[1:]:
        np.maximum(out, np.abs(g.values), out=out)
    return GridFunction(fs[0].basis, out)


def restrict_mean(f: GridFunction, n: int) -> GridFunction:
    """Average of ``f`` over ``I_n(x)``, as a function of ``x``.

    Points in the same rank-n cylinder share ``t mod M_n``.
    """
    b = f.basis
    if not 0 <= n <= b.N:
        raise OutOfRangeError(f"rank {n} outside [0, {b.N}]")
    Mn = b.M[n]
    means = f.values.reshape(-1, Mn).mean(axis=0)
    return GridFunction(b, np.tile(means, b.size // Mn))


# --- debug dumps --------------------------------------------------------------

def to_csv(f: GridFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "re", "im"])
    for t, z in enumerate(f.values):
        w.writerow([t, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def from_csv(text: str, basis: VilenkinBasis) -> GridFunction:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["t", "re", "im"]:
        raise ValueError(f"bad header {rows[0]!r}")
    values = np.zeros(basis.size, dtype=np.complex128)
    ts = []
    for t, re, im in rows[1:]:
        ts.append(int(t))
        values[int(t)] = complex(float(re), float(im))
    if ts != list(range(basis.size)):
        raise ValueError("rows must list every cell in ascending order")
    return GridFunction(basis, values)


def to_json(f: GridFunction) -> str:
    return json.dumps({
        "basis": {"pattern": list(f.basis.pattern), "resolution": f.basis.N},
        "re": f.values.real.tolist(),
        "im": f.values.imag.tolist(),
    })


def from_json(text: str) -> GridFunction:
    d = json.loads(text)
    basis = build_basis(d["basis"]["pattern"], d["basis"]["resolution"])
    return GridFunction(basis, np.asarray(d["re"]) + 1j * np.asarray(d["im"]))
