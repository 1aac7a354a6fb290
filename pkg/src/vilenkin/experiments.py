"""Named experiments and the ``vkl`` command line.

Each command returns a :class:`Table` whose metadata records the basis, the
resolution, the full configuration and the conventions in force.  Tables
serialize to CSV (first line ``# vkl-meta: {json}``) or JSON; identical
configuration and seed give identical bytes.

Exit codes: 0 success, 1 precondition or configuration error, 2 a checked
invariant failed (the table is still written).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, ResolutionTooLargeError, VilenkinError
from .group import VilenkinBasis, build_basis, harmonic, q_index
from .hardy import (build_alpha, greedy_alpha, h1_norm, divergence_split, sharpness_function,
                    sharpness_identity, trichotomy_error, trichotomy_indices)
from .kernels import fejer, iteration_lower_bound, theta_split
from .means import WeightFunction, maximal_pairs, partial_sum_maximals
from .signal import GridFunction, norm_p
from .transform import Spectrum, inverse

IDENTITY_TOL = 1e-10
NORM_SLACK = 1e-12
DOMINATION_RTOL = 1e-12

CONVENTIONS = {
    "harmonic_sum": "l_n = sum_{k=1}^{n-1} 1/k",
    "mean_ranges": "k = 1..n-1",
    "norlund_normalizer": "sum of used weights",
    "atom_bound": "||a||_inf <= 1/mu(I)",
    "transform_normalization": "forward carries 1/M_N",
}


@dataclass
class ExperimentConfig:
    command: str
    base: tuple[int, ...] = (2,)
    resolution: int = 10
    a_max: int | None = None
    k_max: int | None = None
    nk_range: tuple[int, int] | None = None
    phi: str | None = None
    n_max: int | None = None
    mode: str = "strict"
    samples: int = 100
    seed: int | None = None
    format: str = "csv"
    out: str | None = None

    def basis(self) -> VilenkinBasis:
        return build_basis(self.base, self.resolution)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["base"] = list(self.base)
        d["nk_range"] = list(self.nk_range) if self.nk_range else None
        d.pop("out")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        d["base"] = tuple(d["base"])
        if d.get("nk_range") is not None:
            d["nk_range"] = tuple(d["nk_range"])
        return cls(**d)


@dataclass
class Table:
    meta: dict
    columns: list[str]
    types: list[str]
    rows: list[list]
    failures: list[str] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    @property
    def config(self) -> ExperimentConfig:
        return ExperimentConfig.from_dict(self.meta["config"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# vkl-meta: " + json.dumps(self.meta, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v, t) for v, t in zip(row, self.types)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"meta": self.meta, "columns": self.columns, "types": self.types,
                           "rows": self.rows}, sort_keys=True, indent=1) + "\n"

    def dumps(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()

    @classmethod
    def from_csv(cls, text: str) -> Table:
        first, _, rest = text.partition("\n")
        prefix = "# vkl-meta: "
        if not first.startswith(prefix):
            raise ValueError("missing vkl-meta header line")
        meta = json.loads(first[len(prefix):])
        rows = list(csv.reader(io.StringIO(rest)))
        columns, body = rows[0], rows[1:]
        types = meta["column_types"]
        return cls(meta, columns, types, [[_parse(v, t) for v, t in zip(r, types)] for r in body])

    @classmethod
    def from_json(cls, text: str) -> Table:
        d = json.loads(text)
        return cls(d["meta"], d["columns"], d["types"], d["rows"])


def _fmt(v, t: str) -> str:
    if t == "float":
        return format(float(v), ".17g")
    if t == "bool":
        return "true" if v else "false"
    return str(v)


def _parse(s: str, t: str):
    if t == "float":
        return float(s)
    if t == "int":
        return int(s)
    if t == "bool":
        return s == "true"
    return s


def _table(cfg: ExperimentConfig, basis: VilenkinBasis, spec: Sequence[tuple[str, str]],
           rows: list[list], summary: dict, notes: list[str], failures: list[str]) -> Table:
    columns = [c for c, _ in spec]
    types = [t for _, t in spec]
    meta = {
        "tool": "vkl",
        "command": cfg.command,
        "config": cfg.to_dict(),
        "basis": basis.describe(),
        "conventions": CONVENTIONS,
        "column_types": types,
        "summary": summary,
        "notes": notes,
        "failures": failures,
    }
    return Table(meta, columns, types, rows, failures)


# --- commands -----------------------------------------------------------------

def cmd_kernel_growth(cfg: ExperimentConfig) -> Table:
    """Growth of ``||F_{q_A}||_1`` along the special indices."""
    b = cfg.basis()
    top = (b.N - 1) // 2
    a_max = top if cfg.a_max is None else cfg.a_max
    if not 1 <= a_max <= top:
        raise ConfigError(f"--a-max must lie in [1, {top}] at resolution {b.N}")
    rows, failures = [], []
    prev = -math.inf
    for A in range(1, a_max + 1):
        q = q_index(b, A)
        split = theta_split(b, A)
        nF = norm_p(split.theta, 1) / harmonic(q)
        ratio = nF / math.log(q)
        rows.append([A, q, harmonic(q), nF, math.log(q), ratio, iteration_lower_bound(b, A),
                     split.second_norm, split.abel_bound, split.printed_bound, split.recombination_error])
        if not nF > prev:
            failures.append(f"A={A}: ||F_q||_1 = {nF!r} does not exceed the previous row")
        if split.recombination_error > IDENTITY_TOL:
            failures.append(f"A={A}: theta split recombination error {split.recombination_error:.3e}")
        if split.second_norm > split.abel_bound:
            failures.append(f"A={A}: ||II||_1 exceeds its summation-by-parts bound")
        prev = nF
    ratios = [r[5] for r in rows]
    summary = {"ratio_floor": min(ratios), "max_II_norm": max(r[7] for r in rows)}
    spec = [("A", "int"), ("q_A", "int"), ("l_q", "float"), ("norm_F", "float"), ("log_q", "float"),
            ("ratio", "float"), ("iteration_bound", "float"), ("norm_II", "float"),
            ("II_abel_bound", "float"), ("II_printed_bound", "float"), ("recombination_error", "float")]
    notes = ["iteration_bound is reported, not asserted: its one-step constant holds only for large A"]
    return _table(cfg, b, spec, rows, summary, notes, failures)


def cmd_fejer_bound(cfg: ExperimentConfig) -> Table:
    b = cfg.basis()
    n_max = b.size if cfg.n_max is None else cfg.n_max
    if not 1 <= n_max <= b.size:
        raise ConfigError(f"--n-max must lie in [1, {b.size}]")
    rows = [[n, norm_p(fejer(b, n), 1)] for n in range(1, n_max + 1)]
    worst = max(r[1] for r in rows)
    failures = [] if worst <= 2 + NORM_SLACK else [f"max ||K_n||_1 = {worst!r} exceeds 2"]
    return _table(cfg, b, [("n", "int"), ("norm_K", "float")], rows,
                  {"max_norm_K": worst, "argmax_n": max(rows, key=lambda r: r[1])[0]}, [], failures)


def cmd_divergence(cfg: ExperimentConfig) -> Table:
    """Components of ``L_{q_{alpha_k}} f`` for the divergent construction."""
    b = cfg.basis()
    if cfg.mode not in ("strict", "relaxed"):
        raise ConfigError(f"--mode must be strict or relaxed, got {cfg.mode!r}")
    if cfg.mode == "strict":
        K = 1 if cfg.k_max is None else cfg.k_max
    else:
        K = (b.N - 1) // 2 - 1 if cfg.k_max is None else cfg.k_max
    try:
        spec = build_alpha(b, K, cfg.mode)
    except VilenkinError as e:
        raise ConfigError(str(e)) from e
    notes = []
    if cfg.mode == "strict":
        try:
            nxt = greedy_alpha(b.pattern, K + 1)[-1]
            notes.append(f"strict construction stops at K={K}: the next term alpha_{K + 1} = {nxt} "
                         f"needs resolution {2 * nxt + 1}")
        except ResolutionTooLargeError as e:
            notes.append(f"strict construction stops at K={K}: {e}")
    else:
        notes.extend(spec.violations)
    rows, failures = [], []
    for k in range(len(spec.alpha)):
        s = divergence_split(spec, k)
        r = s.row()
        rows.append([k, r["alpha_k"], r["q"], r["norm_L"], r["norm_I"], r["norm_II1"], r["norm_II2"],
                     s.low_bound, s.carry_bound, r["recombination_error"], r["II2_closed_form_error"],
                     cfg.mode == "relaxed"])
        if s.recombination_error > IDENTITY_TOL:
            failures.append(f"k={k}: recombination error {s.recombination_error:.3e}")
        if s.tail_closed_error > IDENTITY_TOL:
            failures.append(f"k={k}: II_2 closed form error {s.tail_closed_error:.3e}")
        if r["norm_I"] > s.low_bound + NORM_SLACK or r["norm_II1"] > s.carry_bound + NORM_SLACK:
            failures.append(f"k={k}: a component norm exceeds its bound")
    summary = {"alpha": list(spec.alpha), "inverse_sqrt_partial_sums": spec.inverse_sqrt_partial_sums()}
    spec_cols = [("k", "int"), ("alpha_k", "int"), ("q", "int"), ("norm_L", "float"), ("norm_I", "float"),
                 ("norm_II1", "float"), ("norm_II2", "float"), ("I_bound", "float"), ("II1_bound", "float"),
                 ("recombination_error", "float"), ("II2_closed_form_error", "float"), ("relaxed", "bool")]
    return _table(cfg, b, spec_cols, rows, summary, notes, failures)


def _nk_range(cfg: ExperimentConfig, b: VilenkinBasis) -> range:
    top = (b.N - 1) // 2
    lo, hi = cfg.nk_range if cfg.nk_range else (1, top)
    if not 1 <= lo <= hi <= top:
        raise ConfigError(f"--nk-range must lie within 1..{top} at resolution {b.N}")
    return range(lo, hi + 1)


def cmd_sharpness(cfg: ExperimentConfig) -> Table:
    b = cfg.basis()
    phi = WeightFunction.parse(cfg.phi or "sqrt-log")
    if not phi.satisfies_divergence_condition():
        raise ConfigError(f"phi = {phi} grows like log(n+1)^{phi.log_growth_exponent()}, "
                          "so limsup log(n+1)/phi(n) is finite; the sharpness construction needs it infinite")
    rows, failures = [], []
    for n in _nk_range(cfg, b):
        ident = sharpness_identity(b, n)
        f = sharpness_function(b, n)
        tri = trichotomy_error(b, n, trichotomy_indices(b, n))
        ratio = ident.mean_norm / float(phi(ident.q))
        rows.append([n, ident.q, ident.q_prev, h1_norm(f), ident.mean_norm, ratio,
                     ident.residual, ident.shifted_residual, tri])
        if ident.residual > IDENTITY_TOL:
            failures.append(f"n_k={n}: identity residual {ident.residual:.3e}")
        if tri > IDENTITY_TOL:
            failures.append(f"n_k={n}: partial-sum trichotomy error {tri:.3e}")
    spec = [("n_k", "int"), ("q", "int"), ("q_prev", "int"), ("h1_norm", "float"), ("norm_L", "float"),
            ("ratio", "float"), ("identity_residual", "float"), ("shifted_index_residual", "float"),
            ("trichotomy_error", "float")]
    notes = ["identity uses the previous special index q_prev = q - M_{2 n_k}; "
             "shifted_index_residual compares against index q - 1 instead"]
    return _table(cfg, b, spec, rows, {"phi": str(phi)}, notes, failures)


def random_functions(basis: VilenkinBasis, count: int, seed: int) -> list[GridFunction]:
    """Inverse transforms of independent standard complex Gaussian spectra."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        c = (rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)) / math.sqrt(2)
        f = inverse(Spectrum(basis, c))
        if np.any(f.values != 0):
            out.append(f)
    return out


def _require_seed(cfg: ExperimentConfig) -> int:
    if cfg.seed is None:
        raise ConfigError("randomized experiments need --seed")
    return cfg.seed


def cmd_maximal_ratio(cfg: ExperimentConfig) -> Table:
    """H1-normalized weighted maximal operators of partial sums and log means."""
    b = cfg.basis()
    seed = _require_seed(cfg)
    phi = WeightFunction.parse(cfg.phi or "log1p")
    n_max = b.size if cfg.n_max is None else cfg.n_max
    if not 2 <= n_max <= b.size:
        raise ConfigError(f"--n-max must lie in [2, {b.size}]")
    if cfg.samples < 1:
        raise ConfigError("--samples must be positive")
    fs = random_functions(b, cfg.samples, seed)
    rows, failures = [], []
    batch = 8
    for start in range(0, len(fs), batch):
        chunk = fs[start:start + batch]
        for i, (f, pair) in enumerate(zip(chunk, maximal_pairs(chunk, n_max, phi)), start):
            h = h1_norm(f)
            s, l = pair.partial.values.real, pair.log.values.real
            bad = int(np.count_nonzero(l > s * (1 + DOMINATION_RTOL)))
            nl, ns = norm_p(pair.log, 1), norm_p(pair.partial, 1)
            rows.append([i, h, nl, ns, nl / h, ns / h, bad, bad == 0])
            if bad:
                failures.append(f"sample {i}: {bad} cells where the log-mean maximal exceeds the partial-sum one")
    summary = {"max_L_ratio": max(r[4] for r in rows), "max_S_ratio": max(r[5] for r in rows),
               "violations": sum(r[6] for r in rows)}
    spec = [("sample", "int"), ("h1_norm", "float"), ("norm_L_tilde", "float"), ("norm_S_tilde", "float"),
            ("L_ratio", "float"), ("S_ratio", "float"), ("violations", "int"), ("dominated", "bool")]
    return _table(cfg, b, spec, rows, summary, [f"phi = {phi}, n ranges up to {n_max}"], failures)


def cmd_maximal_trend(cfg: ExperimentConfig) -> Table:
    """Partial-sum maximal ratio across resolutions ``N = lo..hi`` (from ``--nk-range``)."""
    seed = _require_seed(cfg)
    phi = WeightFunction.parse(cfg.phi or "log1p")
    lo, hi = cfg.nk_range or (8, cfg.resolution)
    if not 1 <= lo <= hi:
        raise ConfigError("resolution range must satisfy 1 <= lo <= hi")
    rows = []
    for N in range(lo, hi + 1):
        b = build_basis(cfg.base, N)
        fs = random_functions(b, cfg.samples, seed + N)
        sups = partial_sum_maximals(fs, b.size, phi)
        ratios = [norm_p(s, 1) / h1_norm(f) for s, f in zip(sups, fs)]
        rows.append([N, b.size, max(ratios), min(ratios), math.fsum(ratios) / len(ratios)])
    maxes = [r[2] for r in rows]
    summary = {"max_over_min": max(maxes) / min(maxes)}
    failures = [] if summary["max_over_min"] <= 2 else ["max S-ratio varies by more than a factor 2"]
    spec = [("N", "int"), ("M_N", "int"), ("max_S_ratio", "float"), ("min_S_ratio", "float"),
            ("mean_S_ratio", "float")]
    b = build_basis(cfg.base, hi)
    return _table(cfg, b, spec, rows, summary, [f"phi = {phi}; seeds are seed + N"], failures)


COMMANDS: dict[str, Callable[[ExperimentConfig], Table]] = {
    "kernel-growth": cmd_kernel_growth,
    "fejer-bound": cmd_fejer_bound,
    "divergence": cmd_divergence,
    "sharpness": cmd_sharpness,
    "maximal-ratio": cmd_maximal_ratio,
    "maximal-trend": cmd_maximal_trend,
}


def run(cfg: ExperimentConfig) -> Table:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"--format must be csv or json, got {cfg.format!r}")
    return COMMANDS[cfg.command](cfg)


# --- CLI ----------------------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vkl", description="Vilenkin kernels, logarithmic means and H1 experiments.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--base", type=_int_list, default=(2,), help="generating pattern, e.g. 2,3")
    p.add_argument("--resolution", type=int, default=10, help="number of coordinates N")
    p.add_argument("--a-max", type=int, help="largest level A (kernel-growth)")
    p.add_argument("--k-max", type=int, help="largest block index K (divergence)")
    p.add_argument("--nk-range", type=_range, help="lo..hi for n_k (sharpness) or N (maximal-trend)")
    p.add_argument("--phi", help="constant | log1p | sqrt-log | pow-log:<g>")
    p.add_argument("--n-max", type=int, help="largest index in sups and sweeps")
    p.add_argument("--mode", choices=("strict", "relaxed"), default="strict")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path; stdout when omitted")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        command=args.command, base=args.base, resolution=args.resolution, a_max=args.a_max,
        k_max=args.k_max, nk_range=args.nk_range, phi=args.phi, n_max=args.n_max, mode=args.mode,
        samples=args.samples, seed=args.seed, format=args.format, out=args.out,
    )
    try:
        table = run(cfg)
    except (VilenkinError, ValueError) as e:
        print(f"vkl: error: {e}", file=sys.stderr)
        return 1
    text = table.dumps(cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    for msg in table.failures:
        print(f"vkl: check failed: {msg}", file=sys.stderr)
    return 2 if table.failures else 0


if __name__ == "__main__":
    sys.exit(main())
