"""Parameter-sweep harness pairing analytic values with Monte-Carlo estimates.

A sweep varies one of ``psi_db``, ``rho``, ``M``, ``K``, ``phi_db`` and
produces one row per (point, scheme).  Analytic outage uses the fast
closed/series forms; analytic intercept uses the reference quadrature forms
(the intercept series is asymptotic and not usable across a sweep).  Each
point draws its Monte-Carlo seed from (master seed, point index), so points
can be computed in any order, or concurrently, without changing results.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .analytic import (
    AnalyticConfig,
    ip_dpsr_no_jamming,
    ip_dpsr_quadrature,
    ip_spsr_no_jamming,
    ip_spsr_quadrature,
    op_dpsr,
    op_spsr,
)
from .channel import ChannelStats, derive_seed
from .core import SystemParams
from .montecarlo import SimConfig, simulate_point
from .specfun import NumericalError

__all__ = [
    "SWEEP_VARIABLES",
    "SchemePoint",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "CompareReport",
    "sweep_values",
    "run_sweep",
    "compare_report",
    "write_csv",
    "read_csv",
]

SWEEP_VARIABLES = ("psi_db", "rho", "M", "K", "phi_db")

_CSV_FIELDS = ("scheme", "op_analytic", "op_mc", "op_ci",
               "ip_analytic", "ip_mc", "ip_ci", "runtime_ms", "error")


@dataclass(frozen=True)
class SchemePoint:
    """One curve of a sweep: static splitting at a fixed rho, or dynamic.

    ``rho=None`` on a static-splitting scheme means the swept variable
    supplies rho (only valid in a rho sweep).
    """

    kind: str
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in ("spsr", "dpsr"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "dpsr" and self.rho is not None:
            raise ValueError("dynamic splitting takes no rho")

    @property
    def label(self) -> str:
        if self.kind == "spsr" and self.rho is not None:
            return f"spsr@{self.rho:g}"
        return self.kind


@dataclass(frozen=True)
class SweepSpec:
    """Full description of a sweep: grid, fixed parameters, and outputs."""

    variable: str
    start: float
    stop: float
    step: float
    params: SystemParams
    stats: ChannelStats
    sim: SimConfig
    schemes: tuple[SchemePoint, ...] = (SchemePoint("spsr", 0.5), SchemePoint("dpsr"))
    outputs: str = "both"
    analytic: AnalyticConfig = field(default_factory=AnalyticConfig)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.start > self.stop:
            raise ValueError("need start <= stop")
        if self.outputs not in ("op", "ip", "both"):
            raise ValueError(f"outputs must be op, ip or both, got {self.outputs!r}")
        if not self.schemes:
            raise ValueError("need at least one scheme")
        if self.variable == "rho":
            if not (0 < self.start and self.stop < 1):
                raise ValueError("rho sweeps must stay inside the open interval (0, 1)")
            for sp in self.schemes:
                if sp.kind == "spsr" and sp.rho is not None:
                    raise ValueError("rho sweep supplies rho; use SchemePoint('spsr')")
        else:
            for sp in self.schemes:
                if sp.kind == "spsr" and sp.rho is None:
                    raise ValueError(f"{self.variable} sweep needs an explicit rho per spsr scheme")
        if self.variable in ("M", "K"):
            for v in (self.start, self.stop, self.step):
                if v != int(v):
                    raise ValueError(f"{self.variable} sweep requires integer start/stop/step")


@dataclass
class SweepRow:
    value: float
    scheme: str
    op_analytic: float | None = None
    op_mc: float | None = None
    op_ci: float | None = None
    ip_analytic: float | None = None
    ip_mc: float | None = None
    ip_ci: float | None = None
    runtime_ms: float | None = None
    error: str = ""


@dataclass
class SweepResult:
    variable: str
    rows: list[SweepRow]


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    """Grid start, start+step, ... up to stop (inclusive within half a step)."""
    values = []
    i = 0
    while True:
        v = start + i * step
        if v > stop + step * 1e-9:
            break
        values.append(round(v, 12))
        i += 1
    return values


def _apply_variable(
    p: SystemParams, s: ChannelStats, variable: str, value: float, scheme: SchemePoint,
) -> tuple[SystemParams, ChannelStats]:
    rho = scheme.rho if scheme.kind == "spsr" and scheme.rho is not None else p.rho
    if variable == "psi_db":
        p = replace(p, rho=rho, psi=10.0 ** (value / 10.0))
    elif variable == "phi_db":
        p = replace(p, rho=rho, phi=10.0 ** (value / 10.0))
    elif variable == "rho":
        p = replace(p, rho=value if scheme.kind == "spsr" else rho)
    elif variable == "M":
        p = replace(p, rho=rho, num_sources=int(value))
    elif variable == "K":
        p = replace(p, rho=rho, num_jammers=int(value))
    return p, s


def analytic_op(p: SystemParams, s: ChannelStats, scheme_kind: str, cfg: AnalyticConfig) -> float:
    return op_dpsr(p, s, cfg) if scheme_kind == "dpsr" else op_spsr(p, s, cfg)


def analytic_ip(p: SystemParams, s: ChannelStats, scheme_kind: str,
                jamming: bool, cfg: AnalyticConfig) -> float:
    if scheme_kind == "dpsr":
        return ip_dpsr_quadrature(p, s, cfg) if jamming else ip_dpsr_no_jamming(p, s, cfg)
    return ip_spsr_quadrature(p, s, cfg) if jamming else ip_spsr_no_jamming(p, s)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute the sweep; analytic failures mark the row and the sweep continues."""
    rows: list[SweepRow] = []
    for index, value in enumerate(sweep_values(spec.start, spec.stop, spec.step)):
        point_seed = derive_seed(spec.sim.seed, index)
        for scheme in spec.schemes:
            t0 = time.perf_counter()
            p, s = _apply_variable(spec.params, spec.stats, spec.variable, value, scheme)
            row = SweepRow(value=value, scheme=scheme.label)
            errors = []
            try:
                if spec.outputs in ("op", "both"):
                    row.op_analytic = analytic_op(p, s, scheme.kind, spec.analytic)
                if spec.outputs in ("ip", "both"):
                    row.ip_analytic = analytic_ip(p, s, scheme.kind, spec.sim.jamming, spec.analytic)
            except (NumericalError, ValueError) as exc:
                errors.append(f"analytic: {exc}")
            try:
                sim = replace(spec.sim, seed=point_seed, scheme=scheme.kind)
                op_est, ip_est = simulate_point(p, s, sim)
                if spec.outputs in ("op", "both"):
                    row.op_mc, row.op_ci = op_est.estimate, op_est.ci_halfwidth
                if spec.outputs in ("ip", "both"):
                    row.ip_mc, row.ip_ci = ip_est.estimate, ip_est.ci_halfwidth
            except ValueError as exc:
                errors.append(f"mc: {exc}")
            row.error = "; ".join(errors)
            row.runtime_ms = (time.perf_counter() - t0) * 1e3
            rows.append(row)
    return SweepResult(spec.variable, rows)


@dataclass
class CompareReport:
    """Analytic-vs-MC agreement summary: per-scheme gap statistics and flags."""

    per_scheme: dict[str, dict[str, float]]
    flagged: list[tuple[float, str, str, float, float]]  # (value, scheme, metric, gap, bound)
    n_compared: int

    @property
    def flagged_fraction(self) -> float:
        return len(self.flagged) / self.n_compared if self.n_compared else 0.0


def compare_report(result: SweepResult, gap_allowance: float = 0.01) -> CompareReport:
    """Flag rows where |analytic - mc| exceeds 3*ci + ``gap_allowance``.

    The allowance absorbs the first-slot modeling gap between the analytic
    intercept expressions and an exact-mode simulation.
    """
    per_scheme: dict[str, dict[str, float]] = {}
    flagged = []
    n_compared = 0
    for row in result.rows:
        for metric in ("op", "ip"):
            a = getattr(row, f"{metric}_analytic")
            m = getattr(row, f"{metric}_mc")
            ci = getattr(row, f"{metric}_ci")
            if a is None or m is None or ci is None:
                continue
            n_compared += 1
            gap = abs(a - m)
            stats = per_scheme.setdefault(row.scheme, {"max_gap": 0.0, "sum_gap": 0.0, "n": 0})
            stats["max_gap"] = max(stats["max_gap"], gap)
            stats["sum_gap"] += gap
            stats["n"] += 1
            bound = 3.0 * ci + gap_allowance
            if gap > bound:
                flagged.append((row.value, row.scheme, metric, gap, bound))
    for stats in per_scheme.values():
        stats["mean_gap"] = stats["sum_gap"] / stats["n"]
        del stats["sum_gap"]
    return CompareReport(per_scheme, flagged, n_compared)


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def write_csv(result: SweepResult, path: str | Path) -> None:
    """12-significant-digit decimal CSV, LF line endings, nulls as empty fields."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow((result.variable,) + _CSV_FIELDS)
        for row in result.rows:
            writer.writerow([
                _fmt(row.value), row.scheme,
                _fmt(row.op_analytic), _fmt(row.op_mc), _fmt(row.op_ci),
                _fmt(row.ip_analytic), _fmt(row.ip_mc), _fmt(row.ip_ci),
                _fmt(row.runtime_ms), row.error,
            ])


def read_csv(path: str | Path) -> SweepResult:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header[1:]) != _CSV_FIELDS:
            raise ValueError(f"unexpected sweep CSV header in {path}")
        variable = header[0]
        rows = []
        for rec in reader:
            opt = [float(v) if v else None for v in rec[2:9]]
            rows.append(SweepRow(
                value=float(rec[0]), scheme=rec[1],
                op_analytic=opt[0], op_mc=opt[1], op_ci=opt[2],
                ip_analytic=opt[3], ip_mc=opt[4], ip_ci=opt[5],
                runtime_ms=opt[6], error=rec[9] if len(rec) > 9 else "",
            ))
    return SweepResult(variable, rows)
