"""Monte-Carlo trial engine with partitioned, reproducible streams.

Outage and intercept indicators are computed from the same channel draws, so
an outage-only run, an intercept-only run, and a joint run with the same
configuration consume identical streams and report bitwise-identical
estimates.  Trials are partitioned across workers whose streams derive from
(master seed, worker index); partial estimates merge by integer count
addition, which makes merging exact and associative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelStats, draw_channels, worker_stream
from .core import SystemParams, gamma_d_dpsr, gamma_d_spsr, gamma_e

__all__ = ["SimConfig", "EstimateWithCI", "simulate_op", "simulate_ip", "simulate_point"]

_CHUNK = 1 << 18
_Z95 = 1.96
_WILSON_SWITCH = 1e-4


@dataclass(frozen=True)
class SimConfig:
    """Trial-engine configuration.

    ``e1_mode`` picks the eavesdropper's first-slot SNR model: ``exact``
    keeps the unit noise term, ``approx`` uses the jamming-dominated form the
    analytic intercept expressions are built on.  ``approx`` therefore
    requires jamming to be on.
    """

    trials: int = 5_000_000
    seed: int = 0
    workers: int = 1
    scheme: str = "spsr"
    jamming: bool = True
    e1_mode: str = "exact"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"need at least one worker, got {self.workers}")
        if self.scheme not in ("spsr", "dpsr"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.e1_mode not in ("exact", "approx"):
            raise ValueError(f"unknown e1_mode {self.e1_mode!r}")
        if self.e1_mode == "approx" and not self.jamming:
            raise ValueError("approx e1_mode divides by the jamming term; enable jamming")

    def partition(self) -> list[int]:
        """Per-worker trial counts: even split, remainder to the last worker."""
        base = self.trials // self.workers
        counts = [base] * self.workers
        counts[-1] += self.trials - base * self.workers
        return counts


@dataclass(frozen=True)
class EstimateWithCI:
    """A probability estimate with its 95% confidence half-width."""

    successes: int
    trials: int
    estimate: float
    ci_halfwidth: float

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "EstimateWithCI":
        if trials < 1:
            raise ValueError("need at least one trial")
        if not 0 <= successes <= trials:
            raise ValueError("successes must lie in [0, trials]")
        p = successes / trials
        if min(p, 1.0 - p) < _WILSON_SWITCH:
            # Wilson half-width: stays positive for rare events where the
            # normal approximation collapses to zero width
            z2 = _Z95 * _Z95
            hw = _Z95 * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) \
                / (1.0 + z2 / trials)
        else:
            hw = _Z95 * math.sqrt(p * (1.0 - p) / trials)
        return cls(successes, trials, p, hw)

    def merge(self, other: "EstimateWithCI") -> "EstimateWithCI":
        """Exact, associative combination of two partial estimates."""
        return EstimateWithCI.from_counts(
            self.successes + other.successes, self.trials + other.trials)

    def covers(self, value: float) -> bool:
        return abs(value - self.estimate) <= self.ci_halfwidth


def _count_chunk(p: SystemParams, s: ChannelStats, c: SimConfig,
                 rng: np.random.Generator, n: int) -> tuple[int, int]:
    draw = draw_channels(s, p, rng, size=n)
    if c.scheme == "dpsr":
        gd = gamma_d_dpsr(p, draw.gamma_sr_best, draw.gamma_rd)
    else:
        gd = gamma_d_spsr(p, draw.gamma_sr_best, draw.gamma_rd)
    mode = c.e1_mode if c.jamming else "no-jamming"
    pair = gamma_e(p, draw.gamma_se, draw.gamma_sr_best, draw.gamma_re, draw.xi,
                   mode=mode, scheme=c.scheme, gamma_rd=draw.gamma_rd)
    op = int(np.count_nonzero(gd < p.gamma_th))
    ip = int(np.count_nonzero(pair.combined >= p.gamma_th))
    return op, ip


def _simulate_counts(p: SystemParams, s: ChannelStats, c: SimConfig) -> tuple[int, int]:
    op_total = 0
    ip_total = 0
    for worker, n_worker in enumerate(c.partition()):
        if n_worker == 0:
            continue
        rng = worker_stream(c.seed, worker)
        done = 0
        while done < n_worker:
            n = min(_CHUNK, n_worker - done)
            op, ip = _count_chunk(p, s, c, rng, n)
            op_total += op
            ip_total += ip
            done += n
    return op_total, ip_total


def simulate_op(p: SystemParams, s: ChannelStats, c: SimConfig) -> EstimateWithCI:
    """Fraction of trials whose destination SNR falls below the threshold."""
    op, _ = _simulate_counts(p, s, c)
    return EstimateWithCI.from_counts(op, c.trials)


def simulate_ip(p: SystemParams, s: ChannelStats, c: SimConfig) -> EstimateWithCI:
    """Fraction of trials whose combined eavesdropper SNR reaches the threshold."""
    _, ip = _simulate_counts(p, s, c)
    return EstimateWithCI.from_counts(ip, c.trials)


def simulate_point(p: SystemParams, s: ChannelStats, c: SimConfig) -> tuple[EstimateWithCI, EstimateWithCI]:
    """Both metrics from one shared trial stream."""
    op, ip = _simulate_counts(p, s, c)
    return EstimateWithCI.from_counts(op, c.trials), EstimateWithCI.from_counts(ip, c.trials)
