"""Channel-gain statistics: exponential links, pathloss geometry, and sampling.

Every link gain |h|^2 is exponential with rate parameter lambda = d**chi, so
the mean gain is 1/lambda (short links have small rates and strong gains).
The best of the M source-to-relay gains is selected per block; the K
jammer-to-eavesdropper gains enter only through their sum, which is Erlang.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import SystemParams

__all__ = [
    "LINK_KEYS",
    "ChannelStats",
    "ChannelDraw",
    "pathloss_rate",
    "best_source_cdf",
    "erlang_pdf_xi",
    "worker_stream",
    "derive_seed",
    "draw_channels",
]

# link name -> (from node, to node)
LINK_KEYS: dict[str, tuple[str, str]] = {
    "sr": ("S", "R"),
    "rd": ("R", "D"),
    "re": ("R", "E"),
    "je": ("J", "E"),
    "se": ("S", "E"),
}


def pathloss_rate(distance: float, chi: float) -> float:
    """Exponential rate parameter d**chi for a link of length ``distance``."""
    if distance <= 0:
        raise ValueError(f"distance must be positive, got {distance}")
    if chi <= 0:
        raise ValueError(f"pathloss exponent must be positive, got {chi}")
    return float(distance) ** chi


def best_source_cdf(x, lam: float, num_sources: int, form: str = "product"):
    """CDF of the largest of ``num_sources`` i.i.d. Exp(lam) gains.

    ``form='product'`` evaluates (1 - exp(-lam x))**M directly;
    ``form='expansion'`` evaluates the equivalent alternating binomial sum
    1 + sum_b (-1)**b C(M, b) exp(-b lam x), the shape the analytic
    evaluators integrate term by term.
    """
    if lam <= 0:
        raise ValueError(f"rate parameter must be positive, got {lam}")
    if num_sources < 1:
        raise ValueError(f"need at least one source, got {num_sources}")
    if np.any(np.asarray(x) < 0):
        raise ValueError("gain must be nonnegative")
    if form == "product":
        out = (-np.expm1(-lam * np.asarray(x, dtype=float))) ** num_sources
    elif form == "expansion":
        out = np.ones_like(np.asarray(x, dtype=float))
        for b in range(1, num_sources + 1):
            out = out + (-1.0) ** b * math.comb(num_sources, b) * np.exp(-b * lam * x)
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(out) if np.isscalar(x) else out


def erlang_pdf_xi(x, lam: float, num_jammers: int):
    """Density of the sum of ``num_jammers`` i.i.d. Exp(lam) gains."""
    if lam <= 0:
        raise ValueError(f"rate parameter must be positive, got {lam}")
    if num_jammers < 1:
        raise ValueError(f"need at least one jammer, got {num_jammers}")
    if np.any(np.asarray(x) < 0):
        raise ValueError("gain must be nonnegative")
    k = num_jammers
    xa = np.asarray(x, dtype=float)
    out = lam ** k / math.factorial(k - 1) * xa ** (k - 1) * np.exp(-lam * xa)
    return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class ChannelStats:
    """Rate parameters for every link class, optionally tied to a geometry.

    ``positions`` maps node names S, R, D, E, J to 2-D coordinates; when it is
    set, the rates were derived from it via :func:`pathloss_rate` (except
    where explicit overrides won).  ``distance_decimals`` records the decimal
    quantization applied to distances before exponentiation -- the convention
    under which the shipped scenario rate tables were produced.
    """

    lambda_sr: float
    lambda_rd: float
    lambda_re: float
    lambda_je: float
    lambda_se: float
    chi: float | None = None
    positions: Mapping[str, tuple[float, float]] | None = None
    distance_decimals: int | None = None

    def __post_init__(self):
        for name in LINK_KEYS:
            value = getattr(self, f"lambda_{name}")
            if value <= 0:
                raise ValueError(f"lambda_{name} must be positive, got {value}")
        if self.chi is not None and self.chi <= 0:
            raise ValueError(f"pathloss exponent must be positive, got {self.chi}")

    @classmethod
    def from_positions(
        cls,
        positions: Mapping[str, tuple[float, float]],
        chi: float,
        distance_decimals: int | None = None,
        overrides: Mapping[str, float] | None = None,
    ) -> "ChannelStats":
        """Derive every rate parameter from node coordinates.

        ``distance_decimals`` rounds each distance before applying the
        pathloss exponent (set to 4 by the shipped scenarios, whose reference
        rate tables were tabulated from 4-decimal distances).  ``overrides``
        maps link names (e.g. ``"se"``) to rates that win over geometry.
        """
        missing = {n for pair in LINK_KEYS.values() for n in pair} - set(positions)
        if missing:
            raise ValueError(f"positions missing nodes: {sorted(missing)}")
        overrides = dict(overrides or {})
        unknown = set(overrides) - set(LINK_KEYS)
        if unknown:
            raise ValueError(f"unknown override links: {sorted(unknown)}")
        rates = {}
        for link, (a, b) in LINK_KEYS.items():
            if link in overrides:
                rates[link] = float(overrides[link])
                continue
            d = math.dist(positions[a], positions[b])
            if distance_decimals is not None:
                d = round(d, distance_decimals)
            rates[link] = pathloss_rate(d, chi)
        return cls(
            lambda_sr=rates["sr"], lambda_rd=rates["rd"], lambda_re=rates["re"],
            lambda_je=rates["je"], lambda_se=rates["se"],
            chi=chi,
            positions={k: (float(v[0]), float(v[1])) for k, v in positions.items()},
            distance_decimals=distance_decimals,
        )

    def distances(self) -> dict[str, float]:
        """Link distances implied by the stored positions (quantized as configured)."""
        if self.positions is None:
            raise ValueError("no positions stored")
        out = {}
        for link, (a, b) in LINK_KEYS.items():
            d = math.dist(self.positions[a], self.positions[b])
            if self.distance_decimals is not None:
                d = round(d, self.distance_decimals)
            out[link] = d
        return out


@dataclass(frozen=True)
class ChannelDraw:
    """One realization (or a batch) of every channel gain needed for a trial."""

    gamma_sr_best: object
    gamma_se: object
    gamma_rd: object
    gamma_re: object
    xi: object


def derive_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit child seed for sweep point ``index``."""
    seq = np.random.SeedSequence([int(master_seed), int(index)])
    return int(seq.generate_state(1, np.uint64)[0])


def worker_stream(master_seed: int, worker_index: int) -> np.random.Generator:
    """Independent counter-based stream for one worker of one run.

    Streams are keyed purely by (master seed, worker index), so a partitioned
    run reproduces bit-for-bit for a fixed worker count regardless of
    execution order.
    """
    seq = np.random.SeedSequence([int(master_seed), int(worker_index)])
    return np.random.Generator(np.random.Philox(seq))


def _exp_draw(rng: np.random.Generator, lam: float, shape) -> np.ndarray:
    # inverse-CDF sampling keeps the draw <-> uniform correspondence explicit
    return -np.log1p(-rng.random(shape)) / lam


def draw_channels(
    stats: ChannelStats,
    p: SystemParams,
    rng: np.random.Generator,
    size: int | None = None,
) -> ChannelDraw:
    """Draw all link gains for ``size`` trials (or a single-trial scalar draw).

    The source-to-relay selection takes the max over ``num_sources`` draws;
    the selected source's eavesdropper-link gain is a fresh exponential,
    independent of the selection, because selection conditions only on the
    source-to-relay gains.  Draw order is fixed: SR block, SE, RD, RE, JE block.
    """
    n = 1 if size is None else int(size)
    if n < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    sr = _exp_draw(rng, stats.lambda_sr, (n, p.num_sources)).max(axis=1)
    se = _exp_draw(rng, stats.lambda_se, n)
    rd = _exp_draw(rng, stats.lambda_rd, n)
    re = _exp_draw(rng, stats.lambda_re, n)
    xi = _exp_draw(rng, stats.lambda_je, (n, p.num_jammers)).sum(axis=1)
    if size is None:
        return ChannelDraw(float(sr[0]), float(se[0]), float(rd[0]), float(re[0]), float(xi[0]))
    return ChannelDraw(sr, se, rd, re, xi)
