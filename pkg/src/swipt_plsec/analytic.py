"""Semi-analytic outage and intercept probability evaluators.

Every probability is exposed through two routes: a fast closed-form or
series evaluator, and a direct quadrature of the probability's defining
integral.  The quadrature route is the reference; the fast route is checked
against it.  The intercept expressions model the eavesdropper's first-slot
SNR with the jamming-dominated approximation psi*gamma_se/(phi*xi), i.e.
without the unit noise term, which is also what the simulation engine's
``approx`` mode realizes.

The intercept series (``ip_spsr``) is asymptotic rather than convergent: its
term-by-term integration of an exponential expansion has zero radius of
convergence, and the truncation helper stops at the smallest term.  In
weak-link geometries such as the shipped scenarios the terms grow from the
start and the series is unusable there; :class:`SeriesNotConverged` reports
the attainable accuracy, and ``ip_spsr_quadrature`` is the production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import ChannelStats, best_source_cdf, erlang_pdf_xi
from .core import SystemParams
from .specfun import (
    QuadratureSpec,
    SeriesNotConverged,
    bessel_k,
    gamma_fn,
    integrate,
    meijer_g3013,
    sum_series,
)

__all__ = [
    "AnalyticConfig",
    "SplitFactors",
    "InterceptScratch",
    "op_spsr",
    "op_spsr_quadrature",
    "op_dpsr",
    "op_dpsr_quadrature",
    "ip_spsr",
    "ip_spsr_quadrature",
    "ip_spsr_no_jamming",
    "ip_dpsr",
    "ip_dpsr_quadrature",
    "ip_dpsr_no_jamming",
    "slot1_intercept_probability",
    "slot1_outage_factor",
    "slot2_outage_factor",
    "slot2_outage_factor_quadrature",
    "intercept_series_term",
    "dpsr_slot2_outage_factor",
    "dpsr_slot2_kernel",
    "dpsr_slot2_factor",
    "dpsr_slot2_factor_quadrature",
]


@dataclass(frozen=True)
class AnalyticConfig:
    """Truncation and quadrature settings for the analytic evaluators."""

    series_rel_tol: float = 1e-8
    series_max_terms: int = 200
    quad: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        if self.series_rel_tol <= 0:
            raise ValueError("series_rel_tol must be positive")
        if self.series_max_terms < 1:
            raise ValueError("series_max_terms must be >= 1")


DEFAULT_CONFIG = AnalyticConfig()


@dataclass(frozen=True)
class SplitFactors:
    """Reciprocal optimal-split fractions at a given relay-side gain.

    For rho* = 1/(1 + sqrt(eta * gain)): ``inv_info`` = 1/(1 - rho*) and
    ``inv_harvest`` = 1/rho*.  Both are >= 1 and act as effective noise and
    dilution multipliers inside the dynamic-splitting intercept integrands.
    """

    inv_info: float
    inv_harvest: float

    def __post_init__(self):
        if self.inv_harvest < 1:
            raise ValueError("1/rho* cannot be below 1")

    @classmethod
    def at(cls, eta: float, gain: float) -> "SplitFactors":
        g = math.sqrt(eta * gain)
        inv_info = (1.0 + g) / g if g > 0 else math.inf
        return cls(inv_info=inv_info, inv_harvest=1.0 + g)


@dataclass(frozen=True)
class InterceptScratch:
    """Composite factors shared by the intercept integrands."""

    rho_complement: float
    jammer_rate: float
    tilted_jammer_rate: float
    rd_factors: SplitFactors | None = None
    omega_factors: SplitFactors | None = None

    def __post_init__(self):
        if not 0 <= self.rho_complement <= 1:
            raise ValueError("rho complement must lie in [0, 1]")
        if self.tilted_jammer_rate < self.jammer_rate:
            raise ValueError("tilting can only increase the jammer rate")

    @classmethod
    def from_params(
        cls,
        p: SystemParams,
        s: ChannelStats,
        gamma_rd: float | None = None,
        omega: float | None = None,
    ) -> "InterceptScratch":
        return cls(
            rho_complement=1.0 - p.rho,
            jammer_rate=s.lambda_je,
            tilted_jammer_rate=_tilted_rate(p, s),
            rd_factors=None if gamma_rd is None else SplitFactors.at(p.eta, gamma_rd),
            omega_factors=None if omega is None else SplitFactors.at(p.eta, omega),
        )


def _binom_coeffs(m: int) -> list[tuple[int, float]]:
    """(b, (-1)**b * C(m, b)) for b = 1..m."""
    return [(b, (-1.0) ** b * math.comb(m, b)) for b in range(1, m + 1)]


def _tilted_rate(p: SystemParams, s: ChannelStats) -> float:
    """Jammer-aggregate rate tilted by the first-slot wiretap exponent."""
    return p.gamma_th * s.lambda_se * p.phi / p.psi + s.lambda_je


def _require_jamming(p: SystemParams):
    if p.phi <= 0:
        raise ValueError("jamming evaluators need phi > 0; use the no-jamming variants")


def _sqrt_k1(a: float) -> float:
    """sqrt(a) * K_1(2 sqrt(a)), extended continuously to 1/2 at a = 0."""
    if a == 0.0:
        return 0.5
    r = math.sqrt(a)
    return r * bessel_k(1, 2.0 * r)


def _nested_inner(cfg: AnalyticConfig) -> QuadratureSpec:
    # kernel values are O(1); an absolute floor far below every consumer
    # tolerance keeps the relative criterion from chasing vanishing tails
    return replace(cfg.quad, rel_tol=cfg.quad.rel_tol / 10.0,
                   abs_tol=max(cfg.quad.abs_tol, 1e-11))


def _nested_outer(cfg: AnalyticConfig) -> QuadratureSpec:
    # the inner quadrature noise bounds the accuracy the outer can reach
    return replace(cfg.quad, abs_tol=max(cfg.quad.abs_tol, 1e-9))


# ---------------------------------------------------------------------------
# outage, static splitting


def op_spsr(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Outage probability under a fixed splitting ratio (closed Bessel form).

    Endpoint splitting ratios give zero destination SNR, hence probability 1.
    """
    if p.gamma_th == 0:
        return 0.0
    if p.rho in (0.0, 1.0):
        return 1.0
    acc = 1.0
    for b, coef in _binom_coeffs(p.num_sources):
        a = b * s.lambda_sr * s.lambda_rd * p.gamma_th / (p.eta * p.rho * p.psi)
        acc += 2.0 * coef * math.exp(-b * s.lambda_sr * p.gamma_th / ((1.0 - p.rho) * p.psi)) \
            * _sqrt_k1(a)
    return acc


def op_spsr_quadrature(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Outage probability by direct quadrature of its defining average.

    Averages the best-source CDF, evaluated at the source-side gain the
    threshold requires, over the relay-to-destination gain density.
    """
    if p.gamma_th == 0:
        return 0.0
    if p.rho in (0.0, 1.0):
        return 1.0
    r1 = 1.0 - p.rho
    lam_rd = s.lambda_rd

    def f(x: float) -> float:
        thr = p.gamma_th * (p.eta * p.rho * x + r1) / (p.eta * p.rho * r1 * p.psi * x)
        return best_source_cdf(thr, s.lambda_sr, p.num_sources) * lam_rd * math.exp(-lam_rd * x)

    scale = s.lambda_sr * p.gamma_th / (p.eta * p.rho * p.psi)
    value, _ = integrate(f, cfg.quad, points=(math.sqrt(scale / lam_rd), 1.0 / lam_rd))
    return value


# ---------------------------------------------------------------------------
# outage, dynamic splitting


def op_dpsr(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Outage probability under per-realization optimal splitting (Bessel series).

    The series over ``t`` converges factorially; a cap breach raises
    :class:`SeriesNotConverged`.
    """
    if p.gamma_th == 0:
        return 0.0
    ln_rd = math.log(s.lambda_rd / p.eta)

    def term(t: int) -> float:
        tot = 0.0
        for b, coef in _binom_coeffs(p.num_sources):
            x = b * s.lambda_sr * p.gamma_th / p.psi
            z = 2.0 * math.sqrt(x * s.lambda_rd / p.eta)
            k = bessel_k(1.0 - t / 2.0, z)
            if not math.isfinite(k):
                return math.inf
            ln_mag = ((t + 1) * math.log(2.0) - math.lgamma(t + 1)
                      + (t / 4.0 + 0.5) * ln_rd
                      + (3.0 * t / 4.0 + 0.5) * math.log(x) - x)
            tot += coef * math.exp(ln_mag) * k
        return (-1.0) ** t * tot

    res = sum_series(term, cfg.series_rel_tol, cfg.series_max_terms, initial=1.0)
    if not res.converged:
        raise SeriesNotConverged(
            "dynamic-splitting outage series did not reach tolerance",
            res.value, res.error_estimate, res.terms)
    return res.value


def op_dpsr_quadrature(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Outage probability under optimal splitting by direct quadrature."""
    if p.gamma_th == 0:
        return 0.0
    lam_rd = s.lambda_rd

    def f(x: float) -> float:
        thr = p.gamma_th * (1.0 + math.sqrt(p.eta * x)) ** 2 / (p.eta * p.psi * x)
        return best_source_cdf(thr, s.lambda_sr, p.num_sources) * lam_rd * math.exp(-lam_rd * x)

    scale = s.lambda_sr * p.gamma_th / (p.eta * p.psi)
    value, _ = integrate(f, cfg.quad, points=(math.sqrt(scale / lam_rd), 1.0 / lam_rd))
    return value


# ---------------------------------------------------------------------------
# intercept building blocks


def slot1_outage_factor(p: SystemParams, s: ChannelStats, x: float) -> float:
    """Probability the first-slot wiretap SNR stays below threshold, given
    jammer aggregate ``x`` (jamming-dominated approximation)."""
    if x < 0:
        raise ValueError("jammer aggregate must be nonnegative")
    return -math.expm1(-p.gamma_th * s.lambda_se * p.phi * x / p.psi)


def slot2_outage_factor(p: SystemParams, s: ChannelStats, x: float) -> float:
    """Probability the second-slot wiretap SNR stays below threshold, given
    jammer aggregate ``x``, under static splitting (closed Bessel form)."""
    if x < 0:
        raise ValueError("jammer aggregate must be nonnegative")
    r1 = 1.0 - p.rho
    acc = 1.0
    for b, coef in _binom_coeffs(p.num_sources):
        c = b * s.lambda_sr * s.lambda_re * p.gamma_th * (p.phi * x + 1.0) / (p.eta * p.rho * p.psi)
        acc += 2.0 * coef * math.exp(-b * s.lambda_sr * p.gamma_th / (r1 * p.psi)) * _sqrt_k1(c)
    return acc


def slot2_outage_factor_quadrature(
    p: SystemParams, s: ChannelStats, x: float, cfg: AnalyticConfig = DEFAULT_CONFIG,
) -> float:
    """Reference for :func:`slot2_outage_factor`: average the best-source CDF
    over the relay-to-eavesdropper gain density."""
    r1 = 1.0 - p.rho
    dil = r1 * (p.phi * x + 1.0)
    lam_re = s.lambda_re

    def f(y: float) -> float:
        thr = p.gamma_th * (p.eta * p.rho * y + dil) / (p.eta * p.rho * r1 * y * p.psi)
        return best_source_cdf(thr, s.lambda_sr, p.num_sources) * lam_re * math.exp(-lam_re * y)

    scale = s.lambda_sr * p.gamma_th * (p.phi * x + 1.0) / (p.eta * p.rho * p.psi)
    value, _ = integrate(f, cfg.quad, points=(math.sqrt(scale / lam_re), 1.0 / lam_re))
    return value


def slot1_intercept_probability(p: SystemParams, s: ChannelStats) -> float:
    """Probability the first slot alone is intercepted: the Erlang jammer
    aggregate's Laplace transform at the wiretap tilt, (lam_je / tilted)**K."""
    if p.gamma_th == 0:
        return 1.0
    return (s.lambda_je / _tilted_rate(p, s)) ** p.num_jammers


def intercept_series_term(
    p: SystemParams,
    s: ChannelStats,
    t: int,
    b: int,
    weight_rate: float,
) -> float:
    """The ``t``-th expansion term of the static-splitting intercept average
    for binomial index ``b``, weighted by the Erlang rate ``weight_rate``
    (the tilted rate for the joint term, the plain rate for the marginal one).

    Evaluates, through the Meijer-G instance of
    :func:`swipt_plsec.specfun.meijer_g3013`,

        (-1)**t weight**t / (t! phi**(t+K))
            * int_1^inf y^{1/2} (y-1)^{t+K-1} K_1(2 sqrt(c y)) dy,

    so it matches direct quadrature of that pre-transformation integral.
    """
    if t < 0:
        raise ValueError("series index must be nonnegative")
    _require_jamming(p)
    k = p.num_jammers
    c = b * s.lambda_sr * s.lambda_re * p.gamma_th / (p.eta * p.rho * p.psi)
    g = meijer_g3013(c, -(t + k))
    ln_mag = (math.lgamma(t + k) - math.lgamma(t + 1) - (t + k) * math.log(p.phi)
              + t * math.log(weight_rate) - math.log(2.0 * math.sqrt(c)))
    return (-1.0) ** t * math.exp(ln_mag) * g


# ---------------------------------------------------------------------------
# intercept, static splitting


def ip_spsr(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Intercept probability under static splitting (Meijer-G series form).

    Asymptotic in ``t``; raises :class:`SeriesNotConverged` (carrying the
    best truncated value and its attainable accuracy) whenever the smallest
    term is still above ``cfg.series_rel_tol`` -- which is the case in
    weak-link geometries, where :func:`ip_spsr_quadrature` must be used.
    """
    if p.gamma_th == 0:
        return 1.0
    if not 0 < p.rho < 1:
        raise ValueError("static-splitting intercept needs rho in (0, 1)")
    _require_jamming(p)
    k = p.num_jammers
    tilted = _tilted_rate(p, s)
    lam_je = s.lambda_je
    ln_front = k * math.log(lam_je) - math.lgamma(k)
    r1 = 1.0 - p.rho

    def term(i: int) -> float:
        t = i + 1  # the t = 0 weights cancel exactly
        tot = 0.0
        for b, coef in _binom_coeffs(p.num_sources):
            c = b * s.lambda_sr * s.lambda_re * p.gamma_th / (p.eta * p.rho * p.psi)
            g = meijer_g3013(c, -(t + k))
            if not math.isfinite(g):
                return math.inf
            ln_mag = (math.lgamma(t + k) - math.lgamma(t + 1) - (t + k) * math.log(p.phi)
                      - b * s.lambda_sr * p.gamma_th / (r1 * p.psi)
                      + ln_front + t * math.log(tilted)
                      + math.log1p(-((lam_je / tilted) ** t)))
            tot += coef * math.exp(ln_mag) * g
        return (-1.0) ** t * tot

    base = slot1_intercept_probability(p, s)
    res = sum_series(term, cfg.series_rel_tol, cfg.series_max_terms, initial=base)
    if not res.converged:
        raise SeriesNotConverged(
            "static-splitting intercept series is asymptotic and did not reach "
            f"tolerance {cfg.series_rel_tol:g}; best value {res.value:.6g} "
            f"with attainable relative accuracy {res.error_estimate:.2g} "
            "(use ip_spsr_quadrature)",
            res.value, res.error_estimate, res.terms)
    return res.value


def ip_spsr_quadrature(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Intercept probability under static splitting: reference quadrature.

    Averages the product of the per-slot no-intercept factors over the
    Erlang jammer-aggregate density.
    """
    if p.gamma_th == 0:
        return 1.0
    if not 0 < p.rho < 1:
        raise ValueError("static-splitting intercept needs rho in (0, 1)")
    _require_jamming(p)

    def f(x: float) -> float:
        return (slot1_outage_factor(p, s, x) * slot2_outage_factor(p, s, x)
                * erlang_pdf_xi(x, s.lambda_je, p.num_jammers))

    tilt = _tilted_rate(p, s) - s.lambda_je
    hints = (1.0 / tilt, p.num_jammers / s.lambda_je)
    value, _ = integrate(f, cfg.quad, points=hints)
    return 1.0 - value


def ip_spsr_no_jamming(p: SystemParams, s: ChannelStats) -> float:
    """Static-splitting intercept probability with the jammers silent.

    No aggregate to average over: closed form from the two slot factors with
    the jamming terms zeroed (the first-slot SNR is then exactly
    psi * gamma_se).
    """
    if p.gamma_th == 0:
        return 1.0
    if not 0 < p.rho < 1:
        raise ValueError("static-splitting intercept needs rho in (0, 1)")
    q1 = -math.expm1(-p.gamma_th * s.lambda_se / p.psi)
    return 1.0 - q1 * slot2_outage_factor(p, s, 0.0)


# ---------------------------------------------------------------------------
# intercept, dynamic splitting


def dpsr_slot2_outage_factor(p: SystemParams, s: ChannelStats, x: float, omega: float) -> float:
    """Probability the second-slot wiretap SNR stays below threshold given the
    jammer aggregate ``x`` and the relay-to-destination gain ``omega`` that
    fixes the optimal splitting ratio."""
    if x < 0 or omega < 0:
        raise ValueError("conditioning values must be nonnegative")
    if omega == 0.0:
        return 1.0  # rho* = 1 leaves no information power in slot 2
    fac = SplitFactors.at(p.eta, omega)
    acc = 1.0
    for b, coef in _binom_coeffs(p.num_sources):
        d = (b * s.lambda_sr * s.lambda_re * p.gamma_th * (p.phi * x + 1.0)
             * fac.inv_harvest / (p.eta * p.psi))
        acc += 2.0 * coef * math.exp(-b * s.lambda_sr * p.gamma_th * fac.inv_info / p.psi) \
            * _sqrt_k1(d)
    return acc


def dpsr_slot2_kernel(
    p: SystemParams, s: ChannelStats, x: float, b: int, cfg: AnalyticConfig = DEFAULT_CONFIG,
) -> float:
    """Average over the relay-to-destination gain of the Bessel kernel that
    the dynamic-splitting slot-2 factor reduces to (binomial index ``b``)."""
    if x < 0:
        raise ValueError("jammer aggregate must be nonnegative")
    d = b * s.lambda_sr * s.lambda_re * p.gamma_th * (p.phi * x + 1.0) / (p.eta * p.psi)
    beta = b * s.lambda_sr * p.gamma_th / p.psi
    lam_rd = s.lambda_rd

    def f(w: float) -> float:
        if w <= 0.0:
            return 0.0
        root = 1.0 + math.sqrt(p.eta * w)
        return (math.sqrt(root)
                * math.exp(-beta / math.sqrt(p.eta * w) - lam_rd * w)
                * bessel_k(1, 2.0 * math.sqrt(d * root)))

    hints = (beta * beta / p.eta, 1.0 / lam_rd)
    value, _ = integrate(f, _nested_inner(cfg), points=hints)
    return lam_rd * value


def dpsr_slot2_factor(
    p: SystemParams, s: ChannelStats, x: float, cfg: AnalyticConfig = DEFAULT_CONFIG,
) -> float:
    """Dynamic-splitting analogue of :func:`slot2_outage_factor`."""
    acc = 1.0
    for b, coef in _binom_coeffs(p.num_sources):
        d = b * s.lambda_sr * s.lambda_re * p.gamma_th * (p.phi * x + 1.0) / (p.eta * p.psi)
        acc += 2.0 * coef * math.exp(-b * s.lambda_sr * p.gamma_th / p.psi) \
            * math.sqrt(d) * dpsr_slot2_kernel(p, s, x, b, cfg)
    return acc


def dpsr_slot2_factor_quadrature(
    p: SystemParams, s: ChannelStats, x: float, cfg: AnalyticConfig = DEFAULT_CONFIG,
) -> float:
    """Reference for :func:`dpsr_slot2_factor`: average the conditional factor
    over the relay-to-destination gain density directly."""
    lam_rd = s.lambda_rd

    def f(w: float) -> float:
        return dpsr_slot2_outage_factor(p, s, x, w) * lam_rd * math.exp(-lam_rd * w)

    value, _ = integrate(f, _nested_inner(cfg), points=(1.0 / lam_rd,))
    return value


def ip_dpsr(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Intercept probability under dynamic splitting (integral form).

    Assembled as the slot-1 mass plus a Bessel-weighted difference of two
    jammer-aggregate averages of the slot-2 kernel, one at the tilted Erlang
    rate and one at the plain rate.
    """
    if p.gamma_th == 0:
        return 1.0
    _require_jamming(p)
    k = p.num_jammers
    tilted = _tilted_rate(p, s)
    lam_je = s.lambda_je
    front = lam_je ** k / gamma_fn(k)
    acc = slot1_intercept_probability(p, s)
    outer = _nested_outer(cfg)
    for b, coef in _binom_coeffs(p.num_sources):
        d = b * s.lambda_sr * s.lambda_re * p.gamma_th / (p.eta * p.psi)

        def weighted(rate: float) -> float:
            def f(x: float) -> float:
                return (x ** (k - 1) * math.exp(-rate * x) * math.sqrt(p.phi * x + 1.0)
                        * dpsr_slot2_kernel(p, s, x, b, cfg))
            value, _ = integrate(f, outer, points=(k / rate,))
            return value

        acc += (2.0 * coef * front * math.exp(-b * s.lambda_sr * p.gamma_th / p.psi)
                * math.sqrt(d) * (weighted(tilted) - weighted(lam_je)))
    return acc


def ip_dpsr_quadrature(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Intercept probability under dynamic splitting: reference quadrature
    over the Erlang jammer-aggregate density."""
    if p.gamma_th == 0:
        return 1.0
    _require_jamming(p)

    def f(x: float) -> float:
        return (slot1_outage_factor(p, s, x) * dpsr_slot2_factor(p, s, x, cfg)
                * erlang_pdf_xi(x, s.lambda_je, p.num_jammers))

    tilt = _tilted_rate(p, s) - s.lambda_je
    value, _ = integrate(f, _nested_outer(cfg), points=(1.0 / tilt, p.num_jammers / s.lambda_je))
    return 1.0 - value


def ip_dpsr_no_jamming(p: SystemParams, s: ChannelStats, cfg: AnalyticConfig = DEFAULT_CONFIG) -> float:
    """Dynamic-splitting intercept probability with the jammers silent."""
    if p.gamma_th == 0:
        return 1.0
    q1 = -math.expm1(-p.gamma_th * s.lambda_se / p.psi)
    return 1.0 - q1 * dpsr_slot2_factor(p, s, 0.0, cfg)
