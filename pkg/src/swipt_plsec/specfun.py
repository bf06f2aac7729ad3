"""Numerical kernels shared by the analytic evaluators.

Thin, contract-enforcing wrappers around scipy for the Gamma function,
the modified Bessel function of the second kind, adaptive quadrature on
finite and semi-infinite intervals, plus the one Meijer-G instance the
intercept series needs and a truncation helper for alternating series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _scipy_integrate
from scipy import special as _special

__all__ = [
    "NumericalError",
    "QuadratureError",
    "SeriesNotConverged",
    "QuadratureSpec",
    "SeriesResult",
    "gamma_fn",
    "bessel_k",
    "integrate",
    "meijer_g3013",
    "sum_series",
]


class NumericalError(RuntimeError):
    """A numerical kernel failed to reach its requested accuracy."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge; carries the achieved accuracy."""

    def __init__(self, message: str, value: float = math.nan, error_estimate: float = math.inf):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class SeriesNotConverged(NumericalError):
    """Series truncation stopped before the requested tolerance was met.

    ``value`` holds the best available partial sum (truncated at the smallest
    term) and ``achieved_rel_tol`` the relative size of that term, which for
    an alternating asymptotic tail bounds the attainable accuracy.
    """

    def __init__(self, message: str, value: float, achieved_rel_tol: float, terms: int):
        super().__init__(message)
        self.value = value
        self.achieved_rel_tol = achieved_rel_tol
        self.terms = terms


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy contract for :func:`integrate`.

    ``upper = inf`` selects the semi-infinite domain ``[lower, inf)``.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.lower < self.upper:
            raise ValueError("need lower < upper")


@dataclass(frozen=True)
class SeriesResult:
    value: float
    error_estimate: float
    terms: int
    converged: bool


def gamma_fn(x: float) -> float:
    """Gamma function for positive real argument."""
    if x <= 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return float(_special.gamma(x))


def bessel_k(v: float, z):
    """Modified Bessel function of the second kind K_v(z), real order, z > 0."""
    if np.any(np.asarray(z) <= 0):
        raise ValueError("bessel_k requires z > 0")
    out = _special.kv(v, z)
    return float(out) if np.isscalar(z) else out


def integrate(
    f: Callable[[float], float],
    spec: QuadratureSpec = QuadratureSpec(),
    points: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Adaptive quadrature of ``f`` over the requested domain.

    Returns ``(value, error_estimate)``. ``points`` are optional interior
    split locations used to resolve boundary layers (e.g. the steep rise of
    ``exp(-a/x)`` integrands near zero); out-of-domain points are ignored.
    Raises :class:`QuadratureError` when the achieved error exceeds
    ``max(rel_tol * |value|, abs_tol)`` or the integrand produced NaN.
    """

    def checked(x: float) -> float:
        y = f(x)
        if math.isnan(y):
            raise QuadratureError(f"integrand returned NaN at x={x!r}")
        return y

    edges = [spec.lower]
    if points:
        for pt in sorted(points):
            if spec.lower < pt < spec.upper and pt > edges[-1]:
                edges.append(float(pt))
    edges.append(spec.upper)

    total = 0.0
    err = 0.0
    seg_abs = spec.abs_tol / (len(edges) - 1)  # keep the summed budget within spec
    with warnings.catch_warnings():
        # convergence is judged against the requested tolerances below
        warnings.simplefilter("ignore", _scipy_integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, e = _scipy_integrate.quad(
                checked, lo, hi,
                epsabs=seg_abs, epsrel=spec.rel_tol,
                limit=spec.max_subdivisions,
            )
            total += val
            err += e
    if not math.isfinite(total):
        raise QuadratureError("quadrature produced a non-finite value", total, err)
    if err > max(spec.rel_tol * abs(total), spec.abs_tol):
        raise QuadratureError(
            f"quadrature reached error {err:.3e} on value {total:.6e}, "
            f"above max(rel_tol*|value|, abs_tol)", total, err,
        )
    return total, err


def meijer_g3013(z: float, b1: float, spec: QuadratureSpec | None = None) -> float:
    """The Meijer G^{3,0}_{1,3}(z | 0; b1, 1, 0) instance used by the intercept series.

    Only ``b1 = -mu`` with integer ``mu >= 1`` arises.  The value is computed
    from the equivalent Bessel integral

        G = 2 sqrt(z) / Gamma(mu) * int_1^inf y^{1/2} (y-1)^{mu-1} K_1(2 sqrt(z y)) dy,

    which is the form the series term is assembled from, so the G-labelled
    path and the direct-quadrature path agree by construction up to
    quadrature error.
    """
    if z <= 0:
        raise ValueError("meijer_g3013 requires z > 0")
    mu = -b1
    mu_int = round(mu)
    if abs(mu - mu_int) > 1e-9 or mu_int < 1:
        raise ValueError(f"b1 must be a negative integer -mu with mu >= 1, got {b1}")
    mu = int(mu_int)

    def integrand(y: float) -> float:
        if y <= 1.0:
            return 0.0
        return y ** 0.5 * (y - 1.0) ** (mu - 1) * _special.kv(1, 2.0 * math.sqrt(z * y))

    # integrand peaks roughly where (mu-1)/(y-1) = sqrt(z/y)
    hint = 1.0 + (mu - 1) / math.sqrt(z) if mu > 1 else 1.0 + 1.0 / math.sqrt(z)
    qspec = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-60, lower=1.0)
    if qspec.lower != 1.0:
        qspec = QuadratureSpec(qspec.rel_tol, qspec.abs_tol, qspec.max_subdivisions, 1.0, math.inf)
    value, _ = integrate(integrand, qspec, points=(hint, 4.0 * hint))
    return 2.0 * math.sqrt(z) / gamma_fn(mu) * value


def sum_series(
    term_fn: Callable[[int], float],
    rel_tol: float = 1e-8,
    max_terms: int = 200,
    initial: float = 0.0,
) -> SeriesResult:
    """Accumulate ``initial + term_fn(0) + term_fn(1) + ...`` until
    |term| <= rel_tol * |partial|.

    ``initial`` is any closed-form part of the quantity being summed; the
    stopping rule is relative to the full partial sum including it.
    Alternating tails that start growing again (asymptotic series) are cut at
    the running minimum-magnitude term: the partial sum at that point is the
    best available estimate and the dropped term bounds its error.  Such a
    truncation, and hitting ``max_terms``, both report ``converged=False``;
    callers decide whether the achieved accuracy is acceptable.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")

    partial = initial
    best_partial = initial
    best_abs = math.inf
    best_idx = 0
    prev_abs = math.inf
    growth = 0
    for t in range(max_terms):
        term = term_fn(t)
        if not math.isfinite(term):
            raise SeriesNotConverged(
                f"series term {t} is non-finite", best_partial,
                best_abs / max(abs(best_partial), 1e-300), t,
            )
        partial += term
        a = abs(term)
        if a <= rel_tol * max(abs(partial), 1e-300):
            return SeriesResult(partial, a, t + 1, True)
        if a < best_abs:
            best_abs, best_partial, best_idx = a, partial, t + 1
        if a > prev_abs:
            growth += 1
            if growth >= 3 and t >= 2:
                break
        else:
            growth = 0
        prev_abs = a
    return SeriesResult(
        best_partial,
        best_abs / max(abs(best_partial), 1e-300),
        best_idx,
        False,
    )
