"""Quantitative large-degree asymptotics: Gegenbauer functions and their
generalized bilinear integrals against their Macdonald counterparts.

Each check forms the ratio of a prefactored Gegenbauer quantity to the
matching Macdonald quantity at scale parameter lam (or beta); the ratio
tends to 1 with an O(1/scale) error, so along a geometric scale ladder
|ratio - 1| must fall with log-log slope -1.  All prefactors are assembled
in log space: they contain Gamma factors and exponentials far outside
double range at the top of the ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from . import closedforms, genquad, specfun
from .errors import DomainError
from .numerics import loglog_slope

__all__ = [
    "LADDER",
    "RateReport",
    "function_limit_ratio",
    "integral_limit_ratio",
    "function_rate_report",
    "integral_rate_report",
]

LADDER = (10.0, 20.0, 40.0, 80.0, 160.0)


@dataclass(frozen=True)
class RateReport:
    """Scale ladder outcome: ratios, fitted slope, and its half-width."""

    kind: str
    which: str
    alpha: float
    theta: float | None
    scales: tuple[float, ...]
    ratios: tuple[float, ...]
    slope: float
    slope_halfwidth: float

    @property
    def deviations(self) -> tuple[float, ...]:
        return tuple(abs(r - 1.0) for r in self.ratios)

    def monotone(self) -> bool:
        d = self.deviations
        return all(d[i + 1] < d[i] for i in range(len(d) - 1))


def function_limit_ratio(kind: str, alpha: float, scale: float,
                         theta: float = 0.3) -> float:
    """Prefactored Gegenbauer function over its Macdonald limit.

    kind 'Z': the recessive function at cosh(theta) with degree ``scale``;
    kind 'S': the regular function at -cos(theta) with imaginary degree
    i*scale.  Both ratios are 1 + O(1/scale).
    """
    if not (0.0 < theta <= 0.5 * math.pi):
        raise DomainError("theta must lie in (0, pi/2]")
    if scale <= 0.0:
        raise DomainError("scale must be positive")
    if kind == "Z":
        w = math.cosh(theta)
        log_lhs = (0.5 * math.log(math.pi)
                   + float(special.gammaln(0.5 - alpha + scale))
                   + (alpha + 0.5) * (math.log(math.sinh(theta)) - math.log(theta))
                   - (scale + 0.5) * math.log(2.0)
                   + specfun.gegenbauer_z_log(alpha, scale, w))
    elif kind == "S":
        w = -math.cos(theta)
        log_lhs = (math.log(math.pi) - math.pi * scale
                   + (alpha + 0.5) * (math.log(math.sin(theta)) - math.log(theta))
                   - alpha * math.log(2.0)
                   + specfun.gegenbauer_s_log(alpha, scale, w))
    else:
        raise DomainError(f"kind must be 'S' or 'Z', got {kind!r}")
    log_rhs = -alpha * math.log(scale * theta) + math.log(
        specfun.bessel_k(alpha, scale * theta))
    return math.exp(log_lhs - log_rhs)


def integral_limit_ratio(kind: str, alpha: float, scale: float) -> float:
    """Prefactored diagonal Gegenbauer integral over its Macdonald limit.

    The denominator is the closed generalized Macdonald square integral at
    the same order (continuation branch off integer orders, anomalous values
    on them); the numerator is the finite-part Gegenbauer diagonal in its
    canonical variable with the prefactor folded into the kernel scale.
    """
    if scale <= 0.0:
        raise DomainError("scale must be positive")
    if kind == "Z":
        kappa = (0.5 * math.log(math.pi)
                 + float(special.gammaln(0.5 + alpha + scale))
                 - (scale + 0.5) * math.log(2.0)
                 - alpha * math.log(scale))
    elif kind == "S":
        kappa = (math.log(math.pi) - math.pi * scale
                 + alpha * math.log(scale) - alpha * math.log(2.0))
    else:
        raise DomainError(f"kind must be 'S' or 'Z', got {kind!r}")
    lhs = genquad.gen_bilinear_gegenbauer(kind, alpha, scale, scale,
                                          log_kernel_scale=kappa)
    rhs = closedforms.mac_square_closed(alpha, scale)
    return lhs / rhs


def _report(kind: str, which: str, alpha: float, theta: float | None,
            scales, ratios) -> RateReport:
    devs = [abs(r - 1.0) for r in ratios]
    slope, hw = loglog_slope(scales, devs)
    return RateReport(kind=kind, which=which, alpha=alpha, theta=theta,
                      scales=tuple(scales), ratios=tuple(ratios),
                      slope=slope, slope_halfwidth=hw)


def function_rate_report(kind: str, alpha: float,
                         scales=LADDER, theta: float = 0.3) -> RateReport:
    ratios = [function_limit_ratio(kind, alpha, s, theta=theta) for s in scales]
    return _report(kind, "function", alpha, theta, scales, ratios)


def integral_rate_report(kind: str, alpha: float, scales=LADDER) -> RateReport:
    ratios = [integral_limit_ratio(kind, alpha, s) for s in scales]
    return _report(kind, "integral", alpha, None, scales, ratios)
