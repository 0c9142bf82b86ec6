"""Sturm-Liouville machinery: operator application, Wronskians, and the
boundary-identity oracle for bilinear eigenfunction integrals.

The central identity: for eigenfunctions f1, f2 of
``C f = -rho^{-1}((p f')' + q f)`` with distinct eigenvalues E1, E2,

    integral(f1 f2 rho) over ]a,b[  ==  (W(b-) - W(a+)) / (E1 - E2),

where ``W = f1 p f2' - f1' p f2``.  Endpoint Wronskians are obtained by
numerical limits along geometric point ladders; the identity then serves as
an independent oracle for every closed-form bilinear integral in the
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import specfun
from .errors import DomainError, InconsistencyError, PrecisionError
from .numerics import (
    adaptive_quad,
    extrapolate_geometric,
    extrapolate_polynomial,
)

__all__ = [
    "SturmLiouvilleSpec",
    "Eigenpair",
    "bessel_operator",
    "gegenbauer_operator",
    "bessel_eigenpair",
    "gegenbauer_z_eigenpair",
    "gegenbauer_s_eigenpair",
    "apply_operator",
    "wronskian",
    "endpoint_wronskian_limit",
    "greens_identity_check",
    "diagonal_integral",
]


@dataclass(frozen=True)
class SturmLiouvilleSpec:
    """Coefficient triple (p, q, rho) on an open interval ]a, b[.

    The induced operator is ``C f = -rho^{-1}((p f')' + q f)``; the pairing
    is ``<f|g> = integral f g rho``.  rho must be positive and p nonzero
    strictly inside the interval (checked on a sample grid by `validate`).

    ``endpoint_exponents`` optionally lists, per endpoint, the exponents with
    which eigenfunction Wronskians approach their boundary limits; when
    known they let the endpoint extrapolation eliminate each power exactly.
    """

    p: Callable[[float], float]
    q: Callable[[float], float]
    rho: Callable[[float], float]
    interval: tuple[float, float]
    name: str = ""
    endpoint_exponents: tuple[Optional[tuple[float, ...]],
                              Optional[tuple[float, ...]]] = (None, None)

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise DomainError(f"empty interval {self.interval}")

    def validate(self, n: int = 25) -> None:
        for r in self._sample_grid(n):
            if not self.rho(r) > 0.0:
                raise InconsistencyError(f"{self.name}: rho({r}) not positive")
            if self.p(r) == 0.0:
                raise InconsistencyError(f"{self.name}: p({r}) vanishes")

    def _sample_grid(self, n: int) -> np.ndarray:
        a, b = self.interval
        lo = a + 0.25 if math.isfinite(a) else -8.0
        hi = b - 0.25 if math.isfinite(b) else max(lo + 1.0, 8.0)
        if hi <= lo:
            mid = 0.5 * (a + b)
            lo, hi = mid - 0.2 * (b - a), mid + 0.2 * (b - a)
        return np.linspace(lo, hi, n)

    def contains(self, r: float) -> bool:
        a, b = self.interval
        return a < r < b


@dataclass(frozen=True)
class Eigenpair:
    """An eigenfunction together with its eigenvalue.

    ``df`` is an optional analytic first derivative; operations fall back to
    central finite differences when it is absent.
    """

    f: Callable[[float], float]
    energy: float
    df: Optional[Callable[[float], float]] = None


# ---------------------------------------------------------------------------
# canonical operator families
# ---------------------------------------------------------------------------

_MENU_CUTOFF = 4.0


def _exponent_menu(offsets: list[float], step: float = 1.0,
                   cutoff: float = _MENU_CUTOFF) -> Optional[tuple[float, ...]]:
    """Sorted, deduplicated positive exponent menu; None when degenerate.

    ``offsets`` are the base exponents of each power family; each family
    steps by ``step``.  A near-zero member signals logarithmic degeneracy
    (integer order), for which no pure-power menu exists.
    """
    menu = set()
    for base in offsets:
        e = base
        while e <= cutoff:
            menu.add(e)
            e += step
    out = sorted(menu)
    if any(e < 0.05 for e in out):
        return None
    # coinciding families signal logarithmic corrections: no pure-power menu
    for i in range(len(out) - 1):
        if out[i + 1] - out[i] < 0.05 and out[i + 1] - out[i] > 1e-9:
            return None
    dedup: list[float] = []
    for e in out:
        if not dedup or e - dedup[-1] > 1e-9:
            dedup.append(e)
    return tuple(dedup)


def bessel_operator(alpha: float) -> SturmLiouvilleSpec:
    """Radial Bessel operator on ]0, inf[ with density 2r.

    p = 2r, q = -2 alpha^2 / r, rho = 2r; K_alpha(b r) is an eigenfunction
    with eigenvalue -b^2.
    """
    a2 = alpha * alpha
    aa = abs(alpha)
    # Wronskians of K-pairs approach r = 0 through these power families
    # (each stepping by 2: the factor series run in r^2); integer orders
    # carry logarithms, for which no pure-power menu exists
    menu = None
    if abs(alpha - round(alpha)) > 0.025:
        menu = _exponent_menu([2.0 - 2.0 * aa, 2.0, 2.0 + 2.0 * aa], step=2.0)
    return SturmLiouvilleSpec(
        p=lambda r: 2.0 * r,
        q=lambda r: -2.0 * a2 / r,
        rho=lambda r: 2.0 * r,
        interval=(0.0, math.inf),
        name=f"bessel(alpha={alpha})",
        endpoint_exponents=(menu, None),
    )


def gegenbauer_operator(alpha: float, branch: str = "sphere") -> SturmLiouvilleSpec:
    """Gegenbauer operator with density 2(1 -+ w^2)^alpha.

    branch 'sphere': interval ]-1, 1[, p = 2(1-w^2)^{alpha+1};
    branch 'hyperbolic': interval ]1, inf[, p = -2(w^2-1)^{alpha+1}
    (the sign makes the operator the real continuation of the sphere form).
    Both give eigenvalue lam^2 - (alpha + 1/2)^2 on the matching Gegenbauer
    solution family.
    """
    singular_menu = None
    if abs(alpha - round(alpha)) > 0.025:
        singular_menu = _exponent_menu([1.0 - alpha, 1.0, 1.0 + alpha])
    if branch == "sphere":
        # w = +1 is the regular endpoint: Wronskians vanish like (1-w)^(1+alpha)
        regular_menu = _exponent_menu([1.0 + alpha])
        return SturmLiouvilleSpec(
            p=lambda w: 2.0 * (1.0 - w * w) ** (alpha + 1.0),
            q=lambda w: 0.0,
            rho=lambda w: 2.0 * (1.0 - w * w) ** alpha,
            interval=(-1.0, 1.0),
            name=f"gegenbauer-sphere(alpha={alpha})",
            endpoint_exponents=(singular_menu, regular_menu),
        )
    if branch == "hyperbolic":
        return SturmLiouvilleSpec(
            p=lambda w: -2.0 * (w * w - 1.0) ** (alpha + 1.0),
            q=lambda w: 0.0,
            rho=lambda w: 2.0 * (w * w - 1.0) ** alpha,
            interval=(1.0, math.inf),
            name=f"gegenbauer-hyperbolic(alpha={alpha})",
            endpoint_exponents=(singular_menu, None),
        )
    raise DomainError(f"unknown Gegenbauer branch {branch!r}")


def bessel_eigenpair(alpha: float, b: float) -> Eigenpair:
    """K_alpha(b r) with eigenvalue -b^2 and its analytic derivative."""
    if b <= 0.0:
        raise DomainError(f"spectral scale must be positive, got {b}")

    def f(r: float) -> float:
        return float(special.kv(alpha, b * r))

    def df(r: float) -> float:
        return -0.5 * b * float(special.kv(alpha - 1.0, b * r)
                                + special.kv(alpha + 1.0, b * r))

    return Eigenpair(f=f, energy=-b * b, df=df)


def gegenbauer_z_eigenpair(alpha: float, lam: float) -> Eigenpair:
    """Z_{alpha, lam} on ]1, inf[ with eigenvalue lam^2 - (alpha+1/2)^2."""

    def f(w: float) -> float:
        return specfun.gegenbauer_z(alpha, lam, w)

    def df(w: float) -> float:
        return specfun.gegenbauer_z_with_derivative(alpha, lam, w)[1]

    return Eigenpair(f=f, energy=lam * lam - (alpha + 0.5) ** 2, df=df)


def gegenbauer_s_eigenpair(alpha: float, beta: float) -> Eigenpair:
    """S_{alpha, i beta} on ]-1, 1[ with eigenvalue -beta^2 - (alpha+1/2)^2."""
    lam = complex(0.0, beta)

    def f(w: float) -> float:
        return specfun.gegenbauer_s(alpha, lam, w)

    def df(w: float) -> float:
        return specfun.gegenbauer_s_with_derivative(alpha, lam, w)[1]

    return Eigenpair(f=f, energy=-beta * beta - (alpha + 0.5) ** 2, df=df)


# ---------------------------------------------------------------------------
# operator application and Wronskians
# ---------------------------------------------------------------------------

def _default_step(spec: SturmLiouvilleSpec, r: float) -> float:
    h = 1e-5 * max(1.0, abs(r))
    a, b = spec.interval
    margin = math.inf
    if math.isfinite(a):
        margin = min(margin, r - a)
    if math.isfinite(b):
        margin = min(margin, b - r)
    if math.isfinite(margin):
        h = min(h, 0.05 * margin)
    return h


def apply_operator(spec: SturmLiouvilleSpec, f: Callable[[float], float],
                   r: float, h: float | None = None,
                   df: Callable[[float], float] | None = None) -> float:
    """Evaluate C f = -rho^{-1}((p f')' + q f) at an interior point.

    Derivatives are conservative central differences of step ``h`` (default
    1e-5 * max(1, |r|), capped away from the endpoints); an analytic ``df``
    replaces the inner stencil.
    """
    if not spec.contains(r):
        raise DomainError(f"{spec.name}: point {r} outside open interval {spec.interval}")
    if h is None:
        h = _default_step(spec, r)
    if r + h == r:
        raise PrecisionError(f"step underflow at r={r}")
    if not (spec.contains(r - h) and spec.contains(r + h)):
        raise DomainError(f"stencil of width {h} leaves the interval at r={r}")

    if df is not None:
        dpf = (spec.p(r + h) * df(r + h) - spec.p(r - h) * df(r - h)) / (2.0 * h)
    else:
        # conservative flux stencil: d/dr(p f') with half-step p samples
        dpf = (
            spec.p(r + 0.5 * h) * (f(r + h) - f(r))
            - spec.p(r - 0.5 * h) * (f(r) - f(r - h))
        ) / (h * h)
    return -(dpf + spec.q(r) * f(r)) / spec.rho(r)


def _derivative_of(pair: Eigenpair, r: float, h: float) -> float:
    if pair.df is not None:
        return pair.df(r)
    return (pair.f(r + h) - pair.f(r - h)) / (2.0 * h)


def wronskian(spec: SturmLiouvilleSpec, f1: Eigenpair, f2: Eigenpair,
              r: float, h: float | None = None) -> float:
    """W(r) = f1 p f2' - f1' p f2."""
    if not spec.contains(r):
        raise DomainError(f"{spec.name}: point {r} outside open interval {spec.interval}")
    if h is None:
        h = _default_step(spec, r)
    pr = spec.p(r)
    return f1.f(r) * pr * _derivative_of(f2, r, h) - _derivative_of(f1, r, h) * pr * f2.f(r)


# ---------------------------------------------------------------------------
# endpoint limits and the boundary identity
# ---------------------------------------------------------------------------

def _endpoint_ladder(spec: SturmLiouvilleSpec, which: str, n_terms: int) -> list[float]:
    a, b = spec.interval
    if which == "lower":
        if math.isfinite(a):
            span = (b - a) if math.isfinite(b) else 2.0
            off = 0.25 * min(1.0, span)
            return [a + off * 2.0 ** (-k) for k in range(n_terms)]
        return [-(2.0 ** (k + 1)) for k in range(n_terms)]
    if which == "upper":
        if math.isfinite(b):
            span = (b - a) if math.isfinite(a) else 2.0
            off = 0.25 * min(1.0, span)
            return [b - off * 2.0 ** (-k) for k in range(n_terms)]
        start = max(2.0, (a + 1.0) * 2.0 if math.isfinite(a) else 2.0)
        return [start * 2.0 ** k for k in range(n_terms)]
    raise DomainError(f"endpoint must be 'lower' or 'upper', got {which!r}")


def _eliminate_known_exponents(vals: list[float], ratio: float,
                               exponents: tuple[float, ...]) -> tuple[float, float]:
    """Richardson elimination of known approach powers on a geometric ladder.

    For samples W(v0 * ratio^k) = W0 + sum c_e (v0 ratio^k)^e, each stage
    annihilates one power exactly: S_k = (W_{k+1} - ratio^e W_k)/(1 - ratio^e).
    """
    seq = list(vals)
    for e in exponents:
        if len(seq) < 2:
            break
        f = ratio ** e
        seq = [(seq[i + 1] - f * seq[i]) / (1.0 - f) for i in range(len(seq) - 1)]
    if len(seq) >= 2:
        return seq[-1], abs(seq[-1] - seq[-2])
    return seq[-1], math.nan


def endpoint_wronskian_limit(spec: SturmLiouvilleSpec, f1: Eigenpair, f2: Eigenpair,
                             which: str, n_terms: int | None = None,
                             passes: int = 3) -> tuple[float, float]:
    """Wronskian limit at an endpoint along a geometric point ladder.

    Returns ``(limit, error_estimate)``.  When the operator family publishes
    its endpoint approach exponents, each power is eliminated exactly by
    Richardson stages; otherwise iterated Aitken acceleration is used (the
    exponents are generally non-integer, and each pass clears the currently
    dominant geometric component).
    """
    menu = spec.endpoint_exponents[0 if which == "lower" else 1]
    a, b = spec.interval
    finite_end = math.isfinite(a) if which == "lower" else math.isfinite(b)
    if not finite_end:
        menu = None
    if n_terms is None:
        n_terms = (len(menu) + 4) if menu is not None else 14
    pts = _endpoint_ladder(spec, which, n_terms)
    vals = [wronskian(spec, f1, f2, r) for r in pts]
    scale = max(abs(v) for v in vals)
    if scale == 0.0:
        return 0.0, 0.0
    # decayed-to-zero tails need no acceleration
    if abs(vals[-1]) < 1e-13 * scale and abs(vals[-2]) < 1e-12 * scale:
        return 0.0, abs(vals[-1])
    if menu is not None:
        return _eliminate_known_exponents(vals, 0.5, menu)
    return extrapolate_geometric(vals, passes=passes)


def _integrability_probe(spec: SturmLiouvilleSpec, g: Callable[[float], float]) -> None:
    """Reject clearly non-integrable products near the endpoints."""
    for which in ("lower", "upper"):
        pts = _endpoint_ladder(spec, which, 6)[-3:]
        a, b = spec.interval
        ref = a if which == "lower" else b
        weights = []
        for r in pts:
            d = abs(r - ref) if math.isfinite(ref) else abs(r)
            power = 0.99 if math.isfinite(ref) else -1.01
            weights.append(abs(g(r)) * d ** power)
        if weights[0] > 0 and weights[2] > 1.69 * weights[1] > 1.69 * 1.3 * weights[0]:
            raise InconsistencyError(
                f"{spec.name}: product looks non-integrable near the {which} endpoint"
            )


def greens_identity_check(spec: SturmLiouvilleSpec, f1: Eigenpair, f2: Eigenpair,
                          rtol: float = 1e-10,
                          n_terms: int | None = None) -> tuple[float, float]:
    """Both sides of the boundary identity: (lhs, rhs).

    lhs: adaptive quadrature of f1 f2 rho over the interval.
    rhs: (W(b-) - W(a+)) / (E1 - E2) with endpoint limits by extrapolation.
    """
    if f1.energy == f2.energy:
        raise DomainError("eigenvalues must differ; use diagonal_integral instead")

    def g(r: float) -> float:
        return f1.f(r) * f2.f(r) * spec.rho(r)

    _integrability_probe(spec, g)

    a, b = spec.interval
    if math.isinf(b) and math.isfinite(a):
        mid = a + 2.0
        v1, e1 = adaptive_quad(g, a, mid, rtol=rtol)
        v2, e2 = adaptive_quad(g, mid, b, rtol=rtol)
        lhs = v1 + v2
    else:
        lhs, _ = adaptive_quad(g, a, b, rtol=rtol)

    wb, _ = endpoint_wronskian_limit(spec, f1, f2, "upper", n_terms=n_terms)
    wa, _ = endpoint_wronskian_limit(spec, f1, f2, "lower", n_terms=n_terms)
    rhs = (wb - wa) / (f1.energy - f2.energy)
    return lhs, rhs


def diagonal_integral(spec: SturmLiouvilleSpec, family: Callable[[float], Eigenpair],
                      energy: float, steps: tuple[float, ...] | None = None,
                      n_terms: int | None = None) -> float:
    """integral(f^2 rho) as the equal-eigenvalue limit of the boundary identity.

    ``family`` maps an eigenvalue to its Eigenpair; the right-hand side is
    evaluated on an eigenvalue-gap ladder and extrapolated to gap zero
    (the quantity is analytic in the gap, so polynomial extrapolation in the
    step applies).
    """
    if steps is None:
        steps = tuple(1e-2 * 2.0 ** (-k) for k in range(6))
    f1 = family(energy)
    rhs_vals = []
    gaps = []
    for hstep in steps:
        f2 = family(energy - hstep)
        wb, _ = endpoint_wronskian_limit(spec, f1, f2, "upper", n_terms=n_terms)
        wa, _ = endpoint_wronskian_limit(spec, f1, f2, "lower", n_terms=n_terms)
        gap = f1.energy - f2.energy
        gaps.append(gap)
        rhs_vals.append((wb - wa) / gap)
    val, _ = extrapolate_polynomial(gaps, rhs_vals)
    return val
