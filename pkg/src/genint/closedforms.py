"""Closed forms of the bilinear Macdonald and Gegenbauer integrals.

Four families are covered, each over its natural parameter domain:

* pairs of Macdonald functions against the measure 2r dr (distinct scales
  and the squared/diagonal case), with the non-integer-order analytic
  continuation and the anomalous digamma-sum values at integer orders;
* pairs of Gegenbauer functions of either kind against their weight
  (1 -+ w^2)^alpha d(2w).

The continuation formulas have removable or genuine singular limits at
equal spectral parameters and at integer order; `limit_diagonal` evaluates
those limits by polynomial extrapolation, and the closed-form entry points
route nearly-coincident parameters there automatically (the raw expressions
lose all precision to cancellation in that regime).
"""

from __future__ import annotations

import math

from . import specfun
from .errors import DomainError, RedirectError
from .numerics import extrapolate_polynomial, sinpi

__all__ = [
    "mac_bilinear_closed",
    "mac_square_closed",
    "geg_s_bilinear_closed",
    "geg_z_bilinear_closed",
    "limit_diagonal",
    "NEAR_INTEGER_ALPHA",
    "NEAR_DIAGONAL_GAP",
]

# Routing thresholds (module configuration).
NEAR_INTEGER_ALPHA = 1e-6
NEAR_DIAGONAL_GAP = 1e-4


def _is_integer(alpha: float) -> bool:
    return alpha == round(alpha)


# ---------------------------------------------------------------------------
# Macdonald pairs
# ---------------------------------------------------------------------------

def _mac_bilinear_continuation(alpha: float, a: float, b: float) -> float:
    # pi ((a/b)^al - (b/a)^al) / (sin(pi al) (a^2 - b^2)), written through
    # sinh to stay finite-accuracy arbitrarily close to the diagonal
    s = math.log(a / b)
    return math.pi * math.exp(-s) * math.sinh(alpha * s) / (
        b * b * sinpi(alpha) * math.sinh(s))


def _mac_bilinear_zero_order(a: float, b: float) -> float:
    # 2 ln(a/b) / (a^2 - b^2)
    s = math.log(a / b)
    return 2.0 * s / (b * b * math.expm1(2.0 * s))


def _mac_bilinear_anomalous(n: int, a: float, b: float) -> float:
    n = abs(n)
    lead = (-1.0) ** n * 2.0 * (
        (a / b) ** n * math.log(a / 2.0) - (b / a) ** n * math.log(b / 2.0)
    ) / (a * a - b * b)
    acc = 0.0
    for k in range(n):
        acc += (a / b) ** (2 * k - n + 1) * (
            specfun.digamma(1.0 + k) + specfun.digamma(float(n - k)))
    return lead - (-1.0) ** n / (a * b) * acc


def mac_bilinear_closed(alpha: float, a: float, b: float) -> float:
    """Closed value of the generalized integral of K_al(ar) K_al(br) 2r dr.

    Non-integer order: the analytic continuation
    pi ((a/b)^al - (b/a)^al)/(sin(pi al)(a^2-b^2)); order zero:
    2 ln(a/b)/(a^2-b^2); nonzero integer order: the anomalous digamma-sum
    value (which is NOT the finite part of the continuation).  Exactly
    coincident scales redirect to `mac_square_closed`; nearly coincident
    scales are routed through the diagonal limit automatically.
    """
    if a <= 0.0 or b <= 0.0:
        raise DomainError("scales must be positive")
    if a == b:
        raise RedirectError(
            "equal scales: use mac_square_closed", target="mac_square_closed")
    if abs(a - b) < NEAR_DIAGONAL_GAP * b:
        val, _ = limit_diagonal("mac_bilinear",
                                {"alpha": alpha, "b": 0.5 * (a + b)}, "spectral")
        return val
    if _is_integer(alpha):
        n = int(round(alpha))
        if n == 0:
            return _mac_bilinear_zero_order(a, b)
        return _mac_bilinear_anomalous(n, a, b)
    return _mac_bilinear_continuation(alpha, a, b)


def mac_square_closed(alpha: float, b: float) -> float:
    """Closed value of the generalized integral of K_al(br)^2 2r dr.

    pi al/(b^2 sin(pi al)) off the integers, 1/b^2 at order zero, and the
    anomalous value (-1)^al/b^2 (|al| ln(b^2/4) + 1 + 2|al|(1 - psi(1+|al|)))
    at nonzero integer order.
    """
    if b <= 0.0:
        raise DomainError("scale must be positive")
    if _is_integer(alpha):
        n = abs(int(round(alpha)))
        if n == 0:
            return 1.0 / (b * b)
        return (-1.0) ** n / (b * b) * (
            n * math.log(b * b / 4.0) + 1.0
            + 2.0 * n * (1.0 - specfun.digamma(1.0 + n)))
    return math.pi * alpha / (b * b * sinpi(alpha))


# ---------------------------------------------------------------------------
# Gegenbauer pairs
# ---------------------------------------------------------------------------

def _geg_s_raw(alpha: float, beta1: float, beta2: float) -> float:
    bracket = (
        math.cosh(math.pi * beta1) / specfun.gamma_abs2(0.5 + alpha, beta2)
        - math.cosh(math.pi * beta2) / specfun.gamma_abs2(0.5 + alpha, beta1)
    )
    return 2.0 ** (2.0 * alpha + 2.0) * bracket / (
        (beta1 * beta1 - beta2 * beta2) * sinpi(alpha))


def geg_s_bilinear_closed(alpha: float, beta1: float, beta2: float) -> float:
    """Closed value of gen integral S_{al,i b1} S_{al,i b2} (1-w^2)^al d(2w).

    Valid for non-integer order with Re(alpha) > -1 (the generalized range);
    the Gamma-pair products are evaluated as real |Gamma|^2 values.  Equal
    spectral parameters redirect to `limit_diagonal`.
    """
    if _is_integer(alpha):
        raise DomainError(
            f"order {alpha} is an integer: the closed form has a pole "
            "(use limit_diagonal over alpha or the finite-part quadrature)")
    if alpha <= -1.0:
        raise DomainError("the generalized identity needs alpha > -1")
    if beta1 == beta2:
        raise RedirectError(
            "equal degrees: use limit_diagonal", target="limit_diagonal")
    scale = max(abs(beta1), abs(beta2), 1.0)
    if abs(beta1 - beta2) < NEAR_DIAGONAL_GAP * scale:
        val, _ = limit_diagonal(
            "geg_s", {"alpha": alpha, "beta": 0.5 * (beta1 + beta2)}, "spectral")
        return val
    return _geg_s_raw(alpha, beta1, beta2)


def _geg_z_raw(alpha: float, l1: float, l2: float) -> float:
    bracket = (
        1.0 / (specfun.gamma(0.5 - alpha + l1) * specfun.gamma(0.5 + alpha + l2))
        - 1.0 / (specfun.gamma(0.5 - alpha + l2) * specfun.gamma(0.5 + alpha + l1))
    )
    return 2.0 ** (l1 + l2 + 1.0) * bracket / ((l1 * l1 - l2 * l2) * sinpi(alpha))


def geg_z_bilinear_closed(alpha: float, l1: float, l2: float) -> float:
    """Closed value of gen integral Z_{al,l1} Z_{al,l2} (w^2-1)^al d(2w).

    Standard validity: |Re alpha| < 1 with positive degrees; the same
    expression continues the generalized integral to non-integer orders of
    any size.  Equal degrees redirect to `limit_diagonal`.
    """
    if _is_integer(alpha):
        raise DomainError(
            f"order {alpha} is an integer: the closed form has a pole "
            "(use the finite-part quadrature for the anomalous value)")
    if l1 <= 0.0 or l2 <= 0.0:
        raise DomainError("degrees must be positive")
    if l1 == l2:
        raise RedirectError(
            "equal degrees: use limit_diagonal", target="limit_diagonal")
    scale = max(l1, l2)
    if abs(l1 - l2) < NEAR_DIAGONAL_GAP * scale:
        val, _ = limit_diagonal(
            "geg_z", {"alpha": alpha, "lam": 0.5 * (l1 + l2)}, "spectral")
        return val
    return _geg_z_raw(alpha, l1, l2)


# ---------------------------------------------------------------------------
# removable limits
# ---------------------------------------------------------------------------

def _limit_ladder(phi, t0: float, n: int = 6) -> tuple[float, float]:
    steps = [t0 * 2.0 ** (-k) for k in range(n)]
    vals = [phi(t) for t in steps]
    return extrapolate_polynomial(steps, vals)


def limit_diagonal(formula: str, params: dict, limit_var: str,
                   t0: float = 1e-2) -> tuple[float, float]:
    """Equal-parameter or zero-order limit of a closed form.

    ``formula`` is one of 'mac_bilinear', 'geg_s', 'geg_z'; ``limit_var`` is
    'spectral' (scales/degrees coalescing) or 'alpha' (order -> 0).  The
    formula is evaluated on a geometric ladder of offsets and extrapolated
    to the coincidence point (the expressions are analytic in the offset).
    Returns ``(value, error_estimate)``.
    """
    if formula == "mac_bilinear":
        if limit_var == "spectral":
            alpha, b = params["alpha"], params["b"]
            if _is_integer(alpha):
                n = int(round(alpha))
                phi = (lambda t: _mac_bilinear_zero_order(b * (1.0 + t), b)) if n == 0 \
                    else (lambda t: _mac_bilinear_anomalous(n, b * (1.0 + t), b))
            else:
                phi = lambda t: _mac_bilinear_continuation(alpha, b * (1.0 + t), b)
            return _limit_ladder(phi, t0)
        if limit_var == "alpha":
            a, b = params["a"], params["b"]
            return _limit_ladder(lambda t: _mac_bilinear_continuation(t, a, b), t0)
    elif formula == "geg_s":
        if limit_var == "spectral":
            alpha, beta = params["alpha"], params["beta"]
            scale = max(abs(beta), 1.0)
            return _limit_ladder(
                lambda t: _geg_s_raw(alpha, beta + t * scale, beta), t0)
        if limit_var == "alpha":
            b1, b2 = params["beta1"], params["beta2"]
            return _limit_ladder(lambda t: _geg_s_raw(t, b1, b2), t0)
    elif formula == "geg_z":
        if limit_var == "spectral":
            alpha, lam = params["alpha"], params["lam"]
            scale = max(lam, 1.0)
            return _limit_ladder(
                lambda t: _geg_z_raw(alpha, lam + t * scale, lam), t0)
        if limit_var == "alpha":
            l1, l2 = params["l1"], params["l2"]
            return _limit_ladder(lambda t: _geg_z_raw(t, l1, l2), t0)
    else:
        raise DomainError(f"unknown formula {formula!r}")
    raise DomainError(f"unknown limit variable {limit_var!r}")
