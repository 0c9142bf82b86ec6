"""Shared numerical machinery: sequence extrapolation, quadrature wrappers,
finite differences, log-log rate fits and formal power-series arithmetic.

All routines are pure; nothing here holds state.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ExtrapolationError, QuadratureError

EULER_GAMMA = 0.5772156649015328606


def sinpi(x: float) -> float:
    """sin(pi*x) computed from the distance to the nearest integer.

    Keeps full relative accuracy near the zeros, where sin(pi*x) evaluated
    directly loses digits to the rounding of pi*x.
    """
    n = round(x)
    return (-1.0) ** (n % 2) * math.sin(math.pi * (x - n))


# ---------------------------------------------------------------------------
# sequence limits
# ---------------------------------------------------------------------------

def aitken_pass(values: Sequence[float]) -> list[float]:
    """One Aitken delta-squared pass.

    Annihilates a single geometric error term exactly, which is the right
    model for sequences sampled along geometric point ladders (the error
    behaves like c * q**n with unknown q).
    """
    out = []
    for i in range(len(values) - 2):
        x0, x1, x2 = values[i], values[i + 1], values[i + 2]
        denom = (x2 - x1) - (x1 - x0)
        if denom == 0.0:
            out.append(x2)
        else:
            out.append(x2 - (x2 - x1) ** 2 / denom)
    return out

def extrapolate_geometric(values: Sequence[float], passes: int = 2) -> tuple[float, float]:
    """Limit of a sequence sampled along a geometric ladder.

    Applies `passes` iterated Aitken steps (default two, enough to clear the
    two leading error powers) and returns ``(limit, error_estimate)``.

    Raises
    ------
    ExtrapolationError
        If fewer than three values are supplied or the accelerated sequence
        moves away from its final value.
    """
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise ExtrapolationError("need at least three sequence values", table=[vals])
    table = [vals]
    for _ in range(passes):
        if len(table[-1]) < 3:
            break
        table.append(aitken_pass(table[-1]))
    best = table[-1][-1]
    prev = table[-1][-2] if len(table[-1]) >= 2 else table[-2][-1]
    err = abs(best - prev)
    scale = max(abs(best), 1e-300)
    raw_spread = abs(vals[-1] - vals[-2])
    if err > 10.0 * (raw_spread + 1e-14 * scale) and err > 1e-9 * scale:
        raise ExtrapolationError(
            f"sequence does not settle (last extrapolants differ by {err:.3e})",
            table=table,
        )
    return best, err

def extrapolate_polynomial(steps: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Neville extrapolation of ``values(h)`` to ``h = 0``.

    Appropriate when the quantity is analytic in the step ``h`` (power-series
    error in h). Returns ``(limit, error_estimate)``.
    """
    hs = [float(h) for h in steps]
    tab = [float(v) for v in values]
    n = len(tab)
    if n < 2 or n != len(hs):
        raise ExtrapolationError("steps/values length mismatch", table=[tab])
    prev_best = tab[-1]
    for j in range(1, n):
        for k in range(n - 1, j - 1, -1):
            denom = hs[k - j] - hs[k]
            if denom == 0.0:
                raise ExtrapolationError("repeated step size", table=[tab])
            tab[k] = tab[k] + (tab[k] - tab[k - 1]) * hs[k] / denom
        prev_best = tab[-1] if j == n - 1 else prev_best
    err = abs(tab[-1] - tab[-2]) if n >= 2 else float("nan")
    return tab[-1], err


def limit_along(points: Sequence[float], fn: Callable[[float], float],
                passes: int = 2) -> tuple[float, float]:
    """Limit of ``fn`` along a monotone point ladder (typically geometric)."""
    vals = [fn(p) for p in points]
    return extrapolate_geometric(vals, passes=passes)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def adaptive_quad(fn, a, b, rtol=1e-10, atol=0.0, limit=400, points=None) -> tuple[float, float]:
    """scipy QUADPACK wrapper returning ``(value, abserr)``.

    Raises QuadratureError (with the achieved tolerance attached) when the
    integrator reports a failure that exceeds the requested tolerance.
    """
    kwargs = dict(epsabs=atol if atol > 0 else 1e-300, epsrel=rtol, limit=limit)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        kwargs["points"] = [p for p in points if a < p < b]
    with np.errstate(over="ignore", invalid="ignore"), warnings.catch_warnings():
        # accuracy accounting is done on the returned error estimate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, **kwargs)
        except Exception as exc:  # integration blow-up inside QUADPACK
            raise QuadratureError(f"quadrature failed on ({a}, {b}): {exc}") from exc
    scale = max(abs(val), atol if atol > 0 else 0.0, 1e-300)
    if not math.isfinite(val):
        raise QuadratureError(f"quadrature diverged on ({a}, {b})", achieved=err)
    if err > 100.0 * rtol * scale and err > atol + 1e-13 * scale:
        # QUADPACK warning-level accuracy loss: keep going only if mild;
        # the absolute floor accepts vanishing integrals resolved to rounding
        if err > 1e-4 * scale and err > 1e-10:
            raise QuadratureError(
                f"quadrature on ({a}, {b}) achieved only {err:.3e}", achieved=err
            )
    return val, err


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def central_derivative(fn, x, h):
    """O(h^2) first derivative."""
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def derivative_richardson(fn, x, h0=1e-3, levels=3) -> float:
    """First derivative via central differences refined over a step ladder."""
    hs = [h0 / 2 ** k for k in range(levels)]
    vals = [central_derivative(fn, x, h) for h in hs]
    val, _ = extrapolate_polynomial([h * h for h in hs], vals)
    return val


def taylor_coefficients(g: Callable[[float], float], order: int, h0: float = 5e-2) -> list[float]:
    """Taylor coefficients ``[g(0), g'(0), g''(0)/2!, ...]`` up to ``order``.

    Central finite-difference stencils refined by step-halving; adequate for
    the low orders (<= 5) needed by change-of-variable corrections.
    """
    coeffs = [float(g(0.0))]
    for n in range(1, order + 1):
        def nth(h, n=n):
            # central n-th derivative stencil
            total = 0.0
            for k in range(n + 1):
                total += (-1) ** k * math.comb(n, k) * g((n / 2 - k) * h)
            return total / h ** n
        hs = [h0 / 2 ** j for j in range(4)]
        vals = [nth(h) for h in hs]
        d, _ = extrapolate_polynomial([h * h for h in hs], vals)
        coeffs.append(d / math.factorial(n))
    return coeffs


# ---------------------------------------------------------------------------
# rate fitting
# ---------------------------------------------------------------------------

def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log|y| against log x with a 2-sigma half-width."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    n = len(lx)
    A = np.vstack([lx, np.ones(n)]).T
    sol, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope = float(sol[0])
    if n > 2 and res.size:
        sigma2 = float(res[0]) / (n - 2)
        sxx = float(np.sum((lx - lx.mean()) ** 2))
        half = 2.0 * math.sqrt(sigma2 / sxx)
    else:
        half = 0.0
    return slope, half


# ---------------------------------------------------------------------------
# formal power series (dense coefficient lists, index = power)
# ---------------------------------------------------------------------------

def series_mul(a: Sequence[float], b: Sequence[float], n: int) -> list[float]:
    out = [0.0] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


def series_inv(a: Sequence[float], n: int) -> list[float]:
    """Reciprocal series; requires a[0] != 0."""
    if a[0] == 0.0:
        raise ZeroDivisionError("series has no reciprocal (vanishing constant term)")
    out = [0.0] * n
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        acc = 0.0
        for i in range(1, k + 1):
            ai = a[i] if i < len(a) else 0.0
            acc += ai * out[k - i]
        out[k] = -acc / a[0]
    return out


def series_pow(a: Sequence[float], m: int, n: int) -> list[float]:
    out = [0.0] * n
    out[0] = 1.0
    for _ in range(m):
        out = series_mul(out, a, n)
    return out


def series_exp(a: Sequence[float], n: int) -> list[float]:
    """exp of a series with a[0] = 0."""
    if a and a[0] != 0.0:
        raise ValueError("series_exp expects zero constant term")
    out = [0.0] * n
    out[0] = 1.0
    for k in range(1, n):
        acc = 0.0
        for i in range(1, k + 1):
            ai = a[i] if i < len(a) else 0.0
            acc += i * ai * out[k - i]
        out[k] = acc / k
    return out
