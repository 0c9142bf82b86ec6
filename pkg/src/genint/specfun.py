"""Gamma-family, Macdonald and Gegenbauer function evaluation.

The two Gegenbauer solution families implemented here are

* ``S`` -- regular at the argument value 1, normalised there to 1/Gamma(order+1),
  defined by a hypergeometric-type series in (1-w)/2 convergent for w in (-1, 3);
* ``Z`` -- recessive at infinity, behaving like w**(-1/2-order-degree)/Gamma(degree+1),
  defined by a series in 2/(1+w) for w > 1.

Both have an algebraic branch point at the far endpoint of their series
domain (w = -1 for S, w = 1 for Z).  Close to that endpoint the defining
series is useless, so three evaluation routes are dispatched:

* the defining series (fast away from the branch point),
* the Whipple transformation exchanging order and degree (moderate w),
* a two-branch connection expansion around the branch point itself.

Everything is double precision; sums are accumulated from term ratios in
numpy chunks with log-scale renormalisation so that very large degrees
(needed by the large-parameter asymptotics) neither overflow nor underflow.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError, PoleError, PrecisionError

__all__ = [
    "gamma",
    "digamma",
    "pochhammer",
    "gamma_abs2",
    "eval_gamma_family",
    "bessel_k",
    "bessel_k_prime",
    "gegenbauer_s",
    "gegenbauer_s_log",
    "gegenbauer_z",
    "gegenbauer_z_log",
    "gegenbauer_s_whipple",
    "gegenbauer_z_whipple",
]

# Route boundaries for Z (w > 1).  Below W_NEAR the Whipple image leaves the
# S series domain, so the defining series and the connection expansion share
# the remaining strip.
W_Z_CROSSOVER = 1.5
W_Z_NEAR = 1.1
# Whipple maps Z onto an alternating S series whose cancellation grows with
# the degree; beyond this degree the defining series is used instead.
WHIPPLE_MAX_DEGREE = 30.0
# S switches away from its defining series below this argument.
W_S_CONNECT = -0.5
# The connection branches cancel like exp(2*degree*sqrt(x)); cap the digits
# sacrificed to that cancellation before falling back to the direct series.
_CONNECTION_DIGIT_BUDGET = 3.0
# Offset used to sidestep the integer-order poles of the connection
# coefficients (the function itself is analytic there).
INTEGER_ORDER_EPS = 1e-3

_CHUNK = 64
_MAX_TERMS = 2_000_000


# ---------------------------------------------------------------------------
# gamma family
# ---------------------------------------------------------------------------

def _is_nonpositive_integer(z) -> bool:
    zr = complex(z)
    return zr.imag == 0.0 and zr.real <= 0.0 and zr.real == round(zr.real)


def gamma(z):
    """Gamma function for real or complex argument."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at z={z}", location=z)
    out = special.gamma(z)
    if isinstance(z, complex):
        return complex(out)
    return float(out)


def digamma(z):
    """Digamma (psi) function."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at z={z}", location=z)
    out = special.digamma(z)
    if isinstance(z, complex):
        return complex(out)
    return float(out)


def pochhammer(z, n: int):
    """Rising factorial z(z+1)...(z+n-1); pochhammer(z, 0) == 1."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"pochhammer order must be a non-negative integer, got {n}")
    out = 1.0 if not isinstance(z, complex) else 1.0 + 0.0j
    for k in range(int(n)):
        out *= z + k
    return out


def gamma_abs2(x: float, y: float) -> float:
    """|Gamma(x + iy)|**2 computed without a complex phase.

    Only the real part of log-gamma enters, which avoids the phase
    cancellation a naive product of two complex gamma evaluations incurs.
    """
    if y == 0.0 and x <= 0.0 and x == round(x):
        raise PoleError(f"gamma pole at z={x}", location=x)
    return float(math.exp(2.0 * special.loggamma(complex(x, y)).real))


def eval_gamma_family(kind: str, *args):
    """Dispatch for the gamma-family evaluators exposed by the CLI."""
    if kind == "gamma":
        return gamma(*args)
    if kind == "digamma":
        return digamma(*args)
    if kind == "pochhammer":
        return pochhammer(*args)
    raise DomainError(f"unknown gamma-family kind {kind!r}")


def _lgamma_signed(x: float) -> tuple[float, float]:
    """(log|Gamma(x)|, sign) for real x off the poles."""
    if x <= 0.0 and x == round(x):
        raise PoleError(f"gamma pole at z={x}", location=x)
    return float(special.gammaln(x)), float(special.gammasgn(x))


# ---------------------------------------------------------------------------
# Macdonald function
# ---------------------------------------------------------------------------

def bessel_k(alpha: float, x: float) -> float:
    """Macdonald function K_alpha(x) for x > 0 (symmetric in alpha <-> -alpha)."""
    if x <= 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    if x > 600.0:
        # the unscaled evaluation underflows prematurely near the bottom of
        # double range; recombine from the exponentially scaled form
        val = float(special.kve(alpha, x)) * math.exp(-x)
    else:
        val = float(special.kv(alpha, x))
    if math.isinf(val):
        raise OverflowError(f"bessel_k({alpha}, {x}) overflows double precision")
    if math.isnan(val):
        raise PrecisionError(f"bessel_k({alpha}, {x}) failed to evaluate")
    return val


def bessel_k_prime(alpha: float, x: float) -> float:
    """d/dx K_alpha(x) via the two-term recurrence."""
    if x <= 0.0:
        raise DomainError(f"bessel_k_prime requires x > 0, got {x}")
    return -0.5 * float(special.kv(alpha - 1.0, x) + special.kv(alpha + 1.0, x))


# ---------------------------------------------------------------------------
# chunked ratio-series summation
# ---------------------------------------------------------------------------

def _sum_ratio_series(ratio, tol: float, max_terms: int = _MAX_TERMS,
                      limit_ratio: float | None = None):
    """Sum sum_j t_j with t_0 = 1 and t_{j+1} = t_j * ratio(j).

    ``ratio`` maps an int array of indices j to the term ratios.  Returns
    ``(total, log_rescale)`` with the actual sum equal to
    ``total * exp(log_rescale)``; the rescale keeps running values inside
    double range for series whose terms transiently grow very large.
    ``limit_ratio`` is the known asymptotic term ratio; the geometric tail
    bound uses the larger of it and the last observed ratio so that series
    approaching their ratio from below are not truncated early.
    """
    total = 1.0
    t = 1.0
    log_rescale = 0.0
    scale_floor = 1.0
    j = 0
    chunk = _CHUNK
    q = math.nan
    while j < max_terms:
        r = ratio(np.arange(j, j + chunk))
        terms = t * np.cumprod(r)
        total = total + terms.sum()
        t = terms[-1]
        chunk_max = float(np.max(np.abs(terms)))
        scale_floor = max(scale_floor * 1e-2, chunk_max, 1e-280)
        j += chunk
        chunk = min(2 * chunk, 16384)
        q = float(np.abs(r[-1]))
        q_eff = max(q, limit_ratio if limit_ratio is not None else 0.0)
        if q_eff < 1.0 - 1e-9:
            tail = abs(t) * q_eff / (1.0 - q_eff)
            if tail <= tol * max(abs(total), 1e-6 * scale_floor):
                return total, log_rescale
        big = max(abs(total), chunk_max)
        if big > 1e250:
            total /= big
            t /= big
            scale_floor /= big
            log_rescale += math.log(big)
    raise PrecisionError(
        f"series did not converge within {max_terms} terms (last ratio {q:.6f})"
    )


def _connection_digits_lost(degree_scale: float, small: float) -> float:
    """Decimal digits cancelled between the two connection branches.

    The branches grow like exp(2*degree*sqrt(x)) while their combination stays
    of order one, so log10 of that factor is lost to cancellation.
    """
    return 2.0 * degree_scale * math.sqrt(max(small, 0.0)) / math.log(10.0)


def _combine_log_branches(branches):
    """Sum of sign*exp(log) pairs, returned as (log|sum|, sign)."""
    finite = [(lg, sg) for lg, sg in branches if sg != 0.0 and math.isfinite(lg)]
    if not finite:
        return -math.inf, 0.0
    m = max(lg for lg, _ in finite)
    acc = sum(sg * math.exp(lg - m) for lg, sg in finite)
    if acc == 0.0:
        return -math.inf, 0.0
    return m + math.log(abs(acc)), math.copysign(1.0, acc)


# ---------------------------------------------------------------------------
# S: regular solution, series around w = 1
# ---------------------------------------------------------------------------

def _split_degree(lam) -> tuple[str, float]:
    """Classify the degree parameter: ('real', x), ('imag', beta) or raise."""
    lc = complex(lam)
    if lc.imag == 0.0:
        return "real", lc.real
    if lc.real == 0.0:
        return "imag", abs(lc.imag)
    raise DomainError(
        f"degree must be real or purely imaginary, got {lam!r}"
    )


def _s_direct_log(alpha: float, lam, w: float, tol: float) -> tuple[float, float]:
    """(log|S|, sign) by the defining series; valid for -1 < w < 3."""
    z = 0.5 * (1.0 - w)
    kind, val = _split_degree(lam)
    if alpha <= -1.0 and alpha == round(alpha):
        raise PoleError(f"S series undefined at negative integer order {alpha}",
                        location=alpha)

    if kind == "imag":
        beta = val

        def ratio(js):
            return ((0.5 + alpha + js) ** 2 + beta * beta) * z / ((alpha + 1.0 + js) * (js + 1.0))
    else:
        lr = val

        def ratio(js):
            return ((0.5 + alpha + lr + js) * (0.5 + alpha - lr + js)) * z / (
                (alpha + 1.0 + js) * (js + 1.0)
            )

    total, log_rescale = _sum_ratio_series(ratio, tol, limit_ratio=abs(z))
    lg0, sg0 = _lgamma_signed(alpha + 1.0)
    if total == 0.0:
        return -math.inf, 0.0
    return (-lg0 + log_rescale + math.log(abs(total)), sg0 * math.copysign(1.0, total))


def _f21_log(a_sq_shift, c: float, x: float, tol: float, *, kind: str,
             p1: float = 0.0, p2: float = 0.0) -> tuple[float, float]:
    """(log|F|, sign) for a Gauss series sum_j (A)_j(B)_j/((c)_j j!) x^j, t0=1.

    kind 'conj': (A)_j(B)_j realised as ((p1+j)^2 + a_sq_shift) with conjugate
    parameter pair p1 +- i*sqrt(shift); kind 'real': parameters p1, p2 real.
    """
    if kind == "conj":
        def ratio(js):
            return ((p1 + js) ** 2 + a_sq_shift) * x / ((c + js) * (js + 1.0))
    else:
        def ratio(js):
            return (p1 + js) * (p2 + js) * x / ((c + js) * (js + 1.0))

    total, log_rescale = _sum_ratio_series(ratio, tol, limit_ratio=abs(x))
    if total == 0.0:
        return -math.inf, 0.0
    return log_rescale + math.log(abs(total)), math.copysign(1.0, total)


def _real_degree_pole(alpha: float, lr: float) -> bool:
    """Real-degree connection coefficients degenerate (Gamma poles)?"""
    for arg in (0.5 - lr, 0.5 + lr, 0.5 + alpha + lr, 0.5 + alpha - lr):
        if arg <= 1e-9 and abs(arg - round(arg)) < 1e-9:
            return True
    return False


def _s_connection_log(alpha: float, lam, w: float, tol: float) -> tuple[float, float]:
    """(log|S|, sign) near w = -1 from the two-branch expansion in (1+w)/2.

    Requires non-degenerate connection coefficients; integer orders and
    pole-hitting real degrees are handled by symmetric parameter
    perturbation (the function itself is analytic there).
    """
    y = 0.5 * (1.0 + w)
    kind, val = _split_degree(lam)
    if kind == "real" and _real_degree_pole(alpha, val):
        return _parameter_pole_limit(
            lambda lr: _s_connection_log(alpha, lr, w, tol), val, eps=_DEGREE_EPS)
    lgm, sgm = _lgamma_signed(-alpha)
    lgp, sgp = _lgamma_signed(alpha)

    if kind == "imag":
        beta = val
        # 1/(Gamma(1/2-i b)Gamma(1/2+i b)) = cosh(pi b)/pi
        log_k1 = _log_cosh(math.pi * beta) - math.log(math.pi)
        sg_k1 = 1.0
        log_k2 = -math.log(gamma_abs2(alpha + 0.5, beta))
        sg_k2 = 1.0
        lf1, sf1 = _f21_log(beta * beta, alpha + 1.0, y, tol, kind="conj",
                            p1=0.5 + alpha)
        lf2, sf2 = _f21_log(beta * beta, 1.0 - alpha, y, tol, kind="conj", p1=0.5)
    else:
        lr = val
        la, sa = _lgamma_signed(0.5 - lr)
        lb, sb = _lgamma_signed(0.5 + lr)
        log_k1, sg_k1 = -(la + lb), sa * sb
        lc1, sc1 = _lgamma_signed(0.5 + alpha + lr)
        lc2, sc2 = _lgamma_signed(0.5 + alpha - lr)
        log_k2, sg_k2 = -(lc1 + lc2), sc1 * sc2
        lf1, sf1 = _f21_log(0.0, alpha + 1.0, y, tol, kind="real",
                            p1=0.5 + alpha + lr, p2=0.5 + alpha - lr)
        lf2, sf2 = _f21_log(0.0, 1.0 - alpha, y, tol, kind="real",
                            p1=0.5 - lr, p2=0.5 + lr)

    branch1 = (lgm + log_k1 + lf1, sgm * sg_k1 * sf1)
    branch2 = (lgp + log_k2 - alpha * math.log(y) + lf2, sgp * sg_k2 * sf2)
    return _combine_log_branches([branch1, branch2])


def _log_cosh(t: float) -> float:
    return abs(t) + math.log1p(math.exp(-2.0 * abs(t))) - math.log(2.0)


# degree perturbations use an incommensurate step so that a perturbed order
# and a perturbed degree can never re-create an exact coefficient pole
_DEGREE_EPS = INTEGER_ORDER_EPS * 0.6180339887498949


def _parameter_pole_limit(evaluator, center: float,
                          eps: float = INTEGER_ORDER_EPS) -> tuple[float, float]:
    """Connection value at a parameter where its coefficients have poles.

    The coefficients carry simple poles while the function itself is
    analytic, so the symmetrised average has an O(eps^2) error; one
    Richardson step in eps^2 pushes it to O(eps^4).
    """
    def sym(e):
        lp, sp = evaluator(center + e)
        lm, sm = evaluator(center - e)
        return _combine_log_branches([(lp - math.log(2.0), sp),
                                      (lm - math.log(2.0), sm)])

    l1, s1 = sym(eps)
    l2, s2 = sym(0.5 * eps)
    return _combine_log_branches([(l2 + math.log(4.0 / 3.0), s2),
                                  (l1 - math.log(3.0), -s1)])


def _s_log_signed(alpha: float, lam, w: float, tol: float, method: str) -> tuple[float, float]:
    if not (-1.0 < w < 3.0):
        raise DomainError(f"S argument must lie in (-1, 3), got {w}")
    if method == "auto":
        if w >= W_S_CONNECT:
            method = "direct"
        else:
            kind, val = _split_degree(lam)
            lost = _connection_digits_lost(abs(val), 0.5 * (1.0 + w))
            method = "connection" if lost <= _CONNECTION_DIGIT_BUDGET else "direct"
    if method == "direct":
        return _s_direct_log(alpha, lam, w, tol)
    if method == "connection":
        if alpha == round(alpha):
            return _parameter_pole_limit(
                lambda a: _s_connection_log(a, lam, w, tol), alpha)
        return _s_connection_log(alpha, lam, w, tol)
    raise DomainError(f"unknown S evaluation method {method!r}")


def gegenbauer_s(alpha: float, lam, w: float, tol: float = 1e-14,
                 method: str = "auto") -> float:
    """Gegenbauer function of the first kind, S_{alpha, lam}(w).

    Parameters
    ----------
    alpha : real order.
    lam : degree; real, purely imaginary, or complex (general complex degrees
        are summed directly and must keep a negligible imaginary residue).
    w : argument in (-1, 3).
    tol : relative truncation tolerance of the series.
    method : 'auto', 'direct' or 'connection' (route override for testing).

    Normalisation: S at w = 1 equals 1/Gamma(alpha+1) for every degree.
    """
    lc = complex(lam)
    if lc.imag != 0.0 and lc.real != 0.0:
        return _s_general_complex(alpha, lc, w, tol)
    lg, sg = _s_log_signed(alpha, lam, w, tol, method)
    if sg == 0.0:
        return 0.0
    return sg * math.exp(lg)


def _s_general_complex(alpha: float, lam: complex, w: float, tol: float) -> float:
    """Direct series with genuinely complex degree; returns the real part."""
    z = 0.5 * (1.0 - w)

    def ratio(js):
        return ((0.5 + alpha + lam + js) * (0.5 + alpha - lam + js)) * z / (
            (alpha + 1.0 + js) * (js + 1.0)
        )

    total, log_rescale = _sum_ratio_series(ratio, tol, limit_ratio=abs(z))
    lg0, sg0 = _lgamma_signed(alpha + 1.0)
    val = total * math.exp(log_rescale - lg0) * sg0
    if abs(val.imag) > 1e-12 * max(abs(val.real), 1e-300):
        raise PrecisionError(
            f"imaginary residue {val.imag:.3e} too large for S({alpha}, {lam}, {w})"
        )
    return float(val.real)


def gegenbauer_s_log(alpha: float, beta: float, w: float, tol: float = 1e-14) -> float:
    """log of S_{alpha, i*beta}(w) on (-1, 1], where S is strictly positive.

    Overflow-safe access for large imaginary degrees (the function grows like
    exp(pi*beta)).
    """
    if not (-1.0 < w <= 1.0):
        raise DomainError(f"log evaluation needs w in (-1, 1], got {w}")
    lg, sg = _s_log_signed(alpha, complex(0.0, beta), w, tol, "auto")
    if sg <= 0.0:
        raise PrecisionError(f"S({alpha}, {beta}i, {w}) evaluated non-positive")
    return lg


# ---------------------------------------------------------------------------
# Z: recessive solution, series around w = infinity
# ---------------------------------------------------------------------------

def _z_degree(lam) -> float:
    lc = complex(lam)
    if lc.imag != 0.0:
        raise DomainError(f"Z supports real degrees only, got {lam!r}")
    if lc.real <= 0.0:
        raise DomainError(f"Z requires a positive degree, got {lam!r}")
    return lc.real


def _z_direct_log(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    zq = 2.0 / (1.0 + w)

    def ratio(js):
        return (0.5 + lam + js) * (0.5 + lam + alpha + js) * zq / (
            (1.0 + 2.0 * lam + js) * (js + 1.0)
        )

    total, log_rescale = _sum_ratio_series(ratio, tol, limit_ratio=zq)
    lg0, _ = _lgamma_signed(lam + 1.0)
    pref = -(0.5 + alpha + lam) * math.log1p(w) - lg0
    if total == 0.0:
        return -math.inf, 0.0
    return pref + log_rescale + math.log(abs(total)), math.copysign(1.0, total)


def _z_whipple_log(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    v = w / math.sqrt(w * w - 1.0)
    lg, sg = _s_direct_log(lam, alpha, v, tol)
    pref = (-0.25 - 0.5 * alpha - 0.5 * lam) * math.log(w * w - 1.0)
    return pref + lg, sg


def _z_connection_log(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    """Two-branch expansion of Z around its branch point w = 1 (non-integer order)."""
    x = (w - 1.0) / (w + 1.0)
    lg_lam, _ = _lgamma_signed(lam + 1.0)
    lg_c, _ = _lgamma_signed(1.0 + 2.0 * lam)
    lg_half, _ = _lgamma_signed(0.5 + lam)
    common = -(0.5 + alpha + lam) * math.log1p(w) - lg_lam + lg_c - lg_half

    lgm, sgm = _lgamma_signed(-alpha)
    lgd1, sgd1 = _lgamma_signed(0.5 + lam - alpha)
    lf1, sf1 = _f21_log(0.0, 1.0 + alpha, x, tol, kind="real",
                        p1=0.5 + lam, p2=0.5 + lam + alpha)
    branch1 = (common + lgm - lgd1 + lf1, sgm * sgd1 * sf1)

    lgp, sgp = _lgamma_signed(alpha)
    lgd2, sgd2 = _lgamma_signed(0.5 + lam + alpha)
    lf2, sf2 = _f21_log(0.0, 1.0 - alpha, x, tol, kind="real",
                        p1=0.5 + lam, p2=0.5 + lam - alpha)
    branch2 = (common + lgp - lgd2 - alpha * math.log(x) + lf2, sgp * sgd2 * sf2)

    return _combine_log_branches([branch1, branch2])


def _z_log_signed(alpha: float, lam: float, w: float, tol: float,
                  method: str, crossover: float) -> tuple[float, float]:
    if w <= 1.0:
        raise DomainError(f"Z argument must exceed 1, got {w}")
    if method == "auto":
        if w >= crossover:
            method = "direct"
        elif w >= W_Z_NEAR:
            # The Whipple image series alternates; its own cancellation grows
            # with the degree, so large degrees stay on the defining series.
            method = "whipple" if lam <= WHIPPLE_MAX_DEGREE else "direct"
        else:
            lost = _connection_digits_lost(lam, (w - 1.0) / (w + 1.0))
            method = "connection" if lost <= _CONNECTION_DIGIT_BUDGET else "direct"
    if method == "direct":
        return _z_direct_log(alpha, lam, w, tol)
    if method == "whipple":
        return _z_whipple_log(alpha, lam, w, tol)
    if method == "connection":
        if alpha == round(alpha):
            return _parameter_pole_limit(
                lambda a: _z_connection_log(a, lam, w, tol), alpha)
        return _z_connection_log(alpha, lam, w, tol)
    raise DomainError(f"unknown Z evaluation method {method!r}")


def gegenbauer_z(alpha: float, lam, w: float, tol: float = 1e-14,
                 method: str = "auto", crossover: float = W_Z_CROSSOVER) -> float:
    """Gegenbauer function of the second kind, Z_{alpha, lam}(w), for w > 1.

    Parameters
    ----------
    alpha : real order (any real value; integer orders route through a
        symmetric order perturbation near the branch point).
    lam : real degree > 0.
    w : argument > 1.
    tol : relative series tolerance.
    method : 'auto', 'direct', 'whipple' or 'connection'.
    crossover : argument above which the defining series is used directly.

    Normalisation: w**(1/2+alpha+lam) * Z -> 1/Gamma(lam+1) as w -> infinity.
    """
    lr = _z_degree(lam)
    lg, sg = _z_log_signed(alpha, lr, w, tol, method, crossover)
    if sg == 0.0:
        return 0.0
    return sg * math.exp(lg)


def gegenbauer_z_log(alpha: float, lam: float, w: float, tol: float = 1e-14,
                     crossover: float = W_Z_CROSSOVER) -> float:
    """log of Z_{alpha, lam}(w); overflow-safe access for large degrees."""
    lr = _z_degree(lam)
    lg, sg = _z_log_signed(alpha, lr, w, tol, "auto", crossover)
    if sg <= 0.0:
        raise PrecisionError(f"Z({alpha}, {lam}, {w}) evaluated non-positive")
    return lg


# ---------------------------------------------------------------------------
# Whipple transformation, exposed both ways for identity checks
# ---------------------------------------------------------------------------

def gegenbauer_z_whipple(alpha: float, lam: float, w: float, tol: float = 1e-14) -> float:
    """Z_{alpha, lam}(w) computed from S_{lam, alpha} at w/sqrt(w^2-1)."""
    if w <= 1.0:
        raise DomainError(f"Whipple route needs w > 1, got {w}")
    lg, sg = _z_whipple_log(alpha, _z_degree(lam), w, tol)
    return sg * math.exp(lg) if sg else 0.0


# ---------------------------------------------------------------------------
# joint value/derivative evaluation (linear space, moderate degrees)
#
# The boundary-identity machinery needs d/dw of S and Z with close to full
# precision; finite differences lose too much near the algebraic endpoints.
# Each series is summed together with its index-weighted companion
# sum_j j*t_j, from which the derivative follows in closed form.
# ---------------------------------------------------------------------------

def _pair_from_ratio(ratio, tol: float, limit_ratio: float,
                     max_terms: int = _MAX_TERMS) -> tuple[float, float]:
    """(sum t_j, sum j*t_j) with t_0 = 1, t_{j+1} = t_j * ratio(j)."""
    total = 1.0
    total_j = 0.0
    t = 1.0
    j = 0
    chunk = _CHUNK
    while j < max_terms:
        js = np.arange(j, j + chunk)
        terms = t * np.cumprod(ratio(js))
        total += terms.sum()
        total_j += ((js + 1.0) * terms).sum()
        t = terms[-1]
        j += chunk
        chunk = min(2 * chunk, 16384)
        q = max(float(np.abs(ratio(np.array([j])))[0]), limit_ratio)
        if q < 1.0 - 1e-9:
            tail = abs(t) * q / (1.0 - q) * (j + 2.0)
            if tail <= tol * max(abs(total), abs(total_j), 1.0):
                return total, total_j
    raise PrecisionError(f"series pair did not converge within {max_terms} terms")


def _gamma_value(x: float) -> float:
    lg, sg = _lgamma_signed(x)
    return sg * math.exp(lg)


def _s_pair_direct(alpha: float, lam, w: float, tol: float) -> tuple[float, float]:
    """(S, dS/dw) by the defining series."""
    z = 0.5 * (1.0 - w)
    kind, val = _split_degree(lam)
    if kind == "imag":
        beta = val

        def ratio(js):
            return ((0.5 + alpha + js) ** 2 + beta * beta) * z / ((alpha + 1.0 + js) * (js + 1.0))

        lead = (0.5 + alpha) ** 2 + beta * beta
    else:
        lr = val

        def ratio(js):
            return ((0.5 + alpha + lr + js) * (0.5 + alpha - lr + js)) * z / (
                (alpha + 1.0 + js) * (js + 1.0)
            )

        lead = (0.5 + alpha + lr) * (0.5 + alpha - lr)
    t0 = 1.0 / _gamma_value(alpha + 1.0)
    if z == 0.0:
        return t0, -0.5 * t0 * lead / (alpha + 1.0)
    tot, totj = _pair_from_ratio(ratio, tol, abs(z))
    s_val = t0 * tot
    ds = t0 * totj * (-0.5 / z)
    return s_val, ds


def _s_pair_connection(alpha: float, lam, w: float, tol: float) -> tuple[float, float]:
    y = 0.5 * (1.0 + w)
    kind, val = _split_degree(lam)
    if kind == "real" and _real_degree_pole(alpha, val):
        return _pair_integer_order(
            lambda lr: _s_pair_connection(alpha, lr, w, tol), val, eps=_DEGREE_EPS)
    if kind == "imag":
        beta = val
        k1 = math.cosh(math.pi * beta) / math.pi
        k2 = 1.0 / gamma_abs2(alpha + 0.5, beta)

        def r1(js):
            return ((0.5 + alpha + js) ** 2 + beta * beta) * y / ((1.0 + alpha + js) * (js + 1.0))

        def r2(js):
            return ((0.5 + js) ** 2 + beta * beta) * y / ((1.0 - alpha + js) * (js + 1.0))
    else:
        lr = val
        k1 = 1.0 / (_gamma_value(0.5 - lr) * _gamma_value(0.5 + lr))
        k2 = 1.0 / (_gamma_value(0.5 + alpha + lr) * _gamma_value(0.5 + alpha - lr))

        def r1(js):
            return ((0.5 + alpha + lr + js) * (0.5 + alpha - lr + js)) * y / (
                (1.0 + alpha + js) * (js + 1.0))

        def r2(js):
            return ((0.5 - lr + js) * (0.5 + lr + js)) * y / ((1.0 - alpha + js) * (js + 1.0))

    c1 = _gamma_value(-alpha) * k1
    c2 = _gamma_value(alpha) * k2
    f1, f1j = _pair_from_ratio(r1, tol, y)
    f2, f2j = _pair_from_ratio(r2, tol, y)
    # d/dw = (1/2) d/dy
    val = c1 * f1 + c2 * y ** (-alpha) * f2
    dval = 0.5 * (c1 * f1j / y
                  + c2 * (-alpha * y ** (-alpha - 1.0) * f2 + y ** (-alpha) * f2j / y))
    return val, dval


def gegenbauer_s_with_derivative(alpha: float, lam, w: float,
                                 tol: float = 1e-14) -> tuple[float, float]:
    """(S_{alpha, lam}(w), d/dw S_{alpha, lam}(w)), full double accuracy.

    Linear-space evaluation for moderate degrees; route dispatch mirrors
    `gegenbauer_s`.
    """
    if not (-1.0 < w < 3.0):
        raise DomainError(f"S argument must lie in (-1, 3), got {w}")
    kind, val = _split_degree(lam)
    use_connection = w < W_S_CONNECT and (
        _connection_digits_lost(abs(val), 0.5 * (1.0 + w)) <= _CONNECTION_DIGIT_BUDGET)
    if not use_connection:
        return _s_pair_direct(alpha, lam, w, tol)
    if alpha == round(alpha):
        return _pair_integer_order(lambda a: _s_pair_connection(a, lam, w, tol), alpha)
    return _s_pair_connection(alpha, lam, w, tol)


def _pair_integer_order(evaluator, alpha: float,
                        eps: float = INTEGER_ORDER_EPS) -> tuple[float, float]:
    def sym(e):
        vp, dp = evaluator(alpha + e)
        vm, dm = evaluator(alpha - e)
        return 0.5 * (vp + vm), 0.5 * (dp + dm)

    v1, d1 = sym(eps)
    v2, d2 = sym(0.5 * eps)
    return (4.0 * v2 - v1) / 3.0, (4.0 * d2 - d1) / 3.0


def _z_pair_direct(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    zq = 2.0 / (1.0 + w)
    c0 = 0.5 + alpha + lam

    def ratio(js):
        return (0.5 + lam + js) * (0.5 + lam + alpha + js) * zq / (
            (1.0 + 2.0 * lam + js) * (js + 1.0))

    tot, totj = _pair_from_ratio(ratio, tol, zq)
    pref = (1.0 + w) ** (-c0) / _gamma_value(lam + 1.0)
    val = pref * tot
    dval = -pref / (1.0 + w) * (c0 * tot + totj)
    return val, dval


def _z_pair_whipple(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    v = w / math.sqrt(w * w - 1.0)
    s_val, s_dv = _s_pair_direct(lam, alpha, v, tol)
    e = 0.25 + 0.5 * alpha + 0.5 * lam
    pref = (w * w - 1.0) ** (-e)
    dv_dw = -((w * w - 1.0) ** -1.5)
    val = pref * s_val
    dval = pref * (-e * 2.0 * w / (w * w - 1.0) * s_val + s_dv * dv_dw)
    return val, dval


def _z_pair_connection(alpha: float, lam: float, w: float, tol: float) -> tuple[float, float]:
    x = (w - 1.0) / (w + 1.0)
    c0 = 0.5 + alpha + lam
    cbig = _gamma_value(1.0 + 2.0 * lam) / (_gamma_value(lam + 1.0) * _gamma_value(0.5 + lam))
    k1 = _gamma_value(-alpha) / _gamma_value(0.5 + lam - alpha)
    k2 = _gamma_value(alpha) / _gamma_value(0.5 + lam + alpha)

    def r1(js):
        return (0.5 + lam + js) * (0.5 + lam + alpha + js) * x / ((1.0 + alpha + js) * (js + 1.0))

    def r2(js):
        return (0.5 + lam + js) * (0.5 + lam - alpha + js) * x / ((1.0 - alpha + js) * (js + 1.0))

    f1, f1j = _pair_from_ratio(r1, tol, x)
    f2, f2j = _pair_from_ratio(r2, tol, x)
    pref = (1.0 + w) ** (-c0) * cbig
    inner = k1 * f1 + k2 * x ** (-alpha) * f2
    val = pref * inner
    dx = 2.0 / (w + 1.0) ** 2
    dinner = dx * (k1 * f1j / x
                   + k2 * (-alpha * x ** (-alpha - 1.0) * f2 + x ** (-alpha) * f2j / x))
    dval = -c0 * pref / (1.0 + w) * inner + pref * dinner
    return val, dval


def gegenbauer_z_with_derivative(alpha: float, lam, w: float,
                                 tol: float = 1e-14) -> tuple[float, float]:
    """(Z_{alpha, lam}(w), d/dw Z_{alpha, lam}(w)), full double accuracy.

    Linear-space evaluation for moderate degrees; route dispatch mirrors
    `gegenbauer_z`.
    """
    lr = _z_degree(lam)
    if w <= 1.0:
        raise DomainError(f"Z argument must exceed 1, got {w}")
    if w >= W_Z_CROSSOVER:
        return _z_pair_direct(alpha, lr, w, tol)
    if w >= W_Z_NEAR:
        if lr <= WHIPPLE_MAX_DEGREE:
            return _z_pair_whipple(alpha, lr, w, tol)
        return _z_pair_direct(alpha, lr, w, tol)
    if _connection_digits_lost(lr, (w - 1.0) / (w + 1.0)) > _CONNECTION_DIGIT_BUDGET:
        return _z_pair_direct(alpha, lr, w, tol)
    if alpha == round(alpha):
        return _pair_integer_order(lambda a: _z_pair_connection(a, lr, w, tol), alpha)
    return _z_pair_connection(alpha, lr, w, tol)


def gegenbauer_s_whipple(alpha: float, lam: float, w: float, tol: float = 1e-14) -> float:
    """S_{alpha, lam}(w) computed from Z_{lam, alpha} at w/sqrt(w^2-1), w > 1."""
    if w <= 1.0:
        raise DomainError(f"Whipple route needs w > 1, got {w}")
    v = w / math.sqrt(w * w - 1.0)
    pref = (-0.25 - 0.5 * alpha - 0.5 * lam) * math.log(w * w - 1.0)
    lg, sg = _z_log_signed(lam, _z_degree(alpha), v, tol, "auto", W_Z_CROSSOVER)
    return sg * math.exp(pref + lg) if sg else 0.0
