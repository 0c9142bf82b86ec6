"""The finite-part engine.

A function on ]0, U[ with finitely many homogeneous endpoint singularities
``f ~ sum_k f_k r^k`` is integrated in the generalized sense by subtracting
the listed singular terms on (0, split), adding back their analytically
continued antiderivative values ``f_k split^{k+1}/(k+1)`` (the pure 1/r
term contributes nothing), and integrating the remainder:

    value = sum_{k != -1} f_k split^{k+1}/(k+1)
          + integral_0^split (f - sum f_k r^k) + integral_split^U f.

The coefficient of r^{-1} is the scaling anomaly: rescaling r -> a r shifts
the value by -f_{-1} ln a, and a smooth change of variables g with g(0)=0,
g'(0) != 0 shifts it by a computable correction involving the f_{-n}.

Integrable terms (including the log-carrying ones) may be subtracted and
added back as well without changing the value; the engine does so because
it makes the numerical remainder smooth.  Evaluation of the remainder stops
at a small cut above zero where subtraction cancellation would drown the
signal; the skipped mass is bounded and folded into the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy import special

from . import specfun
from .errors import (
    DomainError,
    InconsistencyError,
    PrecisionError,
)
from .numerics import (
    adaptive_quad,
    series_exp,
    series_inv,
    series_mul,
    taylor_coefficients,
)

__all__ = [
    "SingularTerm",
    "SingularExpansion",
    "ExponentialTail",
    "PowerTail",
    "GenIntegrand",
    "GenIntegral",
    "gen_integrate",
    "split_shift",
    "scaling_check",
    "power_transform_check",
    "change_of_var_correction",
    "transform_integrand",
    "expansion_from_bessel_product",
    "bessel_product_integrand",
    "gen_bilinear_macdonald",
    "gamma_power_integrand",
    "fit_endpoint_expansion",
    "gegenbauer_integrand",
    "gen_bilinear_gegenbauer",
]


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularTerm:
    """One endpoint term: coefficient * r**exponent * log(r)**log_power."""

    exponent: float
    coefficient: float
    log_power: int = 0

    def __post_init__(self):
        if self.log_power < 0:
            raise DomainError("log_power must be non-negative")
        if self.log_power >= 1 and self.exponent <= -1.0:
            raise DomainError(
                "logarithmic terms are only supported at integrable exponents (> -1)"
            )

    def __call__(self, r):
        val = self.coefficient * r ** self.exponent
        if self.log_power:
            val = val * np.log(r) ** self.log_power
        return val


@dataclass(frozen=True)
class SingularExpansion:
    """Finite endpoint expansion: list of terms valid on (0, radius]."""

    terms: tuple[SingularTerm, ...]
    radius: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.radius <= 1.0):
            raise DomainError("validity radius must lie in (0, 1]")
        seen = set()
        for t in self.terms:
            key = (round(t.exponent, 12), t.log_power)
            if key in seen:
                raise DomainError(f"duplicate expansion term at {key}")
            seen.add(key)

    @property
    def anomaly(self) -> float:
        """Coefficient of the pure r**-1 term (0 if absent)."""
        for t in self.terms:
            if t.log_power == 0 and abs(t.exponent + 1.0) < 1e-12:
                return t.coefficient
        return 0.0

    def evaluate(self, r) -> float:
        return sum(t(r) for t in self.terms)

    def min_exponent(self) -> float:
        if not self.terms:
            return 0.0
        return min(t.exponent for t in self.terms)

    def rescaled(self, a: float) -> "SingularExpansion":
        """Expansion of u -> f(a u) * a given the expansion of f."""
        if a <= 0.0:
            raise DomainError("scale factor must be positive")
        la = math.log(a)
        acc: dict[tuple[float, int], float] = {}
        for t in self.terms:
            base = t.coefficient * a ** (t.exponent + 1.0)
            for i in range(t.log_power + 1):
                c = base * math.comb(t.log_power, i) * la ** (t.log_power - i)
                key = (t.exponent, i)
                acc[key] = acc.get(key, 0.0) + c
        terms = tuple(SingularTerm(e, c, m) for (e, m), c in sorted(acc.items())
                      if c != 0.0)
        return SingularExpansion(terms, radius=min(1.0, self.radius / a))

    def power_transformed(self, k: float) -> "SingularExpansion":
        """Expansion of u -> f(u**k) * k * u**(k-1) given the expansion of f."""
        if k <= 0.0:
            raise DomainError("power must be positive")
        terms = tuple(
            SingularTerm(k * (t.exponent + 1.0) - 1.0,
                         t.coefficient * k ** (t.log_power + 1),
                         t.log_power)
            for t in self.terms
        )
        return SingularExpansion(terms, radius=min(1.0, self.radius ** (1.0 / k)))


@dataclass(frozen=True)
class ExponentialTail:
    """f decays like exp(-rate * r**power) for large r."""

    rate: float
    power: float = 1.0


@dataclass(frozen=True)
class PowerTail:
    """f decays like r**(-exponent); integrable iff exponent > 1."""

    exponent: float


Tail = Union[ExponentialTail, PowerTail, None]


@dataclass(frozen=True)
class GenIntegrand:
    """Evaluable integrand on (0, upper) plus its endpoint expansion and tail."""

    evaluate: Callable[[float], float]
    expansion: SingularExpansion
    upper: float = math.inf
    tail: Tail = None

    def __post_init__(self):
        if math.isinf(self.upper) and self.tail is None:
            raise DomainError("an infinite upper limit requires a tail descriptor")


@dataclass(frozen=True)
class GenIntegral:
    """Result of a generalized integration."""

    value: float
    anomaly: float
    tol_achieved: float


# ---------------------------------------------------------------------------
# closed-form head terms
# ---------------------------------------------------------------------------

def _term_head(term: SingularTerm, s: float) -> float:
    """integral_0^s of the term, analytically continued across exponent < -1.

    The (exponent == -1, log_power == 0) term is excluded by the definition
    and must be filtered by the caller.
    """
    k, m = term.exponent, term.log_power
    kp1 = k + 1.0
    ls = math.log(s)
    acc = 0.0
    fact = 1.0
    for i in range(m + 1):
        # d/ds antiderivative: s^{k+1} sum_i (-1)^i m!/(m-i)! ls^{m-i}/(k+1)^{i+1}
        acc += (-1.0) ** i * fact * ls ** (m - i) / kp1 ** (i + 1)
        fact *= (m - i)
    return term.coefficient * s ** kp1 * acc


def _is_pure_anomaly(term: SingularTerm) -> bool:
    return term.log_power == 0 and abs(term.exponent + 1.0) < 1e-12


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

def _select_cut(f: GenIntegrand, split: float, scale: float, rtol: float) -> float:
    """Smallest cut above which remainder evaluation noise stays harmless.

    The cut also stays well inside the expansion's validity radius: the value
    is exact up to the mass of (f - expansion) on (0, cut), which is only
    small where the expansion represents the function.
    """
    cap = min(0.1 * split, 0.25 * f.expansion.radius)
    cut = min(1e-3 * split, 0.02 * f.expansion.radius)
    eps = 2.3e-16
    for _ in range(60):
        lead = abs(f.expansion.evaluate(cut)) if f.expansion.terms else 0.0
        if lead * eps * min(split, 1.0) <= max(rtol, 1e-11) * scale * 0.1:
            return cut
        cut *= 1.6
        if cut > cap:
            return cap
    return cut


def _probe_consistency(f: GenIntegrand, cut: float, split: float) -> None:
    """Sanity probe: the declared expansion must track the function near 0."""
    hi = 0.5 * min(split, f.expansion.radius)
    lo = max(4.0 * cut, 2e-3 * hi)
    if lo >= hi:
        return
    probes = np.geomspace(hi, lo, 5)
    ratios = []
    for r in probes:
        fr = f.evaluate(r)
        pr = f.expansion.evaluate(r)
        scale = abs(fr) + abs(pr) + 1e-300
        ratios.append(abs(fr - pr) / scale)
    if ratios[-1] > 0.05 and ratios[-1] > 0.5 * ratios[0]:
        raise InconsistencyError(
            f"expansion does not match the integrand near 0 "
            f"(probe residuals {ratios[0]:.2e} -> {ratios[-1]:.2e})"
        )


def _tail_integral(f: GenIntegrand, split: float, rtol: float) -> tuple[float, float]:
    if math.isfinite(f.upper):
        return adaptive_quad(f.evaluate, split, f.upper, rtol=rtol)
    tail = f.tail
    if isinstance(tail, ExponentialTail):
        if tail.rate <= 0.0:
            raise DomainError("exponential tail needs a positive rate")
        top = (split ** tail.power + 45.0 / tail.rate) ** (1.0 / tail.power)
        val, err = adaptive_quad(f.evaluate, split, top, rtol=rtol)
        rem = abs(f.evaluate(top)) * max(1.0, 1.0 / tail.rate)
        return val, err + rem
    if isinstance(tail, PowerTail):
        if tail.exponent <= 1.0:
            raise DomainError("power tail is not integrable (exponent <= 1)")

        def mapped(t: float) -> float:
            return f.evaluate(1.0 / t) / (t * t)

        return adaptive_quad(mapped, 0.0, 1.0 / split, rtol=rtol)
    raise DomainError(f"unsupported tail descriptor {tail!r}")


def gen_integrate(f: GenIntegrand, split: float = 1.0, rtol: float = 1e-10,
                  cut: float | None = None, validate: bool = True) -> GenIntegral:
    """Generalized (finite-part) integral of ``f`` over (0, upper).

    Parameters
    ----------
    f : integrand with endpoint expansion and tail descriptor.
    split : matching point between the subtracted region and the tail
        (canonically 1; the value shifts by -anomaly*log(split) relative to
        split=1, see `split_shift`).
    rtol : requested relative tolerance of the quadratures.
    cut : lower evaluation cut for the subtracted remainder; by default it is
        placed where subtraction cancellation noise stays below tolerance.
        The skipped true remainder is O(cut^(e+1)) for the first exponent e
        beyond the expansion and is folded into the error estimate.
    validate : probe-check the expansion against the function near 0.

    Returns: GenIntegral(value, anomaly, tol_achieved) with tol_achieved the
    estimated achieved relative error.
    """
    if split <= 0.0:
        raise DomainError("split must be positive")
    if math.isfinite(f.upper) and split >= f.upper:
        raise DomainError(f"split {split} must lie below the upper limit {f.upper}")

    # Subtraction arithmetic is confined to (0, s_eff) inside the expansion's
    # validity radius; the exact split-shift law transports the result to the
    # requested matching point: D(split) = D(s_eff) - f_{-1} log(split/s_eff).
    s_eff = min(split, f.expansion.radius)

    head = 0.0
    for t in f.expansion.terms:
        if _is_pure_anomaly(t):
            continue
        head += _term_head(t, s_eff)

    tail_val, tail_err = _tail_integral(f, split, rtol)
    bridge_val, bridge_err = 0.0, 0.0
    if s_eff < split:
        bridge_val, bridge_err = adaptive_quad(f.evaluate, s_eff, split, rtol=rtol)

    scale = max(abs(head), abs(tail_val), abs(bridge_val), 1.0)
    if cut is None:
        cut = _select_cut(f, s_eff, scale, rtol)
    if validate:
        _probe_consistency(f, cut, s_eff)

    def remainder(r: float) -> float:
        return f.evaluate(r) - f.expansion.evaluate(r)

    mid_val, mid_err = adaptive_quad(remainder, cut, s_eff, rtol=rtol,
                                     atol=1e-13 * scale)
    # bound for the skipped (0, cut) remainder mass: the remainder at the cut
    # decays at least linearly toward 0 for a faithful expansion
    skip_bound = abs(remainder(cut)) * cut

    anomaly = f.expansion.anomaly
    value = head + mid_val + bridge_val + tail_val
    if s_eff < split:
        value -= anomaly * math.log(split / s_eff)
    err = mid_err + bridge_err + tail_err + skip_bound
    return GenIntegral(
        value=value,
        anomaly=anomaly,
        tol_achieved=err / max(abs(value), 1e-300),
    )


def split_shift(f: GenIntegrand, c: float, rtol: float = 1e-11) -> float:
    """gen_integrate(f, split=c).value - gen_integrate(f, split=1).value.

    Contract: equals -anomaly * log(c).
    """
    if c <= 0.0:
        raise DomainError("split must be positive")
    at_c = gen_integrate(f, split=c, rtol=rtol)
    at_1 = gen_integrate(f, split=1.0, rtol=rtol)
    return at_c.value - at_1.value


def scaling_check(f: GenIntegrand, a: float, rtol: float = 1e-11) -> tuple[float, float]:
    """Both sides of the rescaling law.

    lhs = gen integral of f; rhs = gen integral of u -> f(a u) a, plus
    anomaly * log(a).  The two agree identically in exact arithmetic.
    """
    if a <= 0.0:
        raise DomainError("scale factor must be positive")
    lhs = gen_integrate(f, rtol=rtol).value

    tail = f.tail
    if isinstance(tail, ExponentialTail):
        tail = ExponentialTail(tail.rate * a ** tail.power, tail.power)
    scaled = GenIntegrand(
        evaluate=lambda u: f.evaluate(a * u) * a,
        expansion=f.expansion.rescaled(a),
        upper=f.upper / a,
        tail=tail,
    )
    rhs = gen_integrate(scaled, rtol=rtol).value + f.expansion.anomaly * math.log(a)
    return lhs, rhs


def power_transform_check(f: GenIntegrand, k: float, rtol: float = 1e-11) -> tuple[float, float]:
    """Both sides of the power-substitution invariance r = u**k.

    lhs = gen integral of f; rhs = gen integral of u -> f(u^k) k u^(k-1).
    No anomaly correction appears: the generalized integral is invariant
    under power substitutions.
    """
    if k <= 0.0:
        raise DomainError("power must be positive")
    lhs = gen_integrate(f, rtol=rtol).value

    tail = f.tail
    if isinstance(tail, ExponentialTail):
        tail = ExponentialTail(tail.rate, tail.power * k)
    elif isinstance(tail, PowerTail):
        tail = PowerTail(k * (tail.exponent - 1.0) + 1.0)
    transformed = GenIntegrand(
        evaluate=lambda u: f.evaluate(u ** k) * k * u ** (k - 1.0),
        expansion=f.expansion.power_transformed(k),
        upper=f.upper ** (1.0 / k) if math.isfinite(f.upper) else math.inf,
        tail=tail,
    )
    rhs = gen_integrate(transformed, rtol=rtol).value
    return lhs, rhs


# ---------------------------------------------------------------------------
# change of variables
# ---------------------------------------------------------------------------

def change_of_var_correction(expansion: SingularExpansion,
                             g: Callable[[float], float] | None = None,
                             g_taylor: Sequence[float] | None = None) -> float:
    """Shift of the generalized integral under r = g(u), g(0)=0, g'(0)>0.

    Returns

        -f_{-1} log g'(0)
        + sum_{l >= 2, f_{-l} != 0} f_{-l}/((l-1)(l-1)!) d^{l-1}/du^{l-1}
              (u/g(u))^{l-1} | u=0,

    evaluated from the Taylor coefficients of g (supplied, or measured from
    ``g`` by finite differences).  Only pure-power expansions are supported
    at the negative-integer exponents involved (guaranteed by the term
    invariants).
    """
    needed = [2 - 1]
    ls = []
    f_neg = {}
    for t in expansion.terms:
        if t.log_power != 0:
            continue
        e = t.exponent
        if e < -1.0 - 1e-12 and abs(e - round(e)) < 1e-12:
            ls.append(int(round(-e)))
            f_neg[int(round(-e))] = t.coefficient
    max_l = max(ls) if ls else 1

    if g_taylor is None:
        if g is None:
            raise DomainError("either g or its Taylor coefficients are required")
        g_taylor = taylor_coefficients(g, max_l + 1)
    a = list(g_taylor)
    if len(a) < max_l + 1:
        raise DomainError(
            f"need g derivatives through order {max_l} "
            f"(got Taylor data to order {len(a) - 1})"
        )
    if abs(a[0]) > 1e-12:
        raise DomainError("change of variables requires g(0) = 0")
    a1 = a[1]
    if a1 <= 0.0:
        raise DomainError("change of variables requires g'(0) > 0")

    total = -expansion.anomaly * math.log(a1)
    if ls:
        # u/g(u) = a1^{-1} / (1 + s(u)) with s the normalised Taylor tail of g
        n = max_l
        one_plus_s = [0.0] * n
        one_plus_s[0] = 1.0
        for i in range(1, n):
            one_plus_s[i] = a[i + 1] / a1 if i + 1 < len(a) else 0.0
        inv = series_inv(one_plus_s, n)
        for l in sorted(set(ls)):
            coeff_series = [1.0] + [0.0] * (n - 1)
            for _ in range(l - 1):
                coeff_series = series_mul(coeff_series, inv, n)
            # d^{l-1}/du^{l-1} h |_0 = (l-1)! [u^{l-1}] h
            c = coeff_series[l - 1] * a1 ** (-(l - 1))
            deriv = math.factorial(l - 1) * c
            total += f_neg[l] / ((l - 1) * math.factorial(l - 1)) * deriv
    return total


def transform_integrand(f: GenIntegrand, g: Callable[[float], float],
                        g_taylor: Sequence[float],
                        dg: Callable[[float], float] | None = None,
                        order: int | None = None) -> GenIntegrand:
    """The integrand u -> f(g(u)) g'(u) with its transformed expansion.

    Only log-free expansions are supported.  ``g_taylor`` lists
    [g(0), g'(0), g''(0)/2!, ...]; the transformed expansion is assembled by
    series composition from the listed terms of ``f`` (coefficients beyond
    the largest listed exponent are unknown and omitted).
    """
    if any(t.log_power for t in f.expansion.terms):
        raise DomainError("transform_integrand supports log-free expansions only")
    a = list(g_taylor)
    if abs(a[0]) > 1e-12 or a[1] <= 0.0:
        raise DomainError("need g(0) = 0 and g'(0) > 0")
    a1 = a[1]

    if dg is None:
        def dg_fn(u: float) -> float:
            h = 1e-6 * max(1.0, abs(u))
            return (g(u + h) - g(u - h)) / (2.0 * h)
    else:
        dg_fn = dg

    exps = sorted(t.exponent for t in f.expansion.terms)
    e_top = max(exps) if exps else 0.0
    if order is None:
        order = max(3, int(math.ceil(e_top - min(exps))) + 2) if exps else 3

    n = order + 1
    base = [0.0] * n
    base[0] = 1.0
    for i in range(1, n):
        base[i] = a[i + 1] / a1 if i + 1 < len(a) else 0.0  # g/(a1 u) series
    dgs = [0.0] * n   # g'(u) series
    for i in range(n):
        if i + 1 < len(a):
            dgs[i] = (i + 1) * a[i + 1]

    acc: dict[float, float] = {}

    def series_real_pow(s: Sequence[float], e: float, n: int) -> list[float]:
        # (1 + tail)^e via exp(e*log(1+tail))
        lg = [0.0] * n
        for k in range(1, n):
            acc_l = s[k]
            for i in range(1, k):
                acc_l -= i * lg[i] * s[k - i] / k
            lg[k] = acc_l
        return series_exp([e * c for c in lg], n)

    for t in f.expansion.terms:
        e = t.exponent
        powser = series_real_pow(base, e, n)
        full = series_mul(powser, dgs, n)
        pref = t.coefficient * a1 ** e
        for j, cj in enumerate(full):
            if cj == 0.0:
                continue
            new_e = e + j
            if new_e > e_top + 1e-9:
                continue
            acc[round(new_e, 12)] = acc.get(round(new_e, 12), 0.0) + pref * cj

    terms = tuple(SingularTerm(e, c) for e, c in sorted(acc.items()) if c != 0.0)
    tail = f.tail
    if isinstance(tail, ExponentialTail):
        tail = ExponentialTail(tail.rate * min(1.0, a1), tail.power)

    return GenIntegrand(
        evaluate=lambda u: f.evaluate(g(u)) * dg_fn(u),
        expansion=SingularExpansion(terms, radius=min(1.0, f.expansion.radius)),
        upper=math.inf if math.isinf(f.upper) else f.upper,
        tail=tail,
    )


# ---------------------------------------------------------------------------
# Macdonald product expansions
# ---------------------------------------------------------------------------

def _bessel_factor_series(alpha: float, a: float, e_stop: float):
    """K_alpha(a r) as [(exponent, log_power, coeff)] up to exponent e_stop."""
    terms: list[tuple[float, int, float]] = []
    if abs(alpha - round(alpha)) < 1e-8 and alpha != round(alpha):
        raise PrecisionError(
            f"order {alpha} is too close to an integer for the generic branch; "
            "use the integer order exactly"
        )
    if alpha == round(alpha):
        n = abs(int(round(alpha)))
        half = a / 2.0
        kmax = int(math.ceil((e_stop + n) / 2.0)) + 1
        for k in range(n):
            c = 0.5 * (-1.0) ** k * math.factorial(n - k - 1) / math.factorial(k) \
                * half ** (2 * k - n)
            terms.append((2.0 * k - n, 0, c))
        for k in range(kmax + 1):
            ci = (-1.0) ** (n + 1) * half ** (2 * k + n) / (
                math.factorial(k) * math.factorial(n + k))
            cpsi = 0.5 * (-1.0) ** n * (special.digamma(k + 1) + special.digamma(n + k + 1)) \
                * half ** (2 * k + n) / (math.factorial(k) * math.factorial(n + k))
            terms.append((2.0 * k + n, 1, ci))
            terms.append((2.0 * k + n, 0, ci * math.log(half) + cpsi))
    else:
        for sgn in (-1.0, 1.0):
            sa = sgn * alpha
            c0 = 0.5 * specfun.gamma(-sa)
            kmax = int(math.ceil((e_stop - sa) / 2.0)) + 1
            poch = 1.0
            fact = 1.0
            for k in range(max(kmax + 1, 1)):
                c = c0 * (a / 2.0) ** (2 * k + sa) / (fact * poch)
                terms.append((2.0 * k + sa, 0, c))
                poch *= (1.0 + sa + k)
                fact *= (k + 1.0)
    return terms


def expansion_from_bessel_product(alpha: float, a: float, b: float,
                                  depth: int | None = None,
                                  e_stop: float = 4.6) -> SingularExpansion:
    """Endpoint expansion of r -> K_alpha(a r) K_alpha(b r) 2r near r = 0.

    Non-integer orders combine the two power branches of each factor;
    integer orders use the log-carrying series (log terms appear only at
    exponents >= 1 and are flagged with log_power >= 1).  ``depth`` bounds
    the listed exponents as min(e_stop, min_exponent + 2*depth).
    """
    if a <= 0.0 or b <= 0.0:
        raise DomainError("scales must be positive")
    aa = abs(alpha)
    # exponents 1 - 2|alpha| + 2j stay non-integrable up to j = ceil count - 1
    required = max(0, math.floor(aa - 0.975) + 1) if aa >= 0.975 else 0
    if alpha == round(alpha) and alpha != 0.0:
        required = abs(int(round(alpha)))
    if depth is not None:
        if depth < required:
            raise DomainError(
                f"depth {depth} cannot cover {required} singular terms")
        e_stop = min(e_stop, 1.0 - 2.0 * aa + 2.0 * depth)
    fa = _bessel_factor_series(alpha, a, e_stop + 2.0 * abs(alpha) + 1.0)
    fb = _bessel_factor_series(alpha, b, e_stop + 2.0 * abs(alpha) + 1.0)
    acc: dict[tuple[float, int], float] = {}
    for ea, la, ca in fa:
        for eb, lb, cb in fb:
            e = ea + eb + 1.0  # the 2r measure factor
            if e > e_stop + 1e-9:
                continue
            key = (round(e, 12), la + lb)
            acc[key] = acc.get(key, 0.0) + 2.0 * ca * cb
    terms = []
    for (e, m), c in sorted(acc.items()):
        if abs(c) < 1e-300:
            continue
        if m >= 1 and e <= -1.0:
            raise PrecisionError(
                f"unexpected log term at non-integrable exponent {e}"
            )
        terms.append(SingularTerm(e, c, m))
    return SingularExpansion(tuple(terms))


def bessel_product_integrand(alpha: float, a: float, b: float,
                             e_stop: float = 4.6) -> GenIntegrand:
    """GenIntegrand for K_alpha(a r) K_alpha(b r) 2r on (0, inf)."""

    def f(r: float) -> float:
        return float(special.kv(alpha, a * r) * special.kv(alpha, b * r) * 2.0 * r)

    return GenIntegrand(
        evaluate=f,
        expansion=expansion_from_bessel_product(alpha, a, b, e_stop=e_stop),
        upper=math.inf,
        tail=ExponentialTail(rate=a + b),
    )


def gen_bilinear_macdonald(alpha: float, a: float, b: float,
                           rtol: float = 1e-11) -> float:
    """Generalized integral of K_alpha(ar) K_alpha(br) 2r over (0, inf)."""
    return gen_integrate(bessel_product_integrand(alpha, a, b), rtol=rtol).value


def gamma_power_integrand(p: float, e_stop: float = 4.0) -> GenIntegrand:
    """GenIntegrand for r**p * exp(-r); its generalized integral continues Gamma(p+1)."""
    kmax = int(math.ceil(e_stop - p)) + 1
    terms = []
    for k in range(max(kmax + 1, 1)):
        e = p + k
        if e > e_stop:
            break
        terms.append(SingularTerm(e, (-1.0) ** k / math.factorial(k)))
    return GenIntegrand(
        evaluate=lambda r: r ** p * math.exp(-r),
        expansion=SingularExpansion(tuple(terms)),
        upper=math.inf,
        tail=ExponentialTail(rate=1.0),
    )


# ---------------------------------------------------------------------------
# numerical endpoint-expansion extraction (Gegenbauer integrands)
# ---------------------------------------------------------------------------

def fit_endpoint_expansion(fn: Callable[[float], float],
                           basis: Sequence[tuple[float, int]],
                           u_min: float = 1e-6, u_max: float = 5e-2,
                           oversample: int = 3,
                           fit_tol: float = 1e-5) -> SingularExpansion:
    """Least-squares endpoint expansion over a prescribed exponent basis.

    ``basis`` lists (exponent, log_power) pairs.  Probe points are spread
    geometrically over [u_min, u_max]; columns are sup-normalised before the
    solve.  A residual above ``fit_tol`` (relative to the probe scale)
    raises PrecisionError: the basis does not describe the function.
    """
    basis = sorted(set((float(e), int(m)) for e, m in basis))
    npts = max(oversample * len(basis), len(basis) + 4)
    us = np.geomspace(u_min, u_max, npts)
    cols = []
    for e, m in basis:
        col = us ** e * np.log(us) ** m
        cols.append(col)
    M = np.vstack(cols).T
    y = np.array([fn(u) for u in us], dtype=float)
    norms = np.max(np.abs(M), axis=0)
    sol, *_ = np.linalg.lstsq(M / norms, y, rcond=None)
    coeffs = sol / norms
    resid = M @ coeffs - y
    scale = np.max(np.abs(y)) + 1e-300
    rel = float(np.max(np.abs(resid))) / scale
    if rel > fit_tol:
        raise PrecisionError(
            f"endpoint expansion extraction failed (residual {rel:.2e} "
            f"over basis of {len(basis)} terms)"
        )
    terms = tuple(
        SingularTerm(e, float(c), m)
        for (e, m), c in zip(basis, coeffs)
        if abs(c) > 1e-13 * scale / max(u_min ** e, 1e-300) or (m == 0 and abs(e + 1.0) < 1e-12)
    )
    return SingularExpansion(terms, radius=1.0)


def _gegenbauer_basis(alpha: float, e_stop: float) -> list[tuple[float, int]]:
    """Exponent/log basis of the squared-kernel integrand near its endpoint."""
    basis: list[tuple[float, int]] = []
    if abs(alpha - round(alpha)) < 1e-8:
        n = int(round(alpha))
        e = float(-n)
        while e <= e_stop:
            basis.append((e, 0))
            e += 1.0
        e = 0.0
        while e <= e_stop:
            basis.append((e, 1))
            e += 1.0
        e = float(max(n, 0))
        while e <= e_stop:
            basis.append((e, 2))
            e += 1.0
    else:
        for start in (-alpha, 0.0, alpha):
            e = start
            while e <= e_stop:
                basis.append((e, 0))
                e += 1.0
    # collapse near-coincident exponents (e.g. alpha = 1/2 family overlaps)
    out: list[tuple[float, int]] = []
    for e, m in sorted(set(basis)):
        if any(abs(e - e2) < 1e-9 and m == m2 for e2, m2 in out):
            continue
        out.append((e, m))
    return out


def _normalize_degree(kind: str, l):
    lc = complex(l)
    if kind == "S":
        if lc.imag != 0.0 and lc.real != 0.0:
            raise DomainError("S-kind degrees must be purely imaginary (or given as beta)")
        return abs(lc.imag) if lc.imag != 0.0 else abs(lc.real)
    if kind == "Z":
        if lc.imag != 0.0:
            raise DomainError("Z-kind degrees must be real")
        if lc.real <= 0.0:
            raise DomainError("Z-kind degrees must be positive")
        return lc.real
    raise DomainError(f"kind must be 'S' or 'Z', got {kind!r}")


def gegenbauer_integrand(kind: str, alpha: float, l1, l2,
                         log_kernel_scale: float = 0.0,
                         e_stop: float = 1.6,
                         u_min: float | None = None,
                         u_max: float | None = None) -> GenIntegrand:
    """Squared/bilinear Gegenbauer integrand in its canonical variable.

    kind 'Z' (argument above 1): u = 2(w - 1) on (0, inf), integrand
    Z1 Z2 (w^2-1)^alpha; kind 'S' (argument inside (-1,1), imaginary
    degrees): u = 2(1 + w) on (0, 4), integrand S1 S2 (1-w^2)^alpha.
    The endpoint expansion is extracted numerically over the branch-exponent
    basis {u^(-alpha+j)} U {u^j} U {u^(alpha+j)} (log-augmented at integer
    alpha).  Each kernel factor is scaled by exp(log_kernel_scale), which
    keeps very large degrees inside double range.

    The truncated expansion is accurate only while degree^2 * u stays small,
    so the probe window (and the recorded validity radius) shrink with the
    degrees; the finite-part engine keeps its evaluation cut inside that
    radius.
    """
    b1 = _normalize_degree(kind, l1)
    b2 = _normalize_degree(kind, l2)
    kappa = log_kernel_scale
    # expansion coefficients grow like degree^(2j): keep degree^2 * u small
    dscale = max(b1 * b1, b2 * b2, 1.0)
    if u_max is None:
        u_max = min(5e-2, 0.25 / dscale)
    if u_min is None:
        u_min = 2e-5 * u_max

    if kind == "Z":
        def f(u: float) -> float:
            w = 1.0 + 0.5 * u
            z1 = math.exp(kappa + specfun.gegenbauer_z_log(alpha, b1, w))
            z2 = z1 if b2 == b1 else math.exp(kappa + specfun.gegenbauer_z_log(alpha, b2, w))
            return z1 * z2 * ((w - 1.0) * (w + 1.0)) ** alpha

        upper = math.inf
        tail = PowerTail(1.0 + b1 + b2)
    else:
        def f(u: float) -> float:
            w = 0.5 * u - 1.0
            s1 = math.exp(kappa + specfun.gegenbauer_s_log(alpha, b1, w))
            s2 = s1 if b2 == b1 else math.exp(kappa + specfun.gegenbauer_s_log(alpha, b2, w))
            return s1 * s2 * ((1.0 - w) * (1.0 + w)) ** alpha

        upper = 4.0
        tail = None

    basis = _gegenbauer_basis(alpha, e_stop)
    expansion = fit_endpoint_expansion(f, basis, u_min=u_min, u_max=u_max)
    expansion = SingularExpansion(expansion.terms, radius=min(1.0, u_max))
    return GenIntegrand(evaluate=f, expansion=expansion, upper=upper, tail=tail)


def gen_bilinear_gegenbauer(kind: str, alpha: float, l1, l2,
                            log_kernel_scale: float = 0.0,
                            rtol: float = 1e-10) -> float:
    """Generalized bilinear integral of Gegenbauer functions.

    kind 'Z': gen integral over (2, inf) of Z1 Z2 (w^2-1)^alpha d(2w),
    computed in the canonical variable u = 2(w-1); kind 'S': gen integral
    over (-2, 2) of S1 S2 (1-w^2)^alpha d(2w) in u = 2(1+w).  Values are
    scaled by exp(2*log_kernel_scale).
    """
    f = gegenbauer_integrand(kind, alpha, l1, l2, log_kernel_scale=log_kernel_scale)
    return gen_integrate(f, rtol=rtol).value
