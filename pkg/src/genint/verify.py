"""Named verification suites: every closed form in the package checked
against an independent route (direct quadrature, the boundary-identity
oracle, finite-part quadrature, or exact reference values).

Each check yields a CheckRow; suites are consumed by the CLI front-end and
by the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import special

from . import closedforms, genquad, limits, pointgreen, specfun, sturm
from .errors import NumericsError
from .numerics import EULER_GAMMA, adaptive_quad, loglog_slope

__all__ = ["CheckRow", "SUITES", "run_suite", "mac_bilinear_quadrature",
           "mac_square_quadrature", "geg_s_quadrature", "geg_z_quadrature",
           "DEFAULT_SEED"]

DEFAULT_SEED = 20240


@dataclass(frozen=True)
class CheckRow:
    """One verification outcome."""

    suite: str
    name: str
    value: float
    reference: float
    error: float
    tol: float
    passed: bool


def _row(suite: str, name: str, value: float, reference: float, tol: float,
         relative: bool = True) -> CheckRow:
    scale = max(abs(reference), 1e-300) if relative else 1.0
    err = abs(value - reference) / scale
    return CheckRow(suite, name, value, reference, err, tol, err <= tol)


def _slope_row(suite: str, name: str, slope: float, target: float,
               halfwidth: float) -> CheckRow:
    err = abs(slope - target)
    return CheckRow(suite, name, slope, target, err, halfwidth,
                    err <= halfwidth)


# ---------------------------------------------------------------------------
# direct quadrature oracles for the closed forms
# ---------------------------------------------------------------------------

def mac_bilinear_quadrature(alpha: float, a: float, b: float,
                            rtol: float = 1e-11) -> float:
    """Direct adaptive quadrature of the Macdonald pair integral."""

    def f(r: float) -> float:
        return float(special.kv(alpha, a * r) * special.kv(alpha, b * r)) * 2.0 * r

    v1, _ = adaptive_quad(f, 0.0, 1.0, rtol=rtol)
    v2, _ = adaptive_quad(f, 1.0, np.inf, rtol=rtol)
    return v1 + v2


def mac_square_quadrature(alpha: float, b: float, rtol: float = 1e-11) -> float:
    return mac_bilinear_quadrature(alpha, b, b, rtol=rtol)


def geg_s_quadrature(alpha: float, beta1: float, beta2: float,
                     rtol: float = 1e-10) -> float:
    """Direct quadrature of the regular-family Gegenbauer pair integral."""

    def f(w: float) -> float:
        return (specfun.gegenbauer_s(alpha, complex(0.0, beta1), w)
                * specfun.gegenbauer_s(alpha, complex(0.0, beta2), w)
                * (1.0 - w * w) ** alpha * 2.0)

    v1, _ = adaptive_quad(f, -1.0, 0.0, rtol=rtol)
    v2, _ = adaptive_quad(f, 0.0, 1.0, rtol=rtol)
    return v1 + v2


def geg_z_quadrature(alpha: float, l1: float, l2: float,
                     rtol: float = 1e-10) -> float:
    """Direct quadrature of the recessive-family Gegenbauer pair integral."""

    def f(w: float) -> float:
        return (specfun.gegenbauer_z(alpha, l1, w)
                * specfun.gegenbauer_z(alpha, l2, w)
                * (w * w - 1.0) ** alpha * 2.0)

    v1, _ = adaptive_quad(f, 1.0, 3.0, rtol=rtol)
    v2, _ = adaptive_quad(f, 3.0, np.inf, rtol=rtol)
    return v1 + v2


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_macdonald(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []
    pairs = [(2.0, 1.0), (1.5, 1.0), (3.0, 2.0)]

    for alpha in (-0.7, -0.3, 0.4, 0.5):
        for a, b in pairs:
            quad = mac_bilinear_quadrature(alpha, a, b)
            closed = closedforms.mac_bilinear_closed(alpha, a, b)
            rows.append(_row("macdonald", f"pair a{alpha}:{a},{b}", quad, closed, 1e-8))
    for a, b in pairs:
        quad = mac_bilinear_quadrature(0.0, a, b)
        closed = closedforms.mac_bilinear_closed(0.0, a, b)
        rows.append(_row("macdonald", f"pair a0:{a},{b}", quad, closed, 1e-8))

    for alpha in (-0.7, -0.3, 0.0, 0.4, 0.5):
        for b in (1.0, 2.0):
            closed = closedforms.mac_square_closed(alpha, b)
            quad = mac_square_quadrature(alpha, b)
            rows.append(_row("macdonald", f"square quad a{alpha}:b{b}", quad, closed, 1e-7))
            oracle = sturm.diagonal_integral(
                sturm.bessel_operator(alpha),
                lambda E, al=alpha: sturm.bessel_eigenpair(al, math.sqrt(-E)),
                -b * b,
                steps=tuple(0.2 * b * b * 2.0 ** (-k) for k in range(6)))
            rows.append(_row("macdonald", f"square identity a{alpha}:b{b}",
                             oracle, closed, 1e-7))

    for alpha in (1.3, 1.5, 2.7):
        gen = genquad.gen_bilinear_macdonald(alpha, 2.0, 1.0)
        closed = closedforms.mac_bilinear_closed(alpha, 2.0, 1.0)
        rows.append(_row("macdonald", f"continuation pair a{alpha}", gen, closed, 1e-6))
        gen = genquad.gen_bilinear_macdonald(alpha, 1.0, 1.0)
        closed = closedforms.mac_square_closed(alpha, 1.0)
        rows.append(_row("macdonald", f"continuation square a{alpha}", gen, closed, 1e-6))
    rows.append(_row("macdonald", "continuation 3/2 value",
                     genquad.gen_bilinear_macdonald(1.5, 1.0, 1.0),
                     -1.5 * math.pi, 1e-8))

    for alpha in (1.0, 2.0):
        gen = genquad.gen_bilinear_macdonald(alpha, 2.0, 1.0)
        closed = closedforms.mac_bilinear_closed(alpha, 2.0, 1.0)
        rows.append(_row("macdonald", f"anomalous pair a{int(alpha)}", gen, closed, 1e-4))
        gen = genquad.gen_bilinear_macdonald(alpha, 1.0, 1.0)
        closed = closedforms.mac_square_closed(alpha, 1.0)
        rows.append(_row("macdonald", f"anomalous square a{int(alpha)}", gen, closed, 1e-4))
    rows.append(_row("macdonald", "anomalous a1 b2 value",
                     genquad.gen_bilinear_macdonald(1.0, 2.0, 2.0),
                     -(1.0 + 2.0 * EULER_GAMMA) / 4.0, 1e-6))
    return rows


def suite_sturm(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []

    def identity_row(name, spec, f1, f2, tol=1e-6):
        lhs, rhs = sturm.greens_identity_check(spec, f1, f2)
        err = abs(lhs - rhs) / (abs(lhs) + abs(rhs))
        rows.append(CheckRow("sturm", name, lhs, rhs, err, tol, err <= tol))

    for alpha in (-0.7, 0.0, 0.4, 0.5):
        identity_row(f"bessel identity a{alpha}",
                     sturm.bessel_operator(alpha),
                     sturm.bessel_eigenpair(alpha, 2.0),
                     sturm.bessel_eigenpair(alpha, 1.0))
    for alpha in (-0.5, 0.3, 0.5):
        identity_row(f"gegenbauer-z identity a{alpha}",
                     sturm.gegenbauer_operator(alpha, "hyperbolic"),
                     sturm.gegenbauer_z_eigenpair(alpha, 2.0),
                     sturm.gegenbauer_z_eigenpair(alpha, 1.0))
    identity_row("gegenbauer-s identity a0.3",
                 sturm.gegenbauer_operator(0.3, "sphere"),
                 sturm.gegenbauer_s_eigenpair(0.3, 0.5),
                 sturm.gegenbauer_s_eigenpair(0.3, 1.0))

    # diagonal via the identity against direct quadrature (recessive family)
    spec = sturm.gegenbauer_operator(0.5, "hyperbolic")
    diag = sturm.diagonal_integral(
        spec, lambda E: sturm.gegenbauer_z_eigenpair(0.5, math.sqrt(E + 1.0)), 0.0,
        steps=tuple(0.2 * 2.0 ** (-k) for k in range(6)))
    quad = geg_z_quadrature(0.5, 1.0, 1.0)
    rows.append(_row("sturm", "gegenbauer-z diagonal", diag, quad, 1e-6))
    return rows


def suite_gegenbauer(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []

    closed = closedforms.geg_s_bilinear_closed(0.3, 0.5, 1.0)
    rows.append(_row("gegenbauer", "regular pair closed vs quad",
                     geg_s_quadrature(0.3, 0.5, 1.0), closed, 1e-6))
    closed = closedforms.geg_z_bilinear_closed(0.5, 2.0, 1.0)
    rows.append(_row("gegenbauer", "recessive pair closed value",
                     closed, 8.0 / 3.0, 1e-12))
    rows.append(_row("gegenbauer", "recessive pair closed vs quad",
                     geg_z_quadrature(0.5, 2.0, 1.0), closed, 1e-6))
    rows.append(_row("gegenbauer", "recessive generalized a1.3",
                     genquad.gen_bilinear_gegenbauer("Z", 1.3, 1.2, 0.7),
                     closedforms.geg_z_bilinear_closed(1.3, 1.2, 0.7), 1e-4))

    rng = np.random.default_rng(seed)
    worst_wh = 0.0
    worst_s = 0.0
    worst_z = 0.0
    for _ in range(100):
        alpha = rng.uniform(0.1, 1.4)
        lam = rng.uniform(0.3, 2.5)
        w = rng.uniform(1.5, 5.0)
        direct = specfun.gegenbauer_z(alpha, lam, w, method="direct")
        whip = specfun.gegenbauer_z_whipple(alpha, lam, w)
        worst_wh = max(worst_wh, abs(direct - whip) / abs(direct))

        ws = rng.uniform(-0.9, 2.5)
        s_plus = specfun.gegenbauer_s(alpha, lam, ws)
        s_minus = specfun.gegenbauer_s(alpha, -lam, ws)
        worst_s = max(worst_s, abs(s_plus - s_minus) / max(abs(s_plus), 1e-300))

        z_plus = specfun.gegenbauer_z(alpha, lam, w)
        z_minus = specfun.gegenbauer_z(-alpha, lam, w) / (w * w - 1.0) ** alpha
        worst_z = max(worst_z, abs(z_plus - z_minus) / abs(z_plus))
    rows.append(CheckRow("gegenbauer", "whipple identity grid", worst_wh, 0.0,
                         worst_wh, 1e-9, worst_wh <= 1e-9))
    rows.append(CheckRow("gegenbauer", "regular degree-sign symmetry grid",
                         worst_s, 0.0, worst_s, 1e-9, worst_s <= 1e-9))
    rows.append(CheckRow("gegenbauer", "recessive order-sign symmetry grid",
                         worst_z, 0.0, worst_z, 1e-9, worst_z <= 1e-9))
    return rows


def suite_genquad(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []

    plain = genquad.gen_integrate(genquad.gamma_power_integrand(0.0))
    rows.append(_row("genquad", "ordinary integral coincidence", plain.value, 1.0, 1e-10))
    res = genquad.gen_integrate(genquad.gamma_power_integrand(-1.5))
    rows.append(_row("genquad", "gamma continuation -1/2", res.value,
                     -2.0 * math.sqrt(math.pi), 1e-10))
    res = genquad.gen_integrate(genquad.gamma_power_integrand(-1.0))
    rows.append(_row("genquad", "exponential-log value", res.value,
                     -EULER_GAMMA, 1e-10))

    corpus = [
        ("pow-1", genquad.gamma_power_integrand(-1.0)),
        ("pow-3/2", genquad.gamma_power_integrand(-1.5)),
        ("bessel a1.3", genquad.bessel_product_integrand(1.3, 2.0, 1.0)),
        ("bessel a1", genquad.bessel_product_integrand(1.0, 1.0, 1.0)),
    ]
    for name, f in corpus:
        anomaly = f.expansion.anomaly
        for c in (0.5, 2.0, 5.0):
            got = genquad.split_shift(f, c)
            want = -anomaly * math.log(c)
            rows.append(_row("genquad", f"split law {name} c{c}", got, want,
                             1e-10, relative=False))
        lhs, rhs = genquad.scaling_check(f, 3.0)
        rows.append(_row("genquad", f"scaling law {name}", lhs, rhs, 1e-9))
        lhs, rhs = genquad.power_transform_check(f, 2.0)
        rows.append(_row("genquad", f"power transform {name}", lhs, rhs, 1e-9))

    # change of variables, end to end, against the closed correction
    A, B, C3 = 0.8, 2.5, 1.2

    def power_exp_integrand(weights: dict[int, float]) -> genquad.GenIntegrand:
        terms: dict[float, float] = {}
        for k in range(14):
            c = (-1.0) ** k / math.factorial(k)
            for e0, c0 in weights.items():
                e = e0 + k
                if e <= 3.0:
                    terms[e] = terms.get(e, 0.0) + c0 * c
        tt = tuple(genquad.SingularTerm(e, c) for e, c in sorted(terms.items()))
        return genquad.GenIntegrand(
            evaluate=lambda r: sum(c0 * r ** e0 for e0, c0 in weights.items())
            * math.exp(-r),
            expansion=genquad.SingularExpansion(tt),
            upper=math.inf,
            tail=genquad.ExponentialTail(1.0),
        )

    quad_taylor = [0.0, 1.0, 1.0, 0.0, 0.0]
    sinh_taylor = [0.0, 1.0, 0.0, 1.0 / 6.0, 0.0, 1.0 / 120.0, 0.0]
    for gname, g, dg, taylor in (
        ("u+u^2", lambda u: u + u * u, lambda u: 1.0 + 2.0 * u, quad_taylor),
        ("sinh", math.sinh, math.cosh, sinh_taylor),
    ):
        for fname, weights in (("f-1,-2", {-1: A, -2: B}), ("f-3", {-3: C3})):
            f = power_exp_integrand(weights)
            lhs = genquad.gen_integrate(f).value
            transformed = genquad.transform_integrand(f, g, taylor, dg=dg)
            rhs = genquad.gen_integrate(transformed).value
            corr = genquad.change_of_var_correction(f.expansion, g_taylor=taylor)
            rows.append(_row("genquad", f"change-of-var {gname} {fname}",
                             rhs - lhs, corr, 1e-6, relative=False))
    return rows


def suite_sigma(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []
    for d, beta in ((1, 0.77), (3, 1.37)):
        rows.append(_row("sigma", f"general matches table d{d}",
                         pointgreen.sigma_general(d, beta),
                         pointgreen.sigma(d, beta), 1e-12))

    # d = 2: derivatives agree; values differ by the documented constant
    beta = 1.7
    rho = beta * beta
    h = 1e-5 * rho

    def drho(f: Callable[[float], float]) -> float:
        return (f(rho + h) - f(rho - h)) / (2.0 * h)

    d_table = drho(lambda r: pointgreen.sigma(2, math.sqrt(r)))
    d_general = drho(lambda r: pointgreen.sigma_general(2, math.sqrt(r)))
    rows.append(_row("sigma", "d2 derivative match", d_general, d_table, 1e-10))
    offset = pointgreen.sigma_general(2, beta) - pointgreen.sigma(2, beta)
    want = (2.0 + 2.0 * EULER_GAMMA - 2.0 * math.log(2.0)) / (4.0 * math.pi)
    rows.append(_row("sigma", "d2 constant offset", offset, want, 1e-12))

    for d in range(1, 7):
        lhs, rhs = pointgreen.sigma_derivative_check(d, 1.0)
        rows.append(_row("sigma", f"derivative identity d{d}", lhs, rhs, 1e-4))
    return rows


def _krein_display(d: int, beta: float, gamma: float, x, y) -> float:
    """The explicit low-dimension point-interaction kernels."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    s = float(np.linalg.norm(xv - yv))
    if d == 1:
        return (math.exp(-beta * s) / (2.0 * beta)
                + math.exp(-beta * abs(xv[0])) * math.exp(-beta * abs(yv[0]))
                / ((2.0 * beta) ** 2 * (gamma - 1.0 / (2.0 * beta))))
    if d == 2:
        return float(
            special.kv(0, beta * s) / (2.0 * math.pi)
            + special.kv(0, beta * np.linalg.norm(xv)) * special.kv(0, beta * np.linalg.norm(yv))
            / ((2.0 * math.pi) ** 2 * (gamma + math.log(beta * beta) / (4.0 * math.pi))))
    if d == 3:
        return float(
            math.exp(-beta * s) / (4.0 * math.pi * s)
            + math.exp(-beta * np.linalg.norm(xv)) * math.exp(-beta * np.linalg.norm(yv))
            / ((4.0 * math.pi) ** 2 * np.linalg.norm(xv) * np.linalg.norm(yv)
               * (gamma + beta / (4.0 * math.pi))))
    raise ValueError(d)


def suite_krein(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    rows: list[CheckRow] = []
    rng = np.random.default_rng(seed)
    beta, gamma = 1.3, 0.7

    for d in (1, 2, 3):
        geom = pointgreen.Geometry("euclidean", d)
        spec = pointgreen.KreinKernelSpec(geom, beta, gamma)
        worst = 0.0
        for _ in range(20):
            xv = rng.uniform(-2.0, 2.0, size=d)
            yv = rng.uniform(-2.0, 2.0, size=d)
            if np.linalg.norm(xv - yv) < 0.1 or np.linalg.norm(xv) < 0.1 \
                    or np.linalg.norm(yv) < 0.1:
                continue
            got = pointgreen.krein_green(
                spec, pointgreen.SpacePoint(geom, tuple(xv)),
                pointgreen.SpacePoint(geom, tuple(yv)))
            want = _krein_display(d, beta, gamma, xv, yv)
            worst = max(worst, abs(got - want) / abs(want))
        rows.append(CheckRow("krein", f"display match d{d}", worst, 0.0,
                             worst, 1e-12, worst <= 1e-12))

    hs = (1e-2, 5e-3, 2.5e-3)
    for d in (1, 2, 3, 4):
        geom = pointgreen.Geometry("euclidean", d)
        g = 0.8 if d <= 3 else math.inf
        spec = pointgreen.KreinKernelSpec(geom, 1.0, g)
        x = pointgreen.geodesic_point(geom, 0.8)
        y = pointgreen.geodesic_point(geom, 1.7)
        res = [abs(pointgreen.pde_residual_check(spec, x, y, h)) for h in hs]
        slope, _ = loglog_slope(hs, res)
        rows.append(_slope_row("krein", f"pde order euclidean d{d}", slope, 2.0, 0.2))
    for kind in ("hyperbolic", "spherical"):
        for d in (2, 3):
            geom = pointgreen.Geometry(kind, d)
            spec = pointgreen.KreinKernelSpec(geom, 1.0, math.inf)
            x = pointgreen.geodesic_point(geom, 0.8)
            y = pointgreen.geodesic_point(geom, 1.7)
            res = [abs(pointgreen.pde_residual_check(spec, x, y, h)) for h in hs]
            slope, _ = loglog_slope(hs, res)
            rows.append(_slope_row("krein", f"pde order {kind} d{d}", slope, 2.0, 0.2))

    for g in (math.inf, 1.0):
        lhs, rhs = pointgreen.resolvent_derivative_check_1d(1.0, g, 0.3, -0.2)
        rows.append(_row("krein", f"resolvent derivative 1d gamma={g}", lhs, rhs, 1e-6))

    geom = pointgreen.Geometry("euclidean", 3)
    spec_free = pointgreen.KreinKernelSpec(geom, beta, math.inf)
    x = pointgreen.geodesic_point(geom, 0.5)
    y = pointgreen.geodesic_point(geom, 1.1)
    free_same = (pointgreen.krein_green(spec_free, x, y)
                 == pointgreen.green_free(geom, beta, x, y))
    rows.append(CheckRow("krein", "free-kernel reduction", 1.0 if free_same else 0.0,
                         1.0, 0.0 if free_same else 1.0, 0.0, free_same))
    return rows


def suite_limits(seed: int = DEFAULT_SEED) -> list[CheckRow]:
    """Large-degree rate ladders (the slow suite).

    The function displays saturate their first-order error bound (slope -1);
    the measured integral-display deviations fall off at second order
    instead, so their slope rows sit outside the -1 +- 0.2 window and are
    reported as failures by design (the underlying convergence claim itself
    holds with a margin).
    """
    rows: list[CheckRow] = []
    for kind in ("Z", "S"):
        rep = limits.function_rate_report(kind, 0.3)
        rows.append(CheckRow("limits", f"function {kind} monotone",
                             1.0 if rep.monotone() else 0.0, 1.0,
                             0.0 if rep.monotone() else 1.0, 0.0, rep.monotone()))
        rows.append(_slope_row("limits", f"function {kind} rate", rep.slope, -1.0, 0.2))
    for kind in ("Z", "S"):
        rep = limits.integral_rate_report(kind, 0.3)
        rows.append(CheckRow("limits", f"integral {kind} monotone",
                             1.0 if rep.monotone() else 0.0, 1.0,
                             0.0 if rep.monotone() else 1.0, 0.0, rep.monotone()))
        rows.append(_slope_row("limits", f"integral {kind} rate", rep.slope, -1.0, 0.2))
    return rows


SUITES: dict[str, Callable[..., list[CheckRow]]] = {
    "macdonald": suite_macdonald,
    "sturm": suite_sturm,
    "gegenbauer": suite_gegenbauer,
    "genquad": suite_genquad,
    "sigma": suite_sigma,
    "krein": suite_krein,
    "limits": suite_limits,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[CheckRow]:
    """Run one named suite ('all' chains every suite)."""
    if name == "all":
        rows: list[CheckRow] = []
        for fn in SUITES.values():
            rows.extend(fn(seed=seed))
        return rows
    if name not in SUITES:
        raise NumericsError(
            f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](seed=seed)
