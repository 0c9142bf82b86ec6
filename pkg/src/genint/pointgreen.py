"""Green functions of the (shifted) Laplacian on R^d, H^d and S^d, the
point-interaction self-energy, and the rank-one-corrected kernels.

The free kernels are radial profiles in the invariant of each geometry:

* Euclidean:  (2 pi)^(-d/2) (beta/s)^(d/2-1) K_{d/2-1}(beta s),  s = |x-x'|;
* hyperbolic: c_h(beta) Z_{d/2-1, beta}([x|x']),   [x|x'] = cosh(distance);
* spherical:  c_s(beta) S_{d/2-1, i beta}(-(x|x')), (x|x') = cos(distance).

A point interaction of coupling gamma at the base point adds
``G(x,0) G(0,x') / (gamma + Sigma(beta^2))``.  On R^d the self-energy
Sigma has closed odd/even-d forms; on the curved spaces its rho-derivative
is a diagonal generalized Gegenbauer integral and Sigma itself is obtained
by integrating from the reference point rho = 1 (where it is set to zero;
the constant is a reparametrisation of gamma and is absorbed there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import genquad, specfun, sturm
from .errors import DomainError, PoleError, ResonanceError
from .numerics import adaptive_quad, extrapolate_polynomial

__all__ = [
    "Geometry",
    "SpacePoint",
    "KreinKernelSpec",
    "base_point",
    "geodesic_point",
    "invariant_argument",
    "green_free",
    "sigma",
    "sigma_general",
    "sigma_derivative_check",
    "sigma_numeric_curved",
    "krein_green",
    "pde_residual_check",
    "resolvent_derivative_check_1d",
    "SIGMA_REFERENCE_RHO",
]

# Curved-space self-energy normalisation: Sigma(rho_ref) = 0.
SIGMA_REFERENCE_RHO = 1.0

_KINDS = ("euclidean", "hyperbolic", "spherical")


@dataclass(frozen=True)
class Geometry:
    """A constant-curvature space: R^d, H^d (hyperboloid model) or S^d."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown geometry kind {self.kind!r}")
        if self.dim < 1:
            raise DomainError("dimension must be at least 1")

    @property
    def spectral_shift(self) -> float:
        """((d-1)/2)^2 on the curved spaces, 0 on R^d.

        The resolvents are taken of -Lap, -Lap - shift, -Lap + shift for the
        Euclidean, hyperbolic and spherical cases respectively.
        """
        if self.kind == "euclidean":
            return 0.0
        return ((self.dim - 1) / 2.0) ** 2

    @property
    def order(self) -> float:
        """Gegenbauer/Bessel order d/2 - 1 attached to the radial problem."""
        return self.dim / 2.0 - 1.0


@dataclass(frozen=True)
class SpacePoint:
    """A point with ambient coordinates (length d, or d+1 on curved models).

    Hyperboloid points satisfy [x|x] = x0^2 - sum xi^2 = 1 with x0 >= 1;
    sphere points satisfy |x| = 1.  Coordinates violating the constraint by
    more than 1e-12 are renormalised on construction.
    """

    geometry: Geometry
    coords: tuple[float, ...]

    def __post_init__(self):
        g = self.geometry
        c = np.asarray(self.coords, dtype=float)
        if g.kind == "euclidean":
            if c.size != g.dim:
                raise DomainError(f"expected {g.dim} coordinates, got {c.size}")
            object.__setattr__(self, "coords", tuple(c))
            return
        if c.size != g.dim + 1:
            raise DomainError(f"expected {g.dim + 1} ambient coordinates, got {c.size}")
        if g.kind == "hyperbolic":
            spatial_sq = float(np.dot(c[1:], c[1:]))
            form = c[0] * c[0] - spatial_sq
            if c[0] <= 0.0:
                raise DomainError("hyperboloid points need a positive time component")
            if abs(form - 1.0) > 1e-12:
                c = np.concatenate([[math.sqrt(1.0 + spatial_sq)], c[1:]])
        else:
            norm = float(np.linalg.norm(c))
            if norm == 0.0:
                raise DomainError("sphere points cannot be the origin")
            if abs(norm - 1.0) > 1e-12:
                c = c / norm
        object.__setattr__(self, "coords", tuple(c))


def base_point(geometry: Geometry) -> SpacePoint:
    """The canonical interaction site: the origin, or (1, 0, ..., 0)."""
    if geometry.kind == "euclidean":
        return SpacePoint(geometry, (0.0,) * geometry.dim)
    return SpacePoint(geometry, (1.0,) + (0.0,) * geometry.dim)


def geodesic_point(geometry: Geometry, s: float) -> SpacePoint:
    """The point at arclength s along the first coordinate geodesic."""
    d = geometry.dim
    if geometry.kind == "euclidean":
        return SpacePoint(geometry, (s,) + (0.0,) * (d - 1))
    if geometry.kind == "hyperbolic":
        return SpacePoint(geometry, (math.cosh(s), math.sinh(s)) + (0.0,) * (d - 1))
    return SpacePoint(geometry, (math.cos(s), math.sin(s)) + (0.0,) * (d - 1))


def invariant_argument(x: SpacePoint, y: SpacePoint) -> float:
    """The two-point invariant: |x-y|, [x|y] = cosh r, or (x|y) = cos r."""
    if x.geometry != y.geometry:
        raise DomainError("points live on different geometries")
    cx = np.asarray(x.coords)
    cy = np.asarray(y.coords)
    kind = x.geometry.kind
    if kind == "euclidean":
        return float(np.linalg.norm(cx - cy))
    if kind == "hyperbolic":
        return float(cx[0] * cy[0] - np.dot(cx[1:], cy[1:]))
    return float(np.dot(cx, cy))


# ---------------------------------------------------------------------------
# free kernels
# ---------------------------------------------------------------------------

def _hyperbolic_prefactor(d: int, beta: float) -> float:
    if (d - 1) / 2.0 + beta <= 0.0:
        raise PoleError(f"Gamma pole in the hyperbolic prefactor at beta={beta}",
                        location=beta)
    return (math.sqrt(math.pi) * specfun.gamma((d - 1) / 2.0 + beta)
            / (math.sqrt(2.0) * (2.0 * math.pi) ** (d / 2.0) * 2.0 ** beta))


def _spherical_prefactor(d: int, beta: float) -> float:
    if beta == 0.0 and d == 1:
        raise PoleError("Gamma pole at beta = 0 in one dimension", location=0.0)
    return specfun.gamma_abs2((d - 1) / 2.0, beta) / (2.0 ** d * math.pi ** (d / 2.0))


def _free_profile(geometry: Geometry, beta: float) -> Callable[[float], float]:
    """The free kernel as a function of the geometry invariant."""
    d = geometry.dim
    order = geometry.order
    if geometry.kind == "euclidean":
        def profile(s: float) -> float:
            if s <= 0.0:
                raise DomainError("coincident points: the kernel is singular")
            return ((2.0 * math.pi) ** (-d / 2.0) * (beta / s) ** order
                    * specfun.bessel_k(order, beta * s))
        return profile
    if geometry.kind == "hyperbolic":
        c = _hyperbolic_prefactor(d, beta)

        def profile(w: float) -> float:
            if w <= 1.0:
                raise DomainError("coincident points: the kernel is singular")
            return c * specfun.gegenbauer_z(order, beta, w)
        return profile
    c = _spherical_prefactor(d, beta)

    def profile(m: float) -> float:
        # m = -(x|x'), inside (-1, 1]; m -> -1 is the coincidence limit
        if m <= -1.0:
            raise DomainError("coincident points: the kernel is singular")
        return c * specfun.gegenbauer_s(order, complex(0.0, beta), m)
    return profile


def _profile_argument(geometry: Geometry, x: SpacePoint, y: SpacePoint) -> float:
    inv = invariant_argument(x, y)
    return -inv if geometry.kind == "spherical" else inv


def green_free(geometry: Geometry, beta: float, x: SpacePoint, y: SpacePoint) -> float:
    """Free Green function at spectral parameter z = -beta^2 (beta > 0)."""
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    return _free_profile(geometry, beta)(_profile_argument(geometry, x, y))


# ---------------------------------------------------------------------------
# Euclidean self-energy
# ---------------------------------------------------------------------------

def sigma(d: int, beta: float) -> float:
    """Euclidean point-interaction self-energy Sigma_d(beta^2).

    Dimensions 1-3 use the tabulated values -1/(2 beta), ln(beta^2)/(4 pi),
    beta/(4 pi); higher dimensions use the generalized-integral closed forms
    (`sigma_general`).  Note the d = 2 table entry differs from the general
    even-d formula by a beta-independent constant, absorbable into gamma.
    """
    if d < 1:
        raise DomainError("dimension must be at least 1")
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    if d == 1:
        return -1.0 / (2.0 * beta)
    if d == 2:
        return math.log(beta * beta) / (4.0 * math.pi)
    if d == 3:
        return beta / (4.0 * math.pi)
    return sigma_general(d, beta)


def sigma_general(d: int, beta: float) -> float:
    """The all-dimension closed form of Sigma_d(beta^2).

    Odd d: (-1)^((d+1)/2) beta^(d-2) / ((4 pi)^((d-1)/2) * 2 * (1/2)_((d-1)/2));
    even d: (-1)^(d/2+1) beta^(d-2) / ((4 pi)^(d/2) (d/2-1)!)
            * (2 - 2 psi(d/2) + ln(beta^2/4)).
    Reproduces the d = 1 and d = 3 table entries exactly; at d = 2 it differs
    from ln(beta^2)/(4 pi) by the constant (2 + 2 gamma_E - 2 ln 2)/(4 pi).
    """
    if d < 1:
        raise DomainError("dimension must be at least 1")
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    if d % 2 == 1:
        m = (d - 1) // 2
        return ((-1.0) ** ((d + 1) // 2) * beta ** (d - 2)
                / ((4.0 * math.pi) ** m * 2.0 * specfun.pochhammer(0.5, m)))
    half = d // 2
    return ((-1.0) ** (half + 1) * beta ** (d - 2)
            / ((4.0 * math.pi) ** half * math.factorial(half - 1))
            * (2.0 - 2.0 * specfun.digamma(float(half)) + math.log(beta * beta / 4.0)))


def sigma_derivative_check(d: int, beta: float) -> tuple[float, float]:
    """Both sides of the self-energy derivative identity.

    lhs: numerical d Sigma_d / d rho at rho = beta^2 (central differences,
    extrapolated).  rhs: the generalized bilinear Macdonald diagonal at
    order d/2 - 1 and scale beta, times
    (beta^2)^(d/2-1) pi^(d/2) / ((2 pi)^d Gamma(d/2)).
    """
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    rho = beta * beta

    def s_of_rho(r: float) -> float:
        return sigma(d, math.sqrt(r))

    hs = [1e-2 * rho * 2.0 ** (-k) for k in range(4)]
    vals = [(s_of_rho(rho + h) - s_of_rho(rho - h)) / (2.0 * h) for h in hs]
    lhs, _ = extrapolate_polynomial([h * h for h in hs], vals)

    order = d / 2.0 - 1.0
    pref = (rho ** order * math.pi ** (d / 2.0)
            / ((2.0 * math.pi) ** d * specfun.gamma(d / 2.0)))
    rhs = pref * genquad.gen_bilinear_macdonald(order, beta, beta)
    return lhs, rhs


# ---------------------------------------------------------------------------
# curved self-energy (numerical)
# ---------------------------------------------------------------------------

def _sphere_area(d: int) -> float:
    """Surface area of the unit (d-1)-sphere in R^d."""
    return 2.0 * math.pi ** (d / 2.0) / specfun.gamma(d / 2.0)


def _curved_dsigma(geometry: Geometry, beta: float) -> float:
    """d Sigma / d rho on H^d or S^d: integral of the squared free kernel.

    Written as the diagonal generalized Gegenbauer integral in the canonical
    variable (u = 2(cosh r - 1), resp. 2(1 - cos r)); the kernel prefactor
    is folded into the integrand logarithmically to survive large degrees.
    """
    d = geometry.dim
    order = geometry.order
    if geometry.kind == "hyperbolic":
        log_c = math.log(_hyperbolic_prefactor(d, beta))
        kind = "Z"
    elif geometry.kind == "spherical":
        log_c = math.log(_spherical_prefactor(d, beta))
        kind = "S"
    else:
        raise DomainError("use sigma/sigma_general on the Euclidean space")
    gen = genquad.gen_bilinear_gegenbauer(kind, order, beta, beta,
                                          log_kernel_scale=log_c)
    return _sphere_area(d) * 0.5 * gen


@lru_cache(maxsize=None)
def _curved_sigma_cached(kind: str, d: int, beta: float, rho_ref: float) -> float:
    geometry = Geometry(kind, d)
    rho = beta * beta
    lo, hi = min(rho_ref, rho), max(rho_ref, rho)
    if hi - lo < 1e-14:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(16)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    total = 0.0
    for t, wgt in zip(nodes, weights):
        r = mid + half * t
        total += wgt * _curved_dsigma(geometry, math.sqrt(r))
    total *= half
    return total if rho >= rho_ref else -total


def sigma_numeric_curved(geometry: Geometry, beta: float,
                         rho_ref: float = SIGMA_REFERENCE_RHO) -> float:
    """Self-energy on H^d or S^d, normalised to Sigma(rho_ref) = 0.

    The rho-derivative is the diagonal generalized Gegenbauer integral of
    the squared kernel; Sigma itself is its integral from the reference
    point (the undetermined constant is a reparametrisation of the coupling
    and is fixed by the Sigma(rho_ref) = 0 convention).
    """
    if geometry.kind == "euclidean":
        raise DomainError("use sigma() on the Euclidean space")
    if beta <= 0.0:
        raise DomainError("beta must be positive")
    return _curved_sigma_cached(geometry.kind, geometry.dim, float(beta),
                                float(rho_ref))


# ---------------------------------------------------------------------------
# point-interaction kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KreinKernelSpec:
    """Kernel family data: geometry, spectral parameter, coupling, site.

    ``gamma = inf`` reproduces the free kernel exactly.  ``beta`` is the
    positive spectral parameter (z = -beta^2); the interaction sits at
    ``base`` (canonical origin by default).
    """

    geometry: Geometry
    beta: float
    gamma: float
    base: Optional[SpacePoint] = None

    def __post_init__(self):
        if self.beta <= 0.0:
            raise DomainError("beta must be positive")
        if self.base is None:
            object.__setattr__(self, "base", base_point(self.geometry))

    def sigma_value(self) -> float:
        if self.geometry.kind == "euclidean":
            return sigma(self.geometry.dim, self.beta)
        return sigma_numeric_curved(self.geometry, self.beta)


def krein_green(spec: KreinKernelSpec, x: SpacePoint, y: SpacePoint) -> float:
    """Point-interaction Green function.

    G_free(x,y) + G_free(x,0) G_free(0,y) / (gamma + Sigma(beta^2)); the
    coupling gamma = inf drops the correction.  A vanishing denominator is a
    spectral resonance and raises ResonanceError.
    """
    g = spec.geometry
    profile = _free_profile(g, spec.beta)
    free = profile(_profile_argument(g, x, y))
    if math.isinf(spec.gamma):
        return free
    denom = spec.gamma + spec.sigma_value()
    if abs(denom) < 1e-12 * max(1.0, abs(spec.gamma)):
        raise ResonanceError(
            f"gamma + Sigma = {denom:.3e}: spectral resonance", denominator=denom)
    gx = profile(_profile_argument(g, x, spec.base))
    gy = profile(_profile_argument(g, spec.base, y))
    return free + gx * gy / denom


# ---------------------------------------------------------------------------
# kernel verification operations
# ---------------------------------------------------------------------------

def _euclidean_stencil_residual(spec: KreinKernelSpec, x: SpacePoint,
                                y: SpacePoint, h: float) -> float:
    g = spec.geometry
    cx = np.asarray(x.coords)

    def G(c) -> float:
        return krein_green(spec, SpacePoint(g, tuple(c)), y)

    g0 = G(cx)
    lap = 0.0
    for i in range(g.dim):
        e = np.zeros(g.dim)
        e[i] = h
        lap += (G(cx + e) - 2.0 * g0 + G(cx - e)) / (h * h)
    return -lap + spec.beta ** 2 * g0


def _curved_radial_residual(geometry: Geometry, beta: float,
                            profile: Callable[[float], float],
                            w: float, h: float) -> float:
    """(-Lap -+ shift + beta^2) applied to a radial kernel profile.

    Uses the radial second-order form of the Laplace-Beltrami operator in
    the invariant variable via the matching Gegenbauer operator.
    """
    order = geometry.order
    shift = geometry.spectral_shift
    if geometry.kind == "hyperbolic":
        op = sturm.gegenbauer_operator(order, "hyperbolic")
        c_val = sturm.apply_operator(op, profile, w, h=h)
        return -c_val + (beta * beta - shift) * profile(w)
    op = sturm.gegenbauer_operator(order, "sphere")
    c_val = sturm.apply_operator(op, profile, w, h=h)
    return c_val + (beta * beta + shift) * profile(w)


def pde_residual_check(spec: KreinKernelSpec, x: SpacePoint, y: SpacePoint,
                       h: float) -> float:
    """Residual of the defining equation at x (away from y and the site).

    Euclidean kernels are differentiated with a full central stencil in the
    ambient coordinates; curved kernels term by term in their radial
    invariant through the Sturm-Liouville operator form.  The contract is
    O(h^2) decay as the stencil is refined.
    """
    g = spec.geometry
    if g.kind == "euclidean":
        sx = np.asarray(x.coords)
        dist_y = float(np.linalg.norm(sx - np.asarray(y.coords)))
        dist_0 = float(np.linalg.norm(sx - np.asarray(spec.base.coords)))
        if min(dist_y, dist_0 if not math.isinf(spec.gamma) else math.inf) < 10.0 * h:
            raise DomainError("stencil too close to a kernel singularity")
        return _euclidean_stencil_residual(spec, x, y, h)

    profile = _free_profile(g, spec.beta)
    res = _curved_radial_residual(g, spec.beta, profile,
                                  _profile_argument(g, x, y), h)
    if not math.isinf(spec.gamma):
        denom = spec.gamma + spec.sigma_value()
        scale = profile(_profile_argument(g, spec.base, y)) / denom
        res += scale * _curved_radial_residual(
            g, spec.beta, profile, _profile_argument(g, x, spec.base), h)
    return res


def resolvent_derivative_check_1d(beta: float, gamma: float, x: float,
                                  xp: float, rtol: float = 1e-9) -> tuple[float, float]:
    """Both sides of the differential resolvent identity on the line.

    lhs: d/d rho of the kernel at rho = beta^2 by extrapolated central
    differences; rhs: -integral G(x, y) G(y, x') dy over the real line by
    adaptive quadrature.  The two agree for the exact resolvent family.
    """
    geom = Geometry("euclidean", 1)

    def kernel(rho: float, a: float, b: float) -> float:
        s = KreinKernelSpec(geom, math.sqrt(rho), gamma)
        return krein_green(s, SpacePoint(geom, (a,)), SpacePoint(geom, (b,)))

    rho = beta * beta
    hs = [1e-3 * rho * 2.0 ** (-k) for k in range(3)]
    vals = [(kernel(rho + h, x, xp) - kernel(rho - h, x, xp)) / (2.0 * h) for h in hs]
    lhs, _ = extrapolate_polynomial([h * h for h in hs], vals)

    def integrand(yv: float) -> float:
        return kernel(rho, x, yv) * kernel(rho, yv, xp)

    breaks = sorted({x, xp, 0.0})
    pieces = []
    lo = -math.inf
    for b in breaks + [math.inf]:
        pieces.append((lo, b))
        lo = b
    total = 0.0
    for a, b in pieces:
        val, _ = adaptive_quad(integrand, a, b, rtol=rtol)
        total += val
    return lhs, -total
