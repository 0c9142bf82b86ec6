"""Gamma family, Macdonald, and Gegenbauer function evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genint import specfun
from genint.errors import DomainError, PoleError
from genint.numerics import EULER_GAMMA, adaptive_quad

from conftest import rel_err


class TestGammaFamily:
    def test_gamma_half(self):
        assert rel_err(specfun.gamma(0.5), math.sqrt(math.pi)) < 1e-15

    def test_digamma_two(self):
        # psi(2) = psi(1) + 1 = 1 - gamma_E
        assert rel_err(specfun.digamma(2.0), 1.0 - EULER_GAMMA) < 1e-15

    def test_digamma_matches_loggamma_slope(self):
        h = 1e-6
        z = 2.0
        slope = (math.lgamma(z + h) - math.lgamma(z - h)) / (2 * h)
        assert abs(specfun.digamma(z) - slope) < 1e-8

    def test_pochhammer(self):
        assert specfun.pochhammer(0.5, 2) == 0.75
        assert specfun.pochhammer(3.7, 0) == 1.0
        assert specfun.pochhammer(-2.0, 3) == 0.0

    def test_pochhammer_rejects_bad_order(self):
        with pytest.raises(DomainError):
            specfun.pochhammer(1.0, -1)

    @pytest.mark.parametrize("z", [0.0, -1.0, -5.0])
    def test_gamma_pole(self, z):
        with pytest.raises(PoleError) as err:
            specfun.gamma(z)
        assert err.value.location == z

    def test_digamma_pole(self):
        with pytest.raises(PoleError):
            specfun.digamma(-3.0)

    def test_gamma_abs2(self):
        # |Gamma(0.8 + 0.7i)|^2, 50-digit reference
        assert rel_err(specfun.gamma_abs2(0.8, 0.7), 0.54216805413339391932) < 1e-13

    def test_gamma_abs2_half_line(self):
        # |Gamma(1/2 + i b)|^2 = pi / cosh(pi b)
        for b in (0.3, 1.0, 2.5):
            want = math.pi / math.cosh(math.pi * b)
            assert rel_err(specfun.gamma_abs2(0.5, b), want) < 1e-13

    def test_dispatcher(self):
        assert specfun.eval_gamma_family("pochhammer", 0.5, 2) == 0.75
        with pytest.raises(DomainError):
            specfun.eval_gamma_family("nope", 1.0)


# 20-digit references
BESSEL_K_GOLDEN = [
    (0.0, 1.0, 0.42102443824070833334),
    (0.5, 1.0, 0.46106850444789455844),
    (-0.7, 0.3, 2.0605226512839310387),
    (3.3, 2.0, 0.90857425180874930607),
    (20.0, 50.0, 1.7061483797220350671e-21),
    (5.5, 1e-4, 1.1843818591051575034e+25),
    (0.0, 700.0, 4.669776431685376881e-306),
]


class TestBesselK:
    @pytest.mark.parametrize("alpha,x,want", BESSEL_K_GOLDEN)
    def test_golden(self, alpha, x, want):
        assert rel_err(specfun.bessel_k(alpha, x), want) < 1e-12

    def test_half_order_closed_form(self):
        want = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
        assert rel_err(specfun.bessel_k(0.5, 1.0), want) < 1e-14

    def test_integral_representation(self):
        # independent oracle: K_0(x) = integral_0^inf exp(-x cosh t) dt
        val, _ = adaptive_quad(lambda t: math.exp(-math.cosh(t)), 0.0, 30.0,
                               rtol=1e-13)
        assert rel_err(specfun.bessel_k(0.0, 1.0), val) < 1e-12

    @given(alpha=st.floats(-5.0, 5.0), x=st.floats(0.05, 20.0))
    @settings(max_examples=40, deadline=None)
    def test_order_sign_symmetry(self, alpha, x):
        assert rel_err(specfun.bessel_k(alpha, x), specfun.bessel_k(-alpha, x)) < 1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.bessel_k(0.5, 0.0)
        with pytest.raises(DomainError):
            specfun.bessel_k(0.5, -1.0)

    def test_derivative(self):
        h = 1e-6
        fd = (specfun.bessel_k(1.3, 2.0 + h) - specfun.bessel_k(1.3, 2.0 - h)) / (2 * h)
        assert rel_err(specfun.bessel_k_prime(1.3, 2.0), fd) < 1e-7


S_GOLDEN = [
    (0.3, 0.7j, 0.2, 1.692483066554917277),
    (0.3, 0.5j, -0.995, 18.764997971574839391),
    (1.3, 0.5j, -0.999, 24223.535877037726839),
    (0.5, 1.2j, 0.9, 1.2254073895109027255),
    (0.3, 0.7, 0.2, 1.1834281812422956238),
    (0.3, 0.5j, 2.5, 0.74544985732610441451),
]

Z_GOLDEN = [
    (0.5, 2.0, 2.0, 0.082903768654760703128),
    (1.3, 0.7, 3.0, 0.082157214449022910061),
    (0.5, 1.0, 1.2, 1.6181361349331637761),
    (1.3, 0.7, 1.001, 3474.0115250531079546),
    (2.7, 1.2, 1.00001, 4416861098754.3498656),
    (-0.5, 1.5, 5.0, 0.068316114446503841843),
]


class TestGegenbauerS:
    @pytest.mark.parametrize("alpha,lam,w,want", S_GOLDEN)
    def test_golden(self, alpha, lam, w, want):
        assert rel_err(specfun.gegenbauer_s(alpha, lam, w), want) < 1e-12

    def test_integer_order_connection(self):
        # order perturbation around the connection-coefficient poles
        want = 315.55480704152715369
        assert rel_err(specfun.gegenbauer_s(1.0, 0.5j, -0.99), want) < 1e-9

    @pytest.mark.parametrize("alpha", [-0.5, 0.3, 1.7])
    @pytest.mark.parametrize("lam", [0.9j, 0.4, 2.0j])
    def test_value_at_one(self, alpha, lam):
        want = 1.0 / specfun.gamma(alpha + 1.0)
        assert rel_err(specfun.gegenbauer_s(alpha, lam, 1.0), want) < 1e-14

    @given(alpha=st.floats(-0.8, 2.0), lam=st.floats(0.1, 2.5),
           w=st.floats(-0.9, 2.5))
    @settings(max_examples=40, deadline=None)
    def test_degree_sign_symmetry(self, alpha, lam, w):
        plus = specfun.gegenbauer_s(alpha, lam, w)
        minus = specfun.gegenbauer_s(alpha, -lam, w)
        assert rel_err(plus, minus) < 1e-12

    def test_imaginary_degree_sign_symmetry(self):
        for beta in (0.5, 1.5):
            plus = specfun.gegenbauer_s(0.3, complex(0, beta), -0.4)
            minus = specfun.gegenbauer_s(0.3, complex(0, -beta), -0.4)
            assert plus == minus

    def test_ode_residual(self):
        # (1-w^2) f'' - 2(1+alpha) w f' + (lam^2 - (alpha+1/2)^2) f = 0
        alpha, beta, w, h = 0.3, 0.7, 0.2, 1e-4
        lam2 = -beta * beta

        def f(x):
            return specfun.gegenbauer_s(alpha, complex(0, beta), x)

        fpp = (f(w + h) - 2 * f(w) + f(w - h)) / (h * h)
        fp = (f(w + h) - f(w - h)) / (2 * h)
        res = (1 - w * w) * fpp - 2 * (1 + alpha) * w * fp \
            + (lam2 - (alpha + 0.5) ** 2) * f(w)
        assert abs(res) < 1e-6 * abs(f(w))

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.gegenbauer_s(0.3, 0.5j, 3.0)
        with pytest.raises(DomainError):
            specfun.gegenbauer_s(0.3, 0.5j, -1.0)

    def test_log_variant(self):
        for beta, w in ((0.5, -0.995), (40.0, -0.9553364891256061), (2.0, 0.3)):
            lg = specfun.gegenbauer_s_log(0.3, beta, w)
            val = specfun.gegenbauer_s(0.3, complex(0, beta), w)
            assert rel_err(math.exp(lg), val) < 1e-11

    def test_derivative_pair(self):
        for alpha, lam, w in ((0.3, 0.5j, -0.98), (0.3, 0.5j, 0.4), (1.3, 1.2j, -0.6)):
            v, d = specfun.gegenbauer_s_with_derivative(alpha, lam, w)
            assert rel_err(v, specfun.gegenbauer_s(alpha, lam, w)) < 1e-12
            h = 1e-4 * (1.0 + w)  # step scaled to the endpoint distance
            fd = (specfun.gegenbauer_s(alpha, lam, w + h)
                  - specfun.gegenbauer_s(alpha, lam, w - h)) / (2 * h)
            assert rel_err(d, fd) < 1e-7


class TestGegenbauerZ:
    @pytest.mark.parametrize("alpha,lam,w,want", Z_GOLDEN)
    def test_golden(self, alpha, lam, w, want):
        assert rel_err(specfun.gegenbauer_z(alpha, lam, w), want) < 1e-12

    def test_integer_order_connection(self):
        want = 594.14638887324744136
        assert rel_err(specfun.gegenbauer_z(1.0, 0.8, 1.001), want) < 1e-9

    def test_asymptotic_normalisation(self):
        # w^(1/2+alpha+lam) Z -> 1/Gamma(lam+1) at large argument
        alpha, lam, w = 0.7, 1.4, 1e4
        scaled = w ** (0.5 + alpha + lam) * specfun.gegenbauer_z(alpha, lam, w)
        assert rel_err(scaled, 1.0 / specfun.gamma(lam + 1.0)) < 1e-3

    def test_crossover_consistency(self):
        # the two evaluation routes agree on both sides of the crossover
        for w in (1.49, 1.51):
            direct = specfun.gegenbauer_z(0.6, 1.1, w, method="direct")
            whip = specfun.gegenbauer_z(0.6, 1.1, w, method="whipple")
            assert rel_err(direct, whip) < 1e-9

    def test_connection_route_agreement(self):
        # both routes are valid on (about 1.07, 1.5); compare them head on
        got = specfun.gegenbauer_z(0.6, 1.1, 1.12, method="connection")
        ref = specfun.gegenbauer_z(0.6, 1.1, 1.12, method="whipple")
        assert rel_err(got, ref) < 1e-12

    @given(alpha=st.floats(0.1, 1.4), lam=st.floats(0.3, 2.5),
           w=st.floats(1.2, 6.0))
    @settings(max_examples=40, deadline=None)
    def test_order_sign_symmetry(self, alpha, lam, w):
        plus = specfun.gegenbauer_z(alpha, lam, w)
        minus = specfun.gegenbauer_z(-alpha, lam, w) / (w * w - 1.0) ** alpha
        assert rel_err(plus, minus) < 1e-11

    def test_whipple_identity_both_ways(self):
        for alpha, lam, w in ((0.6, 1.1, 2.0), (0.3, 2.2, 1.7), (1.2, 0.8, 2.6)):
            z1 = specfun.gegenbauer_z(alpha, lam, w, method="direct")
            z2 = specfun.gegenbauer_z_whipple(alpha, lam, w)
            assert rel_err(z1, z2) < 1e-12
            s1 = specfun.gegenbauer_s(alpha, lam, w)
            s2 = specfun.gegenbauer_s_whipple(alpha, lam, w)
            assert rel_err(s1, s2) < 1e-12

    def test_ode_residual(self):
        alpha, lam, w, h = 0.5, 1.3, 1.8, 1e-4

        def f(x):
            return specfun.gegenbauer_z(alpha, lam, x)

        fpp = (f(w + h) - 2 * f(w) + f(w - h)) / (h * h)
        fp = (f(w + h) - f(w - h)) / (2 * h)
        res = (1 - w * w) * fpp - 2 * (1 + alpha) * w * fp \
            + (lam * lam - (alpha + 0.5) ** 2) * f(w)
        assert abs(res) < 1e-6 * abs(f(w))

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.gegenbauer_z(0.5, 1.0, 1.0)
        with pytest.raises(DomainError):
            specfun.gegenbauer_z(0.5, -1.0, 2.0)
        with pytest.raises(DomainError):
            specfun.gegenbauer_z(0.5, 1.0 + 0.5j, 2.0)

    def test_log_variant_large_degree(self):
        w = math.cosh(0.3)
        lg = specfun.gegenbauer_z_log(0.5, 160.0, w)
        assert math.isfinite(lg)
        # moderate-degree cross-check against the linear evaluation
        lg2 = specfun.gegenbauer_z_log(0.5, 2.0, 1.7)
        assert rel_err(math.exp(lg2), specfun.gegenbauer_z(0.5, 2.0, 1.7)) < 1e-12

    def test_derivative_pair(self):
        for alpha, lam, w in ((0.5, 1.0, 1.2), (1.3, 0.7, 1.02), (0.5, 2.0, 3.0)):
            v, d = specfun.gegenbauer_z_with_derivative(alpha, lam, w)
            assert rel_err(v, specfun.gegenbauer_z(alpha, lam, w)) < 1e-12
            h = 1e-4 * (w - 1.0)  # step scaled to the endpoint distance
            fd = (specfun.gegenbauer_z(alpha, lam, w + h)
                  - specfun.gegenbauer_z(alpha, lam, w - h)) / (2 * h)
            assert rel_err(d, fd) < 1e-7
