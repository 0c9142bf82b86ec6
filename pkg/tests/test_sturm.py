"""Operator application, Wronskians, and the boundary-identity oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genint import specfun, sturm
from genint.errors import DomainError, InconsistencyError
from genint.numerics import adaptive_quad, loglog_slope, sinpi

from conftest import rel_err

PI_OVER_SQRT2 = math.pi / math.sqrt(2.0)  # = pi (sqrt(2) - 1/sqrt(2))


def bessel_family(alpha):
    return lambda E: sturm.bessel_eigenpair(alpha, math.sqrt(-E))


class TestApplyOperator:
    def test_bessel_half_order(self):
        # K_{1/2}(r) = sqrt(pi/(2r)) e^-r is an eigenfunction at -1
        spec = sturm.bessel_operator(0.5)
        f = lambda r: math.sqrt(math.pi / (2.0 * r)) * math.exp(-r)
        got = sturm.apply_operator(spec, f, 1.0, h=1e-4)
        assert abs(got - (-1.0) * f(1.0)) < 1e-6

    def test_constant_at_zero_order(self):
        spec = sturm.bessel_operator(0.0)
        assert sturm.apply_operator(spec, lambda r: 1.0, 2.0) == 0.0

    def test_gegenbauer_regular_family(self):
        # S_{0.3, 0.7} has eigenvalue 0.7^2 - 0.8^2
        spec = sturm.gegenbauer_operator(0.3, "sphere")
        f = lambda w: specfun.gegenbauer_s(0.3, 0.7, w)
        want = (0.7 ** 2 - 0.8 ** 2) * f(0.2)
        got = sturm.apply_operator(spec, f, 0.2, h=1e-4)
        assert abs(got - want) < 1e-6

    def test_second_order_convergence(self):
        spec = sturm.bessel_operator(0.4)
        pair = sturm.bessel_eigenpair(0.4, 2.0)
        hs = (1e-2, 1e-3, 1e-4)
        res = [abs(sturm.apply_operator(spec, pair.f, 0.7, h=h)
                   - pair.energy * pair.f(0.7)) for h in hs]
        slope, _ = loglog_slope(hs, res)
        assert abs(slope - 2.0) < 0.2

    def test_outside_interval(self):
        spec = sturm.bessel_operator(0.5)
        with pytest.raises(DomainError):
            sturm.apply_operator(spec, lambda r: r, -1.0)

    def test_analytic_derivative_hook(self):
        spec = sturm.bessel_operator(0.5)
        pair = sturm.bessel_eigenpair(0.5, 1.0)
        got = sturm.apply_operator(spec, pair.f, 1.3, h=1e-5, df=pair.df)
        assert abs(got - pair.energy * pair.f(1.3)) < 1e-8


class TestWronskian:
    @given(r=st.floats(0.2, 4.0), alpha=st.floats(-0.9, 0.9))
    @settings(max_examples=25, deadline=None)
    def test_antisymmetry(self, r, alpha):
        spec = sturm.bessel_operator(alpha)
        f1 = sturm.bessel_eigenpair(alpha, 2.0)
        f2 = sturm.bessel_eigenpair(alpha, 1.0)
        w12 = sturm.wronskian(spec, f1, f2, r)
        w21 = sturm.wronskian(spec, f2, f1, r)
        term_scale = abs(f1.f(r) * spec.p(r) * f2.df(r)) \
            + abs(f1.df(r) * spec.p(r) * f2.f(r))
        assert abs(w12 + w21) <= 4e-16 * term_scale

    def test_self_wronskian_vanishes(self):
        spec = sturm.bessel_operator(0.4)
        f = sturm.bessel_eigenpair(0.4, 1.5)
        assert sturm.wronskian(spec, f, f, 0.9) == 0.0

    def test_half_order_zero_limit(self):
        # elementary forms: W(r -> 0) = pi (sqrt(2) - 1/sqrt(2)) = pi/sqrt(2)
        spec = sturm.bessel_operator(0.5)
        f1 = sturm.bessel_eigenpair(0.5, 2.0)
        f2 = sturm.bessel_eigenpair(0.5, 1.0)
        w0, _ = sturm.endpoint_wronskian_limit(spec, f1, f2, "lower")
        assert rel_err(w0, PI_OVER_SQRT2) < 1e-9

    def test_half_order_decay_at_infinity(self):
        spec = sturm.bessel_operator(0.5)
        f1 = sturm.bessel_eigenpair(0.5, 2.0)
        f2 = sturm.bessel_eigenpair(0.5, 1.0)
        winf, _ = sturm.endpoint_wronskian_limit(spec, f1, f2, "upper")
        assert abs(winf) < 1e-12


class TestGreensIdentity:
    def test_bessel_04(self):
        spec = sturm.bessel_operator(0.4)
        lhs, rhs = sturm.greens_identity_check(
            spec, sturm.bessel_eigenpair(0.4, 2.0), sturm.bessel_eigenpair(0.4, 1.0))
        want = math.pi * (2.0 ** 0.4 - 2.0 ** -0.4) / (sinpi(0.4) * 3.0)
        assert rel_err(lhs, want) < 1e-9
        assert abs(lhs - rhs) / (abs(lhs) + abs(rhs)) < 1e-9

    def test_gegenbauer_recessive(self):
        spec = sturm.gegenbauer_operator(0.5, "hyperbolic")
        lhs, rhs = sturm.greens_identity_check(
            spec, sturm.gegenbauer_z_eigenpair(0.5, 2.0),
            sturm.gegenbauer_z_eigenpair(0.5, 1.0))
        assert rel_err(lhs, 8.0 / 3.0) < 1e-9
        assert rel_err(rhs, 8.0 / 3.0) < 1e-7

    def test_gegenbauer_regular(self):
        spec = sturm.gegenbauer_operator(0.3, "sphere")
        lhs, rhs = sturm.greens_identity_check(
            spec, sturm.gegenbauer_s_eigenpair(0.3, 0.5),
            sturm.gegenbauer_s_eigenpair(0.3, 1.0))
        assert abs(lhs - rhs) / (abs(lhs) + abs(rhs)) < 1e-6

    def test_parity_orthogonality(self):
        # even/odd eigenfunctions of -f'' on a symmetric interval
        spec = sturm.SturmLiouvilleSpec(
            p=lambda r: 1.0, q=lambda r: 0.0, rho=lambda r: 1.0,
            interval=(-1.0, 1.0), name="free-segment")
        even = sturm.Eigenpair(lambda r: math.cos(math.pi * r / 2.0),
                               (math.pi / 2.0) ** 2,
                               df=lambda r: -math.pi / 2.0 * math.sin(math.pi * r / 2.0))
        odd = sturm.Eigenpair(lambda r: math.sin(math.pi * r), math.pi ** 2,
                              df=lambda r: math.pi * math.cos(math.pi * r))
        lhs, rhs = sturm.greens_identity_check(spec, even, odd)
        assert abs(lhs) < 1e-12
        assert abs(rhs) < 1e-9

    def test_equal_energies_rejected(self):
        spec = sturm.bessel_operator(0.4)
        f = sturm.bessel_eigenpair(0.4, 1.0)
        with pytest.raises(DomainError):
            sturm.greens_identity_check(spec, f, f)

    def test_non_integrable_product_detected(self):
        # order 3/2 pair: the product behaves like r^-2 near zero
        spec = sturm.bessel_operator(1.5)
        with pytest.raises(InconsistencyError):
            sturm.greens_identity_check(
                spec, sturm.bessel_eigenpair(1.5, 2.0),
                sturm.bessel_eigenpair(1.5, 1.0))

    @pytest.mark.parametrize("alpha", [-0.7, 0.0, 0.4, 0.5])
    def test_bessel_corpus(self, alpha):
        spec = sturm.bessel_operator(alpha)
        lhs, rhs = sturm.greens_identity_check(
            spec, sturm.bessel_eigenpair(alpha, 2.0),
            sturm.bessel_eigenpair(alpha, 1.0))
        assert abs(lhs - rhs) / (abs(lhs) + abs(rhs)) < 1e-6


class TestDiagonalIntegral:
    def test_half_order(self):
        spec = sturm.bessel_operator(0.5)
        val = sturm.diagonal_integral(spec, bessel_family(0.5), -1.0)
        assert rel_err(val, math.pi / 2.0) < 1e-7

    def test_zero_order(self):
        spec = sturm.bessel_operator(0.0)
        val = sturm.diagonal_integral(spec, bessel_family(0.0), -1.0)
        assert rel_err(val, 1.0) < 1e-7

    def test_gegenbauer_diagonal_vs_quadrature(self):
        spec = sturm.gegenbauer_operator(0.5, "hyperbolic")
        val = sturm.diagonal_integral(
            spec, lambda E: sturm.gegenbauer_z_eigenpair(0.5, math.sqrt(E + 1.0)),
            0.0, steps=tuple(0.2 * 2.0 ** (-k) for k in range(6)))

        def g(w):
            return specfun.gegenbauer_z(0.5, 1.0, w) ** 2 * 2.0 * (w * w - 1.0) ** 0.5

        q1, _ = adaptive_quad(g, 1.0, 3.0)
        q2, _ = adaptive_quad(g, 3.0, np.inf)
        assert rel_err(val, q1 + q2) < 1e-6


class TestSpecValidation:
    def test_validate_passes_for_families(self):
        sturm.bessel_operator(0.4).validate()
        sturm.gegenbauer_operator(0.3, "sphere").validate()
        sturm.gegenbauer_operator(0.5, "hyperbolic").validate()

    def test_validate_rejects_bad_density(self):
        bad = sturm.SturmLiouvilleSpec(
            p=lambda r: 1.0, q=lambda r: 0.0, rho=lambda r: r,  # negative left of 0
            interval=(-1.0, 1.0), name="bad")
        with pytest.raises(InconsistencyError):
            bad.validate()

    def test_unknown_branch(self):
        with pytest.raises(DomainError):
            sturm.gegenbauer_operator(0.3, "flat")
