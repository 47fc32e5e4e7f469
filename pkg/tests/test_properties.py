"""Property-based checks of scaling laws and exact exponent identities."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from radcoulomb.exponents import (
    corollary_range,
    nonradial_endpoint,
    radial_endpoint,
    sobolev_endpoint,
    theta_gn,
)
from radcoulomb.functionals import (
    coulomb_newton,
    lp_norm,
    mixture_coulomb,
    mixture_sobolev_sq,
    sobolev_spectral,
)
from radcoulomb.optimize import lambda_minimize, quotient_J
from radcoulomb.profiles import gaussian_mixture, make_tent

SETTINGS = settings(max_examples=25, deadline=None)

s_exact = st.fractions(min_value=Fraction(51, 100), max_value=Fraction(149, 100), max_denominator=200)
positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)
widths = st.floats(min_value=0.05, max_value=5.0)


@st.composite
def mixtures(draw):
    m = draw(st.integers(1, 3))
    ws = draw(st.lists(widths, min_size=m, max_size=m, unique=True))
    cs = draw(st.lists(st.floats(0.2, 2.0), min_size=m, max_size=m))
    return gaussian_mixture(cs, ws)


@st.composite
def tents(draw):
    S = draw(st.floats(0.1, 3.0))
    R = S + draw(st.floats(0.01, 10.0))
    return make_tent(draw(st.floats(0.01, 5.0)), R, S)


class TestExponents:
    @given(s_exact)
    def test_theta_at_sobolev_endpoint(self, s):
        assert theta_gn(3 / (3 - 2 * s), s) == 1

    @given(s_exact)
    def test_endpoint_ordering(self, s):
        assert radial_endpoint(s) < nonradial_endpoint(s) < sobolev_endpoint(s)
        assert 2 * corollary_range(s).low == (16 * s + 2) / (6 * s + 1)

    @given(s_exact, st.fractions(0, 1))
    def test_theta_in_unit_interval(self, s, t):
        rng = corollary_range(s)
        p = rng.low + t * (rng.high - rng.low)
        assume(rng.low < p < rng.high)
        th = theta_gn(p, s)
        assert isinstance(th, Fraction)
        assert 0 < th < 1


class TestScaling:
    @SETTINGS
    @given(mixtures(), positive, st.floats(1.0, 6.0))
    def test_lp_amplitude(self, mix, t, p):
        assert lp_norm(mix.scaled(t), p) == pytest.approx(t * lp_norm(mix, p), rel=1e-9)

    @SETTINGS
    @given(mixtures(), st.floats(0.2, 5.0), st.floats(0.55, 1.4))
    def test_closed_form_dilation(self, mix, lam, s):
        d = mix.dilated(lam)
        assert mixture_sobolev_sq(d, s) == pytest.approx(lam ** (2 * s - 3) * mixture_sobolev_sq(mix, s), rel=1e-10)
        assert mixture_coulomb(d) == pytest.approx(lam**-5 * mixture_coulomb(mix), rel=1e-10)

    @SETTINGS
    @given(mixtures(), st.floats(0.55, 1.4))
    def test_closed_forms_match_quadrature(self, mix, s):
        assert sobolev_spectral(mix, s) ** 2 == pytest.approx(mixture_sobolev_sq(mix, s), rel=1e-6)
        assert coulomb_newton(mix) == pytest.approx(mixture_coulomb(mix), rel=1e-6)

    @settings(max_examples=10, deadline=None)
    @given(tents(), st.floats(0.3, 3.0))
    def test_tent_coulomb_dilation(self, u, lam):
        assert coulomb_newton(u.dilated(lam)) == pytest.approx(lam**-5 * coulomb_newton(u), rel=1e-6)

    @settings(max_examples=10, deadline=None)
    @given(mixtures(), positive, st.floats(0.5, 2.0))
    def test_quotient_invariance(self, mix, t, lam):
        J = quotient_J(mix, 4.0, 1.0)
        assert quotient_J(mix.scaled(t), 4.0, 1.0) == pytest.approx(J, rel=1e-9)
        assert quotient_J(mix.dilated(lam), 4.0, 1.0) == pytest.approx(J, rel=1e-4)


class TestLambda:
    @given(positive, positive, st.floats(0.05, 5.0), st.floats(0.05, 5.0))
    def test_stationary(self, A, B, a, b):
        lam, val = lambda_minimize(A, B, a, b)
        grad = a * A * lam ** (a - 1) - b * B * lam ** (-b - 1)
        assert abs(grad * lam) <= 1e-10 * val
        assert val == pytest.approx(A * lam**a + B * lam**-b, rel=1e-14)
        for step in (0.9, 1.1):
            assert A * (lam * step) ** a + B * (lam * step) ** -b >= val


class TestProfiles:
    @given(tents(), st.floats(0.0, 1.0))
    def test_tent_continuity(self, u, t):
        knot = u.R - u.S + t * 2 * u.S
        left, right = u.evaluate(np.array([knot - 1e-12, knot + 1e-12]))
        assert abs(left - right) <= 1e-9 * u.epsilon + 1e-15

    @given(mixtures(), st.floats(0.0, 10.0))
    def test_mixture_scaled_evaluate(self, mix, r):
        assert mix.scaled(2.0).evaluate(r) == pytest.approx(2.0 * mix.evaluate(r))
        assert mix.dilated(3.0).evaluate(r) == pytest.approx(mix.evaluate(3.0 * r))
