import json
import math

import numpy as np
import pytest

from radcoulomb.exponents import pitt_constant, pitt_constant_unitary
from radcoulomb.functionals import (
    coulomb_direct_2d,
    coulomb_newton,
    coulomb_spectral,
    dirichlet_energy,
    energy_norm,
    functional_report,
    hardy_weight_integral,
    lp_norm,
    mixture_coulomb,
    mixture_sobolev_sq,
    pointwise_decay_ratio,
    ruiz_functional,
    sobolev_gagliardo,
    sobolev_spectral,
    weighted_lq_norm,
)
from radcoulomb.profiles import gaussian_mixture, make_tent

import oracles


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


class TestGaussianOracles:
    def test_lp(self, gaussian):
        assert lp_norm(gaussian, 2) == pytest.approx(oracles.GAUSS_L2, rel=1e-10)
        for p in (1.0, 2.5, 4.0, 7.0):
            assert lp_norm(gaussian, p) == pytest.approx(oracles.gauss_lp(p), rel=1e-9)

    def test_weighted(self, gaussian):
        assert weighted_lq_norm(gaussian, 2, 0) == pytest.approx(oracles.GAUSS_L2, rel=1e-10)
        assert weighted_lq_norm(gaussian, 2, -1) == pytest.approx(oracles.GAUSS_WEIGHTED_L2_AM1, rel=1e-10)

    @pytest.mark.parametrize("s", [0.1, 0.5, 0.75, 1.0, 1.25, 1.45])
    def test_sobolev_spectral(self, gaussian, s):
        assert sobolev_spectral(gaussian, s) ** 2 == pytest.approx(oracles.gauss_hs_sq(s), rel=1e-9)

    def test_sobolev_small_s_tends_to_l2(self, gaussian):
        assert sobolev_spectral(gaussian, 1e-6) == pytest.approx(oracles.GAUSS_L2, rel=1e-5)

    def test_gagliardo_half(self, gaussian):
        assert sobolev_gagliardo(gaussian, 0.5) == pytest.approx(oracles.GAUSS_HHALF, rel=1e-3)

    def test_dirichlet(self, gaussian):
        assert dirichlet_energy(gaussian) == pytest.approx(oracles.GAUSS_H1, rel=1e-10)

    def test_coulomb(self, gaussian):
        assert coulomb_newton(gaussian) == pytest.approx(oracles.GAUSS_COULOMB, rel=1e-10)
        assert coulomb_spectral(gaussian) == pytest.approx(oracles.GAUSS_COULOMB, rel=1e-8)
        assert coulomb_direct_2d(gaussian) == pytest.approx(oracles.GAUSS_COULOMB, rel=1e-8)

    def test_energy_norm(self, gaussian):
        assert energy_norm(gaussian, 1.0) == pytest.approx(oracles.GAUSS_ENERGY_S1, rel=1e-9)
        assert energy_norm(gaussian, 1.0) == pytest.approx(3.65053, abs=1e-5)

    def test_hardy(self, gaussian):
        assert hardy_weight_integral(gaussian, 1.0) == pytest.approx(oracles.GAUSS_HARDY_1, rel=1e-10)
        assert hardy_weight_integral(gaussian, 1e-9) == pytest.approx(math.pi**1.5, rel=1e-7)
        # int |x|^{-2.5} e^{-r^2} dx = 2 pi Gamma(1/4)
        assert hardy_weight_integral(gaussian, 2.5) == pytest.approx(2 * math.pi * math.gamma(0.25), rel=1e-8)

    def test_decay_ratio(self, gaussian):
        assert pointwise_decay_ratio(gaussian, 1.0, 2.0, 0.0) == pytest.approx(oracles.GAUSS_DECAY_RATIO, rel=1e-8)
        assert pointwise_decay_ratio(gaussian, 1.0, 2.0, 0.0) == pytest.approx(0.23226, abs=1e-5)

    def test_ruiz_regression(self, gaussian):
        # locked against an independent mpmath quadrature
        import mpmath

        with mpmath.workdps(25):
            ref = 4 * mpmath.pi * mpmath.quad(
                lambda r: r**1.5 * mpmath.exp(-r * r) / (1 + abs(mpmath.log(r))), [0, 1, mpmath.inf]
            )
        assert ruiz_functional(gaussian, 1.0) == pytest.approx(float(ref), rel=1e-8)


class TestTentOracles:
    def test_lp(self, tent):
        assert lp_norm(tent, 2) ** 2 == pytest.approx(oracles.tent_l2_sq(1, 2, 1), rel=1e-10)
        assert lp_norm(tent, 3.3) ** 3.3 == pytest.approx(oracles.tent_lp_p(1, 2, 1, 3.3), rel=1e-9)

    def test_dirichlet(self, tent):
        assert dirichlet_energy(tent) ** 2 == pytest.approx(104 * math.pi / 3, rel=1e-12)
        assert sobolev_spectral(tent, 1.0) ** 2 == pytest.approx(104 * math.pi / 3, rel=1e-9)

    def test_coulomb(self, tent):
        ref = oracles.tent_coulomb(1, 2, 1)
        assert coulomb_newton(tent) == pytest.approx(ref, rel=1e-12)
        assert coulomb_spectral(tent) == pytest.approx(ref, rel=1e-8)

    def test_decay_fixture(self):
        u = make_tent(1, 10, 1)
        v = pointwise_decay_ratio(u, 0.8, 2.0, -0.6)
        assert math.isfinite(v) and v > 0

    def test_ruiz(self, tent):
        v = ruiz_functional(tent, 1.0)
        assert v > 0
        assert coulomb_newton(tent) / v**2 > 0


class TestBall:
    def test_coulomb(self, ball):
        assert coulomb_newton(ball) == pytest.approx(oracles.BALL_COULOMB, rel=1e-5)
        assert coulomb_spectral(ball) == pytest.approx(oracles.BALL_COULOMB, rel=1e-2)


class TestZero:
    def test_all_zero(self, zero):
        assert lp_norm(zero, 2) == 0
        assert weighted_lq_norm(zero, 2, -1) == 0
        assert sobolev_spectral(zero, 0.7) == 0
        assert sobolev_gagliardo(zero, 0.7) == 0
        assert dirichlet_energy(zero) == 0
        assert coulomb_newton(zero) == 0
        assert coulomb_spectral(zero) == 0
        assert energy_norm(zero, 0.8) == 0
        assert ruiz_functional(zero, 1.0) == 0
        assert hardy_weight_integral(zero, 1.0) == 0
        assert pointwise_decay_ratio(zero, 1.0, 2.0, 0.0) == 0


class TestDualMethods:
    @pytest.mark.parametrize("s", [0.6, 0.75, 0.9])
    def test_gagliardo_vs_spectral(self, fixture_profile, s):
        assert rel(sobolev_gagliardo(fixture_profile, s), sobolev_spectral(fixture_profile, s)) <= 1e-3

    def test_coulomb_routes(self, fixture_profile):
        assert rel(coulomb_newton(fixture_profile), coulomb_spectral(fixture_profile)) <= 1e-3

    def test_dirichlet_matches_spectral(self, fixture_profile):
        assert rel(dirichlet_energy(fixture_profile), sobolev_spectral(fixture_profile, 1.0)) <= 1e-5

    def test_mixture_closed_forms(self, mixture2):
        for s in (0.3, 0.75, 1.2):
            assert mixture_sobolev_sq(mixture2, s) == pytest.approx(sobolev_spectral(mixture2, s) ** 2, rel=1e-9)
        assert mixture_coulomb(mixture2) == pytest.approx(coulomb_newton(mixture2), rel=1e-10)


class TestPitt:
    @pytest.mark.parametrize("s", [0.6, 0.75, 1.0, 1.25])
    def test_paper_constant(self, fixture_profile, s):
        ratio = hardy_weight_integral(fixture_profile, 2 * s) / (
            pitt_constant(s) * sobolev_spectral(fixture_profile, s) ** 2
        )
        assert ratio <= 1 + 1e-6

    @pytest.mark.parametrize("s", [0.6, 0.75, 1.0, 1.25])
    def test_sharp_unitary_constant(self, fixture_profile, s):
        ratio = hardy_weight_integral(fixture_profile, 2 * s) / (
            pitt_constant_unitary(s) * sobolev_spectral(fixture_profile, s) ** 2
        )
        assert ratio <= 1 + 1e-6

    def test_hardy_at_s1_approaches_sharp(self):
        # ratio -> 1 along wide, flat profiles: Hardy's 4 is sharp
        wide = gaussian_mixture([1.0, -1.0], [1e-4, 1e-2])
        r = hardy_weight_integral(wide, 2.0) / (4 * sobolev_spectral(wide, 1.0) ** 2)
        assert 0.2 < r <= 1


class TestHomogeneity:
    @pytest.mark.parametrize("t", [0.5, 3.0])
    def test_amplitude(self, fixture_profile, t):
        tp = fixture_profile.scaled(t)
        assert lp_norm(tp, 3.0) == pytest.approx(t * lp_norm(fixture_profile, 3.0), rel=1e-9)
        assert coulomb_newton(tp) == pytest.approx(t**4 * coulomb_newton(fixture_profile), rel=1e-9)
        assert sobolev_spectral(tp, 0.8) == pytest.approx(t * sobolev_spectral(fixture_profile, 0.8), rel=1e-9)

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    @pytest.mark.parametrize("s", [0.6, 1.0, 1.3])
    def test_dilation(self, fixture_profile, lam, s):
        d = fixture_profile.dilated(lam)
        assert sobolev_spectral(d, s) ** 2 == pytest.approx(
            lam ** (2 * s - 3) * sobolev_spectral(fixture_profile, s) ** 2, rel=1e-4
        )
        assert coulomb_newton(d) == pytest.approx(lam**-5 * coulomb_newton(fixture_profile), rel=1e-4)


class TestErrors:
    def test_ranges(self, gaussian):
        with pytest.raises(ValueError):
            lp_norm(gaussian, 0.5)
        with pytest.raises(ValueError):
            weighted_lq_norm(gaussian, 2, -3)
        with pytest.raises(ValueError):
            sobolev_spectral(gaussian, 1.5)
        with pytest.raises(ValueError):
            sobolev_spectral(gaussian, 0.0)
        with pytest.raises(ValueError):
            sobolev_gagliardo(gaussian, 1.0)
        with pytest.raises(ValueError):
            ruiz_functional(gaussian, 0.5)
        with pytest.raises(ValueError):
            hardy_weight_integral(gaussian, 3.0)
        with pytest.raises(ValueError):
            pointwise_decay_ratio(gaussian, 0.5, 2, 0)
        with pytest.raises(ValueError):
            pointwise_decay_ratio(gaussian, 1.0, 2, -2)

    def test_full_output(self, gaussian):
        val, err = coulomb_newton(gaussian, full_output=True)
        assert err < 1e-8 * val
        val, err = sobolev_spectral(gaussian, 0.75, full_output=True)
        assert abs(val**2 - oracles.gauss_hs_sq(0.75)) <= 2 * val * err + 1e-12


class TestReport:
    def test_report_json(self, gaussian):
        rep = functional_report(gaussian, 0.75, [2, 4], profile_id="builtin:gaussian")
        data = json.loads(rep.dumps())
        assert data["lp[2]"] == pytest.approx(oracles.GAUSS_L2, rel=1e-10)
        assert "lp[2]_err" in data and "coulomb_newton_err" in data
        assert data["coulomb_delta"] < 1e-6
        assert data["hs_delta"] < 1e-6
        assert data["flagged"] == []
        assert rep.energy_norm**2 == pytest.approx(rep.hs_spectral**2 + math.sqrt(rep.coulomb_newton))

    def test_report_at_s1_uses_dirichlet(self, tent):
        rep = functional_report(tent, 1.0)
        assert rep.hs_gagliardo is None
        assert rep.dirichlet == pytest.approx(math.sqrt(104 * math.pi / 3))
        assert all(v >= 0 for v in (rep.hs_spectral, rep.coulomb_newton, rep.coulomb_spectral))

    def test_nonint_p_key(self, gaussian):
        data = functional_report(gaussian, 0.5, [2.5]).to_json()
        assert "lp[2.5]" in data


def test_coulomb_direct_2d_tent(tent):
    assert coulomb_direct_2d(tent) == pytest.approx(oracles.tent_coulomb(1, 2, 1), rel=1e-8)
