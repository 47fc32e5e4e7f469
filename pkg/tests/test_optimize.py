import math

import numpy as np
import pytest

from radcoulomb.exponents import corollary_range, radial_endpoint, sobolev_endpoint
from radcoulomb.optimize import (
    BestConstantResult,
    OptimizerConfig,
    best_constant_search,
    embedding_constant_estimate,
    lambda_minimize,
    quotient_J,
    quotient_exponents,
    ruiz_constant_estimate,
)
from radcoulomb.profiles import gaussian_mixture, make_tent

import oracles


@pytest.fixture(scope="module")
def search42():
    return best_constant_search(1.0, 4.0, OptimizerConfig(seed=42))


class TestQuotient:
    def test_gaussian_value(self, gaussian):
        assert quotient_J(gaussian, 4, 1) == pytest.approx(oracles.GAUSS_J_S1_2P4, rel=1e-9)
        assert quotient_J(gaussian, 4, 1) >= 0.44669

    def test_exponents_sum(self):
        for two_p, s in [(4, 1), (3, 0.75), (5.5, 1.2)]:
            e_h, e_d = quotient_exponents(two_p, s)
            assert e_h + 4 * e_d == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("s,two_p", [(1.0, 4.0), (0.75, 3.0)])
    def test_invariances(self, fixture_profile, s, two_p):
        J = quotient_J(fixture_profile, two_p, s)
        for t in (0.5, 3.0):
            assert quotient_J(fixture_profile.scaled(t), two_p, s) == pytest.approx(J, rel=1e-9)
        for lam in (0.5, 2.0):
            assert quotient_J(fixture_profile.dilated(lam), two_p, s) == pytest.approx(J, rel=1e-4)

    @pytest.mark.parametrize("s", [0.75, 1.0])
    def test_dilation_wide_range(self, gaussian, tent, s):
        rng = np.random.default_rng(7)
        two_p = float(corollary_range(s).scaled(2).midpoint())
        for prof in (gaussian, tent):
            J = quotient_J(prof, two_p, s)
            for lam in np.exp(rng.uniform(math.log(0.1), math.log(10), 4)):
                assert quotient_J(prof.dilated(lam), two_p, s) == pytest.approx(J, rel=1e-4)

    def test_rejections(self, gaussian, zero):
        with pytest.raises(ValueError):
            quotient_J(gaussian, 2.5, 1)  # below the range
        with pytest.raises(ValueError):
            quotient_J(zero, 4, 1)


class TestLambda:
    def test_examples(self):
        assert lambda_minimize(1, 1, 1, 1) == (1.0, 2.0)
        lam, val = lambda_minimize(4, 1, 1, 1)
        assert lam == pytest.approx(0.5) and val == pytest.approx(4.0)

    def test_sentinel(self):
        assert lambda_minimize(2.0, 1.0, 0.0, 1.0) == (math.inf, 2.0)

    def test_rejections(self):
        with pytest.raises(ValueError):
            lambda_minimize(1, 0, 1, 1)
        with pytest.raises(ValueError):
            lambda_minimize(-1, 1, 1, 1)
        with pytest.raises(ValueError):
            lambda_minimize(1, 1, 1, 0)

    def test_corollary_exponents(self):
        # a = 6/p - (3-2s), b = 5/2 - 6/p on the L^{2p} scale p~ = 2p
        s, p_t = 1.0, 4.0
        a, b = 6 / p_t - (3 - 2 * s), 2.5 - 6 / p_t
        lam, val = lambda_minimize(3.0, 2.0, a, b)
        grid = np.geomspace(lam / 10, lam * 10, 20001)
        assert val <= np.min(3.0 * grid**a + 2.0 * grid**-b) + 1e-12


class TestSearch:
    def test_beats_gaussian(self, search42):
        assert search42.best_J >= 0.44669
        assert search42.best_J >= search42.gaussian_J
        assert search42.best_J == max(h for h in search42.history if not math.isnan(h))
        assert not search42.stagnated

    def test_reproducible(self, search42):
        again = best_constant_search(1.0, 4.0, OptimizerConfig(seed=42))
        assert again.best_J == search42.best_J
        assert again.to_json() == search42.to_json()

    def test_seed_stability(self, search42):
        other = best_constant_search(1.0, 4.0, OptimizerConfig(seed=43))
        assert abs(other.best_J - search42.best_J) / search42.best_J < 0.01

    def test_threads_do_not_change_result(self, search42):
        par = best_constant_search(1.0, 4.0, OptimizerConfig(seed=42, threads=4))
        assert par.to_json() == search42.to_json()

    def test_json_shape(self, search42):
        data = search42.to_json()
        assert set(data) >= {"s", "two_p", "best_J", "params", "history", "stagnated"}
        assert len(data["params"]["coeffs"]) == len(data["params"]["widths"])
        prof = search42.profile()
        assert quotient_J(prof, 4, 1) == pytest.approx(search42.best_J, rel=1e-12)

    def test_fixtures_below_best(self, search42, fixture_profile):
        assert quotient_J(fixture_profile, 4, 1) <= search42.best_J

    def test_sobolev_endpoint_excluded(self):
        with pytest.raises(ValueError, match="Sobolev endpoint"):
            best_constant_search(1.0, float(sobolev_endpoint(1)), OptimizerConfig(restarts=1))

    def test_single_restart(self):
        res = best_constant_search(0.75, 3.0, OptimizerConfig(m=2, restarts=1, max_iters=300))
        assert res.best_J >= res.gaussian_J

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(m=0)


class TestFamilies:
    def test_ruiz_estimate(self, gaussian):
        single = ruiz_constant_estimate([gaussian], 1.0)
        assert single > 0 and math.isfinite(single)
        tents = [make_tent(1, R, 1) for R in (2, 8, 32)]
        bigger = ruiz_constant_estimate([gaussian, *tents], 1.0)
        assert 0 < bigger <= single
        assert ruiz_constant_estimate([gaussian, *tents], 1.0) == bigger

    def test_ruiz_rejections(self, zero, gaussian):
        with pytest.raises(ValueError):
            ruiz_constant_estimate([], 1.0)
        with pytest.raises(ValueError):
            ruiz_constant_estimate([gaussian, zero], 1.0)

    def test_embedding_constant_finite(self, gaussian, tent, mixture2):
        s = 1.0
        p_t = float(radial_endpoint(s)) + 0.3
        family = [gaussian, tent, mixture2, make_tent(0.1, 13.9, 1.93)]
        K = embedding_constant_estimate(family, s, p_t)
        assert 0 < K < math.inf
        assert K == pytest.approx(embedding_constant_estimate(family, s, p_t), rel=0)
