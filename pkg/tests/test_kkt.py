"""First-order optimality verification on the boundary families."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmid.errors import QmidError
from qmid.kkt import euler_residual, kkt_report, numeric_gradient
from qmid.measures import grad_operation_fidelity, grad_reversibility


class TestNumericGradient:
    def test_rejects_nonpositive_step(self):
        with pytest.raises(QmidError):
            numeric_gradient("I", [1.0, 0.5], h=0.0)

    def test_rejects_unknown_measure(self):
        with pytest.raises(QmidError):
            numeric_gradient("Q", [1.0, 0.5])

    def test_matches_analytic_F(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            v = rng.uniform(0.15, 0.85, 5)
            assert_allclose(numeric_gradient("F", v),
                            grad_operation_fidelity(v), atol=1e-7)

    def test_matches_analytic_R(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            v = np.sort(rng.uniform(0.15, 0.85, 5))[::-1]
            v[-1] = min(v[-1], v[-2] - 0.05)
            assert_allclose(numeric_gradient("R", v),
                            grad_reversibility(v), atol=1e-7)

    def test_I_gradient_zero_at_identity(self):
        g = numeric_gradient("I", [1.0, 1.0, 1.0, 1.0])
        assert np.max(np.abs(g)) < 1e-6

    def test_I_family_block_structure(self):
        # k unit components share a positive derivative; the l equal
        # components carry -(k/(l lam)) times it; zeros stay zero
        d, k, l, lam = 5, 2, 2, 0.6
        v = np.array([1.0, 1.0, lam, lam, 0.0])
        g = numeric_gradient("I", v)
        assert g[0] > 0
        assert g[0] == pytest.approx(g[1], abs=1e-5)
        assert g[2] == pytest.approx(-(k / (l * lam)) * g[0], abs=1e-5)
        assert g[3] == pytest.approx(g[2], abs=1e-5)
        assert abs(g[4]) < 1e-5

    def test_boundary_components_use_one_sided(self):
        # must not evaluate outside [0, 1]
        g = numeric_gradient("F", [1.0, 0.0, 0.5])
        expected = grad_operation_fidelity([1.0, 0.0, 0.5])
        assert_allclose(g, expected, atol=1e-6)


class TestEulerResidual:
    def test_scale_invariance_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            v = rng.uniform(0.1, 0.9, 4)
            assert euler_residual(v) < 1e-6

    def test_identity_spectrum(self):
        assert euler_residual([1.0, 1.0, 1.0, 1.0]) < 1e-6

    def test_rescaled_spectrum_same_bound(self):
        v = np.array([0.9, 0.6, 0.3])
        assert euler_residual(0.5 * v) < 1e-6


class TestKKTReport:
    def test_F_max_on_upper_family(self):
        rep = kkt_report(4, 1, 3, 0.5, "F-max")
        assert rep.stationarity_residual <= 1e-5
        assert rep.signs_ok and rep.slackness_ok
        assert rep.constraint == "F" and rep.objective == "I"

    def test_F_min_betas_nonnegative(self):
        rep = kkt_report(4, 2, 1, 0.5, "F-min")
        assert rep.stationarity_residual <= 1e-5
        assert rep.signs_ok and rep.slackness_ok
        betas = np.array(rep.betas_or_gammas)
        assert np.all(betas[:3] == 0.0)  # free components carry none
        assert betas[3] > 0.0  # the zero component's multiplier

    def test_R_max_gammas(self):
        rep = kkt_report(4, 1, 3, 0.5, "R-max")
        assert rep.stationarity_residual <= 1e-5
        gammas = np.array(rep.betas_or_gammas)
        assert gammas[0] == 0.0  # unit component's tie constraint inactive
        assert np.all(gammas[1:] > 0.0)

    def test_R_min_pure_stationarity(self):
        rep = kkt_report(4, 3, 1, 0.5, "R-min")
        assert rep.stationarity_residual <= 1e-5
        assert rep.signs_ok and rep.slackness_ok

    @pytest.mark.parametrize("d", [3, 5, 8])
    @pytest.mark.parametrize("lam", [0.1, 0.5, 0.9])
    def test_grid_spot_checks(self, d, lam):
        for k, l, prob in [(1, d - 1, "F-max"), (1, d - 1, "R-max"),
                           (d - 1, 1, "R-min"), (1, 1, "F-min")]:
            rep = kkt_report(d, k, l, lam, prob)
            assert rep.ok, (d, k, l, lam, prob, rep.stationarity_residual)

    @pytest.mark.parametrize("args", [
        (4, 2, 2, 0.5, "F-max"),
        (4, 1, 3, 0.5, "F-min"),
        (4, 2, 1, 0.5, "R-min"),
        (4, 2, 1, 0.5, "R-max"),
        (4, 1, 3, 0.5, "nonsense"),
    ])
    def test_mismatched_pairing_rejected(self, args):
        with pytest.raises(QmidError):
            kkt_report(*args)

    def test_lambda_range_checked(self):
        with pytest.raises(QmidError):
            kkt_report(4, 1, 3, 0.0, "F-max")
        with pytest.raises(QmidError):
            kkt_report(4, 1, 3, 1.0, "F-max")

    def test_negative_control_off_family(self):
        # breaking the tied block must break stationarity
        v = np.array([1.0, 0.55, 0.5, 0.5])
        rep = kkt_report(4, 1, 3, 0.5, "F-max", spectrum=v)
        assert rep.stationarity_residual >= 1e-3

    def test_negative_control_each_problem(self):
        for d, k, l, prob in [(4, 1, 3, "F-max"), (4, 2, 1, "F-min"),
                              (4, 1, 3, "R-max"), (4, 3, 1, "R-min")]:
            v = np.zeros(d)
            v[:k] = 1.0
            v[k:k + l] = 0.5
            if l == 1:
                v[k - 1] -= 0.05
            else:
                v[k] += 0.05
            rep = kkt_report(d, k, l, 0.5, prob, spectrum=v)
            assert rep.stationarity_residual >= 1e-3, prob

    def test_json_roundtrip(self):
        import json
        rep = kkt_report(4, 1, 3, 0.5, "F-max")
        doc = json.loads(rep.to_json())
        assert doc["problem"] == "F-max"
        assert doc["family"] == [4, 1, 3, 0.5]
        assert doc["stationarity_residual"] == rep.stationarity_residual
