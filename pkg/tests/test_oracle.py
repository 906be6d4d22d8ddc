"""Sampling and quadrature cross-checks of the closed forms."""

import numpy as np
import pytest

from qmid.errors import QmidError
from qmid.measures import info_gain, measures
from qmid.families import info_gain_projective
from qmid.oracle import mc_measures, quad_info_gain_d2, sample_simplex


class TestSampleSimplex:
    def test_single_sample_valid(self):
        s = sample_simplex(4, 0)
        assert s.t.shape == (4,)
        assert np.all(s.t >= 0) and s.t.sum() == pytest.approx(1.0, abs=1e-12)

    def test_d2_first_component_uniform(self):
        rng = np.random.default_rng(1)
        t1 = np.array([sample_simplex(2, rng).t[0] for _ in range(4000)])
        # flat on [0,1]: mean 1/2, variance 1/12
        assert t1.mean() == pytest.approx(0.5, abs=0.03)
        assert t1.var() == pytest.approx(1.0 / 12.0, abs=0.01)

    def test_moment_identities(self):
        rng = np.random.default_rng(2)
        d, n = 3, 20000
        t = rng.dirichlet(np.ones(d), size=n)
        se = t.std(axis=0).max() / np.sqrt(n)
        assert np.allclose(t.mean(axis=0), 1.0 / d, atol=5 * se)
        assert np.allclose((t ** 2).mean(axis=0), 2.0 / (d * (d + 1)), atol=5 * se)

    def test_rejects_d1(self):
        with pytest.raises(QmidError):
            sample_simplex(1, 0)


class TestMcMeasures:
    def test_sample_floor(self):
        with pytest.raises(QmidError):
            mc_measures([1.0, 0.5], 100, seed=0)

    def test_reference_d4_value(self):
        est = mc_measures([1.0, 0.5, 0.5, 0.5], 10 ** 6, seed=42)
        assert est["F"].mean == pytest.approx(0.914286, abs=3 * est["F"].std_error)

    def test_agreement_with_closed_forms(self):
        rng = np.random.default_rng(3)
        for d in (2, 3, 5):
            lam = np.sort(rng.uniform(0.1, 1.0, d))[::-1]
            mv = measures(lam)
            est = mc_measures(lam, 200_000, seed=int(rng.integers(2 ** 31)))
            assert abs(est["F"].mean - mv.operation_fidelity) < 4 * est["F"].std_error
            assert abs(est["G"].mean - mv.estimation_fidelity) < 4 * est["G"].std_error
            assert est["R"].mean == pytest.approx(mv.reversibility, abs=1e-12)

    def test_identity_spectrum_exact(self):
        est = mc_measures([1.0, 1.0, 1.0], 10 ** 4, seed=7)
        assert est["F"].mean == 1.0

    def test_rank1_d2_estimation_fidelity(self):
        est = mc_measures([1.0, 0.0], 10 ** 5, seed=11)
        assert est["G"].mean == pytest.approx(2.0 / 3.0, abs=3 * est["G"].std_error)

    def test_deterministic_given_seed(self):
        a = mc_measures([1.0, 0.4, 0.2], 10 ** 4, seed=5)
        b = mc_measures([1.0, 0.4, 0.2], 10 ** 4, seed=5)
        assert a["F"].mean == b["F"].mean
        assert a["G"].std_error == b["G"].std_error

    def test_estimate_fields(self):
        est = mc_measures([1.0, 0.5], 10 ** 4, seed=1)
        e = est["F"]
        assert e.n_samples == 10 ** 4 and e.seed == 1
        assert e.std_error > 0.0


class TestQuadratureD2:
    def test_projective_value(self):
        assert quad_info_gain_d2([1.0, 0.0]) == pytest.approx(0.278652, abs=1e-6)
        assert quad_info_gain_d2([1.0, 0.0]) == pytest.approx(
            info_gain_projective(2, 1), abs=1e-9)

    def test_constant_integrand_zero(self):
        assert quad_info_gain_d2([1.0, 1.0]) == 0.0
        assert quad_info_gain_d2([0.5, 0.5]) == 0.0

    def test_matches_closed_form_on_grid(self):
        worst = 0.0
        for lam in np.linspace(0.0, 1.0, 100):
            dev = abs(quad_info_gain_d2([1.0, lam]) - info_gain([1.0, lam]))
            worst = max(worst, dev)
        assert worst < 1e-6

    def test_rejects_non_d2(self):
        with pytest.raises(QmidError):
            quad_info_gain_d2([1.0, 0.5, 0.2])
