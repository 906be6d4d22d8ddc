"""Plane geometry: boundary polylines, tangent point, hulls, sweeps."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmid.errors import NoTangentPointError, QmidError, SweepError
from qmid.families import info_gain_projective
from qmid.measures import measures
from qmid.region import (
    PlaneKind,
    averaged_region,
    boundary_polyline,
    curvature_sign,
    efficiency_argmax,
    if_curve,
    lower_boundaries,
    projector_point,
    sweep_region,
    tangent_point,
    upper_boundary,
)


class TestPlaneKind:
    def test_parse_names(self):
        assert PlaneKind.parse("GF") is PlaneKind.GF
        assert PlaneKind.parse("ir") is PlaneKind.IR

    def test_parse_rejects_unknown(self):
        with pytest.raises(QmidError):
            PlaneKind.parse("XY")

    def test_axes(self):
        assert PlaneKind.GF.info_axis == "estimation_fidelity"
        assert PlaneKind.GF.disturbance_axis == "operation_fidelity"
        assert PlaneKind.IR.disturbance_axis == "reversibility"


class TestProjectorPoints:
    def test_values_on_if_plane(self):
        d = 4
        for r in range(1, d + 1):
            pt = projector_point(d, r, PlaneKind.IF)
            assert pt.x == pytest.approx((1 + r) / (d + 1))
            assert pt.y == pytest.approx(info_gain_projective(d, r), abs=1e-13)

    def test_rank_validation(self):
        with pytest.raises(QmidError):
            projector_point(4, 0, PlaneKind.GF)
        with pytest.raises(QmidError):
            projector_point(4, 5, PlaneKind.GF)


class TestBoundaryPolylines:
    def test_points_carry_source_spectra(self):
        pl = boundary_polyline(3, PlaneKind.GF, 1, 2, n_samples=21)
        assert len(pl.points) == 21
        for pt in pl.points[::5]:
            mv = measures(pt.source_spectrum)
            assert pt.x == pytest.approx(mv.operation_fidelity, abs=1e-12)
            assert pt.y == pytest.approx(mv.estimation_fidelity, abs=1e-12)

    def test_lower_boundary_count(self):
        assert len(lower_boundaries(5, PlaneKind.GF)) == 4  # (k,1) for k=1..4
        assert len(lower_boundaries(5, PlaneKind.GR)) == 1  # (d-1,1) only

    def test_upper_is_1_dminus1(self):
        pl = upper_boundary(6, PlaneKind.IF, n_samples=11)
        assert pl.label == "(1,5)"

    def test_sample_count_validation(self):
        with pytest.raises(SweepError):
            boundary_polyline(3, PlaneKind.GF, 1, 2, n_samples=1)


class TestTangentPoint:
    # reference values from a high-resolution independent bisection
    LANDMARKS = {
        3: 0.465140, 4: 0.298631, 5: 0.218537, 6: 0.171748,
        7: 0.141179, 8: 0.119691, 9: 0.103787, 10: 0.091555,
    }

    @pytest.mark.parametrize("d", sorted(LANDMARKS))
    def test_lambda_T(self, d):
        tr = tangent_point(d)
        assert tr.lambda_T == pytest.approx(self.LANDMARKS[d], abs=2e-6)
        assert tr.d == d

    def test_tangency_condition(self):
        # at lambda_T the chord from (0 bits, F=1) is tangent: curve slope
        # equals chord slope
        d = 5
        tr = tangent_point(d)
        I, F, Ip, Fp = if_curve(d, tr.lambda_T)
        assert Fp / Ip == pytest.approx((F - 1.0) / I, abs=1e-9)
        assert tr.I_T == pytest.approx(I, abs=1e-12)
        assert tr.F_T == pytest.approx(F, abs=1e-12)

    def test_monotone_trends(self):
        trs = [tangent_point(d) for d in range(3, 11)]
        lam = [t.lambda_T for t in trs]
        IT = [t.I_T for t in trs]
        FT = [t.F_T for t in trs]
        assert all(a > b for a, b in zip(lam, lam[1:]))
        assert all(a < b for a, b in zip(IT, IT[1:]))
        assert all(a > b for a, b in zip(FT, FT[1:]))

    def test_d2_has_no_tangent(self):
        with pytest.raises(NoTangentPointError):
            tangent_point(2)

    def test_max_gap_positive(self):
        for d in (3, 5, 7):
            assert tangent_point(d).max_gap > 0.0


class TestCurvature:
    def test_convex_near_identity_for_d_ge_3(self):
        for d in range(3, 9):
            assert curvature_sign(d, 0.97) == 1

    def test_concave_for_d2(self):
        assert curvature_sign(2, 0.9) == -1

    def test_concave_near_rank1(self):
        for d in (3, 5):
            assert curvature_sign(d, 0.05) == -1


class TestEfficiencyArgmax:
    def test_interior_maximum(self):
        d = 4
        lam = efficiency_argmax(d)
        assert 0.0 < lam < 1.0

        def eff(l):
            I, F, _, _ = if_curve(d, l)
            return I / (1.0 - F)

        val = eff(lam)
        eps = 1e-4
        assert eff(lam - eps) <= val + 1e-10
        assert eff(lam + eps) <= val + 1e-10


class TestSweepAndHull:
    def test_sweep_points_match_measures(self):
        sweep = sweep_region(3, PlaneKind.GF, 0.1)
        assert len(sweep) > 0
        for i in (0, len(sweep) // 2, len(sweep) - 1):
            pt = sweep[i]
            mv = measures(pt.source_spectrum)
            assert pt.x == pytest.approx(mv.operation_fidelity, abs=1e-9)
            assert pt.y == pytest.approx(mv.estimation_fidelity, abs=1e-9)

    def test_step_validation(self):
        with pytest.raises(SweepError):
            sweep_region(3, PlaneKind.GF, 0.15)
        with pytest.raises(SweepError):
            sweep_region(3, PlaneKind.GF, 0.0)

    @pytest.mark.parametrize("plane", list(PlaneKind))
    def test_hull_contains_sweep(self, plane):
        d, step = 3, 0.05
        sweep = sweep_region(d, plane, step)
        hull = averaged_region(d, plane, step)
        hx = np.array([p.x for p in hull.points])
        hy = np.array([p.y for p in hull.points])
        # closed chain, counterclockwise
        assert hx[0] == hx[-1] and hy[0] == hy[-1]
        area2 = np.sum(hx[:-1] * hy[1:] - hx[1:] * hy[:-1])
        assert area2 > 0.0
        # every swept point inside within tolerance
        xs, ys = sweep.xs, sweep.ys
        ax, ay = hx[:-1], hy[:-1]
        bx, by = hx[1:], hy[1:]
        cross = np.min(
            (bx - ax)[None, :] * (ys[:, None] - ay[None, :])
            - (by - ay)[None, :] * (xs[:, None] - ax[None, :]),
            axis=1,
        )
        assert cross.min() > -1e-9

    def test_hull_vertices_on_gf_plane_include_projectors(self):
        hull = averaged_region(4, PlaneKind.GF, 0.1)
        xs = [round(p.x, 6) for p in hull.points]
        for r in range(1, 5):
            assert round((1 + r) / 5, 6) in xs
