from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import integrate_to_cap
from shilnikov_switching.errors import HypothesisViolation, OmegaHit, OutOfBlock, StableManifoldInput
from shilnikov_switching.geometry import (
    CANONICAL,
    TWO_PI,
    Boundary,
    Cap,
    CapPoint,
    CylinderPoint,
    SaddleSpectrum,
    Side,
    WallPoint,
    angle_diff,
    apply_symmetry,
    classify_boundary,
    exit_point,
    local_flow,
    local_map,
    time_of_flight,
    wrap_angle,
)

angles = st.floats(-50.0, 50.0, allow_nan=False)
heights = st.floats(1e-12, 1.0).flatmap(lambda a: st.sampled_from((a, -a)))
times = st.floats(-5.0, 5.0, allow_nan=False)
spectra = st.builds(
    SaddleSpectrum,
    C=st.floats(1.05, 4.0),
    E=st.just(1.0),
    alpha=st.floats(0.2, 3.0),
)


def close_angle(a, b, tol=1e-12):
    return abs(angle_diff(a, b)) <= tol


class TestSpectrum:
    def test_canonical_constants(self):
        assert CANONICAL.delta == 2.0
        assert CANONICAL.twist == 1.0

    def test_rejects_non_attracting_without_flag(self):
        with pytest.raises(HypothesisViolation) as ei:
            SaddleSpectrum(C=1.0, E=2.0)
        assert str(ei.value).startswith("(H1)")
        assert ei.value.exit_code == 4

    def test_contrast_flag_allows_it(self):
        sp = SaddleSpectrum(C=1.0, E=2.0, contrast=True)
        assert sp.delta == 0.5

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_eigenvalues(self, bad):
        with pytest.raises(HypothesisViolation):
            SaddleSpectrum(alpha=bad)


class TestPoints:
    def test_wall_point_wraps_x(self):
        assert WallPoint(TWO_PI + 0.5, 0.1).x == pytest.approx(0.5)
        assert WallPoint(-1e-300, 0.1).x == 0.0

    def test_wall_point_rejects_height(self):
        with pytest.raises(OutOfBlock):
            WallPoint(0.0, 1.5)

    def test_sides(self):
        assert WallPoint(0, 0.2).side is Side.PLUS
        assert WallPoint(0, -0.2).side is Side.MINUS
        assert WallPoint(0, 0.0).side is Side.STABLE

    def test_cap_cartesian_and_revolutions(self):
        c = CapPoint(0.5, 3 * math.pi, Cap.TOP)
        assert c.revolutions == pytest.approx(1.5)
        assert c.cartesian() == pytest.approx((-0.5, 0.0), abs=1e-15)
        assert c.to_cylinder().z == 1.0

    @given(angles)
    def test_wrap_angle_range(self, a):
        w = wrap_angle(a)
        assert 0.0 <= w < TWO_PI
        assert close_angle(w, a, 1e-11)


class TestLocalFlow:
    @given(angles, heights, times, times)
    def test_semigroup(self, th, z, s, t):
        p = CylinderPoint(0.7, th, z)
        a = local_flow(local_flow(p, s), t)
        b = local_flow(p, s + t)
        assert a.rho == pytest.approx(b.rho, rel=1e-12)
        assert a.z == pytest.approx(b.z, rel=1e-12)
        assert close_angle(a.theta, b.theta, 1e-10)

    @given(angles, heights, times)
    def test_equivariant(self, th, z, t):
        p = CylinderPoint(0.3, th, z)
        a = apply_symmetry(local_flow(p, t))
        b = local_flow(apply_symmetry(p), t)
        assert a.rho == b.rho and a.z == b.z
        assert close_angle(a.theta, b.theta, 1e-10)

    def test_identity_at_zero(self):
        p = CylinderPoint(0.4, 1.0, -0.2)
        assert local_flow(p, 0.0) == p


class TestLocalMap:
    def test_closed_form_values(self):
        c = local_map(WallPoint(0.25, 0.01))
        assert c.cap is Cap.TOP
        assert c.r == pytest.approx(1e-4, rel=1e-15)
        assert c.phi == pytest.approx(0.25 + math.log(100), rel=1e-15)
        assert time_of_flight(WallPoint(0.25, -0.01)) == pytest.approx(math.log(100))

    def test_bottom_cap(self):
        assert local_map(WallPoint(0.0, -0.3)).cap is Cap.BOTTOM

    def test_stable_input_raises(self):
        with pytest.raises(StableManifoldInput):
            local_map(WallPoint(1.0, 0.0))
        with pytest.raises(StableManifoldInput):
            time_of_flight(WallPoint(1.0, 0.0))

    def test_wall_top_is_corner(self):
        with pytest.raises(OmegaHit):
            exit_point(WallPoint(0.0, 1.0))

    @given(st.floats(0, TWO_PI, exclude_max=True), heights, spectra)
    @settings(max_examples=60)
    def test_matches_rk4(self, x, y, sp):
        if abs(y) < 1e-6 or abs(y) == 1.0:
            return
        t, hit = integrate_to_cap([x], [y], sp.C, sp.E, sp.alpha)
        c = local_map(WallPoint(x, y), sp)
        assert time_of_flight(WallPoint(x, y), sp) == pytest.approx(t[0], rel=1e-10, abs=1e-13)
        assert c.r == pytest.approx(math.hypot(hit[0, 0], hit[1, 0]), rel=1e-9)
        assert close_angle(c.phi, math.atan2(hit[1, 0], hit[0, 0]), 1e-9)

    @given(st.floats(0, TWO_PI, exclude_max=True), heights)
    def test_commutes_with_symmetry(self, x, y):
        w = WallPoint(x, y)
        a = local_map(apply_symmetry(w))
        b = apply_symmetry(local_map(w))
        assert a.cap is b.cap and a.r == b.r
        assert close_angle(a.phi, b.phi, 1e-9)

    @given(st.floats(0, TWO_PI, exclude_max=True), st.floats(1e-8, 0.99))
    def test_exit_point_is_on_cap(self, x, y):
        q = exit_point(WallPoint(x, y))
        assert classify_boundary(q) is Boundary.SIGMA_OUT_TOP
        assert q.rho == pytest.approx(y**2, rel=1e-12)


class TestSymmetry:
    @given(angles, heights)
    def test_involution_wall(self, x, y):
        w = WallPoint(x, y)
        ww = apply_symmetry(apply_symmetry(w))
        assert ww.y == w.y and close_angle(ww.x, w.x, 1e-12)

    @given(st.floats(0, 1), angles, st.sampled_from(list(Cap)))
    def test_involution_cap(self, r, phi, cap):
        c = CapPoint(r, phi, cap)
        cc = apply_symmetry(apply_symmetry(c))
        assert (cc.r, cc.cap) == (c.r, c.cap)
        assert cc.phi == pytest.approx(c.phi, abs=1e-14)

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            apply_symmetry((0.0, 0.0))


class TestClassifyBoundary:
    @pytest.mark.parametrize(
        "p, expected",
        [
            (CylinderPoint(1.0, 0.3, 0.5), Boundary.SIGMA_IN_PLUS),
            (CylinderPoint(1.0, 0.3, -0.5), Boundary.SIGMA_IN_MINUS),
            (CylinderPoint(1.0, 0.3, 0.0), Boundary.SIGMA_IN_STABLE),
            (CylinderPoint(0.5, 0.3, 1.0), Boundary.SIGMA_OUT_TOP),
            (CylinderPoint(0.5, 0.3, -1.0), Boundary.SIGMA_OUT_BOTTOM),
            (CylinderPoint(1.0, 0.3, 1.0), Boundary.OMEGA),
            (CylinderPoint(1.0, 0.3, -1.0), Boundary.OMEGA),
            (CylinderPoint(0.5, 0.3, 0.2), Boundary.INTERIOR),
        ],
    )
    def test_labels(self, p, expected):
        assert classify_boundary(p) is expected

    def test_outside(self):
        with pytest.raises(OutOfBlock):
            classify_boundary(CylinderPoint(1.2, 0.0, 0.0))
