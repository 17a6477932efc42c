import math

import numpy as np
import pytest

from conftest import PHI, PSI, random_independent_pair
from teichpong.errors import (DegenerateInputError, HorizonExceededError,
                              InvalidInputError, NotIndependentError)
from teichpong.hyp2 import (BoundaryPoint, Geodesic, Point, dist,
                            dist_to_geodesic, geodesic_through, project)
from teichpong.mcg import MappingClass, axis
from teichpong.projection import (Thresholds, common_perpendicular_distance,
                                  derive_contraction_b, derive_morse,
                                  divergence_profile,
                                  fast_divergence_thresholds, model_constants,
                                  pair_geometry, profile_csv,
                                  projection_interval,
                                  touching_ball_projection_diameter)

VERTICAL = Geodesic(BoundaryPoint.finite(0.0), BoundaryPoint.infinity(), Point(0.0, 1.0))


def conjugated(m, k):
    g = MappingClass(1, k, 0, 1)
    return m.conjugated_by(g)


class TestContraction:
    def test_on_axis_diameter_zero(self):
        assert touching_ball_projection_diameter(VERTICAL, Point(0.0, 3.0)) == pytest.approx(0.0, abs=1e-12)

    def test_oracle_dense_ball_boundary(self):
        # sample the boundary circle of the ball B(x, d(x, axis)) densely and
        # project; the parameter spread must match the closed form
        x = Point(math.cos(math.pi / 4), math.sin(math.pi / 4))
        radius = dist_to_geodesic(VERTICAL, x)
        # Euclidean data of the metric ball (radius doubles in the plane metric)
        center_y = x.y * math.cosh(2 * radius)
        r_eucl = x.y * math.sinh(2 * radius)
        angles = np.linspace(0, 2 * math.pi, 20000, endpoint=False)
        params = [
            project(VERTICAL, Point(x.x + r_eucl * math.cos(a), center_y + r_eucl * math.sin(a))).t
            for a in angles
        ]
        sampled = max(params) - min(params)
        closed = touching_ball_projection_diameter(VERTICAL, x)
        assert closed == pytest.approx(math.asinh(math.cos(math.pi / 4)), abs=1e-12)
        assert sampled == pytest.approx(closed, abs=1e-6)

    def test_derived_bound_covers_random_configurations(self, rng):
        b = derive_contraction_b()
        for _ in range(2000):
            p, q = np.tan(rng.uniform(-1.5, 1.5, 2))
            if abs(p - q) < 1e-3:
                continue
            c = Geodesic(BoundaryPoint.finite(p), BoundaryPoint.finite(q),
                         Point(0.5 * (p + q), 0.5 * abs(q - p)))
            z = Point(float(rng.uniform(-10, 10)), float(np.exp(rng.uniform(math.log(0.05), math.log(10)))))
            assert touching_ball_projection_diameter(c, z) <= b

    def test_margin_over_supremum(self):
        # the supremum of the family is asinh(1); the derived value sits above it
        b = derive_contraction_b()
        assert math.asinh(1.0) < b < 1.1 * math.asinh(1.0)

    def test_constants_singleton(self):
        c1, c2 = model_constants(), model_constants()
        assert c1 is c2
        assert c1.delta == pytest.approx(0.5 * math.log(1 + math.sqrt(2)), abs=1e-15)


def _arclength_concat(points_lists):
    """Concatenate sampled legs into (points, params) with arclength params."""
    pts, params = [], []
    total = 0.0
    prev = None
    for leg in points_lists:
        for z in leg:
            if prev is not None:
                total += dist(prev, z)
            if prev is None or dist(prev, z) > 0:
                pts.append(z)
                params.append(total)
                prev = z
    return pts, params


def _is_quasi_geodesic(pts, params, K, kappa, n_checks=50):
    idx = np.linspace(0, len(pts) - 1, n_checks).astype(int)
    for i in idx:
        for j in idx:
            if j <= i:
                continue
            d = dist(pts[i], pts[j])
            gap = params[j] - params[i]
            if d < gap / K - kappa - 1e-9 or d > K * gap + kappa + 1e-9:
                return False
    return True


class TestMorse:
    def test_geodesics_are_stable(self):
        assert derive_morse(1.0, 0.0) == 0.0

    def test_monotone(self):
        assert derive_morse(2.0, 1.0) <= derive_morse(2.0, 2.0)
        assert derive_morse(1.5, 0.0) <= derive_morse(2.0, 0.0)

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidInputError):
            derive_morse(0.5, 0.0)
        with pytest.raises(InvalidInputError):
            derive_morse(2.0, -1.0)

    def test_hypercycle_family_bounds_from_below(self):
        # constant-height paths (Euclidean rays with |Re z| / Im z = sinh(2h))
        # are unit-speed (2, 0)-quasi-geodesics up to h = arccosh(2)/2 ~ 0.659
        # and stray about h from the geodesic joining their endpoints, so
        # they pin the constant from below
        h = 0.60
        slope = math.sinh(2 * h)
        feet = np.linspace(-4.0, 4.0, 400)
        pts = [Point(math.exp(2 * x) * slope, math.exp(2 * x)) for x in feet]
        params = [0.0]
        for prev, cur in zip(pts, pts[1:]):
            params.append(params[-1] + dist(prev, cur))
        assert _is_quasi_geodesic(pts, params, 2.0, 0.0)
        M = derive_morse(2.0, 0.0)
        assert M >= h
        endpoint_geo = geodesic_through(pts[0], pts[-1])
        stray = max(dist_to_geodesic(endpoint_geo, z) for z in pts)
        assert 0.5 * h <= stray <= M

    def test_sampled_concatenations_stay_inside(self):
        # three-leg paths (bridge, axis segment, return geodesic) that happen
        # to be genuine (2, D)-quasi-geodesics must stay within M of the
        # geodesic joining their endpoints
        c1, c2 = axis(PHI).axis, axis(PSI).axis
        pg = pair_geometry(PHI, PSI)
        M = derive_morse(2.0, pg.D)
        checked = 0
        for sy in np.linspace(0.4, 5.0, 8):
            for tx in np.linspace(0.4, 5.0, 8):
                x = c1.point_at(pg.t_O + tx)
                y = c2.point_at(pg.s_O + sy)
                leg_axis = [c2.point_at(pg.s_O + u * sy) for u in np.linspace(0, 1, 160)]
                back = geodesic_through(y, x)
                t_end = back.param_of(x)
                leg_back = [back.point_at(u * t_end) for u in np.linspace(0, 1, 160)]
                pts, params = _arclength_concat([leg_axis, leg_back])
                if not _is_quasi_geodesic(pts, params, 2.0, pg.D):
                    continue
                checked += 1
                endpoint_geo = geodesic_through(pts[0], x)
                stray = max(dist_to_geodesic(endpoint_geo, z) for z in pts)
                assert stray <= M
        assert checked >= 5


class TestPairGeometry:
    def test_standard_pair_crosses_at_i(self):
        pg = pair_geometry(PHI, PSI)
        assert pg.crossing
        assert pg.D == pytest.approx(0.0, abs=1e-12)
        assert pg.O.z == pytest.approx(1j, abs=1e-9)
        assert pg.O_prime.z == pytest.approx(1j, abs=1e-9)

    def test_symmetry(self):
        m2 = conjugated(PHI, 4)
        a = pair_geometry(PHI, m2)
        b = pair_geometry(m2, PHI)
        assert a.D == pytest.approx(b.D, abs=1e-9)

    def test_disjoint_matches_closed_form(self):
        m2 = conjugated(PHI, 4)
        pg = pair_geometry(PHI, m2)
        assert not pg.crossing
        oracle = common_perpendicular_distance(axis(PHI).axis, axis(m2).axis)
        assert pg.D == pytest.approx(oracle, abs=1e-9)
        assert dist(pg.O, pg.O_prime) == pytest.approx(pg.D, abs=1e-8)

    def test_feet_lie_on_axes(self):
        m2 = conjugated(PHI, 4)
        pg = pair_geometry(PHI, m2)
        assert dist_to_geodesic(axis(PHI).axis, pg.O) < 1e-9
        assert dist_to_geodesic(axis(m2).axis, pg.O_prime) < 1e-9

    def test_rejects_common_power(self):
        with pytest.raises(NotIndependentError):
            pair_geometry(PHI, PHI ** 2)


class TestProjectionInterval:
    def test_perpendicular_crossing_is_a_point(self):
        # the unit half circle meets the vertical axis at right angles
        source = Geodesic(BoundaryPoint.finite(-1.0), BoundaryPoint.finite(1.0), Point(0.0, 1.0))
        lo, hi = projection_interval(VERTICAL, source)
        assert lo == pytest.approx(0.0, abs=1e-12)
        assert hi == pytest.approx(0.0, abs=1e-12)

    def test_sampled_projections_inside(self):
        c1, c2 = axis(PHI).axis, axis(PSI).axis
        lo, hi = projection_interval(c1, c2)
        assert math.isfinite(lo) and math.isfinite(hi)
        for s in np.linspace(-8, 8, 1000):
            t = project(c1, c2.point_at(float(s))).t
            assert lo - 1e-9 <= t <= hi + 1e-9

    def test_identical_rejected(self):
        with pytest.raises(DegenerateInputError):
            projection_interval(VERTICAL, VERTICAL)

    def test_shared_endpoint_unbounded(self):
        other = Geodesic(BoundaryPoint.finite(1.0), BoundaryPoint.infinity(), Point(1.0, 1.0))
        lo, hi = projection_interval(VERTICAL, other)
        assert hi == math.inf and math.isfinite(lo) is False or math.isfinite(hi) is False

    def test_both_directions_bounded_for_axes(self):
        c1, c2 = axis(PHI).axis, axis(PSI).axis
        for a, b in (projection_interval(c1, c2), projection_interval(c2, c1)):
            assert math.isfinite(a) and math.isfinite(b)


class TestDivergenceProfile:
    def test_crossing_point_has_zero_minimum(self):
        pg = pair_geometry(PHI, PSI)
        rows = divergence_profile(PHI, PSI, pg.t_O, pg.t_O, 1.0)
        assert len(rows) == 1
        assert rows[0][2] == pytest.approx(0.0, abs=1e-6)

    def test_minimizer_matches_projection(self):
        c2 = axis(PSI).axis
        rows = divergence_profile(PHI, PSI, -2.0, 2.0, 0.5)
        c1 = axis(PHI).axis
        for t, s_star, d_min in rows:
            z = c1.point_at(t)
            assert s_star == pytest.approx(project(c2, z).t, abs=1e-6)
            assert d_min == pytest.approx(dist_to_geodesic(c2, z), abs=1e-9)

    def test_properness(self):
        rows = divergence_profile(PHI, PSI, -12.0, 12.0, 0.25)
        d = {round(t, 6): dm for t, _, dm in rows}
        ts = sorted(d)
        # eventually nondecreasing in |t| and exceeding 5
        assert max(d.values()) > 5.0
        tail = [d[t] for t in ts if t > 6]
        assert all(b >= a - 1e-9 for a, b in zip(tail, tail[1:]))

    def test_swap_symmetry(self):
        # the sampled distances are symmetric in the two roles, and the two
        # profiles agree at the mutual nearest-point parameters
        c1, c2 = axis(PHI).axis, axis(PSI).axis
        rows = divergence_profile(PHI, PSI, -1.0, 1.0, 0.5)
        for t, s_star, d_min in rows:
            assert dist(c2.point_at(s_star), c1.point_at(t)) == pytest.approx(d_min, abs=1e-9)
        pg = pair_geometry(PHI, PSI)
        fwd = divergence_profile(PHI, PSI, pg.t_O, pg.t_O, 1.0)[0][2]
        bwd = divergence_profile(PSI, PHI, pg.s_O, pg.s_O, 1.0)[0][2]
        assert fwd == pytest.approx(bwd, abs=1e-6)

    def test_csv_format(self):
        rows = divergence_profile(PHI, PSI, 0.0, 0.5, 0.25)
        text = profile_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "t,s_star,d_min"
        assert len(lines) == 4
        assert all(len(line.split(",")) == 3 for line in lines[1:])

    def test_rejects_dependent(self):
        with pytest.raises(NotIndependentError):
            divergence_profile(PHI, PHI ** 2, 0, 1, 0.5)


class TestFastDivergence:
    def test_standard_pair_certified(self):
        th = fast_divergence_thresholds(PHI, PSI)
        pg = pair_geometry(PHI, PSI)
        assert th.p_minus < pg.t_O < th.p_plus
        assert th.q_minus < pg.s_O < th.q_plus
        # inequality on ten thousand random parameter pairs beyond the
        # thresholds, both sides
        c1, c2 = axis(PHI).axis, axis(PSI).axis
        rng = np.random.default_rng(5)
        for sign, p_thr, q_thr in ((1, th.p_plus, th.q_plus), (-1, th.p_minus, th.q_minus)):
            for _ in range(5000):
                dt = float(rng.uniform(0.0, 6.0))
                ds = float(rng.uniform(0.0, 6.0))
                t = p_thr + sign * dt
                s = q_thr + sign * ds
                x, y = c1.point_at(t), c2.point_at(s)
                lhs = dist(x, y)
                rhs = max(abs(t - pg.t_O), abs(s - pg.s_O))
                assert lhs > rhs

    def test_thresholds_strictly_positive_offsets(self):
        # at the nearest-point configuration itself the inequality fails
        # (0 > 0 is false for a crossing pair), so the offsets are positive
        pg = pair_geometry(PHI, PSI)
        th = fast_divergence_thresholds(PHI, PSI)
        assert th.p_plus > pg.t_O + 0.009
        assert th.p_minus < pg.t_O - 0.009

    def test_offsets_shrink_as_axes_separate(self):
        # far-apart axes diverge immediately, so the certified offsets
        # contract toward the grid floor as the conjugation distance grows
        offsets = []
        for k in (1, 4, 16):
            m2 = conjugated(PHI, k)
            pg = pair_geometry(PHI, m2)
            th = fast_divergence_thresholds(PHI, m2)
            offsets.append(th.p_plus - pg.t_O)
        assert offsets[0] >= offsets[1] >= offsets[2] > 0

    def test_horizon_exceeded_reported(self):
        with pytest.raises(HorizonExceededError):
            fast_divergence_thresholds(PHI, PSI, horizon=0.5)

    def test_random_pairs_certify(self, rng):
        for _ in range(3):
            m1, m2 = random_independent_pair(rng)
            th = fast_divergence_thresholds(m1, m2)
            assert isinstance(th, Thresholds)
            assert math.isfinite(th.p_plus) and math.isfinite(th.q_minus)
