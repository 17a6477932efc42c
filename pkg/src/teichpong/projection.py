"""Quantitative projection theory between axes.

The two derived constants live here:

* the contraction constant b: a uniform bound on the projected diameter of
  any ball whose radius equals its center's distance to the geodesic;

* the stability constant M(K, kappa): how far a continuous unit-speed
  (K, kappa)-quasi-geodesic can stray from the geodesic joining its
  endpoints.

Both are computed numerically with stated margins rather than copied from
literature; the searched family, grids and margins are recorded so results
are reproducible bit for bit, and Monte Carlo validation of both bounds is
part of the test suite.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from . import cache, hyp2
from .errors import (ConstantDerivationError, DegenerateInputError,
                     HorizonExceededError, InvalidInputError, NotIndependentError)
from .hyp2 import Geodesic, Point, dist, dist_to_geodesic, project
from .mcg import MappingClass, axis, independent

_GOLDEN = 0.381966011250105


@dataclass
class ModelConstants:
    """One-time derived constants, guarded for single computation."""

    b: float
    delta: float
    morse_table: dict = field(default_factory=dict)


_constants: ModelConstants | None = None
_constants_lock = threading.Lock()


def model_constants() -> ModelConstants:
    """Singleton model constants; the contraction bound is derived on first use."""
    global _constants
    with _constants_lock:
        if _constants is None:
            # sharp slim-triangle constant of the plane, halved for the model metric
            delta = 0.5 * math.log(1.0 + math.sqrt(2.0))
            _constants = ModelConstants(b=derive_contraction_b(), delta=delta)
        return _constants


def touching_ball_projection_diameter(c: Geodesic, x: Point) -> float:
    """Diameter of the projection onto c of the ball around x of radius d(x, c).

    In the chart the ball is a Euclidean disk tangent to the axis; its
    projection spans parameters [log(|C| - r)/2, log(|C| + r)/2] where C and
    r are the Euclidean center and radius, which collapses to
    asinh(|cos arg w|) for the normalized point w.
    """
    w = c.chart.inverse().apply_complex(x.z)
    return math.asinh(abs(w.real) / abs(w))


def touching_ball_projection_diameters(c: Geodesic, zs: np.ndarray) -> np.ndarray:
    m = c.chart.inverse()
    w = (m.a * zs + m.b) / (m.c * zs + m.d)
    return np.arcsinh(np.abs(w.real) / np.abs(w))


def derive_contraction_b(theta_samples: int = 4096, margin: float = 0.05) -> float:
    """Maximize the touching-ball projection diameter over x = e^{i theta}.

    Every configuration reduces to this family by the isometries fixing the
    target geodesic (scalings and the mirror), so the maximum over theta is
    the global bound; a safety margin covers the open end theta -> 0.
    """
    key = f"b:theta_samples={theta_samples},margin={margin!r}"

    def compute():
        c = Geodesic(hyp2.BoundaryPoint.finite(0.0), hyp2.BoundaryPoint.infinity(), Point(0.0, 1.0))
        best = 0.0
        for k in range(1, theta_samples + 1):
            theta = 0.5 * math.pi * k / theta_samples
            best = max(best, touching_ball_projection_diameter(c, Point(math.cos(theta), math.sin(theta))))
        if best <= 0.0:
            raise ConstantDerivationError("contraction maximization produced nothing")
        return (1.0 + margin) * best

    return cache.memo(key, compute)


# ---------------------------------------------------------------------------
# Stability constant for quasi-geodesics
# ---------------------------------------------------------------------------

def _chord_upper(cosh2h_sq, sig):
    """Upper bound on half arccosh(cosh^2(2h) cosh(2 sig) - sinh^2(2h)), vectorized."""
    small = sig <= 12.0
    out = np.empty_like(sig)
    arg = cosh2h_sq * np.cosh(2.0 * np.where(small, sig, 0.0)) - (cosh2h_sq - 1.0)
    out[small] = 0.5 * np.arccosh(np.maximum(arg[small], 1.0))
    out[~small] = sig[~small] + 0.5 * math.log(cosh2h_sq)
    return out


def _level_refutes(K, kappa, h, beta, t_samples, safety):
    """True if excursion level h is impossible for a max height Delta = h + beta/2.

    An excursion above height h of length T with max height Delta must spend
    a vertical budget of at least beta = 2(Delta - h); its endpoints sit at
    height h on the same side with feet separated by at most
    sech(2h) sqrt(T^2 - beta^2), which caps their distance, while the lower
    quasi-geodesic inequality demands at least T/K - kappa.  If no T
    reconciles the two, no such excursion exists.

    The slack function has a square-root cusp at T = beta, so T is sampled
    quadratically (linear in the cusp variable); the safety gap dominates
    the possible rise between samples, keeping refutations conservative.
    """
    sech2h = 1.0 / math.cosh(2.0 * h)
    if sech2h >= 1.0 / K:
        return False
    cosh2h_sq = math.cosh(2.0 * h) ** 2
    tail_const = 0.5 * math.log(2.0 * cosh2h_sq)
    t_far = (tail_const + kappa + 1.0) / (1.0 / K - sech2h) + beta + 1.0
    u = np.linspace(0.0, 1.0, t_samples)
    T = beta + (t_far - beta) * u * u
    sig = sech2h * np.sqrt(np.maximum(T * T - beta * beta, 0.0))
    g = _chord_upper(cosh2h_sq, sig) - T / K + kappa
    return float(np.max(g)) < -safety


def _delta_refuted(K, kappa, delta, levels, t_samples, safety):
    for j in range(1, levels):
        h = delta * j / levels
        if _level_refutes(K, kappa, h, 2.0 * (delta - h), t_samples, safety):
            return True
    return False


def derive_morse(K: float, kappa: float, *, levels: int = 96, t_samples: int = 4000,
                 safety: float = 0.05, margin: float = 0.05) -> float:
    """Stability constant for continuous unit-speed (K, kappa)-quasi-geodesics.

    Bisects for the least max height that some excursion level refutes; the
    refutation is conservative (chord upper bounds, dense parameter grids
    plus a safety gap), so coarse grids can only enlarge the answer.
    Monotone in K and in kappa.  (1, 0) paths are geodesics, so M(1, 0) = 0.
    """
    if K < 1.0 or kappa < 0.0:
        raise InvalidInputError(f"need K >= 1 and kappa >= 0, got ({K}, {kappa})")
    if K == 1.0 and kappa == 0.0:
        return 0.0
    consts = model_constants()
    tab_key = (float(K), float(kappa), levels, t_samples, safety, margin)
    if tab_key in consts.morse_table:
        return consts.morse_table[tab_key]

    key = (f"morse:K={K!r},kappa={kappa!r},levels={levels},"
           f"t_samples={t_samples},safety={safety!r},margin={margin!r}")

    def compute():
        lo, hi = 0.0, 1.0
        while not _delta_refuted(K, kappa, hi, levels, t_samples, safety):
            lo, hi = hi, 2.0 * hi
            if hi > 512.0:
                raise ConstantDerivationError(f"no stability bound below 512 for ({K}, {kappa})")
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            if _delta_refuted(K, kappa, mid, levels, t_samples, safety):
                hi = mid
            else:
                lo = mid
        return (1.0 + margin) * hi

    val = cache.memo(key, compute)
    consts.morse_table[tab_key] = val
    return val


# ---------------------------------------------------------------------------
# Pair geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairGeometry:
    """Nearest-point data for a pair of axes."""

    D: float
    O: Point
    O_prime: Point
    t_O: float
    s_O: float
    crossing: bool


def _normalized_endpoints(c_target: Geodesic, c_source: Geodesic):
    inv = c_target.chart.inverse()
    vals = []
    for xi in (c_source.endpoint_neg, c_source.endpoint_pos):
        w = inv.apply_boundary(xi)
        vals.append(math.inf if w.infinite else w.value)
    return vals


def common_perpendicular_distance(c1: Geodesic, c2: Geodesic) -> float:
    """Closed-form distance between disjoint geodesics (cross-ratio route).

    In the chart of c1 the other geodesic is the half circle on (p, q) with
    center m and radius r, and sinh of the plane distance is
    sqrt(m^2 - r^2)/r.  Used as the independent oracle for the minimizer.
    """
    p, q = _normalized_endpoints(c1, c2)
    if not (math.isfinite(p) and math.isfinite(q)):
        raise DegenerateInputError("geodesics share an endpoint")
    if p * q <= 0.0:
        raise InvalidInputError("geodesics cross; the distance is zero")
    m, r = 0.5 * (p + q), 0.5 * abs(q - p)
    return 0.5 * math.asinh(math.sqrt(m * m - r * r) / r)


def _geodesic_pair_geometry(c1: Geodesic, c2: Geodesic, tol: float = 1e-9) -> PairGeometry:
    p, q = _normalized_endpoints(c1, c2)
    if math.isfinite(p) and math.isfinite(q) and p * q < 0.0:
        # crossing: intersect the chart circle with the vertical axis
        y = math.sqrt(-p * q)
        t_O = 0.5 * math.log(y)
        O = c1.point_at(t_O)
        s_O = c2.param_of(O)
        return PairGeometry(0.0, O, O, t_O, s_O, True)
    lo, hi = projection_interval(c1, c2)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DegenerateInputError("geodesics share an endpoint")
    # the perpendicular foot is the projection of the nearest point, hence
    # inside the projection interval; golden minimization of a convex profile
    while hi - lo > tol * 0.01:
        m1 = lo + _GOLDEN * (hi - lo)
        m2 = hi - _GOLDEN * (hi - lo)
        if dist_to_geodesic(c2, c1.point_at(m1)) < dist_to_geodesic(c2, c1.point_at(m2)):
            hi = m2
        else:
            lo = m1
    t_O = 0.5 * (lo + hi)
    O = c1.point_at(t_O)
    foot, s_O = project(c2, O)
    return PairGeometry(dist(O, foot), O, foot, t_O, s_O, False)


def pair_geometry(m1: MappingClass, m2: MappingClass) -> PairGeometry:
    """Nearest-point configuration of the two axes (alternating/golden search
    for disjoint axes, circle intersection when they cross)."""
    if not independent(m1, m2):
        raise NotIndependentError(f"{m1} and {m2} share an axis")
    return _geodesic_pair_geometry(axis(m1).axis, axis(m2).axis)


def projection_interval(c_target: Geodesic, c_source: Geodesic):
    """Parameter interval of c_target containing the projection of c_source.

    The projection parameter is monotone along the source, so the interval
    is spanned by the feet of the perpendiculars from the two ideal
    endpoints; infinite values signal a shared endpoint.
    """
    if (c_target.endpoint_neg == c_source.endpoint_neg and c_target.endpoint_pos == c_source.endpoint_pos) or (
        c_target.endpoint_neg == c_source.endpoint_pos and c_target.endpoint_pos == c_source.endpoint_neg
    ):
        raise DegenerateInputError("projection of a geodesic onto itself is everything")
    ta = c_target.boundary_param(c_source.endpoint_neg)
    tb = c_target.boundary_param(c_source.endpoint_pos)
    return (min(ta, tb), max(ta, tb))


# ---------------------------------------------------------------------------
# Divergence
# ---------------------------------------------------------------------------

def _min_dist_on_axis(c2: Geodesic, z: Point, s_hint: float, tol: float = 1e-9):
    """Ternary search for min_s dist(z, c2(s)); unimodal by convexity."""
    step = 1.0
    lo, hi = s_hint - step, s_hint + step
    f = lambda s: dist(z, c2.point_at(s))
    while f(lo) < f(lo + 1e-6):
        lo -= step
        step *= 2.0
        if step > 1e6:
            raise ConstantDerivationError("bracket expansion ran away")
    step = 1.0
    while f(hi) < f(hi - 1e-6):
        hi += step
        step *= 2.0
        if step > 1e6:
            raise ConstantDerivationError("bracket expansion ran away")
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) < f(m2):
            hi = m2
        else:
            lo = m1
    s = 0.5 * (lo + hi)
    return s, f(s)


def divergence_profile(m1: MappingClass, m2: MappingClass, t_min: float, t_max: float,
                       step: float) -> list[tuple[float, float, float]]:
    """Rows (t, s_star, d_min) sampling the distance profile between the axes."""
    if step <= 0 or t_max < t_min:
        raise InvalidInputError("need step > 0 and t_max >= t_min")
    if not independent(m1, m2):
        raise NotIndependentError(f"{m1} and {m2} share an axis")
    c1, c2 = axis(m1).axis, axis(m2).axis
    rows = []
    n = int(math.floor((t_max - t_min) / step + 1e-9))
    s_hint = 0.0
    for i in range(n + 1):
        t = t_min + i * step
        z = c1.point_at(t)
        s_star, d_min = _min_dist_on_axis(c2, z, s_hint)
        s_hint = s_star
        rows.append((t, s_star, d_min))
    return rows


def profile_csv(rows) -> str:
    """CSV for a divergence profile: fixed header, 12 significant digits."""
    lines = ["t,s_star,d_min"]
    for t, s, d in rows:
        lines.append(f"{t:.12g},{s:.12g},{d:.12g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Thresholds:
    """Certified fast-divergence parameters, in the axes' own parametrizations.

    Beyond the plus (resp. minus) thresholds on both axes simultaneously,
    every sampled pair satisfies d(x, y) > max(d(O, x), d(O', y)).  The
    statement these certify is existence-only; the grid step and margin make
    the certified values an artifact-level, reproducible substitute.
    """

    p_plus: float
    p_minus: float
    q_plus: float
    q_minus: float


def _axis_points_array(c: Geodesic, params: np.ndarray) -> np.ndarray:
    m = c.chart
    z = 1j * np.exp(2.0 * params)
    return (m.a * z + m.b) / (m.c * z + m.d)


def _dist_matrix(za: np.ndarray, zb: np.ndarray) -> np.ndarray:
    diff = np.abs(za[:, None] - zb[None, :])
    return np.arcsinh(diff / (2.0 * np.sqrt(za.imag[:, None] * zb.imag[None, :])))


def fast_divergence_thresholds(m1: MappingClass, m2: MappingClass, *, grid_step: float = 0.01,
                               margin: float = 0.10, horizon: float = 8.0) -> Thresholds:
    """Grid-certified thresholds past which the pair diverges faster than
    either point recedes from the nearest-point configuration."""
    pg = pair_geometry(m1, m2)
    c1, c2 = axis(m1).axis, axis(m2).axis
    offsets = np.arange(1, int(round(horizon / grid_step)) + 1) * grid_step
    deltas = {}
    for side in (1, -1):
        z1 = _axis_points_array(c1, pg.t_O + side * offsets)
        z2 = _axis_points_array(c2, pg.s_O + side * offsets)
        dd = _dist_matrix(z1, z2)
        viol = dd <= np.maximum(offsets[:, None], offsets[None, :])
        if viol.any():
            ii, jj = np.nonzero(viol)
            delta = float(np.max(np.minimum(offsets[ii], offsets[jj]))) + grid_step
        else:
            delta = grid_step
        if delta > horizon - 2.0 * grid_step:
            raise HorizonExceededError(
                f"violations persist to the sampling horizon {horizon} on side {side:+d}"
            )
        deltas[side] = delta
    return Thresholds(
        p_plus=pg.t_O + (1.0 + margin) * deltas[1],
        p_minus=pg.t_O - (1.0 + margin) * deltas[-1],
        q_plus=pg.s_O + (1.0 + margin) * deltas[1],
        q_minus=pg.s_O - (1.0 + margin) * deltas[-1],
    )
