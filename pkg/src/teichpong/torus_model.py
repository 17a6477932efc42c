"""Slopes as curves on the unit-area flat torus, and the thick-part constants.

A point tau of the model plane is read as the lattice Z + tau Z rescaled to
unit area.  A slope (p, q) is the curve in the class of p + q tau; its
"length" is the flat length |p + q tau| / sqrt(Im tau).  Extremal length is
the square of this, which makes the supremum formula for the model distance
hold with the one-half prefactor, and makes the length-ratio bound hold with
a single exponent (strictly sharper than the general two-exponent bound,
both are asserted in tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import hyp2
from .errors import ConstantDerivationError, FViolationError, InvalidInputError
from .hyp2 import Point
from .mcg import MappingClass, min_translation


@dataclass(frozen=True)
class Slope:
    """Primitive integer pair in canonical form: q > 0, or (p, q) = (1, 0)."""

    p: int
    q: int

    def __post_init__(self):
        if math.gcd(abs(self.p), abs(self.q)) != 1:
            raise InvalidInputError(f"slope ({self.p},{self.q}) is not primitive")
        if not (self.q > 0 or (self.q == 0 and self.p == 1)):
            raise InvalidInputError(
                f"slope ({self.p},{self.q}) is not canonical (need q > 0, or (1,0))"
            )

    @classmethod
    def canonical(cls, p: int, q: int) -> "Slope":
        if (p, q) == (0, 0):
            raise InvalidInputError("zero vector is not a slope")
        g = math.gcd(abs(p), abs(q))
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        try:
            ps, qs = text.split("/")
            return cls(int(ps), int(qs))
        except ValueError as exc:
            raise InvalidInputError(f"expected 'p/q', got {text!r}") from exc

    def __str__(self):
        return f"{self.p}/{self.q}"


def curve_length(s: Slope, tau: Point) -> float:
    """Flat length on the unit-area torus: |p + q tau| / sqrt(Im tau)."""
    return abs(s.p + s.q * tau.z) / math.sqrt(tau.y)


def extremal_length(s: Slope, tau: Point) -> float:
    return curve_length(s, tau) ** 2


def intersection_number(s1: Slope, s2: Slope) -> int:
    return abs(s1.p * s2.q - s1.q * s2.p)


def transform_slope(m: MappingClass, s: Slope) -> Slope:
    """Action on slopes, normalized so that lengths are equivariant:

    curve_length(transform_slope(m.inverse(), s), tau)
        == curve_length(s, m applied to tau).
    """
    a, b, c, d = m.entries()
    return Slope.canonical(a * s.p - b * s.q, -c * s.p + d * s.q)


def teich_dist(tau1: Point, tau2: Point) -> float:
    """The model distance (the plane metric and the torus metric agree)."""
    return hyp2.dist(tau1, tau2)


@lru_cache(maxsize=8)
def _slope_table(depth: int):
    ps, qs = [1], [0]
    for q in range(1, depth + 1):
        for p in range(-depth, depth + 1):
            if math.gcd(abs(p), q) == 1:
                ps.append(p)
                qs.append(q)
    return np.array(ps, dtype=float), np.array(qs, dtype=float)


def _ext_array(ps, qs, tau: Point):
    return ((ps + qs * tau.x) ** 2 + (qs * tau.y) ** 2) / tau.y


def kerckhoff_dist(tau1: Point, tau2: Point, farey_depth: int) -> float:
    """Half the log of the largest extremal-length ratio over bounded slopes.

    Converges to teich_dist from below as the depth grows; the maximizing
    direction is approximated quadratically well by fractions of bounded
    height, so depth 500 is far inside 1e-6 for moderate distances.
    """
    if farey_depth < 1:
        raise InvalidInputError("farey_depth must be >= 1")
    ps, qs = _slope_table(farey_depth)
    ratio = np.max(_ext_array(ps, qs, tau2) / _ext_array(ps, qs, tau1))
    return 0.5 * math.log(ratio)


def wolpert_check(tau1: Point, tau2: Point, slopes) -> float:
    """Largest length ratio over the given slopes.

    Contract: at most e^{2 d} in general, and in this model at most e^{d}.
    """
    if not slopes:
        raise InvalidInputError("need a non-empty slope list")
    return max(curve_length(s, tau2) / curve_length(s, tau1) for s in slopes)


def short_curves(tau: Point, R: float) -> list[Slope]:
    """All slopes of length <= R, by bounded lattice search, sorted by (q, p)."""
    if R <= 0:
        raise InvalidInputError("R must be positive")
    out = []
    lim = R * math.sqrt(tau.y)
    if 1.0 <= lim + 1e-12:
        out.append(Slope(1, 0))
    qmax = int(lim / tau.y) + 1
    for q in range(1, qmax + 1):
        rem = lim * lim - (q * tau.y) ** 2
        if rem < -1e-12 * max(1.0, lim * lim):
            continue
        half = math.sqrt(max(rem, 0.0))
        lo = math.ceil(-q * tau.x - half - 1e-12)
        hi = math.floor(-q * tau.x + half + 1e-12)
        for p in range(lo, hi + 1):
            if math.gcd(abs(p), q) == 1:
                out.append(Slope(p, q))
    out.sort(key=lambda s: (s.q, s.p))
    return out


def _reduce(tau: complex) -> complex:
    """Gauss reduction into |Re| <= 1/2, |tau| >= 1."""
    t = tau
    for _ in range(512):
        t = complex(t.real - round(t.real), t.imag)
        if abs(t) >= 1.0 - 1e-15:
            return t
        t = -1.0 / t
    return t


def systole(tau: Point) -> float:
    """Length of the shortest slope, via lattice reduction."""
    return 1.0 / math.sqrt(_reduce(tau.z).imag)


def is_thick(tau: Point, epsilon: float) -> bool:
    return systole(tau) >= epsilon


def _marking_unbounded(tau: Point):
    """Shortest slope, then the shortest slope crossing it."""
    R = max(2.5, 2.0 / systole(tau))
    for _ in range(8):
        cands = sorted(short_curves(tau, R), key=lambda s: (curve_length(s, tau), s.q, s.p))
        if cands:
            alpha = cands[0]
            for beta in cands[1:]:
                if intersection_number(alpha, beta) >= 1:
                    return alpha, beta
        R *= 2.0
    raise ConstantDerivationError(f"no transversal pair found near tau={tau}")


def marking(tau: Point, F: float):
    """A shortest curve and a shortest transversal, both of length <= F."""
    alpha, beta = _marking_unbounded(tau)
    if curve_length(alpha, tau) > F or curve_length(beta, tau) > F:
        raise FViolationError(
            f"marking at {tau} has lengths "
            f"({curve_length(alpha, tau):.6f}, {curve_length(beta, tau):.6f}) > F={F}"
        )
    return alpha, beta


@dataclass(frozen=True)
class ThickParams:
    """Derived thick-part constants: systole floor, marking bound, count coefficient."""

    epsilon: float
    F: float
    short_curve_coeff: float


def short_curve_bound(R: float, params: ThickParams | None = None) -> int:
    """Integer bound ceil(coeff * R^2) on the number of R-short slopes at thick points."""
    if R <= 0:
        raise InvalidInputError("R must be positive")
    if params is None:
        params = default_thick_params()
    return math.ceil(params.short_curve_coeff * R * R)


def _bounded_trace_representatives(trace_bound: int):
    """Integer matrices of each trace in [3, trace_bound], entry bounds from reduction.

    Every conjugacy class of trace t contains a representative whose
    fixed-point quadratic is Gauss reduced, hence has |c| and |d - a| at most
    sqrt(t^2 - 4); sweeping that window visits every class at least once.
    Duplicates are harmless since only a minimum over classes is taken.
    """
    reps = []
    for t in range(3, trace_bound + 1):
        win = math.isqrt(t * t - 4) + 1
        for c in range(-win, win + 1):
            if c == 0:
                continue
            a_lo = (t - win) // 2 - 1
            a_hi = (t + win) // 2 + 1
            for a in range(a_lo, a_hi + 1):
                d = t - a
                if abs(d - a) > win:
                    continue
                num = a * d - 1
                if num % c != 0:
                    continue
                reps.append(MappingClass(a, num // c, c, d))
    return reps


def _axis_min_systole(m: MappingClass, samples: int) -> float:
    from .mcg import axis, translation_distance

    geo = axis(m).axis
    period = translation_distance(m)
    ts = [i * period / samples for i in range(samples)]
    vals = [systole(geo.point_at(t)) for t in ts]
    k = min(range(samples), key=lambda i: vals[i])
    # golden polish around the best sample
    lo = ts[k] - period / samples
    hi = ts[k] + period / samples
    for _ in range(64):
        m1 = lo + 0.381966011 * (hi - lo)
        m2 = hi - 0.381966011 * (hi - lo)
        if systole(geo.point_at(m1)) < systole(geo.point_at(m2)):
            hi = m2
        else:
            lo = m1
    return min(min(vals), systole(geo.point_at(0.5 * (lo + hi))))


@lru_cache(maxsize=32)
def _derive_thick_params_cached(L: float, axis_samples: int, grid: int, r_max: float, margin: float):
    from . import cache

    key = f"thick:L={L!r},axis_samples={axis_samples},grid={grid},r_max={r_max!r},margin={margin!r}"

    def compute():
        trace_bound = math.floor(2.0 * math.cosh(L) + 1e-12)
        if trace_bound < 3:
            raise ConstantDerivationError(f"no hyperbolic classes with translation <= {L}")
        reps = _bounded_trace_representatives(trace_bound)
        if not reps:
            raise ConstantDerivationError(f"trace enumeration up to {trace_bound} found nothing")
        epsilon = min(_axis_min_systole(m, axis_samples) for m in reps)

        # F and the count coefficient over the thick fundamental domain
        # {|Re| <= 1/2, |tau| >= 1, systole >= epsilon}; marking lengths and
        # short-curve counts are invariants of the lattice, so the domain covers
        # every thick point.
        y_top = 1.0 / (epsilon * epsilon)
        y_bot = math.sqrt(3.0) / 2.0
        f_raw = 0.0
        for i in range(grid + 1):
            x = -0.5 + i / grid
            for j in range(grid + 1):
                y = y_bot + (y_top - y_bot) * j / grid
                tau = Point(x, y)
                if abs(tau.z) < 1.0 or systole(tau) < epsilon:
                    continue
                alpha, beta = _marking_unbounded(tau)
                f_raw = max(f_raw, curve_length(beta, tau))
        if f_raw <= 0.0:
            raise ConstantDerivationError("thick fundamental-domain grid was empty")
        F = (1.0 + margin) * f_raw

        coeff_raw = 0.0
        cgrid = max(grid // 2, 8)
        r_values = [0.5 + 0.02 * k for k in range(int((r_max - 0.5) / 0.02) + 1)]
        for i in range(cgrid + 1):
            x = -0.5 + i / cgrid
            for j in range(cgrid + 1):
                y = y_bot + (y_top - y_bot) * j / cgrid
                tau = Point(x, y)
                if abs(tau.z) < 1.0 or systole(tau) < epsilon:
                    continue
                for R in r_values:
                    n = len(short_curves(tau, R))
                    coeff_raw = max(coeff_raw, n / (R * R))
        coeff = (1.0 + margin) * coeff_raw
        return {"epsilon": epsilon, "F": F, "short_curve_coeff": coeff}

    data = cache.memo(key, compute)
    return ThickParams(data["epsilon"], data["F"], data["short_curve_coeff"])


def derive_thick_params(L: float, *, axis_samples: int = 256, grid: int = 48,
                        r_max: float = 5.0, margin: float = 0.05) -> ThickParams:
    """Derive the systole floor along bounded-translation axes, the marking
    bound F, and the short-curve count coefficient, by bounded search with
    recorded grids and a stated margin."""
    if L < min_translation() - 1e-12:
        raise InvalidInputError(f"L={L} is below the least translation distance")
    return _derive_thick_params_cached(float(L), axis_samples, grid, float(r_max), float(margin))


def default_thick_params() -> ThickParams:
    """Thick parameters at the least admissible translation bound."""
    return derive_thick_params(min_translation())
