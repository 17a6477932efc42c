"""Exact-formula geometry of the model plane.

The model space is the open upper half-plane carrying one half of the
standard curvature -1 metric.  With this normalization the translation
distance of an integer hyperbolic matrix equals the logarithm of its
expanding eigenvalue, and unit-speed geodesics satisfy c(t) = i e^{2t}
on the imaginary axis.

Everything here is a pure function of immutable values; all distances,
feet and parameters come from closed formulas, with log-of-sum forms
(asinh/acosh via math) wherever naive evaluation would cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, InvalidInputError

#: default tolerance for geometric consistency checks
TOL = 1e-9


@dataclass(frozen=True)
class Point:
    """A point x + iy of the model plane, y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"non-finite point ({self.x}, {self.y})")
        if self.y <= 0.0:
            raise InvalidInputError(f"point must have positive height, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "Point":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary value: a finite real number or the distinguished infinity."""

    value: float = 0.0
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite and not math.isfinite(self.value):
            raise InvalidInputError("finite boundary point must be a finite real")

    @classmethod
    def finite(cls, x: float) -> "BoundaryPoint":
        return cls(float(x), False)

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(0.0, True)

    def __repr__(self):
        return "oo" if self.infinite else f"{self.value!r}"


def dist(z: Point, w: Point) -> float:
    """Model distance, stable for nearby points: asinh(|z-w| / (2 sqrt(y1 y2)))."""
    return math.asinh(abs(z.z - w.z) / (2.0 * math.sqrt(z.y * w.y)))


def _dist_c(z: complex, w: complex) -> float:
    return math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


@dataclass(frozen=True)
class Mobius:
    """A real unit-determinant fractional-linear map of the half plane."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or abs(det - 1.0) > 1e-12:
            raise InvalidInputError(f"determinant must be 1, got {det}")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_det_positive(cls, a, b, c, d) -> "Mobius":
        """Normalize any positive-determinant real matrix to determinant 1."""
        det = a * d - b * c
        if not det > 0:
            raise InvalidInputError(f"matrix must have positive determinant, got {det}")
        r = math.sqrt(det)
        return cls(a / r, b / r, c / r, d / r)

    def compose(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def apply_complex(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply(self, z: Point) -> Point:
        w = self.apply_complex(z.z)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)) or w.imag <= 0.0:
            raise InvalidInputError(f"image of {z} left the half plane: {w}")
        return Point(w.real, w.imag)

    def apply_boundary(self, xi: BoundaryPoint) -> BoundaryPoint:
        if xi.infinite:
            if self.c == 0.0:
                return BoundaryPoint.infinity()
            return BoundaryPoint.finite(self.a / self.c)
        den = self.c * xi.value + self.d
        if den == 0.0:
            return BoundaryPoint.infinity()
        return BoundaryPoint.finite((self.a * xi.value + self.b) / den)


class ProjectionResult:
    """Foot of the nearest-point projection together with its parameter."""

    __slots__ = ("foot", "t")

    def __init__(self, foot: Point, t: float):
        self.foot = foot
        self.t = t

    def __iter__(self):
        return iter((self.foot, self.t))

    def __repr__(self):
        return f"ProjectionResult(foot={self.foot}, t={self.t})"


@dataclass(frozen=True)
class Geodesic:
    """Oriented bi-infinite geodesic with a marked unit-speed origin.

    The parametrization satisfies c(0) = origin and c(t) -> endpoint_pos as
    t -> +oo.  Internally the geodesic stores the chart: the unique
    determinant-1 map u with u(0) = endpoint_neg, u(oo) = endpoint_pos and
    u(i) = origin, so that c(t) = u(i e^{2t}).
    """

    endpoint_neg: BoundaryPoint
    endpoint_pos: BoundaryPoint
    origin: Point
    chart: Mobius = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.endpoint_neg == self.endpoint_pos:
            raise DegenerateInputError("geodesic endpoints must be distinct")
        object.__setattr__(self, "chart", self._build_chart())

    def _build_chart(self) -> Mobius:
        x0, y0 = self.origin.x, self.origin.y
        neg, pos = self.endpoint_neg, self.endpoint_pos
        if neg.infinite and pos.infinite:
            raise DegenerateInputError("geodesic endpoints must be distinct")
        if pos.infinite:
            # upward vertical line over neg.value
            p = neg.value
            if abs(x0 - p) > TOL * max(1.0, abs(p)):
                raise InvalidInputError("origin is not on the geodesic")
            return Mobius.from_det_positive(y0, p, 0.0, 1.0)
        if neg.infinite:
            # downward vertical line over pos.value
            q = pos.value
            if abs(x0 - q) > TOL * max(1.0, abs(q)):
                raise InvalidInputError("origin is not on the geodesic")
            return Mobius.from_det_positive(q, -y0, 1.0, 0.0)
        p, q = neg.value, pos.value
        if p == q:
            raise DegenerateInputError("geodesic endpoints must be distinct")
        center, radius = 0.5 * (p + q), 0.5 * abs(q - p)
        if abs((x0 - center) ** 2 + y0 * y0 - radius * radius) > TOL * max(1.0, radius * radius):
            raise InvalidInputError("origin is not on the geodesic")
        ratio = (q - x0) / (x0 - p)
        if not ratio > 0.0:
            raise InvalidInputError("origin is not between the endpoints")
        s = math.sqrt(ratio)
        sg = 1.0 if q > p else -1.0
        return Mobius.from_det_positive(q, sg * p * s, 1.0, sg * s)

    def point_at(self, t: float) -> Point:
        return self.chart.apply(Point(0.0, math.exp(2.0 * t)))

    def reversed(self) -> "Geodesic":
        return Geodesic(self.endpoint_pos, self.endpoint_neg, self.origin)

    def param_of(self, z: Point) -> float:
        """Projection parameter of z; feet of perpendiculars on c(0,oo) are i|w|."""
        w = self.chart.inverse().apply_complex(z.z)
        return 0.5 * math.log(abs(w))

    def params_of_array(self, zs: np.ndarray) -> np.ndarray:
        """Vectorized projection parameters for an array of complex points.

        Points that collapse onto an ideal endpoint in floating point get the
        limit parameter -inf / +inf, which is the correct membership answer.
        """
        m = self.chart.inverse()
        with np.errstate(divide="ignore", invalid="ignore"):
            w = (m.a * zs + m.b) / (m.c * zs + m.d)
            out = 0.5 * np.log(np.abs(w))
        bad = np.isnan(out)
        if bad.any():
            if not np.isfinite(zs[bad]).all():
                raise InvalidInputError("non-finite input point in projection batch")
            # a finite point hitting the chart pole is the positive endpoint,
            # which is where high powers collapse their images in floats
            out[bad] = np.inf
        return out

    def boundary_param(self, xi: BoundaryPoint) -> float:
        """Parameter of the foot of the perpendicular dropped from an ideal point.

        Returns -inf / +inf when xi is an endpoint of the geodesic itself.
        """
        w = self.chart.inverse().apply_boundary(xi)
        if w.infinite:
            return math.inf
        if w.value == 0.0:
            return -math.inf
        return 0.5 * math.log(abs(w.value))


def apply(m: Mobius, z: Point) -> Point:
    return m.apply(z)


def transport(m: Mobius, c: Geodesic) -> Geodesic:
    """Image geodesic with the transported orientation and origin."""
    return Geodesic(
        m.apply_boundary(c.endpoint_neg),
        m.apply_boundary(c.endpoint_pos),
        m.apply(c.origin),
    )


def geodesic_through(z: Point, w: Point) -> Geodesic:
    """The oriented geodesic from z toward w, with origin z."""
    if z == w or abs(z.z - w.z) <= 1e-13 * max(1.0, abs(z.z)):
        raise DegenerateInputError("need two distinct points")
    if abs(z.x - w.x) <= 1e-13 * max(1.0, abs(z.x), abs(w.x)):
        # vertical line
        if w.y > z.y:
            return Geodesic(BoundaryPoint.finite(z.x), BoundaryPoint.infinity(), z)
        return Geodesic(BoundaryPoint.infinity(), BoundaryPoint.finite(z.x), z)
    center = (abs(z.z) ** 2 - abs(w.z) ** 2) / (2.0 * (z.x - w.x))
    radius = abs(z.z - center)
    if w.x > z.x:
        return Geodesic(BoundaryPoint.finite(center - radius), BoundaryPoint.finite(center + radius), z)
    return Geodesic(BoundaryPoint.finite(center + radius), BoundaryPoint.finite(center - radius), z)


def point_at(c: Geodesic, t: float) -> Point:
    return c.point_at(t)


def project(c: Geodesic, z: Point) -> ProjectionResult:
    """Nearest point of c to z; single-valued since the plane is uniquely geodesic."""
    t = c.param_of(z)
    return ProjectionResult(c.point_at(t), t)


def dist_to_geodesic(c: Geodesic, z: Point) -> float:
    """Distance from z to the image of c: half asinh(|Re w| / Im w) in the chart."""
    w = c.chart.inverse().apply_complex(z.z)
    if w.imag <= 0.0:
        raise InvalidInputError("point left the half plane under the chart")
    return 0.5 * math.asinh(abs(w.real) / w.imag)
