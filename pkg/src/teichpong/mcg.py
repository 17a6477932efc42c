"""Mapping classes of the modular torus as projective integer matrices.

A class is a 2x2 integer matrix of determinant one, identified with its
negative.  Classification, independence and word arithmetic are exact
integer computations; axes and translation distances are floating point
with stated tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ClassificationError, DichotomyViolationError, InvalidInputError
from .hyp2 import BoundaryPoint, Geodesic, Mobius, Point


class Classification(str, Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    PSEUDO_ANOSOV = "pseudo_anosov"


def _canonical_sign(a, b, c, d):
    for v in (a, b, c, d):
        if v != 0:
            return (a, b, c, d) if v > 0 else (-a, -b, -c, -d)
    raise InvalidInputError("zero matrix is not a mapping class")


@dataclass(frozen=True)
class MappingClass:
    """Integer matrix of determinant one, stored with a canonical sign.

    The first nonzero entry of (a, b, c, d) is made positive, so projective
    equality is plain equality.  Entries are arbitrary-precision.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = (int(self.a), int(self.b), int(self.c), int(self.d))
        if a * d - b * c != 1:
            raise InvalidInputError(f"determinant must be exactly 1, got {a * d - b * c}")
        a, b, c, d = _canonical_sign(a, b, c, d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MappingClass":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_string(cls, text: str) -> "MappingClass":
        parts = text.split(",")
        if len(parts) != 4:
            raise InvalidInputError(f"expected 'a,b,c,d', got {text!r}")
        try:
            return cls(*(int(p.strip()) for p in parts))
        except ValueError as exc:
            raise InvalidInputError(f"matrix entries must be integers: {text!r}") from exc

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __mul__(self, other: "MappingClass") -> "MappingClass":
        return MappingClass(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MappingClass":
        return MappingClass(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "MappingClass":
        if n < 0:
            return self.inverse() ** (-n)
        result = MappingClass.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugated_by(self, g: "MappingClass") -> "MappingClass":
        return g * self * g.inverse()

    def is_projective_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def to_mobius(self) -> Mobius:
        return Mobius(float(self.a), float(self.b), float(self.c), float(self.d))

    def apply(self, z: Point) -> Point:
        return self.to_mobius().apply(z)

    def __str__(self):
        return f"{self.a},{self.b},{self.c},{self.d}"


@dataclass(frozen=True)
class AxisData:
    """Invariant geodesic of a hyperbolic class with its dynamical data."""

    axis: Geodesic
    repelling: BoundaryPoint
    attracting: BoundaryPoint
    translation: float
    dilatation: float


def classify(m: MappingClass) -> Classification:
    """Trace trichotomy, decided by exact integer comparison with 2."""
    t = abs(m.trace)
    if t > 2:
        return Classification.PSEUDO_ANOSOV
    if t == 2:
        return Classification.PARABOLIC
    return Classification.ELLIPTIC


def _require_pa(m: MappingClass):
    if classify(m) is not Classification.PSEUDO_ANOSOV:
        raise ClassificationError(f"matrix {m} has trace {m.trace}, need |trace| > 2")


def axis(m: MappingClass) -> AxisData:
    """Axis endpoints are the roots of c x^2 + (d - a) x - b = 0.

    The attracting endpoint is the eigendirection of the eigenvalue
    exceeding one; the origin is the summit of the semicircle.  Integer
    hyperbolic matrices always have c != 0, so both endpoints are finite
    quadratic irrationals.
    """
    _require_pa(m)
    a, b, c, d = m.entries()
    if a + d < 0:
        a, b, c, d = -a, -b, -c, -d
    disc = math.sqrt(float((a + d) * (a + d) - 4))
    x_att = ((a - d) + disc) / (2.0 * c)
    x_rep = ((a - d) - disc) / (2.0 * c)
    lam = (float(a + d) + disc) / 2.0
    summit = Point(0.5 * (x_att + x_rep), 0.5 * abs(x_att - x_rep))
    attracting = BoundaryPoint.finite(x_att)
    repelling = BoundaryPoint.finite(x_rep)
    geo = Geodesic(repelling, attracting, summit)
    return AxisData(geo, repelling, attracting, math.log(lam), lam)


def translation_distance(m: MappingClass) -> float:
    """log of the expanding eigenvalue; realized on the axis."""
    _require_pa(m)
    t = abs(m.trace)
    return math.log((t + math.sqrt(float(t * t - 4))) / 2.0)


def min_translation() -> float:
    """Least translation distance over the whole group: log((3 + sqrt 5)/2).

    Hyperbolic integer matrices have |trace| >= 3 and the eigenvalue is
    increasing in |trace|, so the trace-3 classes realize the minimum.
    """
    return math.log((3.0 + math.sqrt(5.0)) / 2.0)


def _fixed_quadratic(m: MappingClass):
    # coefficients of c x^2 + (d - a) x - b, sign-invariant as a root set
    return (m.c, m.d - m.a, -m.b)


def _share_fixed_point(m1: MappingClass, m2: MappingClass) -> bool:
    """Exact resultant test: do the fixed-point quadratics share a root?"""
    a1, b1, c1 = _fixed_quadratic(m1)
    a2, b2, c2 = _fixed_quadratic(m2)
    res = (a1 * c2 - a2 * c1) ** 2 - (a1 * b2 - a2 * b1) * (b1 * c2 - b2 * c1)
    return res == 0


def independent(m1: MappingClass, m2: MappingClass) -> bool:
    """True iff the projective commutator is nontrivial (exact integers).

    Commuting hyperbolic classes share both axis endpoints.  A pair with a
    nontrivial commutator but a common fixed point would break the
    equal-or-disjoint dichotomy and is surfaced as an error.
    """
    _require_pa(m1)
    _require_pa(m2)
    comm = m1 * m2 * m1.inverse() * m2.inverse()
    if comm.is_projective_identity():
        return False
    if _share_fixed_point(m1, m2):
        raise DichotomyViolationError(
            f"classes {m1} and {m2} do not commute yet share a boundary fixed point"
        )
    return True


def fixed_slope_test(m: MappingClass) -> Optional["Slope"]:
    """Fixed primitive eigenvector for |trace| = 2; None for hyperbolic classes.

    Elliptic classes have no real eigendirection and also return None.  The
    projective identity fixes every slope and is rejected.
    """
    from .torus_model import Slope

    t = m.trace
    if abs(t) != 2:
        return None
    if m.is_projective_identity():
        raise InvalidInputError("the identity class fixes every slope")
    a, b, c, d = m.entries()
    if t == -2:
        a, b, c, d = -a, -b, -c, -d
    p, q = (b, 1 - a) if (b, 1 - a) != (0, 0) else (0, 1)
    g = math.gcd(abs(p), abs(q))
    return Slope.canonical(p // g, q // g)
