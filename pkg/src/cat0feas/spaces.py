"""Geodesic metric spaces and the quadrilateral/comparison checks that certify
nonpositive curvature.

Every space exposes the same small surface: a distance, geodesic interpolation
written as ``(1-t)x + ty``, canonical point construction, and seeded random
sampling.  Concrete spaces implemented here are Euclidean R^n and the Poincare
disk (curvature -1); finite metric trees live in :mod:`cat0feas.trees` and the
weighted product construction in :mod:`cat0feas.product`.

Points are immutable values tagged with their owning space, so structural
equality is decidable and payloads can be hashed and serialized.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from .errors import DomainError, SpaceMismatchError

# Disk points must stay strictly inside the boundary; the metric diverges there.
DISK_MAX_NORM = 1.0 - 1e-9


@dataclass(frozen=True)
class Point:
    """A space-tagged element.

    The payload shape depends on the space: a coordinate tuple (Euclidean),
    an ``(edge_index, offset)`` pair (metric tree), a complex number with
    ``abs < 1`` (Poincare disk), or a pair of Points (product space).
    """

    space: "Space"
    payload: Any

    def __repr__(self):
        return f"Point({self.space.kind}, {self.payload!r})"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an inequality check: verdict plus the signed residual."""

    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


class Space(ABC):
    """A uniquely geodesic metric space.

    Subclasses implement the payload-level primitives; the public methods add
    membership checks, parameter validation, and exact endpoint handling.
    """

    kind: str
    tolerance: float

    # -- payload-level primitives -------------------------------------------

    @abstractmethod
    def _distance(self, a, b) -> float: ...

    @abstractmethod
    def _interpolate(self, a, b, t: float): ...

    @abstractmethod
    def _canonical(self, payload): ...

    @abstractmethod
    def _sample(self, rng, scale: float): ...

    @abstractmethod
    def _reference(self): ...

    # -- public surface ------------------------------------------------------

    def point(self, payload) -> Point:
        """Construct a canonical point of this space from a raw payload."""
        return Point(self, self._canonical(payload))

    def require_member(self, p: Point) -> None:
        if isinstance(p, Point) and (p.space is self or p.space == self):
            return
        raise SpaceMismatchError(
            f"point {p!r} does not belong to space {self.kind}"
        )

    def distance(self, x: Point, y: Point) -> float:
        self.require_member(x)
        self.require_member(y)
        return self._distance(x.payload, y.payload)

    def interpolate(self, x: Point, y: Point, t: float) -> Point:
        """The geodesic point (1-t)x + ty; endpoints are returned exactly."""
        self.require_member(x)
        self.require_member(y)
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"interpolation parameter {t} outside [0, 1]")
        if t == 0.0 or x.payload == y.payload:
            return x
        if t == 1.0:
            return y
        return Point(self, self._interpolate(x.payload, y.payload, t))

    def random_point(self, rng, scale: float = 1.0) -> Point:
        """A seeded random point; `scale` bounds its rough extent."""
        return Point(self, self._sample(rng, scale))

    def reference_point(self) -> Point:
        """A fixed base point, used for scale-aware tolerance comparisons."""
        return Point(self, self._reference())


@dataclass(frozen=True)
class EuclideanSpace(Space):
    """R^dim with the Euclidean metric; geodesics are straight segments."""

    dim: int
    tolerance: float = 1e-9
    kind = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"euclidean dimension must be >= 1, got {self.dim}")

    def _canonical(self, payload):
        coords = tuple(float(c) for c in payload)
        if len(coords) != self.dim:
            raise DomainError(
                f"expected {self.dim} coordinates, got {len(coords)}"
            )
        return coords

    def _distance(self, a, b):
        return math.dist(a, b)

    def _interpolate(self, a, b, t):
        return tuple(ai + t * (bi - ai) for ai, bi in zip(a, b))

    def _sample(self, rng, scale):
        return tuple(rng.uniform(-scale, scale) for _ in range(self.dim))

    def _reference(self):
        return (0.0,) * self.dim


@dataclass(frozen=True)
class PoincareDiskSpace(Space):
    """The open unit disk with the curvature -1 hyperbolic metric.

    Payloads are complex numbers u with |u| <= 1 - 1e-9; constructing a point
    closer to the boundary raises, since distances blow up there.  Distances
    use d(u,v) = 2 artanh |(u-v)/(1 - conj(u) v)|, which is better conditioned
    near u = v than the equivalent arccosh form.
    """

    tolerance: float = 1e-7
    kind = "poincare-disk"

    def _canonical(self, payload):
        if isinstance(payload, complex):
            u = payload
        else:
            x, y = payload
            u = complex(float(x), float(y))
        if abs(u) > DISK_MAX_NORM:
            raise DomainError(
                f"disk point {u} has norm {abs(u):.12f} > {DISK_MAX_NORM}"
            )
        return u

    def _distance(self, a, b):
        num = abs(a - b)
        if num == 0.0:
            return 0.0
        den = abs(1.0 - a.conjugate() * b)
        delta = num / den
        if delta >= 1.0:  # interior points keep delta < 1; guard rounding
            delta = math.nextafter(1.0, 0.0)
        return 2.0 * math.atanh(delta)

    def _interpolate(self, a, b, t):
        # Translate a to the origin (a Mobius isometry), move along the radial
        # geodesic by the right fraction of arc length, translate back.
        z = (b - a) / (1.0 - a.conjugate() * b)
        m = abs(z)
        if m == 0.0:
            return a
        w = math.tanh(t * math.atanh(m)) * (z / m)
        return (w + a) / (1.0 + a.conjugate() * w)

    def _sample(self, rng, scale):
        # Stay well inside the boundary so sampled distances remain O(1).
        rmax = 0.9 * min(1.0, scale)
        r = rmax * math.sqrt(rng.random())
        theta = rng.uniform(0.0, 2.0 * math.pi)
        return complex(r * math.cos(theta), r * math.sin(theta))

    def _reference(self):
        return 0j


# -- module-level operation surface ------------------------------------------


def distance(space: Space, x: Point, y: Point) -> float:
    return space.distance(x, y)


def interpolate(space: Space, x: Point, y: Point, t: float) -> Point:
    return space.interpolate(x, y, t)


def check_cn_inequality(
    space: Space, z: Point, x: Point, y: Point, t: float, tol: float | None = None
) -> CheckResult:
    """Comparison (CN) inequality at the geodesic point g = (1-t)x + ty.

    Evaluates d^2(z,g) - [(1-t) d^2(z,x) + t d^2(z,y) - t(1-t) d^2(x,y)];
    nonpositive residual (up to tol) certifies the CAT(0) comparison at this
    configuration.  Euclidean space attains equality.
    """
    if tol is None:
        tol = space.tolerance
    g = space.interpolate(x, y, t)
    residual = space.distance(z, g) ** 2 - (
        (1.0 - t) * space.distance(z, x) ** 2
        + t * space.distance(z, y) ** 2
        - t * (1.0 - t) * space.distance(x, y) ** 2
    )
    return CheckResult(residual <= tol, residual)


def check_four_point(
    space: Space, x: Point, y: Point, z: Point, w: Point, tol: float | None = None
) -> CheckResult:
    """Quadrilateral inequality equivalent to the CAT(0) condition.

    Evaluates d^2(x,z) + d^2(y,w) - [d^2(x,y) + d^2(y,z) + d^2(z,w) + d^2(w,x)]
    and passes when it is <= tol.
    """
    if tol is None:
        tol = space.tolerance
    residual = (
        space.distance(x, z) ** 2
        + space.distance(y, w) ** 2
        - space.distance(x, y) ** 2
        - space.distance(y, z) ** 2
        - space.distance(z, w) ** 2
        - space.distance(w, x) ** 2
    )
    return CheckResult(residual <= tol, residual)
