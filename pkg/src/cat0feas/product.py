"""Weighted product of a space with itself, and the diagonal machinery.

For a base space (X, d) and a weight ``lam`` in (0, 1), the Cartesian square
X x X carries the metric

    D((x1,x2), (y1,y2)) = sqrt((1-lam) d(x1,y1)^2 + lam d(x2,y2)^2),

which is again geodesic (componentwise geodesics) and CAT(0) when the base is.
Averaging two self-maps on X reduces to composing two simple maps here: the
componentwise pair map followed by the metric projection onto the diagonal
{(x, x)}.  That projection has the closed form (c, c) with c = (1-lam)x1 +
lam x2, and the squared distance from any (x1, x2) to the diagonal equals
lam (1-lam) d(x1, x2)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NotDiagonalError
from .spaces import Point, Space


@dataclass(frozen=True)
class ConvexCombinationSpace(Space):
    """X x X with the lam-weighted quadratic-mean metric."""

    base: Space
    lam: float
    kind = "product"

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise DomainError(
                f"product weight must lie strictly in (0, 1), got {self.lam}"
            )

    @property
    def tolerance(self) -> float:
        return self.base.tolerance

    def _canonical(self, payload):
        first, second = payload
        if not isinstance(first, Point):
            first = self.base.point(first)
        if not isinstance(second, Point):
            second = self.base.point(second)
        self.base.require_member(first)
        self.base.require_member(second)
        return (first, second)

    def pair(self, first: Point, second: Point) -> Point:
        """Construct the product point (first, second)."""
        return self.point((first, second))

    def _distance(self, a, b):
        d1 = self.base.distance(a[0], b[0])
        d2 = self.base.distance(a[1], b[1])
        return math.sqrt((1.0 - self.lam) * d1 * d1 + self.lam * d2 * d2)

    def _interpolate(self, a, b, t):
        return (
            self.base.interpolate(a[0], b[0], t),
            self.base.interpolate(a[1], b[1], t),
        )

    def _sample(self, rng, scale):
        return (
            self.base.random_point(rng, scale),
            self.base.random_point(rng, scale),
        )

    def _reference(self):
        ref = self.base.reference_point()
        return (ref, ref)


def embed_diagonal(cs: ConvexCombinationSpace, x: Point) -> Point:
    """The diagonal embedding x -> (x, x); it is an isometry onto the diagonal."""
    cs.base.require_member(x)
    return Point(cs, (x, x))


def extract_diagonal(cs: ConvexCombinationSpace, p: Point, rel_tol: float = 1e-8) -> Point:
    """Inverse of the diagonal embedding for numerically diagonal pairs.

    Accepts (x1, x2) only when d(x1, x2) <= rel_tol * (1 + d(x1, ref)); the
    scale-aware bound keeps the test meaningful far from the base point.
    """
    cs.require_member(p)
    first, second = p.payload
    gap = cs.base.distance(first, second)
    scale = 1.0 + cs.base.distance(first, cs.base.reference_point())
    if gap > rel_tol * scale:
        raise NotDiagonalError(
            f"pair components are {gap:.3e} apart (allowed {rel_tol * scale:.3e})"
        )
    return first


def diagonal_combination(cs: ConvexCombinationSpace, p: Point) -> Point:
    """The base point c = (1-lam) x1 + lam x2 under the diagonal projection of p."""
    cs.require_member(p)
    first, second = p.payload
    return cs.base.interpolate(first, second, cs.lam)


def lift_best_pair(cs: ConvexCombinationSpace, a: Point, b: Point) -> tuple[Point, Point]:
    """Lift a base-space pair (a, b) to the product-space pair realizing the
    diagonal-to-rectangle distance: (((1-lam)a + lam b) twice, (a, b))."""
    u = cs.base.interpolate(a, b, cs.lam)
    return (Point(cs, (u, u)), Point(cs, (a, b)))


def squared_diagonal_gap(cs: ConvexCombinationSpace, set_a, set_b, tol: float = 1e-9) -> float:
    """Squared distance from the diagonal to A x B: lam (1-lam) d(A, B)^2."""
    from .analysis import set_distance  # runtime import; analysis sits above this module

    r = set_distance(set_a, set_b, tol=tol)
    return cs.lam * (1.0 - cs.lam) * r * r


def reduction_deviations(
    cs: ConvexCombinationSpace, base_points: list[Point], product_points: list[Point]
) -> list[float]:
    """Product-metric gaps between a base iteration and its product-space twin.

    Entry n is D((x_n, x_n), p_n); the averaged iteration and its reduction
    agree exactly when both are computed with the same base arithmetic.
    """
    n = min(len(base_points), len(product_points))
    return [
        cs.distance(embed_diagonal(cs, base_points[i]), product_points[i])
        for i in range(n)
    ]
