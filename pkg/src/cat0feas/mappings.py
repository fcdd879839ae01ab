"""Self-maps built from projections, and the nonexpansivity checkers.

Mappings are immutable callables tagged with their space.  Constructors cover
metric projections, composition, pointwise convex combination (the averaged
map ``(1-lam) T1 + lam T2`` evaluates to the geodesic point between the two
images), identity, constants, the componentwise pair map on a product space,
and the diagonal projection.

The checkers return signed residuals rather than booleans so callers can
assert quantiles or tolerances of their choosing:

  * firm nonexpansivity: d(Tx,Ty) <= d((1-t)x + tTx, (1-t)y + tTy) on a t-grid;
  * the quadratic variant ("property (P2)"):
      2 d^2(Tx,Ty) <= d^2(x,Ty) + d^2(y,Tx) - d^2(x,Tx) - d^2(y,Ty),
    which every metric projection in a CAT(0) space satisfies.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import DomainError
from .product import ConvexCombinationSpace
from .sets import ConvexSet, DiagonalSet
from .spaces import Point, Space


class Mapping(ABC):
    """An evaluable self-map of a space."""

    kind: str

    @property
    @abstractmethod
    def space(self) -> Space: ...

    @abstractmethod
    def __call__(self, x: Point) -> Point: ...


@dataclass(frozen=True)
class ProjectionMap(Mapping):
    """Metric projection onto a convex set."""

    target: ConvexSet
    kind = "projection"

    @property
    def space(self):
        return self.target.space

    def __call__(self, x):
        return self.target.project(x)


@dataclass(frozen=True)
class ComposeMap(Mapping):
    """outer after inner."""

    outer: Mapping
    inner: Mapping
    kind = "compose"

    def __post_init__(self):
        if self.outer.space != self.inner.space:
            raise DomainError("composed mappings must share a space")

    @property
    def space(self):
        return self.outer.space

    def __call__(self, x):
        return self.outer(self.inner(x))


@dataclass(frozen=True)
class ConvexCombinationMap(Mapping):
    """x -> (1-lam) T1(x) + lam T2(x), the geodesic point between the images."""

    first: Mapping
    second: Mapping
    lam: float
    kind = "convex-combination"

    def __post_init__(self):
        if self.first.space != self.second.space:
            raise DomainError("combined mappings must share a space")
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"combination weight must be in (0, 1), got {self.lam}")

    @property
    def space(self):
        return self.first.space

    def __call__(self, x):
        return self.space.interpolate(self.first(x), self.second(x), self.lam)


@dataclass(frozen=True)
class IdentityMap(Mapping):
    owner: Space
    kind = "identity"

    @property
    def space(self):
        return self.owner

    def __call__(self, x):
        self.owner.require_member(x)
        return x


@dataclass(frozen=True)
class ConstantMap(Mapping):
    value: Point
    kind = "constant"

    @property
    def space(self):
        return self.value.space

    def __call__(self, x):
        self.space.require_member(x)
        return self.value


@dataclass(frozen=True)
class PairMap(Mapping):
    """(x1, x2) -> (T1 x1, T2 x2) on a weighted product space.

    When T1 and T2 are projections onto A and B this is exactly the projection
    onto the rectangle A x B.
    """

    owner: ConvexCombinationSpace
    first: Mapping
    second: Mapping
    kind = "pair-map"

    def __post_init__(self):
        if self.first.space != self.owner.base or self.second.space != self.owner.base:
            raise DomainError("pair map factors must act on the product's base space")

    @property
    def space(self):
        return self.owner

    def __call__(self, x):
        self.owner.require_member(x)
        x1, x2 = x.payload
        return Point(self.owner, (self.first(x1), self.second(x2)))


def diagonal_projection(cs: ConvexCombinationSpace) -> ProjectionMap:
    """The metric projection onto the diagonal of a product space."""
    return ProjectionMap(DiagonalSet(cs))


def averaged_projections(set_a: ConvexSet, set_b: ConvexSet, lam: float) -> ConvexCombinationMap:
    """The averaged-projection map (1-lam) P_A + lam P_B."""
    return ConvexCombinationMap(ProjectionMap(set_a), ProjectionMap(set_b), lam)


def evaluate(mapping: Mapping, x: Point) -> Point:
    return mapping(x)


def fixed_point_residual(mapping: Mapping, x: Point) -> float:
    """d(x, Tx); zero exactly at fixed points."""
    return mapping.space.distance(x, mapping(x))


def check_p2(mapping: Mapping, x: Point, y: Point) -> float:
    """Signed residual of the quadratic firm-nonexpansivity inequality.

    Returns 2 d^2(Tx,Ty) - [d^2(x,Ty) + d^2(y,Tx) - d^2(x,Tx) - d^2(y,Ty)];
    nonpositive (up to numeric noise) when the mapping satisfies the property.
    """
    space = mapping.space
    tx, ty = mapping(x), mapping(y)
    return 2.0 * space.distance(tx, ty) ** 2 - (
        space.distance(x, ty) ** 2
        + space.distance(y, tx) ** 2
        - space.distance(x, tx) ** 2
        - space.distance(y, ty) ** 2
    )


def check_firmly_nonexpansive(
    mapping: Mapping, x: Point, y: Point, t_grid=(0.0, 0.25, 0.5, 0.75, 1.0)
) -> float:
    """Max over the t-grid of d(Tx,Ty) - d((1-t)x + tTx, (1-t)y + tTy)."""
    space = mapping.space
    tx, ty = mapping(x), mapping(y)
    base = space.distance(tx, ty)
    worst = -float("inf")
    for t in t_grid:
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"firm-nonexpansivity grid value {t} outside [0, 1]")
        lhs = base - space.distance(
            space.interpolate(x, tx, t), space.interpolate(y, ty, t)
        )
        if lhs > worst:
            worst = lhs
    return worst
