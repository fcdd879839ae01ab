#!/usr/bin/env python3
"""Tour of the geodesic spaces: distances, geodesics, and curvature checks.

Four concrete spaces ship with the library: Euclidean R^n, finite metric
trees, the Poincare disk, and the weighted product of a space with itself.
All expose the same surface: distance, geodesic interpolation, sampling.
"""

import math
import random

import cat0feas as cf

rng = random.Random(0)

# -- Euclidean plane ---------------------------------------------------------

e2 = cf.EuclideanSpace(2)
x, y = e2.point((0, 0)), e2.point((3, 4))
print("Euclidean R^2")
print("  d((0,0),(3,4)) =", cf.distance(e2, x, y))
print("  quarter point  =", cf.interpolate(e2, e2.point((0, 0)), e2.point((2, 0)), 0.25).payload)

# -- metric tree -------------------------------------------------------------

tri = cf.tripod()  # center O, three unit legs to A, B, C
A, B, C, O = (tri.vertex(v) for v in "ABCO")
print("\nTripod tree (three unit legs)")
print("  d(A, C) =", tri.distance(A, C), " (path through the center)")
mid = tri.interpolate(A, B, 0.5)
print("  midpoint of A and B is the center:", mid == O)

# Trees are negatively curved in a strict sense: the comparison residual of
# the three leaf points is strictly negative.
res = cf.check_cn_inequality(tri, C, A, B, 0.5, tol=0.0)
print("  comparison residual at the leaves:", res.residual)

# -- Poincare disk ------------------------------------------------------------

disk = cf.PoincareDiskSpace()
o, p = disk.point((0, 0)), disk.point((0.5, 0))
print("\nPoincare disk (curvature -1)")
print("  d(0, 0.5) =", disk.distance(o, p), "= ln 3 =", math.log(3))
print("  geodesic midpoint:", disk.interpolate(o, p, 0.5).payload)

# -- weighted product ----------------------------------------------------------

cs = cf.ConvexCombinationSpace(e2, lam=0.25)
pair1 = cs.pair(e2.point((0, 0)), e2.point((0, 0)))
pair2 = cs.pair(e2.point((2, 0)), e2.point((4, 0)))
print("\nWeighted product of R^2 with itself, weight 0.25")
print("  D(pair1, pair2) =", cs.distance(pair1, pair2))
print("  = sqrt(0.75 * 2^2 + 0.25 * 4^2) =", math.sqrt(0.75 * 4 + 0.25 * 16))

# -- randomized curvature certification ----------------------------------------

print("\nFour-point and comparison inequalities on 2000 random samples:")
for space, tol in ((e2, 1e-12), (tri, 1e-12), (disk, 1e-8), (cs, 1e-12)):
    worst = -math.inf
    for _ in range(2000):
        a, b, c, d = (space.random_point(rng) for _ in range(4))
        worst = max(
            worst,
            cf.check_four_point(space, a, b, c, d, tol).residual,
            cf.check_cn_inequality(space, c, a, b, rng.random(), tol).residual,
        )
    print(f"  {space.kind:10s} max residual {worst:+.2e}  (tolerance {tol})")
