"""Arcs and interval unions on the circle.

Everything downstream rests on one representation: a sorted disjoint
union of closed subintervals of [0, 1), with arcs that cross 0 stored as
two pieces.  This script walks through the basic algebra: building
unions from arcs, complements, intersections, and the subset test.
"""

import numpy as np

from arccover import (Arc, IntervalUnion, arcs_to_union, complement, covers,
                      intersect, make_finite, measure, union)

print("== from arcs to canonical unions ==")
plain = arcs_to_union([Arc(center=0.5, radius=0.1)])
print(f"arc at 0.5, radius 0.1      -> {plain.pieces}")

wrapped = arcs_to_union([Arc(center=0.0, radius=0.1)])
print(f"arc at 0.0 wraps the seam   -> {wrapped.pieces} (one torus arc, two pieces)")
print(f"   components on the torus: {wrapped.component_count()}")

merged = arcs_to_union([Arc(0.2, 0.1), Arc(0.35, 0.1)])
print(f"overlapping arcs merge      -> {merged.pieces}")

print()
print("== complement and measure ==")
comp = complement(wrapped)
print(f"complement of the seam arc  -> {comp.pieces}")
print(f"measures add to one: {measure(wrapped):.6f} + {measure(comp):.6f} = "
      f"{measure(wrapped) + measure(comp):.6f}")
print(f"complement is an involution: {complement(comp) == wrapped}")

print()
print("== intersection and covering ==")
a = IntervalUnion([(0.0, 0.5)])
b = IntervalUnion([(0.25, 0.75)])
print(f"{a.pieces} and {b.pieces} -> {intersect(a, b).pieces}")

big = IntervalUnion([(0.4, 0.6)])
print(f"(0.4,0.6) covers (0.45,0.55): {covers(big, IntervalUnion([(0.45, 0.55)]))}")
print(f"(0.4,0.6) covers (0.30,0.50): {covers(big, IntervalUnion([(0.3, 0.5)]))}")

point = make_finite([0.5]).approx
print(f"(0.4,0.6) covers the point 0.5: {covers(big, point)}")
print("covers(u, a) is exactly 'intersect(a, complement(u)) is empty':",
      intersect(point, complement(big)).is_empty())

print()
print("== random arcs, two routes to the same set ==")
rng = np.random.default_rng(1)
centers = rng.random(40)
ell = 0.02
u = arcs_to_union([Arc(float(c), ell / 2) for c in centers])
unc = complement(u)
print(f"40 arcs of length {ell}: covered measure {measure(u):.4f}, "
      f"{unc.component_count()} uncovered components")
print(f"union with its complement is the circle: "
      f"{measure(union(u, unc)):.6f}")
