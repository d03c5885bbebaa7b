"""
Exact arithmetic on circle arcs
===============================

Everything downstream rests on one idea: points, arcs, and masses are
Fractions, so every set operation and every measure comparison is exact.
This walk-through builds a few arc sets by hand and shows the algebra.
"""

from fractions import Fraction

from itmlib import Arc, ArcSet, CirclePoint, arc, arcset

# A point on the circle is a rational in [0, 1); arithmetic wraps mod 1.
p = CirclePoint(Fraction(5, 6))
print("5/6 + 1/3 =", p + Fraction(1, 3))
print("distance(5/6, 1/12) =", p.distance_to(CirclePoint(Fraction(1, 12))))

# An arc is a start point plus a length, so it can wrap through 0.
wrapping = arc("3/4", "1/2")
print("\nwrapping arc:", wrapping, "contains 1/8:", wrapping.contains(CirclePoint(Fraction(1, 8))))

# Arc sets are canonical unions of disjoint arcs; each pair below is
# (start, length).  Construction merges overlapping and touching pieces,
# so equality is plain structural equality.
a = arcset(("0", "1/4"), ("1/4", "1/8"))
print("\nmerged:", a)

b = arcset(("1/3", "1/2"))
print("b =", b)
print("union:       ", a | b)
print("intersection:", a & b)
print("complement:  ", ~a)
print("difference:  ", b - a)

# Totals stay exact no matter how the pieces were produced.
print("\ntotal length of union:", (a | b).total_length)

# Translation is rigid and exact, including across the wrap point.
shifted = b.translate(Fraction(2, 3))
print("b + 2/3 =", shifted)
print("lengths preserved:", b.total_length == shifted.total_length)

# Subset queries answer the containment questions the attractor iteration
# asks at every step.
print("\nb inside [1/4, 1)?", b.is_subset_of(arcset(("1/4", "3/4"))))
print("full circle is one arc:", ArcSet.full(), "of length", ArcSet.full().total_length)
