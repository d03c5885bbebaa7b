"""
Empirical measures, their defect, and a map with no invariant measure
=====================================================================

Averaging point masses along an orbit gives an empirical measure whose
distance from its own pushforward is exactly 2/m on an open orbit: only
the two endpoints differ.  For most maps these averages settle onto an
invariant measure.  The halving map on [0, 1] with T(0) = 1 shows the
opposite: its averages drift to the point 0, where no mass can stay.
"""

from fractions import Fraction

from itmlib import (
    cdf_distance,
    empirical_measure,
    verify_limit_measure,
    visit_frequency,
)
from itmlib.catalog import halving_map, rotation
from itmlib.families import PolynomialFamily
from itmlib.measure import Measure
from itmlib.piecewise import from_itm, wandering_discontinuity_check

# Rotation by a golden-mean convergent: after 10^5 steps the empirical
# measure is uniform to better than one part in a thousand.
rot = from_itm(rotation(Fraction(2584, 4181)))
emp = empirical_measure(rot, Fraction(1, 3), m=10**5)
print("defect of the rotation orbit:", emp.defect)
print("Kolmogorov distance to Lebesgue:",
      float(cdf_distance(emp.measure, Measure.lebesgue())))

# The defect identity is exact: pushing the average forward moves 1/m of
# mass from the start of the orbit to its far end, nothing else.
small = empirical_measure(rot, Fraction(1, 3), m=100)
print("\nm=100 defect:", small.defect, " verified:", small.verify_defect())

# The halving map: every orbit from x0 > 0 slides monotonically toward
# the discontinuity at 0 and never reaches it.  The visit frequency
# f(m, eps) of the eps-neighborhood of 0 tends to 1 for every eps, so
# the orbit parks ever more of its time where no invariant mass can sit.
t = halving_map()
print("\nhalving map discontinuities:", t.discontinuities)
table = visit_frequency(
    t, Fraction(1), ms=[16, 64, 256], epsilons=[Fraction(1, 4), Fraction(1, 64)]
)
for entry in table.entries:
    print(f"  m={entry.m:>3}  eps={entry.eps}  f={entry.frequency}")
print("verdict:", table.verdict.value)

# Orbits return to a neighborhood of the discontinuity over and over;
# this recurrence is what pumps mass toward the bad point.
(probe,) = wandering_discontinuity_check(t, radii=[Fraction(1, 8)], horizon=64)
print("\nreturn to within 1/8 of 0:", probe.verdict,
      " after", probe.return_time, "steps")

# The only candidate limit is the point mass at 0, and it fails the mass
# test there: a measure sitting on the discontinuity cannot be invariant.
# With the test function x -> x the invariance defect is the full jump.
delta = Measure.point_mass(0)
report = verify_limit_measure(t, delta, family=PolynomialFamily(1))
print("\ncandidate delta_0: mass within", report.deltas[-1], "of H is",
      report.masses[-1])
print("failed hypotheses:", report.failures)
print("residual against x -> x:", report.residual)
