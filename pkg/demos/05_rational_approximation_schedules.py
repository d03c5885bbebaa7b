"""
Approximating a map while preserving its orbit collisions
=========================================================

Replacing breakpoints and shifts by nearby rationals changes which
endpoint orbits collide.  Harvested collision relations can be imposed
on every approximation level, so the combinatorics that matter survive
the rounding.  Measures of the levels then give a convergent sequence.
"""

from fractions import Fraction

from itmlib import (
    detect_convergence,
    detect_relations,
    generate_approximants,
    measure_sequence,
    orbit_collision_preservation,
)
from itmlib.catalog import double_rotation, fibonacci_up_to, golden_mean, rotation
from itmlib.measure import Measure

# A rational rotation returns to its start: one relation q*c = p.  Keeping
# it forces every approximant to be the same rotation.
rot = rotation(Fraction(3, 8))
system = detect_relations(rot, depth=16)
for rel in system:
    print("relation: visits", rel.l, "wraps", rel.w, "side", rel.side.value)

# The golden rotation, approximated along Fibonacci denominator bounds:
# each level's invariant measure is exactly Lebesgue, so the sequence is
# trivially Cauchy and the limit candidate is Lebesgue itself.
schedule = generate_approximants(
    rotation(golden_mean()), denominators=fibonacci_up_to(200)
)
print("\nbounds:", [level.bound for level in schedule.levels])
print("level shifts:", [str(level.map.shifts[0]) for level in schedule.levels[:5]], "...")
levels = measure_sequence(schedule)
print("all levels Lebesgue:",
      all(lm.measure == Measure.lebesgue() for lm in levels))
conv = detect_convergence([lm.measure for lm in levels], tol=0)
print("Cauchy from level:", conv.cauchy_from)

# A two-piece map with a declared relation between its shifts: every
# level satisfies the relation exactly even where the data was rounded,
# and each witnessed collision replays with the same itinerary.
target = double_rotation(Fraction(13, 32), Fraction(13, 32), Fraction(9, 64))
system = detect_relations(target, depth=16)
print("\ntwo-piece target relations:", len(system))
schedule = generate_approximants(
    target, relations=system, denominators=fibonacci_up_to(500, start=34)
)
for level in schedule.levels:
    residuals = [
        rel.residual(
            [b.value for b in level.map.breakpoints], list(level.map.shifts)
        )
        for rel in system
    ]
    rounded = "rounded" if level.map != target else "exact"
    print(f"  bound {level.bound:>3}: {rounded:7}  residuals {residuals}")

report = orbit_collision_preservation(schedule, relations=system, depth=16)
print("collisions replayed:", report.checked,
      " uniform from level:", report.uniform_from)
