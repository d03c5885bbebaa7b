"""Arc algebra on the circle: canonical forms, set operations, translation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itmlib.circle import Arc, ArcSet, CirclePoint, arc, arcset, frac, mod1

F = Fraction


def rational(max_denominator=2**20):
    return st.fractions(
        min_value=0, max_value=1, max_denominator=max_denominator
    ).filter(lambda q: q < 1)


def arc_strategy():
    length = st.fractions(min_value=0, max_value=1, max_denominator=256).filter(
        lambda q: q > 0
    )
    return st.builds(lambda s, l: Arc(CirclePoint(s), l), rational(256), length)


arcsets = st.builds(ArcSet, st.lists(arc_strategy(), max_size=8))


class TestCirclePoint:
    def test_reduces_mod_one(self):
        assert CirclePoint(F(5, 4)) == CirclePoint(F(1, 4))
        assert CirclePoint(F(-1, 4)).value == F(3, 4)
        assert CirclePoint(F(1)).value == 0

    def test_shift_arithmetic(self):
        p = CirclePoint(F(3, 4))
        assert (p + F(1, 2)).value == F(1, 4)
        assert (p - F(3, 4)).value == 0

    def test_gap_and_distance(self):
        a, b = CirclePoint(F(7, 8)), CirclePoint(F(1, 8))
        assert a.gap_to(b) == F(1, 4)
        assert b.gap_to(a) == F(3, 4)
        assert a.distance_to(b) == F(1, 4)

    @given(rational(), rational())
    def test_equality_is_exact(self, x, y):
        assert (CirclePoint(x) == CirclePoint(y)) == (x == y)


class TestNormalize:
    def test_adjacent_merge(self):
        s = arcset((0, "1/2"), ("1/2", "1/4"))
        assert s.arcs == (arc(0, "3/4"),)

    def test_wrapping_containment(self):
        s = ArcSet([arc("3/4", "1/2"), arc(0, "1/8")])
        assert s.arcs == (arc("3/4", "1/2"),)
        assert s.total_length == F(1, 2)

    def test_empty(self):
        s = ArcSet([])
        assert s.arcs == ()
        assert s.total_length == 0

    def test_full_circle_canonical(self):
        s = ArcSet([arc(0, "1/2"), arc("1/2", "1/2")])
        assert s == ArcSet.full()
        assert s.arcs == (arc(0, 1),)

    def test_wrap_merge_at_zero(self):
        # halves meeting at 0 from both sides fuse into one wrapping arc
        s = arcset(("7/8", "1/8"), (0, "1/8"))
        assert s.arcs == (arc("7/8", "1/4"),)

    def test_overlap_collapses(self):
        s = arcset((0, "1/2"), ("1/4", "1/2"))
        assert s.arcs == (arc(0, "3/4"),)

    @given(arcsets)
    def test_idempotent(self, s):
        assert ArcSet(s.arcs) == s

    @given(arcsets)
    def test_at_most_one_wrapping_arc_stored_last(self, s):
        wrapping = [a for a in s.arcs if a.wraps]
        assert len(wrapping) <= 1
        if wrapping:
            assert s.arcs[-1].wraps


class TestIntersect:
    def test_basic_overlap(self):
        assert arcset((0, "1/2")) & arcset(("1/4", "1/2")) == arcset(("1/4", "1/4"))

    def test_full_circle_identity(self):
        s = arcset(("1/8", "1/4"), ("2/3", "1/5"))
        assert s & ArcSet.full() == s

    def test_disjoint(self):
        assert arcset((0, "1/4")) & arcset(("1/2", "1/4")) == ArcSet.empty()

    @given(arcsets, arcsets)
    def test_length_bounded_by_min(self, a, b):
        assert (a & b).total_length <= min(a.total_length, b.total_length)


class TestComplement:
    def test_half(self):
        assert ~arcset((0, "1/2")) == arcset(("1/2", "1/2"))

    def test_full_circle(self):
        assert ~ArcSet.full() == ArcSet.empty()

    def test_two_arcs(self):
        s = arcset(("1/4", "1/4"), ("3/4", "1/4"))
        assert ~s == arcset((0, "1/4"), ("1/2", "1/4"))

    @given(arcsets)
    def test_lengths_sum_to_one(self, s):
        assert s.total_length + (~s).total_length == 1

    @given(arcsets)
    def test_involution(self, s):
        assert ~~s == s


class TestTranslate:
    def test_plain_shift(self):
        assert arcset((0, "1/4")).translate(F(1, 2)) == arcset(("1/2", "1/4"))

    def test_split_and_rewrap(self):
        # [3/4,1)∪[0,1/8) shifted by 1/8 lands as one arc wrapping through 0
        s = ArcSet([arc("3/4", "1/4"), arc(0, "1/8")])
        assert s.translate(F(1, 8)).arcs == (arc("7/8", "3/8"),)

    def test_zero_shift_identity(self):
        s = arcset(("1/3", "1/7"), ("5/6", "1/12"))
        assert s.translate(0) == s

    @given(arcsets, rational(64))
    def test_bijection_preserving_length(self, s, c):
        t = s.translate(c)
        assert t.total_length == s.total_length
        assert t.translate(-c) == s


class TestSetAlgebra:
    @given(arcsets, arcsets)
    def test_inclusion_exclusion(self, a, b):
        assert (a | b).total_length + (a & b).total_length == (
            a.total_length + b.total_length
        )

    @given(arcsets, arcsets)
    def test_difference_partitions(self, a, b):
        assert (a - b) | (a & b) == a

    @given(arcsets, arcsets)
    def test_subset_relation(self, a, b):
        assert (a & b).is_subset_of(a)
        assert a.is_subset_of(a | b)

    def test_subset_negative(self):
        assert not arcset((0, "1/2")).is_subset_of(arcset((0, "1/4")))


class TestMembership:
    def test_wrapping_arc_contains(self):
        a = arc("3/4", "1/2")
        assert a.contains(CirclePoint(F(7, 8)))
        assert a.contains(CirclePoint(F(0)))
        assert a.contains(CirclePoint(F(1, 8)))
        assert not a.contains(CirclePoint(F(1, 4)))
        assert not a.contains(CirclePoint(F(1, 2)))

    def test_half_open_ends(self):
        a = arc("1/4", "1/4")
        assert a.contains(CirclePoint(F(1, 4)))
        assert not a.contains(CirclePoint(F(1, 2)))

    def test_randomized_membership_matches_inputs(self):
        # scaled-down sweep of the raw-arc vs normalized membership oracle
        rng = random.Random(20260824)
        for _ in range(300):
            raw = []
            for _ in range(rng.randint(1, 6)):
                q = rng.randint(2, 2**20)
                start = F(rng.randrange(q), q)
                length = F(rng.randint(1, q), q)
                raw.append(Arc(CirclePoint(start), min(length, F(1))))
            s = ArcSet(raw)
            for _ in range(100):
                q = rng.randint(2, 2**20)
                p = CirclePoint(F(rng.randrange(q), q))
                assert s.contains(p) == any(a.contains(p) for a in raw)

    @given(arcsets, rational(512))
    def test_membership_consistent_with_complement(self, s, x):
        p = CirclePoint(x)
        assert s.contains(p) != (~s).contains(p) or s.total_length in (0, 1)


class TestHelpers:
    def test_frac_coercions(self):
        assert frac("2/6") == F(1, 3)
        assert frac(2) == 2
        assert frac(CirclePoint(F(1, 3))) == F(1, 3)

    def test_mod1(self):
        assert mod1("9/4") == F(1, 4)
        assert mod1(-3) == 0

    def test_arc_rejects_bad_length(self):
        with pytest.raises(ValueError):
            arc(0, 0)
        with pytest.raises(ValueError):
            arc(0, "9/8")

    def test_repr_round_readable(self):
        assert "3/4" in repr(arc(0, "3/4"))
