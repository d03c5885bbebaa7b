"""JSON and CSV round-trips for maps, measures, and schedules."""

from fractions import Fraction

import pytest

from itmlib.approx import Relation
from itmlib.catalog import half_collapse, halving_map, two_shift_example
from itmlib.circle import arcset
from itmlib.conjugacy import induce_iem
from itmlib.itm import Side
from itmlib.measure import Measure, attractor_measure
from itmlib.piecewise import Domain, GeneralPiece, PiecewiseMap, visit_frequency
from itmlib.serialize import (
    arcset_from_json,
    arcset_to_json,
    cdf_csv,
    conjugacy_csv,
    itm_from_json,
    itm_to_json,
    measure_from_json,
    measure_to_json,
    parse_rational,
    parse_schedule_config,
    piecewise_from_json,
    piecewise_to_json,
    rat,
    relation_from_json,
    relation_to_json,
    visit_frequency_csv,
)

F = Fraction


class TestRationals:
    def test_lowest_terms(self):
        assert rat(F(2, 4)) == "1/2"
        assert rat(2) == "2"
        assert rat(F(0)) == "0"

    def test_parse_accepts_fractions_integers_and_decimals(self):
        assert parse_rational("1/3") == F(1, 3)
        assert parse_rational(5) == 5
        assert parse_rational("0.25") == F(1, 4)

    def test_parse_rejects_junk(self):
        with pytest.raises(ValueError):
            parse_rational(True)
        with pytest.raises(ValueError):
            parse_rational("1/0")
        with pytest.raises(ValueError):
            parse_rational(None)


class TestMapRoundTrips:
    def test_itm(self):
        s = two_shift_example()
        d = itm_to_json(s)
        assert d == {"breakpoints": ["0", "1/2"], "shifts": ["1/3", "1/4"]}
        assert itm_from_json(d) == s

    def test_itm_missing_fields(self):
        with pytest.raises(ValueError):
            itm_from_json({"breakpoints": ["0"]})

    def test_arcset_with_wrap(self):
        a = arcset(("3/4", "1/2"))
        d = arcset_to_json(a)
        assert d == {"arcs": [{"start": "3/4", "length": "1/2"}]}
        assert arcset_from_json(d) == a

    def test_measure(self):
        mu = Measure(
            ((F(0), F(1, 2), F(3, 2)),),
            ((F(1, 4), F(1, 8)), (F(3, 4), F(1, 8))),
        )
        d = measure_to_json(mu)
        assert d["density"] == [
            {"arc": {"start": "0", "length": "1/2"}, "weight": "3/2"}
        ]
        assert measure_from_json(d) == mu

    def test_piecewise(self):
        t = halving_map()
        d = piecewise_to_json(t)
        assert d["domain"] == "segment"
        assert d["pieces"] == [
            {"interval": ["0", "1"], "affine": {"a": "1/2", "b": "0"}}
        ]
        assert d["boundaryValues"] == {"0": "1"}
        assert d["discontinuities"] == ["0"]
        assert piecewise_from_json(d) == t

    def test_piecewise_empty_discontinuity_list_is_explicit(self):
        t = halving_map()
        d = piecewise_to_json(t)
        d["discontinuities"] = []
        assert piecewise_from_json(d).discontinuities == ()

    def test_black_box_pieces_have_no_serial_form(self):
        t = PiecewiseMap(
            domain=Domain.SEGMENT,
            pieces=(GeneralPiece(F(0), F(1), lambda x: x),),
        )
        with pytest.raises(ValueError):
            piecewise_to_json(t)


class TestRelations:
    def test_declared_round_trip(self):
        rel = Relation(i=1, j=0, l=(0, 1), w=1)
        assert relation_to_json(rel) == {"i": 1, "j": 0, "l": [0, 1], "w": 1}
        assert relation_from_json({"i": 1, "j": 0, "l": [0, 1], "w": 1}) == rel

    def test_witnessed_relation_exports_its_witness(self):
        rel = Relation(
            i=0, j=0, l=(2,), w=1, side=Side.RIGHT, itinerary=(0, 0)
        )
        d = relation_to_json(rel)
        assert d["side"] == "right"
        assert d["itinerary"] == [0, 0]

    def test_bad_relation_entry(self):
        with pytest.raises(ValueError):
            relation_from_json({"i": 0, "j": 0})


class TestScheduleConfig:
    def test_full_config(self):
        parsed = parse_schedule_config(
            {
                "target": {"breakpoints": ["0", "1/2"], "shifts": ["0", "1/2"]},
                "declaredRelations": [{"i": 1, "j": 0, "l": [1, 0], "w": 0}],
                "denominators": [2, 4, 8],
                "precision": "1/100",
            }
        )
        assert parsed["target"] == half_collapse()
        assert parsed["relations"] == [Relation(i=1, j=0, l=(1, 0), w=0)]
        assert parsed["denominators"] == [2, 4, 8]
        assert parsed["precision"] == F(1, 100)

    def test_decimal_target_parses_exactly(self):
        parsed = parse_schedule_config(
            {"target": {"breakpoints": ["0"], "shifts": ["0.625"]}}
        )
        assert parsed["target"].shifts == (F(5, 8),)
        assert parsed["relations"] is None
        assert parsed["precision"] == 0

    def test_bad_denominators(self):
        with pytest.raises(ValueError):
            parse_schedule_config(
                {
                    "target": {"breakpoints": ["0"], "shifts": ["1/2"]},
                    "denominators": [0],
                }
            )


class TestCsv:
    def test_cdf_csv_at_breaklist(self):
        mu = Measure(((F(0), F(1, 2), F(2)),))
        assert cdf_csv(mu) == "x,F(x)\n0,0\n1/2,1\n1,1\n"

    def test_visit_frequency_csv(self):
        table = visit_frequency(
            halving_map(), F(1), 4, epsilons=(F(1, 4),)
        )
        assert visit_frequency_csv(table) == "m,eps,f\n4,1/4,1/2\n"

    def test_conjugacy_csv_shape(self):
        s = half_collapse()
        data = induce_iem(s, attractor_measure(s), samples=4)
        lines = conjugacy_csv(data).strip().split("\n")
        assert lines[0] == "x,h(x)"
        assert len(lines) == 5
        x, hx = lines[1].split(",")
        assert parse_rational(hx) == data.h.at(parse_rational(x))
