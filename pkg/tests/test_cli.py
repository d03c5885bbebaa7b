"""End-to-end command runs: exit codes, report contents, artifacts."""

import json

import pytest

from itmlib.catalog import golden_mean
from itmlib.cli import main


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = None
    if captured.out.strip().startswith("{"):
        report = json.loads(captured.out)
    return code, report, captured.err


HALF_COLLAPSE = {"breakpoints": ["0", "1/2"], "shifts": ["0", "1/2"]}
HALVING = {
    "domain": "segment",
    "pieces": [{"interval": ["0", "1"], "affine": {"a": "1/2", "b": "0"}}],
    "boundaryValues": {"0": "1"},
}


class TestValidate:
    def test_valid_itm(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        code, report, _ = run(capsys, "validate", "--config", cfg)
        assert code == 0
        assert report["valid"] is True
        assert report["kind"] == "itm"
        assert report["commonDenominator"] == 2

    def test_unsorted_breakpoints_name_the_index(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"breakpoints": ["1/2", "1/4"], "shifts": ["0", "0"]}
        )
        code, _, err = run(capsys, "validate", "--config", cfg)
        assert code == 1
        assert "index 1" in err

    def test_valid_piecewise(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALVING})
        code, report, _ = run(capsys, "validate", "--config", cfg)
        assert code == 0
        assert report["kind"] == "piecewise"
        assert report["discontinuities"] == ["0"]

    def test_unreadable_config(self, tmp_path, capsys):
        code, _, err = run(capsys, "validate", "--config", str(tmp_path / "no.json"))
        assert code == 1
        assert "cannot read config" in err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        code, _, err = run(capsys, "validate", "--config", str(path))
        assert code == 1
        assert "not valid JSON" in err


class TestAttractor:
    def test_half_collapse_stabilizes_at_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        code, report, _ = run(capsys, "attractor", "--config", cfg)
        assert code == 0
        assert report["finiteType"] == "yes"
        assert report["stabilizedAt"] == 1
        assert report["attractor"] == {
            "arcs": [{"start": "0", "length": "1/2"}]
        }

    def test_exhausted_iteration_budget_is_exit_two(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        code, _, err = run(capsys, "attractor", "--config", cfg, "--max-iter", "1")
        assert code == 2
        assert "itm.attractor" in err

    def test_plot_artifact(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        out = tmp_path / "out"
        code, _, _ = run(
            capsys, "attractor", "--config", cfg, "--out", str(out), "--plot"
        )
        assert code == 0
        assert (out / "report.json").exists()
        svg = (out / "attractor.svg").read_text()
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


class TestMeasure:
    def test_half_collapse_measure(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        out = tmp_path / "out"
        code, report, _ = run(capsys, "measure", "--config", cfg, "--out", str(out))
        assert code == 0
        assert report["invarianceResidualExact"] == "0"
        assert report["nonAtomic"] is True
        assert report["measure"]["density"] == [
            {"arc": {"start": "0", "length": "1/2"}, "weight": "2"}
        ]
        assert (out / "cdf.csv").read_text().startswith("x,F(x)\n")

    def test_reports_are_deterministic_modulo_timestamp(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            run(capsys, "measure", "--config", cfg, "--out", str(out), "--plot")
            text = (out / "report.json").read_text()
            outputs.append(
                "\n".join(
                    line
                    for line in text.splitlines()
                    if '"generatedAt"' not in line
                )
            )
        assert outputs[0] == outputs[1]
        assert (tmp_path / "a" / "density.svg").read_bytes() == (
            tmp_path / "b" / "density.svg"
        ).read_bytes()


class TestHomtervals:
    def test_rational_rotation_has_periodic_domains(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"breakpoints": ["0"], "shifts": ["1/3"]})
        code, report, _ = run(
            capsys, "homtervals", "--config", cfg, "--depth", "3"
        )
        assert code == 0
        assert report["genericity"] == "not generic"
        assert len(report["homtervals"]) == 3
        assert all(h["resolved"] for h in report["homtervals"])


class TestRelations:
    def test_rotation_return_relation(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"breakpoints": ["0"], "shifts": ["1/3"]})
        code, report, _ = run(capsys, "relations", "--config", cfg, "--depth", "3")
        assert code == 0
        (rel,) = report["relations"]
        assert (rel["i"], rel["j"], rel["l"], rel["w"]) == (0, 0, [3], 1)
        assert rel["residual"] == "0"


class TestApproximate:
    def test_golden_rotation_levels_all_lebesgue(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "target": {
                    "breakpoints": ["0"],
                    "shifts": [str(golden_mean())],
                },
                "denominators": [2, 3, 5, 8, 13, 21],
            },
        )
        code, report, _ = run(
            capsys, "approximate", "--config", cfg, "--tol", "0"
        )
        assert code == 0
        assert len(report["levels"]) == 6
        lebesgue = [{"arc": {"start": "0", "length": "1"}, "weight": "1"}]
        for level in report["levels"]:
            assert level["measure"]["density"] == lebesgue
        conv = report["convergence"]
        assert conv["cauchyFrom"] == 0
        assert conv["limitCandidate"]["density"] == lebesgue

    def test_levels_flag_truncates(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "target": {"breakpoints": ["0"], "shifts": [str(golden_mean())]},
                "denominators": [2, 3, 5, 8],
            },
        )
        code, report, _ = run(
            capsys, "approximate", "--config", cfg, "--levels", "2"
        )
        assert code == 0
        assert [lvl["bound"] for lvl in report["levels"]] == [2, 3]

    def test_contradictory_relations_are_a_config_error(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "target": {"breakpoints": ["0", "1/2"], "shifts": ["1/3", "1/4"]},
                "declaredRelations": [{"i": 1, "j": 0, "l": [1, 0], "w": 0}],
                "denominators": [4],
            },
        )
        code, _, err = run(capsys, "approximate", "--config", cfg)
        assert code == 1
        assert "generate_approximants" in err


class TestConjugate:
    def test_half_collapse_induces_the_identity(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALF_COLLAPSE})
        out = tmp_path / "out"
        code, report, _ = run(
            capsys, "conjugate", "--config", cfg, "--out", str(out), "--plot"
        )
        assert code == 0
        assert report["induced"] == {"breakpoints": ["0"], "shifts": ["0"]}
        assert report["verification"]["lengthsOk"] is True
        assert report["verification"]["overlapLength"] == "0"
        assert report["semiConjugacy"]["clean"] is True
        assert (out / "conjugacy.csv").read_text().startswith("x,h(x)\n")
        assert (out / "h.svg").exists()

    def test_non_invariant_supplied_measure_is_exit_three(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "map": HALF_COLLAPSE,
                "measure": {
                    "density": [
                        {"arc": {"start": "0", "length": "1"}, "weight": "1"}
                    ],
                    "atoms": [],
                },
            },
        )
        code, _, err = run(capsys, "conjugate", "--config", cfg)
        assert code == 3
        assert "induce_iem" in err


class TestEmpirical:
    def test_halving_orbit_report(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "map": HALVING,
                "x0": "1",
                "m": 64,
                "epsilons": ["1/4", "1/32"],
                "wandering": {"radii": ["1/8"], "horizon": 3},
            },
        )
        out = tmp_path / "out"
        code, report, _ = run(
            capsys, "empirical", "--config", cfg, "--out", str(out)
        )
        assert code == 0
        assert report["defect"] == "1/32"
        assert report["defectVerified"] is True
        assert report["visitFrequency"]["verdict"] == "violated"
        (probe,) = report["wandering"]
        assert probe["verdict"] == "return found"
        assert probe["returnTime"] == 1
        assert (out / "visit-frequency.csv").read_text().startswith("m,eps,f\n")

    def test_orbit_from_the_discontinuity_is_exit_three(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALVING, "x0": "0", "m": 4})
        code, _, err = run(capsys, "empirical", "--config", cfg)
        assert code == 3
        assert "piecewise.orbit" in err

    def test_missing_start_is_drawn_from_the_seed(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"map": HALVING, "m": 4})
        code_a, report_a, _ = run(
            capsys, "empirical", "--config", cfg, "--seed", "7"
        )
        code_b, report_b, _ = run(
            capsys, "empirical", "--config", cfg, "--seed", "7"
        )
        assert code_a == code_b == 0
        assert report_a["config"]["x0"] == report_b["config"]["x0"]
        assert report_a["basePoint"] == report_a["config"]["x0"]


class TestVerifyLimit:
    def test_lebesgue_under_rotation_passes(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "map": {"breakpoints": ["0"], "shifts": ["1/4"]},
                "measure": {
                    "density": [
                        {"arc": {"start": "0", "length": "1"}, "weight": "1"}
                    ],
                    "atoms": [],
                },
            },
        )
        code, report, _ = run(capsys, "verify-limit", "--config", cfg)
        assert code == 0
        assert report["massOk"] is True
        assert report["residualOk"] is True
        assert report["failures"] == []

    def test_dirac_at_the_discontinuity_fails(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "map": HALVING,
                "measure": {
                    "density": [],
                    "atoms": [{"point": "0", "mass": "1"}],
                },
                "family": {"kind": "polynomial", "degree": 1},
            },
        )
        code, _, err = run(capsys, "verify-limit", "--config", cfg)
        assert code == 3
        assert "verify_limit_measure" in err

    def test_unknown_family_kind_is_a_config_error(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "map": HALVING,
                "measure": {"density": [], "atoms": [{"point": "0", "mass": "1"}]},
                "family": {"kind": "splines"},
            },
        )
        code, _, err = run(capsys, "verify-limit", "--config", cfg)
        assert code == 1
        assert "family" in err
