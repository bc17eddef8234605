"""End-to-end command line runs, in process via main(argv)."""

import json

import pytest

from dixtrace.cli import main

HARMONIC = '{"kind": "law", "law": {"name": "power", "coef": 1.0, "power": 1.0}}'
SQUARE = '{"kind": "law", "law": {"name": "power", "coef": 1.0, "power": 2.0}}'
DYADIC = '{"kind": "law", "law": {"name": "dyadic"}}'
CONST_HALF = '{"kind": "const", "value": 0.5}'

ZETA_15 = 2.612375348685488
ZETA_20 = 1.6449340668482264


@pytest.fixture
def fast_config_file(tmp_path):
    cfg = {
        "ladder": {"n_min": 1 << 10, "n_max": 1 << 16, "ratio": 2.0},
        "dense_ladder": {"n_min": 1 << 10, "n_max": 1 << 15, "ratio": 2.0},
        "zeta_head": 5000,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def read_json(tmp_path, name):
    return json.loads((tmp_path / name).read_text())


class TestModel:
    def test_list_prints_registry(self, capsys):
        assert main(["model", "list"]) == 0
        out = capsys.readouterr().out
        assert "torus" in out and "nctorus" in out

    def test_unknown_action_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["model", "frobnicate"])
        assert exc.value.code == 2


class TestZeta:
    def test_values_against_reference(self, tmp_path, capsys):
        code = main(
            [
                "zeta",
                "--op", HARMONIC,
                "--s", "1.5,2.0",
                "--tol", "1e-9",
                "--output", str(tmp_path),
            ]
        )
        assert code == 0
        payload = read_json(tmp_path, "zeta.json")
        vals = {p["s"]: p["value"] for p in payload["points"]}
        assert vals[1.5] == pytest.approx(ZETA_15, abs=1e-9)
        assert vals[2.0] == pytest.approx(ZETA_20, abs=1e-9)
        assert all(p["tolerance_met"] for p in payload["points"])
        assert "backend" in payload["config_echo"]
        csv_lines = (tmp_path / "zeta.csv").read_text().strip().splitlines()
        assert csv_lines[0] == "s,value,error"
        assert len(csv_lines) == 3
        assert "value=" in capsys.readouterr().out

    def test_observable_weighting(self, tmp_path):
        main(
            [
                "zeta",
                "--op", HARMONIC,
                "--obs", CONST_HALF,
                "--s", "2.0",
                "--tol", "1e-9",
                "--output", str(tmp_path),
            ]
        )
        payload = read_json(tmp_path, "zeta.json")
        assert payload["points"][0]["value"] == pytest.approx(0.5 * ZETA_20, abs=1e-9)

    def test_s_at_most_one_exits_two(self, tmp_path, capsys):
        code = main(["zeta", "--op", HARMONIC, "--s", "0.9", "--output", str(tmp_path)])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_s_exits_two(self, tmp_path):
        assert main(["zeta", "--op", HARMONIC, "--s", "abc", "--output", str(tmp_path)]) == 2


class TestDixmier:
    def test_both_routes_on_harmonic(self, tmp_path, fast_config_file, capsys):
        code = main(
            [
                "dixmier",
                "--op", HARMONIC,
                "--config", fast_config_file,
                "--strict",
                "--output", str(tmp_path),
            ]
        )
        assert code == 0
        payload = read_json(tmp_path, "dixmier.json")
        assert payload["residue"]["value"] == pytest.approx(1.0, abs=1e-5)
        assert payload["log_average"]["value"] == pytest.approx(1.0, abs=5e-3)
        assert (tmp_path / "residue_curve.csv").exists()
        assert (tmp_path / "gamma.csv").exists()
        out = capsys.readouterr().out
        assert "residue route" in out and "log-average route" in out

    def test_log_route_unavailable_strict_fails(self, tmp_path, fast_config_file):
        complex_obs = '{"kind": "const", "re": 0.0, "im": 1.0}'
        code = main(
            [
                "dixmier",
                "--op", HARMONIC,
                "--obs", complex_obs,
                "--route", "log",
                "--config", fast_config_file,
                "--strict",
                "--output", str(tmp_path),
            ]
        )
        assert code == 1
        payload = read_json(tmp_path, "dixmier.json")
        assert "log_average_unavailable" in payload

    def test_deterministic_reruns(self, tmp_path, fast_config_file):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        argv = ["dixmier", "--op", HARMONIC, "--config", fast_config_file]
        assert main(argv + ["--output", str(d1)]) == 0
        assert main(argv + ["--output", str(d2)]) == 0
        assert (d1 / "dixmier.json").read_bytes() == (d2 / "dixmier.json").read_bytes()
        assert (d1 / "residue_curve.csv").read_bytes() == (d2 / "residue_curve.csv").read_bytes()


class TestMeasurable:
    def test_harmonic_measurable(self, tmp_path, fast_config_file, capsys):
        code = main(
            [
                "measurable",
                "--op", HARMONIC,
                "--config", fast_config_file,
                "--strict",
                "--output", str(tmp_path),
            ]
        )
        assert code == 0
        report = read_json(tmp_path, "measurable.json")
        assert report["verdict"] == "measurable"
        assert report["value"] == pytest.approx(1.0, abs=5e-3)
        assert "verdict: measurable" in capsys.readouterr().out

    def test_block_oscillation_fails_strict(self, tmp_path):
        code = main(["measurable", "--op", DYADIC, "--strict", "--output", str(tmp_path)])
        assert code == 1
        report = read_json(tmp_path, "measurable.json")
        assert report["verdict"] == "non-measurable"
        lo, hi = report["band"]
        assert hi - lo >= 0.1

    def test_vanishing_trace(self, tmp_path, fast_config_file):
        code = main(
            ["measurable", "--op", SQUARE, "--config", fast_config_file, "--output", str(tmp_path)]
        )
        assert code == 0
        report = read_json(tmp_path, "measurable.json")
        assert report["verdict"] == "measurable"
        assert abs(report["value"]) < 1e-3


class TestStructure:
    def test_constant_observable_agrees(self, tmp_path, fast_config_file, capsys):
        code = main(
            [
                "structure",
                "--op", HARMONIC,
                "--obs", '{"kind": "const", "value": 0.7}',
                "--config", fast_config_file,
                "--strict",
                "--output", str(tmp_path),
            ]
        )
        assert code == 0
        report = read_json(tmp_path, "structure.json")
        assert report["agreement"]["agree"]
        assert report["phi"]["value"] == pytest.approx(0.7, abs=1e-3)
        lines = (tmp_path / "diag.csv").read_text().strip().splitlines()
        assert lines[0] == "m,value"
        assert len(lines) > 100
        assert "agree=True" in capsys.readouterr().out

    def test_obs_flag_required(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["structure", "--op", HARMONIC, "--output", str(tmp_path)])
        assert exc.value.code == 2


class TestNormality:
    def test_full_run_passes(self, tmp_path, capsys):
        code = main(["normality", "--strict", "--output", str(tmp_path)])
        assert code == 0
        payload = read_json(tmp_path, "normality.json")
        assert payload["passed"]
        assert payload["grid_witness"]["passed"]
        assert payload["projection_witness"]["passed"]
        assert payload["monotone_convergence"]["passed"]
        assert payload["projection_witness"]["idempotency_defect"] < 1e-6
        out = capsys.readouterr().out
        assert out.count("pass") >= 3

    def test_theta_out_of_range_exits_two(self, tmp_path):
        assert main(["normality", "--theta", "1.5", "--output", str(tmp_path)]) == 2


class TestProptest:
    def test_lemma_suite_passes(self, tmp_path, capsys):
        code = main(
            ["proptest", "--suite", "lemmas", "--seed", "0", "--output", str(tmp_path)]
        )
        assert code == 0
        payload = read_json(tmp_path, "proptest.json")
        assert payload["failures"] == []
        assert payload["total"] > 0
        assert payload["seed"] == 0
        assert f"{payload['total']}/{payload['total']} checks passed" in capsys.readouterr().out

    def test_unknown_suite_exits_two(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["proptest", "--suite", "nope", "--output", str(tmp_path)])
        assert exc.value.code == 2


class TestInputHandling:
    def test_missing_operator_file_exits_two(self, tmp_path, capsys):
        code = main(
            ["dixmier", "--op", str(tmp_path / "nope.json"), "--output", str(tmp_path)]
        )
        assert code == 2
        assert "cannot read" in capsys.readouterr().err

    def test_broken_inline_json_exits_two(self, tmp_path, capsys):
        code = main(["dixmier", "--op", '{"kind": ', "--output", str(tmp_path)])
        assert code == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_non_numeric_const_exits_two(self, tmp_path, capsys):
        bad = '{"kind": "const", "value": [0.0, 1.0]}'
        code = main(["zeta", "--op", HARMONIC, "--obs", bad, "--s", "1.5", "--output", str(tmp_path)])
        assert code == 2
        assert "re" in capsys.readouterr().err

    def test_unknown_law_exits_two(self, tmp_path):
        bad = '{"kind": "law", "law": {"name": "cubic"}}'
        assert main(["zeta", "--op", bad, "--s", "1.5", "--output", str(tmp_path)]) == 2

    def test_operator_file_roundtrip(self, tmp_path, fast_config_file):
        op_path = tmp_path / "op.json"
        op_path.write_text(HARMONIC)
        code = main(
            [
                "measurable",
                "--op", str(op_path),
                "--config", fast_config_file,
                "--output", str(tmp_path),
            ]
        )
        assert code == 0
