"""Tests for the command-line interface."""

import json

import pytest
import yaml

from motivic_series.__main__ import build_parser, job_config, load_settings, main, summarize_suites
from motivic_series.models import EngineSettings


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    """Run every command in an empty directory without MOTIVIC_* overrides."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("MOTIVIC_WORKERS", raising=False)
    monkeypatch.delenv("MOTIVIC_CONVENTIONS", raising=False)
    return tmp_path


def run_json(capsys, argv: list[str]) -> tuple[int, dict]:
    status = main([*argv, "--format", "json"])
    return status, json.loads(capsys.readouterr().out)


class TestSettings:
    def test_precedence(self, isolated, monkeypatch):
        """CLI flags beat the environment, which beats the YAML file."""
        config = isolated / "settings.yaml"
        config.write_text(yaml.safe_dump({"workers": 2, "rank_cap": 3}))
        monkeypatch.setenv("MOTIVIC_WORKERS", "3")

        args = build_parser().parse_args(["zeta", "--config", str(config)])
        assert load_settings(args).workers == 3
        assert load_settings(args).rank_cap == 3

        args = build_parser().parse_args(["zeta", "--config", str(config), "--workers", "4"])
        assert load_settings(args).workers == 4

    def test_job_config_echo(self):
        args = build_parser().parse_args(["blowup", "--b", "0;0;-1", "--order", "3"])
        config = job_config(args, EngineSettings())
        assert config.root_system == "A1"
        assert config.b == "0;0;-1"
        assert config.order == 3
        assert config.parameters == {}


class TestCommands:
    def test_zeta(self, capsys):
        status, data = run_json(capsys, ["zeta", "--order", "2"])
        assert status == 0
        assert data["config"]["command"] == "zeta"
        assert data["result"]["funceq_residual"] == "0"
        assert len(data["result"]["series"]["coefficients"]) == 3

    def test_zeta_table(self, capsys):
        assert main(["zeta", "--order", "2", "--spec", "point_count:3"]) == 0
        out = capsys.readouterr().out
        assert "exact through u^2" in out
        assert "13" in out

    def test_blowup_at_tate_one(self, capsys):
        status, data = run_json(capsys, ["blowup", "--b", "0;0;-1", "--order", "3", "--spec", "tate:1"])
        assert status == 0
        assert [c.get("0", "0") for c in data["result"]["coefficients"]] == ["1", "2", "0", "0"]

    def test_classify_torsors(self, capsys):
        status, data = run_json(capsys, ["classify-torsors", "--d", "2"])
        assert status == 0
        assert data["result"]["labels"] == ["-1;0;-2", "0;0;-2"]

    def test_eisenstein_layer(self, capsys):
        assert main(["eisenstein", "--b", "0;0;-1", "--grade", "2", "--layer", "0"]) == 0
        out = capsys.readouterr().out
        assert "q^0" in out
        assert "L^3 - L" in out

    def test_check_funceq_identity(self, capsys):
        status, data = run_json(capsys, ["check-funceq", "--grade", "4", "--w", "e", "--rank2"])
        assert status == 0
        assert data["result"]["passed"]
        assert [r["w"] for r in data["result"]["reports"]] == ["e", "rank 2"]

    def test_oracle_compare(self, capsys):
        status, data = run_json(capsys, ["oracle", "subbundles", "--q", "3", "--a1", "-1", "--compare"])
        assert status == 0
        assert data["result"]["count"] == 24
        assert data["result"]["agrees"]

    def test_check_specializations(self, isolated, capsys):
        suite = {
            "suite_name": "Quot",
            "check_cases": [
                {
                    "name": "quot",
                    "computation": "quot",
                    "parameters": {"order": 1},
                    "expected_results": [{"result_type": "count", "expected_value": 1}],
                },
                {
                    "name": "oracle",
                    "computation": "oracle",
                    "parameters": {"kind": "subsheaves", "q": 2, "a1": -1},
                    "expected_results": [{"result_type": "count", "expected_value": 15}],
                },
            ],
        }
        path = isolated / "suite.yaml"
        path.write_text(yaml.safe_dump(suite))

        assert main(["check-specializations", "--suite", str(path)]) == 1
        out = capsys.readouterr().out
        assert "Check Cases: 1/2 passed" in out
        assert "produces no count" in out

    def test_selftest_resolves_every_identity(self, isolated, capsys):
        suite = {
            "suite_name": "Quot",
            "check_cases": [
                {
                    "name": "quot_constant_term",
                    "computation": "quot",
                    "parameters": {"order": 2},
                    "expected_results": [
                        {"result_type": "coefficient", "test_type": "match", "monomial": 0, "expected_value": "1 + L"}
                    ],
                }
            ],
        }
        path = isolated / "suite.yaml"
        path.write_text(yaml.safe_dump(suite))

        status, data = run_json(capsys, ["selftest", "--suite", str(path)])
        assert status == 0
        assert data["result"]["unresolved"] == []
        record = data["result"]["record"]
        assert record["hall_action"] == "twisted"
        assert record["hall_forms_agree"]
        assert record["vanishing"]["hall"] == ["twisted"]
        assert record["vanishing"]["character"] == ["inverse/real"]
        assert "w/+1/-1" in record["vanishing"]["funceq"]


class TestErrors:
    def test_oracle_outside_bounds(self, capsys):
        assert main(["oracle", "subsheaves", "--q", "7", "--a1", "0"]) == 1
        assert capsys.readouterr().out == ""

    def test_stale_convention_record(self, isolated):
        record = isolated / "conventions.json"
        record.write_text(json.dumps({"table_hash": "stale"}))
        argv = ["hall", "--b", "0;0;-1", "--grade", "2", "--conventions", str(record)]
        assert main(argv) == 1

    def test_invalid_settings_file(self, isolated):
        config = isolated / "settings.yaml"
        config.write_text("rank_limit: 2\n")
        assert main(["zeta", "--config", str(config)]) == 1

    def test_malformed_label(self):
        assert main(["blowup", "--b", "1;0;-1"]) == 1

    def test_missing_suite_directory(self, isolated):
        assert main(["check-specializations", "--suite", str(isolated / "nowhere")]) == 1

    def test_missing_required_argument(self):
        with pytest.raises(SystemExit) as info:
            main(["theta"])
        assert info.value.code == 2


def test_summarize_suites_empty():
    assert summarize_suites([]) == "\n"
