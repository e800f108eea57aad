import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from fleximrt.cli import main
from fleximrt.schemas import CalculationRequest, ScenarioRequest
from fleximrt.service import app

from conftest import FIXTURES, fixture_json

client = TestClient(app, raise_server_exceptions=False)


def _run(args, **kwargs):
    return CliRunner().invoke(main, args, **kwargs)


def test_health():
    reply = client.get("/api/v1/health")
    assert reply.status_code == 200
    body = reply.json()
    assert body["status"] == "ok"
    assert body["name"] == "fleximrt"


def test_size_endpoint_reference_demo():
    reply = client.post("/api/v1/size", json=fixture_json("appendix_demo.json"))
    assert reply.status_code == 200
    body = reply.json()
    assert body["n"] == 73
    assert round(body["achieved_power"], 2) == 0.80
    assert body["sentence"] == (
        "The required sample size is 73 to attain 80% power "
        "when the significance level is 0.05.")


def test_size_endpoint_rejects_zero_days():
    config = dict(fixture_json("appendix_demo.json"), days=0)
    reply = client.post("/api/v1/size", json=config)
    assert reply.status_code == 422
    body = reply.json()
    assert body["code"] == "validation_error"
    assert any("days must be >= 1" in v["message"] for v in body["violations"])


def test_malformed_json_gets_400():
    reply = client.post("/api/v1/size", content=b"{not json",
                        headers={"content-type": "application/json"})
    assert reply.status_code == 400
    assert reply.json()["code"] == "malformed_json"


def test_unknown_field_gets_422():
    config = dict(fixture_json("appendix_demo.json"), dayz=12)
    reply = client.post("/api/v1/size", json=config)
    assert reply.status_code == 422
    assert reply.json()["code"] == "validation_error"


def test_infeasible_request_gets_422_infeasible():
    config = dict(fixture_json("appendix_demo.json"), beta_mean=1e-5,
                  beta_initial=1e-6)
    reply = client.post("/api/v1/size", json=config)
    assert reply.status_code == 422
    assert reply.json()["code"] == "infeasible"


def test_evaluate_endpoint_power_sentence():
    config = dict(fixture_json("appendix_demo.json"), SS=73, result="choice_power")
    reply = client.post("/api/v1/evaluate", json=config)
    assert reply.status_code == 200
    assert reply.json()["sentence"] == (
        "The sample size 73 gives 80% power when the significance level is 0.05")


def test_cli_size_text_sentence():
    result = _run(["size", "--config", str(FIXTURES / "appendix_demo.json")])
    assert result.exit_code == 0, result.output
    assert result.output.strip() == (
        "The required sample size is 73 to attain 80% power "
        "when the significance level is 0.05.")


def test_cli_power_text_sentence():
    result = _run(["power", "--config", str(FIXTURES / "appendix_demo.json"),
                   "--ss", "73"])
    assert result.exit_code == 0, result.output
    assert result.output.strip() == (
        "The sample size 73 gives 80% power when the significance level is 0.05")


def test_cli_inline_flags_match_config():
    result = _run([
        "size", "--days", "180", "--category-counts", "3,1",
        "--adding-days", "1,91", "--beta-shape", "linear and constant",
        "--beta-initial", "0.01", "--beta-mean", "0.1",
        "--beta-quadratic-max", "28,28,28,118",
        "--tau-shape", "constant", "--tau-mean", "0.7", "--tau-initial", "0.7",
        "--test", "hotelling N-q-1", "--pow", "0.8", "--sig-lev", "0.05"])
    assert result.exit_code == 0, result.output
    assert "The required sample size is 73" in result.output


def test_cli_config_conflicts_with_inline_flags():
    result = _run(["size", "--config", str(FIXTURES / "appendix_demo.json"),
                   "--days", "180"])
    assert result.exit_code == 2
    assert "conflicts" in result.output


def test_cli_malformed_probability_matrix(tmp_path):
    config = fixture_json("appendix_demo.json")
    config["randomization"] = [[0.3, 0.3, 0.3, 0.3, 0.0]] * 180
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(config))
    result = _run(["size", "--config", str(path)])
    assert result.exit_code == 2
    assert "row_sum" in result.output


def test_cli_coverage_sentence():
    result = _run(["coverage", "--config", str(FIXTURES / "diamante_precision.json"),
                   "--ss", "86"])
    assert result.exit_code == 0, result.output
    assert result.output.strip() == (
        "The sample size 86 gives 95% coverage probability "
        "when the significance level is 0.05")


def test_cli_power_command_rejects_precision_config():
    result = _run(["power", "--config", str(FIXTURES / "diamante_precision.json"),
                   "--ss", "86"])
    assert result.exit_code == 2


def test_cli_infeasible_requests_exit_3():
    result = _run(["power", "--config", str(FIXTURES / "appendix_demo.json"),
                   "--ss", "5"])
    assert result.exit_code == 3
    tiny = _run(["size", "--days", "44", "--category-counts", "3",
                 "--adding-days", "1", "--beta-shape", "constant",
                 "--beta-mean", "0.00001"])
    assert tiny.exit_code == 3


def test_cli_json_matches_http_response():
    result = _run(["size", "--config", str(FIXTURES / "appendix_demo.json"),
                   "--format", "json"])
    assert result.exit_code == 0
    via_cli = json.dumps(json.loads(result.output), sort_keys=True)
    reply = client.post("/api/v1/size", json=fixture_json("appendix_demo.json"))
    via_http = json.dumps(reply.json(), sort_keys=True)
    assert via_cli == via_http


def test_cli_validate_accepts_fixture():
    result = _run(["validate", "--config", str(FIXTURES / "diamante_constant.json")])
    assert result.exit_code == 0
    assert result.output.strip() == "valid"


def test_cli_validate_rejects_bad_schedule(tmp_path):
    config = fixture_json("appendix_demo.json")
    config["adding_days"] = [1, 300]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(config))
    result = _run(["validate", "--config", str(path)])
    assert result.exit_code == 2
    assert "schedule_range" in result.output


def test_cli_simulate_writes_csv(tmp_path):
    scenario = fixture_json("scenarios/correct_model.json")
    scenario["replicates"] = 30
    scenario["n"] = 20
    scenario["truth"]["days"] = 30
    scenario["truth"]["adding_days"] = [1, 16]
    scenario["truth"]["beta_quadratic_max"] = [28, 28, 28, 30]
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario))
    out = tmp_path / "rows.csv"
    result = _run(["simulate", "--config", str(path), "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "scenario_id,stat,n,replicates,fraction,se,failures"
    cells = lines[1].split(",")
    assert cells[0] == "correct_model" and cells[2] == "20" and cells[3] == "30"


def test_simulate_endpoint_small_run():
    scenario = fixture_json("scenarios/correct_model.json")
    scenario.update(replicates=20, n=20)
    scenario["truth"]["days"] = 30
    scenario["truth"]["adding_days"] = [1, 16]
    scenario["truth"]["beta_quadratic_max"] = [28, 28, 28, 30]
    reply = client.post("/api/v1/simulate", json=scenario)
    assert reply.status_code == 200
    rows = reply.json()["results"]
    assert len(rows) == 1
    assert rows[0]["replicates"] == 20
    assert 0.0 <= rows[0]["fraction"] <= 1.0


def test_effect_curves_endpoint():
    reply = client.post("/api/v1/effect-curves",
                        json=fixture_json("appendix_demo.json"))
    assert reply.status_code == 200
    body = reply.json()
    assert body["days"] == 180
    assert len(body["curves"]) == 4
    first = body["curves"][0]
    assert first["days"][0] == 1 and first["days"][-1] == 180
    # linear-plateau preview: flat from the turning day on
    flat = first["values"][27:]
    assert max(flat) - min(flat) < 1e-12
    added = body["curves"][3]
    assert added["adding_day"] == 91 and added["days"][0] == 91
    assert added["values"][0] == pytest.approx(0.01, abs=1e-9)


def test_all_fixtures_round_trip():
    paths = sorted(FIXTURES.rglob("*.json"))
    assert paths
    for path in paths:
        raw = json.loads(path.read_text())
        model_cls = (ScenarioRequest if path.parent.name == "scenarios"
                     else CalculationRequest)
        first = model_cls.model_validate(raw)
        serialized = first.model_dump()
        second = model_cls.model_validate(serialized)
        assert second == first, path
        assert second.model_dump() == serialized, path


def test_fixture_configs_are_accepted_by_service():
    for path in sorted(FIXTURES.glob("*.json")):
        config = json.loads(path.read_text())
        reply = client.post("/api/v1/size", json=config)
        assert reply.status_code == 200, (path, reply.text)
