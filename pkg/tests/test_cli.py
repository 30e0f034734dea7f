import csv
import io
import json
from pathlib import Path

import pytest

from anss_q2.cli import ConfigError, RunConfig, main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_e2_chart_matches_golden(capsys):
    code, out, _ = run(capsys, "e2", "--t-min", "0", "--t-max", "16", "--format", "text")
    assert code == 0
    assert out == (GOLDEN / "e2_0_16.txt").read_text()
    s1 = next(line for line in out.splitlines() if line.startswith("s=1"))
    assert "3+3" in s1


def test_e2_odd_degree(capsys):
    code, out, _ = run(capsys, "e2", "--t-min", "1", "--t-max", "1")
    assert code == 0
    rows = {line.split("|")[0].strip(): line.split("|")[1].strip() for line in out.splitlines() if "|" in line}
    assert rows["s=0"] == "." and rows["s=1"] == "."


def test_e2_m13_entry(capsys):
    code, out, _ = run(capsys, "e2", "--t-min", "54", "--t-max", "54", "--s-max", "2", "--window", "12", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    flagged = [e for e in doc["entries"] if e["u_flag"]]
    assert {e["s"] for e in flagged} == {1, 2}


def test_delta_m13_matches_golden(capsys):
    code, out, _ = run(capsys, "delta", "--eps", "1", "--m", "13", "--window", "12", "--format", "csv")
    assert code == 0
    assert out == (GOLDEN / "delta_1_13_w12.csv").read_text()
    bold = [row[6] for row in list(csv.reader(io.StringIO(out)))[2:9]]
    assert bold == ["0", "0", "0", "27", "0", "54", "0"]


def test_delta_negative_block(capsys):
    code, out, _ = run(capsys, "delta", "--eps", "0", "--m", "-4", "--window", "8")
    assert code == 0
    doc = json.loads(out)
    assert doc["kernel"]["summands"] == []
    assert doc["provenance"] == "exact"


def test_delta_rejects_degree_zero(capsys):
    code, _, err = run(capsys, "delta", "--eps", "0", "--m", "0")
    assert code == 2
    assert "jpow" in err


def test_jpow(capsys):
    code, out, _ = run(capsys, "jpow", "--k-max", "1")
    assert code == 0
    rows = json.loads(out)["jpow"]
    assert rows[1]["delta0"] == [str(-47 * 2**6), str(-(2**12))]


def test_verify_adic(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "adic")
    assert code == 0
    assert json.loads(out)["suites"][0]["passed"]


def test_verify_snf_oracle_seed_7(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "snf-oracle", "--seed", "7")
    assert code == 0
    assert json.loads(out)["seed"] == 7


def test_greek_beta(capsys):
    code, out, _ = run(capsys, "greek", "--family", "beta", "--max-i", "9")
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    for name in ("beta_1", "beta_{6/3,1}", "theta_3", "beta_7"):
        assert name in names


def test_greek_alpha(capsys):
    code, out, _ = run(capsys, "greek", "--family", "alpha", "--max-i", "3", "--format", "json")
    assert code == 0
    rows = {r["name"]: r for r in json.loads(out)["rows"]}
    assert rows["alpha_1"]["candidates"][0]["class"] == "alpha"
    assert rows["alpha_2"]["candidates"][0]["class"] == "C[1,0]"
    assert rows["alpha_{3/2}"]["order_exp"] == 2


def test_greek_empty(capsys):
    code, out, _ = run(capsys, "greek", "--family", "alpha", "--max-i", "0")
    assert code == 0 and out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["greek", "--family", "gamma", "--max-i", "2"],
        ["e2", "--t-min", "5", "--t-max", "1"],
        ["e2", "--window", "3"],
        ["delta", "--eps", "2", "--m", "1"],
        ["verify", "--suite", "nope"],
        ["frobnicate"],
        [],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("anss-q2: error")


def test_bad_ext_data(capsys, tmp_path):
    bad = tmp_path / "ext.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "e2", "--ext-data", str(bad))
    assert code == 2


def test_out_respects_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ANSS_Q2_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "--out", "sub/j.json", "jpow", "--k-max", "0")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "sub" / "j.json").read_text())["jpow"][0]["k"] == 0


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "e2", "--t-min", "-8", "--t-max", "8", "--format", "json")
    _, b, _ = run(capsys, "e2", "--t-min", "-8", "--t-max", "8", "--format", "json")
    assert a == b


def test_run_config_validation():
    RunConfig().validate()
    with pytest.raises(ConfigError):
        RunConfig(format="xml").validate()
    with pytest.raises(ConfigError):
        RunConfig(s_max=-1).validate()


def test_verify_failure_exits_1(capsys, monkeypatch):
    from anss_q2 import cli
    from anss_q2.verify import SuiteResult

    def failing(name, seed=0):
        res = SuiteResult(name)
        res.add("always fails", False, "detail")
        return [res]

    monkeypatch.setattr(cli, "run_suite", failing)
    code, out, _ = run(capsys, "verify", "--suite", "adic")
    assert code == 1
    assert json.loads(out)["suites"][0]["failures"] == [{"check": "always fails", "detail": "detail"}]


def test_internal_failure_exits_3(capsys, monkeypatch):
    from anss_q2 import cli
    from anss_q2.errors import FormulaMismatch

    def broken(*args, **kwargs):
        raise FormulaMismatch("routes disagree")

    monkeypatch.setattr(cli, "delta0_column", broken)
    code, _, err = run(capsys, "jpow", "--k-max", "1")
    assert code == 3 and "routes disagree" in err
