import csv
import io
import json

import pytest

from qtj import cli
from qtj.errors import SchemaViolation
from qtj.report import ReportEnvelope, RunManifest, canonical_json, emit, sha256


def run_json(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


def test_cf(capsys):
    env = run_json(["cf", "--theta", "quad:1:1:2:5", "--terms", "10"], capsys)
    p = env["payload"]
    assert p["quotients"] == [1] * 10 and p["period"] == [0, 1]
    assert env["manifest"]["payload_sha256"] == sha256(canonical_json(p))


def test_eisenstein_exact(capsys):
    p = run_json(["eisenstein", "--mu", "i", "--k", "2", "--set", "box:1", "--exact"], capsys)["payload"]
    assert (p["value_re"], p["value_im"]) == ("3", "0")
    assert p["weight"] == 4


def test_jclass(capsys):
    p = run_json(["jclass", "--mu", "i", "--box-max", "50", "--precision", "256"], capsys)["payload"]
    assert abs(float(p["j"]["re"]) - 1728) < 1e-20 and float(p["error_bound"]) <= 1e-20


def test_jquant_csv(capsys):
    code = cli.run(["jquant", "--theta", "quad:1:1:2:5", "--mu", "i", "--stages", "6..9", "--window", "3",
                    "--out", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["stage"] for r in rows] == ["6", "7", "8", "9"]
    assert list(rows[0]) == ["stage", "re", "im", "im_fraction", "class"]


def test_other_commands(capsys):
    p = run_json(["automorphy", "--mu", "2i", "--k", "2", "--set", "box:3", "--matrix", "0,-1,1,0", "--exact"],
                 capsys)["payload"]
    assert p["residual"] == {"re": "0", "im": "0"}
    p = run_json(["orbit", "--mu", "1/2+3i", "--matrix", "1,1,0,1"], capsys)["payload"]
    assert p["image_mu"]["re"] == "3/2"
    p = run_json(["weier-residual", "--mu", "i", "--z", "0.31+0.17i", "--scheme", "classical:8,16,32"],
                 capsys)["payload"]
    assert len(p["rows"]) == 3 and p["decay_exponent"] < 0


@pytest.mark.parametrize("argv", [
    [],
    ["nosuch"],
    ["cf"],
    ["cf", "--theta", "quad:1:1:0:5"],
    ["eisenstein", "--mu", "3", "--k", "2", "--set", "box:1"],
    ["eisenstein", "--mu", "i", "--k", "2", "--set", "box:-1"],
    ["jclass", "--mu", "i", "--box-max", "50", "--precision", "32"],
])
def test_input_errors_exit_2(argv, capsys):
    assert cli.run(argv) == 2


def test_pole_exits_3(capsys):
    assert cli.run(["weier-residual", "--mu", "i", "--z", "1+i", "--scheme", "classical:2,4"]) == 3


def test_env_precision(monkeypatch, capsys):
    monkeypatch.setenv("QTJ_PRECISION", "200")
    env = run_json(["cf", "--theta", "quad:0:1:1:2", "--terms", "3"], capsys)
    assert env["manifest"]["precision"] == 200
    assert env["payload"]["precision"] == 200


def test_config_defaults_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nterms = 4\nprecision = 96\n")
    env = run_json(["cf", "--theta", "quad:1:1:2:5", "--config", str(cfg)], capsys)
    assert len(env["payload"]["quotients"]) == 4 and env["manifest"]["precision"] == 96
    env = run_json(["cf", "--theta", "quad:1:1:2:5", "--config", str(cfg), "--terms", "6"], capsys)
    assert len(env["payload"]["quotients"]) == 6
    cfg.write_text("bogus = 1\n")
    assert cli.run(["cf", "--theta", "quad:1:1:2:5", "--config", str(cfg)]) == 2


def test_output_file_and_io_failure(tmp_path, capsys):
    path = tmp_path / "out.json"
    assert cli.run(["cf", "--theta", "quad:1:1:2:5", "--output", str(path)]) == 0
    assert json.loads(path.read_text())["command"] == "cf"
    assert cli.run(["cf", "--theta", "quad:1:1:2:5", "--output", str(tmp_path / "missing" / "x.json")]) == 2


def test_schema_violation_writes_nothing(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(cli.COMMANDS, "cf", lambda args: {"theta": 1})
    path = tmp_path / "bad.json"
    assert cli.run(["cf", "--theta", "quad:1:1:2:5", "--output", str(path)]) == 3
    assert not path.exists()
    env = ReportEnvelope("cf", {"theta": "x"}, RunManifest(["cf"], {}, 128))
    with pytest.raises(SchemaViolation):
        emit(env, "json", tmp_path / "never.json")
    assert not (tmp_path / "never.json").exists()


def test_same_payload_same_digest(capsys):
    a = run_json(["cf", "--theta", "quad:0:1:1:3", "--terms", "8"], capsys)
    b = run_json(["cf", "--theta", "quad:0:1:1:3", "--terms", "8"], capsys)
    assert a["manifest"]["payload_sha256"] == b["manifest"]["payload_sha256"]
    assert canonical_json(a["payload"]) == canonical_json(b["payload"])
