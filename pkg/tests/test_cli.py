import json

import pytest

from qrank.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_proposed(capsys):
    code, out, _ = run(capsys, "construct", "--method", "proposed", "-m", "2", "-k", "1")
    bundle = json.loads(out)
    assert code == 0
    assert (bundle["params"]["N"], bundle["params"]["K"]) == (8, 4)
    assert bundle["provenance"]["construction"] == "proposed"


def test_construct_css(capsys):
    code, out, _ = run(capsys, "construct", "--method", "css", "-n", "3", "-r", "1", "-s", "1")
    assert code == 0 and json.loads(out)["params"]["K"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "--method", "proposed", "-m", "1", "-k", "1"],
        ["construct", "--method", "css", "-n", "4", "-r", "1", "-s", "1"],
        ["construct", "--method", "proposed", "-m", "2", "-k", "1", "--modulus", "15"],
        ["compare", "-n", "2", "-k", "2"],
    ],
)
def test_parameter_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_overrides_reproduce_reference(capsys):
    code, out, _ = run(
        capsys, "construct", "-m", "2", "-k", "1", "--modulus", "13", "--alpha", "8,b,f,d", "--theta", "8", "--certify"
    )
    bundle = json.loads(out)
    assert code == 0
    assert bundle["params"]["D_R"] == 2 and bundle["params"]["certified"]
    assert bundle["provenance"]["T"]["data"] == ["0100", "1001", "0001", "0110"]


def test_bad_alpha_is_verification_failure(capsys):
    code, _, err = run(capsys, "construct", "-m", "2", "-k", "1", "--modulus", "13", "--alpha", "1,2,4,8")
    assert code == 3 and "self-dual" in err


@pytest.mark.parametrize("argv,d", [(["--method", "proposed", "-m", "2", "-k", "1"], 2), (["--method", "css", "-n", "3", "-r", "1", "-s", "1"], 2)])
def test_distance_pipeline(capsys, monkeypatch, argv, d):
    _, bundle, _ = run(capsys, "construct", *argv)
    code, out, _ = run(capsys, "distance", stdin=bundle, monkeypatch=monkeypatch)
    cert = json.loads(out)
    assert code == 0 and cert["D_R"] == d and cert["certified"] and len(cert["witness"]) == 2 * cert["N"]
    again = run(capsys, "distance", stdin=bundle, monkeypatch=monkeypatch)[1]
    assert again == out


def test_distance_undefined(capsys, monkeypatch):
    bundle = json.dumps({"m": 1, "n": 1, "generators": {"rows": 1, "cols": 2, "data": ["10"]}})
    code, out, _ = run(capsys, "distance", stdin=bundle, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["D_R"] == "undefined"


def test_distance_budget(capsys, monkeypatch):
    _, bundle, _ = run(capsys, "construct", "-m", "2", "-k", "1")
    assert run(capsys, "distance", "--budget", "2^10", stdin=bundle, monkeypatch=monkeypatch)[0] == 4
    code, out, _ = run(capsys, "distance", "--budget", "2^10", "--sample", stdin=bundle, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["certified"] is False


def test_distance_bad_input(capsys, monkeypatch):
    assert run(capsys, "distance", stdin="not json", monkeypatch=monkeypatch)[0] == 2


def test_verify(capsys, monkeypatch, tmp_path):
    path = tmp_path / "code.json"
    assert run(capsys, "construct", "-m", "2", "-k", "1", "--certify", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", "--in", str(path))
    report = json.loads(out)
    assert code == 0 and report["ok"]
    bundle = json.loads(path.read_text())
    bundle["params"]["D_R"] = 3
    path.write_text(json.dumps(bundle))
    assert run(capsys, "verify", "--in", str(path))[0] == 3


def test_example_deterministic(capsys):
    code, first, _ = run(capsys, "example")
    assert code == 0
    assert first.strip().endswith("[[8, 4, 2]]")
    assert "0 1 0 0\n    1 0 0 1\n    0 0 0 1\n    0 1 1 0" in first
    assert run(capsys, "example")[1] == first
    assert run(capsys, "example", "--threads", "4")[1] == first
    js = json.loads(run(capsys, "example", "--format", "json")[1])
    assert all(all(s["checks"].values()) for s in js["steps"])


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "-n", "50", "-k", "1")
    assert code == 0 and "9801/5000 (~1.9602)" in out
    js = json.loads(run(capsys, "compare", "-n", "2", "-k", "1", "--format", "json")[1])
    assert js["columns"][2]["R"] == "1/2"


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "-m", "8", "-n", "8", "--gates", "20", "--faults", "3", "--trials", "200", "--seed", "7")
    lines = [json.loads(ln) for ln in out.splitlines()]
    assert code == 0
    assert lines[-1]["violations"] == 0 and len(lines) == 201
    assert all(r["t"] == 3 and r["bound_ok"] for r in lines[:-1])
    _, out, _ = run(capsys, "simulate", "--faults", "0", "--trials", "20")
    assert all(json.loads(ln).get("rank_q", 0) == 0 for ln in out.splitlines()[:-1])
    _, out, _ = run(capsys, "simulate", "-m", "3", "-n", "4", "--faults", "1", "--transvections", "0", "--trials", "50")
    assert all(json.loads(ln)["rank_q"] <= 4 for ln in out.splitlines()[:-1])
