import json

import pytest

from mixint import cli
from mixint import convex_body as cb
from mixint import layercake as lc


@pytest.fixture
def files(tmp_path):
    sq, sq2 = cb.box([0, 0], [1, 1]), cb.box([0, 0], [2, 2])
    (tmp_path / "bodies.json").write_text(json.dumps([sq.to_dict(), sq2.to_dict()]))
    (tmp_path / "cake.json").write_text(json.dumps(lc.indicator(sq).to_dict()))
    (tmp_path / "cakes.json").write_text(json.dumps({"cakes": [lc.indicator(sq).to_dict(), lc.indicator(sq2).to_dict()]}))
    (tmp_path / "p.json").write_text(json.dumps({"alpha": 0.0, "n": 1, "base": {"breakpoints": [0.0], "values": [0.0], "tail_slope": 1.0}}))
    return tmp_path


def test_mixed_volume_prints_two(files, capsys):
    assert cli.run(["mixed-volume", str(files / "bodies.json")]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_mixed_integral_and_steiner(files, capsys):
    assert cli.run(["mixed-integral", str(files / "cakes.json"), "--method", "polarization"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(2.0)
    assert cli.run(["steiner", str(files / "cake.json"), "--ball-facets", "64", "--eps-grid", "0.5", "1", "1.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["W"][0] == pytest.approx(1.0) and out["ball_facets"] == 64


def test_rearrange_out(files):
    out = files / "star.json"
    assert cli.run(["rearrange", str(files / "cake.json"), "--out", str(out)]) == 0
    f = lc.LayerCake.from_dict(json.loads(out.read_text()))
    assert lc.integral(f) == pytest.approx(1.0)


def test_alpha_sum_rebases(files, capsys):
    p = str(files / "p.json")
    assert cli.run(["alpha-sum", p, p]) == 0
    assert json.loads(capsys.readouterr().out)["base"]["tail_slope"] == pytest.approx(1.0)
    assert cli.run(["alpha-sum", p, p, "--alpha", "-1"]) == 0
    assert json.loads(capsys.readouterr().out)["alpha"] == -1.0
    assert cli.run(["alpha-sum", p, p, "--alpha", "0.5"]) == 2


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('[{"dim": 2,\n "vertices": [1,}]')
    assert cli.run(["mixed-volume", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    bad.write_text('[{"dim": 2, "vertex": []}]')
    assert cli.run(["mixed-volume", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "bodies[0]" in err and "'vertices'" in err
    assert cli.run(["mixed-volume", str(tmp_path / "missing.json")]) == 2
    assert cli.run(["no-such-command"]) == 2


def test_vacuous_alexandrov_exits_two(capsys):
    assert cli.run(["verify", "alexandrov", "--alpha", "-0.6", "--n", "3", "--k", "1", "--m", "2"]) == 2
    err = capsys.readouterr().err
    assert "k > n + 1/alpha" in err and "alpha > -1/2" in err


def test_verify_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "moment_lemma", "--alpha", "-0.1", "--trials", "10", "--seed", "7"]
    assert cli.run(argv + ["--out", str(a)]) == 0
    assert cli.run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["seed"] == 7 and rep["passed"] and rep["details"]["ball_facets"] == 64


def test_verify_csv_and_violation(tmp_path, capsys):
    assert cli.run(["verify", "brunn_minkowski", "--trials", "3", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "trial,margin,inputs_digest" and len(lines) == 4
    # a negative tolerance makes every exact equality a violation
    assert cli.run(["verify", "closure", "--trials", "2", "--tol", "-1"]) == 1


def test_demo(capsys):
    assert cli.run(["demo", "shrinking-surface", "--kmax", "4"]) == 0
    seq = json.loads(capsys.readouterr().out)["sequence"]
    assert len(seq) == 4 and all(abs(r["integral"] - 1) < 1e-9 for r in seq)
