import json
import math

import pytest

from revisop.cli import main, parse_angle
from revisop.plsurf import cone_disk

HYPERBOLIC_NO_COMPARISON = "3.7692336465912724,2.425329814718924,5.983817627577424"


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("text,value", [("3pi", 3 * math.pi), ("0.5pi", 0.5 * math.pi), ("pi", math.pi),
                                        ("-pi", -math.pi), ("1.25", 1.25), ("2e-1pi", 0.2 * math.pi)])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["", "pie", "3 pi x", "abc"])
def test_parse_angle_rejects(text):
    with pytest.raises(Exception):
        parse_angle(text)


def test_cone_info_example(capsys):
    code, doc = run_json(capsys, ["cone-info", "--theta", "3pi", "--lambda", "0", "--radius", "1"])
    assert code == 0 and doc["status"] == "pass" and doc["schema_version"] == 1
    r = doc["report"]
    assert r["perimeter"] == pytest.approx(3 * math.pi, rel=1e-15)
    assert r["area"] == pytest.approx(1.5 * math.pi, rel=1e-15)
    assert abs(r["margin"]) < 1e-12


def test_triangle_check_flat(capsys):
    code, doc = run_json(capsys, ["triangle-check", "--lambda0", "0", "--source", "flat", "--sides", "3,4,5"])
    assert code == 0
    assert abs(doc["report"]["margin"]) < 1e-12
    assert doc["report"]["theta"] == pytest.approx(2 * math.pi)


def test_triangle_check_cone_equality(capsys):
    pts = "1,0;1,0.8333333333333334pi;1,1.6666666666666667pi"
    code, doc = run_json(capsys, ["triangle-check", "--source", "cone", "--theta", "2.5pi", "--points", pts])
    assert code == 0 and abs(doc["report"]["margin"]) < 1e-9
    assert doc["report"]["theta"] == pytest.approx(2.5 * math.pi, rel=1e-9)


def test_triangle_check_nonexistent_is_not_a_failure(capsys):
    code, doc = run_json(capsys, ["triangle-check", "--source", "hyperbolic", "--curvature", "-1",
                                  "--sides", HYPERBOLIC_NO_COMPARISON])
    assert code == 0
    assert doc["status"] == "nonexistent" and doc["report"]["margin"] is None


def test_failed_margin_exits_2(capsys):
    code, doc = run_json(capsys, ["triangle-check", "--source", "flat", "--sides", "3,4,5", "--tol", "-1"])
    assert code == 2 and doc["status"] == "fail"


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 1
    assert main(["triangle-check", "--source", "flat"]) == 1
    capsys.readouterr()


def test_malformed_mesh_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": 3, "faces": [[0, 1, 2]], "edge_lengths": {"0-1": 1, "1-2": 1, "0-2": 5}}')
    assert main(["pl-check", "--mesh", str(bad), "--base", "0", "--radius", "0.1"]) == 1
    assert "triangle inequality" in capsys.readouterr().err
    bad.write_text("not json")
    assert main(["pl-check", "--mesh", str(bad), "--base", "0", "--radius", "0.1"]) == 1
    assert main(["pl-check", "--mesh", str(tmp_path / "missing.json"), "--base", "0", "--radius", "0.1"]) == 1
    capsys.readouterr()


def test_pl_check_mesh_file(tmp_path, capsys):
    s, _ = cone_disk(2.5 * math.pi, radius=1.5, rings=4)
    path = tmp_path / "cone.json"
    s.save(path)
    code, doc = run_json(capsys, ["pl-check", "--mesh", str(path), "--base", "0", "--radius", "0.8", "--refine", "8"])
    assert code == 0 and doc["refinement_level"] == 8
    assert doc["report"]["relative_margin"] > -0.02
    assert abs(doc["report"]["gauss_bonnet_residual"]) < 1e-9


def test_pl_sweep_reproducible_and_worker_independent(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("REVISOP_OUTPUT_DIR", str(tmp_path / "a"))
    assert main(["pl-sweep", "--trials", "4", "--seed", "11", "--refine", "4"]) == 0
    first = (tmp_path / "a" / "pl-sweep.csv").read_bytes()
    out = tmp_path / "b.csv"
    assert main(["pl-sweep", "--trials", "4", "--seed", "11", "--refine", "4", "--out", str(out),
                 "--workers", "2"]) == 0
    assert out.read_bytes() == first
    lines = first.decode().splitlines()
    assert len(lines) == 5 and lines[0].startswith("trial,theta,base")
    assert main(["pl-sweep", "--trials", "4", "--seed", "12", "--refine", "4", "--out", str(out)]) == 0
    assert out.read_bytes() != first
    capsys.readouterr()


def test_triangle_sweep_cone(capsys):
    assert main(["triangle-sweep", "--source", "cone", "--lambda0", "0", "--trials", "5", "--seed", "1"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 6 and rows[1].split(",")[-1] == "pass"


def test_disk_check_poincare(capsys):
    code, doc = run_json(capsys, ["disk-check", "--metric", "poincare", "--radius", "1", "--rays", "128",
                                  "--cert-grid", "32"])
    assert code == 0
    assert doc["report"]["perimeter"] == pytest.approx(2 * math.pi * math.sinh(1), rel=1e-3)
    assert doc["certificate"]["passed"]


def test_convergence_csv(capsys):
    assert main(["convergence", "--theta", "3pi", "--levels", "2,4", "--format", "csv", "--rings", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("refinement_level,") and len(lines) == 3
