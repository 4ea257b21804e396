"""CLI surfaces: JSON reports, exit codes, determinism."""

import json
import subprocess
import sys

from normforge.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_field_factor(capsys):
    code, out = run_cli(["field", "factor", "--poly", "[1,1,1]", "--p", "7"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == 1
    assert report["sum_ef"] == 2
    assert len(report["primes"]) == 2


def test_field_factor_domain_error(capsys):
    # x^2 - 5 is not maximal at 2: domain error, exit 1, JSON error report
    code, out = run_cli(["field", "factor", "--poly", "[-5,0,1]", "--p", "2"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["error"] == "NonMonogenicAtP"


def test_unknown_subcommand_exit_2():
    proc = subprocess.run(
        [sys.executable, "-m", "normforge.cli", "frobnicate"],
        capture_output=True, text=True, cwd="/root/pkg/src",
    )
    assert proc.returncode == 2


def test_tower_classify(capsys):
    code, out = run_cli(
        ["tower", "classify", "--recipe", "five-power-cyclotomic",
         "--prime", "2", "--q", "2", "--depth", "3"], capsys)
    assert code == 0
    report = json.loads(out)
    cert = report["certificate"]
    assert cert["classification"] == "completelyQBounded"
    assert cert["bounding_order"] == 2


def test_cyclic_construct(capsys):
    code, out = run_cli(["cyclic", "construct", "--q", "3", "--m", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["ell"] == 7
    assert report["field"]["period_poly"] == ["-1", "-2", "1", "1"]


def test_ec_mul(capsys):
    code, out = run_cli(
        ["ec", "mul", "--curve", '{"a": 0, "c": -2}', "--point", '{"x": 3, "y": 5}',
         "--n", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["result"] == {"x": "129/100", "y": "-383/1000"}


def test_normeq_battery(capsys):
    code, out = run_cli(
        ["normeq", "battery", "--x", '"1/7"', "--q", "3", "--field", "[1,1,1]"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["result"]["passed"] is False
    assert report["result"]["witness"]["c"] == ["82", "0"]


def test_compile_cli(capsys):
    code, out = run_cli(["compile", "--variant", "eqC", "--q", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    prefix = report["ast"]["prefix"]
    assert [p[0] for p in prefix[:2]] == ["forall", "forall"]


def test_determinism_byte_identical(tmp_path):
    outs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "normforge.cli", "normeq", "battery",
             "--x", '"1/7"', "--q", "3", "--field", "[1,1,1]", "--seed", "7"],
            capture_output=True, text=True, cwd="/root/pkg/src",
        )
        assert proc.returncode == 0
        outs.append(proc.stdout)
    assert outs[0] == outs[1]


def test_verify_prop_cli(tmp_path, capsys):
    spec = {
        "field": {"poly": ["1", "1", "1"]},
        "q": 3,
        "variant": "XBC",
        "x": ["1/7", "0"],
        "b": ["1/7", "0"],
        "c": ["82", "0"],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out = run_cli(
        ["verify", "prop", "--kind", "badprime", "--spec", str(path), "--prime", "7"],
        capsys)
    assert code == 0
    report = json.loads(out)
    assert report["report"]["hypotheses_pass"] is True
    assert all(c["holds"] == "yes" for c in report["report"]["conclusions"])


def test_tower_grow_and_recipe_alias(capsys):
    code, out = run_cli(
        ["tower", "grow", "--recipe", "five-power", "--prime", "5", "--depth", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    es = [n["e"] for n in report["tree"]["nodes"]]
    assert es == [1, 4, 20]


def test_normeq_analyze_cli(tmp_path, capsys):
    instance = {
        "field": {"poly": ["1", "1", "1"]},
        "q": 3,
        "variant": "XBC",
        "x": ["1/7", "0"],
        "b": ["1/7", "0"],
        "c": ["82", "0"],
    }
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(instance))
    code, out = run_cli(["normeq", "analyze", "--instance", str(path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"]["verdict"] == "unsolvable"
    assert any(e["verdict"]["verdict"] == "unsolvable" for e in report["ledger"]["entries"])


def test_ec_lemmas_cli(capsys):
    code, out = run_cli(
        ["ec", "lemmas", "--curve", '{"a": 0, "c": -2}', "--point", '{"x": 3, "y": 5}',
         "--A", "4", "--m", "1", "--bound", "6"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["divisor_search"]["k"] == 2
    assert report["equiv_m"] >= 1


def test_run_config_caps():
    from normforge.cli import RunConfig
    from normforge.errors import NormforgeError
    import pytest as _pytest

    cfg = RunConfig(seed=7)
    assert cfg.height_cap > 0 and cfg.depth_cap > 0 and cfg.precision_cap > 0
    with _pytest.raises(NormforgeError):
        RunConfig(depth_cap=0)


def test_depth_cap_enforced(capsys):
    code, out = run_cli(["--depth-cap", "2", "tower", "grow", "--recipe", "five-power",
                         "--prime", "2", "--depth", "3"], capsys)
    assert code == 1
    assert "exceeds the cap" in json.loads(out)["message"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, _ = run_cli(["field", "factor", "--poly", "[1,1,1]", "--p", "7",
                       "--out", str(target)], capsys)
    assert code == 0
    data = json.loads(target.read_text())
    assert data["sum_ef"] == 2


def test_recipe_from_json_file(tmp_path, capsys):
    recipe = {
        "name": "custom",
        "steps": [{"kind": "root_of_unity", "n": 5},
                  {"kind": "radical", "degree": 2, "element": "10"}],
        "annotations": {},
    }
    path = tmp_path / "r.json"
    path.write_text(json.dumps(recipe))
    code, out = run_cli(["tower", "grow", "--recipe", str(path),
                         "--prime", "3", "--depth", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["tree"]["level_degrees"] == [1, 4, 8]


def test_verify_prop_hypothesis_failure_reported(tmp_path, capsys):
    bad = {
        "field": {"poly": ["1", "1", "1"]},
        "q": 3,
        "variant": "XBC",
        "x": ["1/7", "0"],
        "b": ["1/343", "0"],
        "c": ["82", "0"],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out = run_cli(
        ["verify", "prop", "--kind", "badprime", "--spec", str(path), "--prime", "7"],
        capsys)
    assert code == 1
    report = json.loads(out)
    assert report["error"] == "HypothesisFail"
    assert report["failed_hypotheses"] == [4, 5]
