import json
import subprocess
import sys

import pytest

from hradon.cli import config_from_dict, load_config, parse_config_text, read_polynomial, run_classify
from hradon.opnorm import GridSpec
from hradon.poly import PolynomialSyntaxError, parse_polynomial


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "hradon.cli", *args], capture_output=True,
                          text=True, cwd=cwd, timeout=600)


# classification documents ----------------------------------------------------------


def test_classify_st():
    doc = run_classify(parse_polynomial("s*t"), 1)
    assert doc["heisenberg-uniform"] == {"value": False, "witness": [1, 1]}


def test_classify_p_p0_zero():
    doc = run_classify(parse_polynomial("s^3*t"), 2)
    assert doc["heisenberg-graph"]["value"] == "BOUNDED"
    assert "P_p0" in doc["heisenberg-graph"]["reason"] and "0" in doc["heisenberg-graph"]["reason"]


def test_classify_all_even():
    doc = run_classify(parse_polynomial("s^2*t^2"), 1)
    assert doc["euclidean-uniform"]["value"] and doc["heisenberg-uniform"]["value"]
    assert doc["heisenberg-graph"]["value"] == "BOUNDED"


def test_classify_subprocess_and_determinism(tmp_path):
    a = run("classify", "--poly", "s*t + s^2*t^3", "--p0", "2")
    b = run("classify", "--poly", "s*t + s^2*t^3", "--p0", "2")
    assert a.returncode == 0 and a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["support"] == [[1, 1], [2, 3]]
    f = tmp_path / "p.txt"
    f.write_text("s*t + s^2*t^3\n")
    c = run("classify", "--poly", str(f), "--p0", "2")
    d = run("classify", "--poly-file", str(f), "--p0", "2")
    assert json.loads(c.stdout)["support"] == json.loads(d.stdout)["support"] == doc["support"]


def test_usage_errors_exit_2():
    r = run("classify", "--poly", "s*t +* 3")
    assert r.returncode == 2 and "position" in r.stderr.lower()
    assert run("classify").returncode == 2
    assert run("verify-all", "--suite", "no-such-suite").returncode == 2
    assert run("opnorm", "--poly", "s*t", "--lambda-sweep", "1,2").returncode == 2


def test_newton_and_decompose():
    r = run("newton", "--poly", "s^4 + s*t + t^3 + s^2*t^2")
    assert r.returncode == 0
    assert json.loads(r.stdout)["vertices"] == [[0, 3], [1, 1], [4, 0]]
    r = run("decompose", "--poly", "s^2*t + s*t^3", "--p0", "1", "--k-min", "-3", "--k-max", "3")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert set(doc["profiles"]) == {"1", "2"}


def test_kernel_check_exit_codes():
    r = run("kernel-check", "--N", "6")
    assert r.returncode == 0 and json.loads(r.stdout)["passed"]
    r = run("kernel-check", "--N", "6", "--tol", "1e-12")
    assert r.returncode == 0
    # an unattainable tolerance is reported as non-convergence, not a crash
    r = run("kernel-check", "--N", "6", "--tol", "1e-30")
    assert r.returncode == 3 and r.stdout == ""
    err = json.loads(r.stderr)
    assert err["error"] == "non-convergence" and "panel budget exceeded" in err["detail"]


def test_sw_check_and_sweep_csv(tmp_path):
    r = run("sw-check", "--poly", "s*t", "--N", "4,8", "--draws", "2")
    assert r.returncode in (0, 1)
    assert json.loads(r.stdout)["N"] == [4, 8]
    csv = tmp_path / "s.csv"
    out = tmp_path / "s.json"
    r = run("sweep", "--poly", "s*t", "--N", "2,4", "--lambda-grid", "0.1,10,3",
            "--eta-grid", "0.1,10,3", "--csv", str(csv), "--out", str(out))
    assert r.returncode == 0 and r.stdout == ""
    lines = csv.read_text().splitlines()
    assert lines[0] == "N,sup,lambda,eta,error_bound" and len(lines) == 3
    assert json.loads(out.read_text())["N"] == [2, 4]


def test_opnorm_command():
    r = run("opnorm", "--poly", "s*t", "--m", "0", "--lambda-sweep", "0.5,2,3", "--grid-size", "32",
            "--N", "7")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert len(doc["norm"]["value"]) == 3 and "tolerance" in doc["norm"]


def test_audit_command(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("# key quantity table\nlambda = 1.0\nm = 0\nprofiles = {\"1\": [1, 1.0]}\n"
                   "k_min = -3\nk_max = 3\n")
    r = run("audit", "--check", "ktab", "--config", str(cfg))
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["K1"] == [-3, -2, -1, 0] and doc["K2"] == [1, 2, 3] and doc["exact_partition"]
    cfg.write_text(json.dumps({"poly": "s^3", "k": -6, "m": 0}))
    r = run("audit", "--check", "ij-decay", "--config", str(cfg))
    assert r.returncode == 0 and json.loads(r.stdout)["eps"]["value"] > 0
    cfg.write_text("profiles = [[3, 1], [2, 2], [1, 1]]\nj_min = -100\nj_max = 99\n")
    r = run("audit", "--check", "rr", "--config", str(cfg))
    assert r.returncode == 0 and json.loads(r.stdout)["exact_partition"]


# verify-all --------------------------------------------------------------------------


def test_verify_all_single_suite_deterministic(tmp_path):
    a = run("verify-all", "--suite", "1-equivalence")
    b = run("verify-all", "--suite", "1-equivalence")
    assert a.returncode == 0 and a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert list(doc["suites"]) == ["1-equivalence"] and doc["passed"]
    assert "seconds" not in doc["suites"]["1-equivalence"]
    cfg = tmp_path / "c.cfg"
    cfg.write_text("suites = 2-kernel\n")
    doc = json.loads(run("verify-all", "--config", str(cfg)).stdout)
    assert list(doc["suites"]) == ["2-kernel"]


def test_verify_all_unreachable_tolerance(tmp_path):
    cfg = tmp_path / "tiny.json"
    cfg.write_text(json.dumps({"tol": 1e-30}))
    r = run("verify-all", "--config", str(cfg), "--suite", "4-stein-wainger")
    assert r.returncode == 3
    s = json.loads(r.stdout)["suites"]["4-stein-wainger"]
    assert not s["passed"] and "panel budget exceeded" in s["detail"]


def test_reports_carry_tolerance_or_provenance():
    doc = json.loads(run("verify-all", "--suite", "2-kernel", "--suite", "1-equivalence").stdout)

    def walk(o):
        if isinstance(o, dict):
            if "value" in o:
                assert "tolerance" in o or "provenance" in o, o
            for v in o.values():
                walk(v)
        elif isinstance(o, list):
            for v in o:
                walk(v)
    walk(doc["suites"])
    assert doc["provenance"]["kernel_backend"] in ("compiled", "python")


# config parsing ------------------------------------------------------------------------


def test_config_key_value_and_json_agree():
    kv = parse_config_text("tol = 1e-7  # comment\nN = 4,8\nlambda_grid = 0.1,10,5\npoly = s*t\n")
    js = parse_config_text('{"tol": 1e-7, "N": [4, 8], "lambda_grid": [0.1, 10, 5], "poly": "s*t"}')
    a, b = config_from_dict(kv), config_from_dict(js)
    assert a.tol == b.tol == 1e-7 and a.Ns == b.Ns == (4, 8)
    assert a.lambda_grid == b.lambda_grid == GridSpec(0.1, 10, 5)
    assert a.poly == b.poly == "s*t"


def test_config_validation():
    for bad in ({"tol": 0}, {"N": "8,4"}, {"format": "xml"}, {"suites": ["x"]}):
        with pytest.raises(ValueError):
            config_from_dict(bad)
    with pytest.raises(ValueError):
        parse_config_text("just words")
    assert config_from_dict({"lambda": 2.0}).extra == {"lambda": 2.0}
    assert load_config(None).grid_size == 256


def test_read_polynomial_inline_and_errors():
    assert read_polynomial("s*t").support() == {(1, 1)}
    with pytest.raises(PolynomialSyntaxError):
        read_polynomial("s**")
