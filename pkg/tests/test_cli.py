from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spherewave.cli import SWEEP_COLUMNS, dumps, main, sweep_grid


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_eval_green_at_south_pole():
    code, rec = run_json("eval-green", "--lambda", "0.5", "0", "--theta", "3.14159",
                         "--phi", "0")
    assert code == 0 and rec["schema"] == "spherewave/1"
    assert rec["closed"][0] == pytest.approx(0.25, abs=1e-10)
    assert rec["pw"][0] == pytest.approx(0.25, abs=1e-10)
    assert rec["m_used"] == 1


def test_eval_green_generic_point():
    code, rec = run_json("eval-green", "--lambda", "0.3", "0.2", "--theta", "2.2",
                         "--phi", "1.0")
    assert code == 0
    assert rec["rel_err"] <= 1e-8
    assert set(rec) >= {"closed", "pw", "abs_err", "rel_err", "m_used",
                        "quadrature_error_estimate"}


def test_eval_green_in_cap_is_an_error_record():
    code, rec = run_json("eval-green", "--theta", "0.01")
    assert code == 1
    assert rec["error"]["code"] == "NoValidDomain"


def test_eval_green_explicit_domain_and_source():
    code, rec = run_json("eval-green", "--theta", "1.0", "--phi", "0.2", "--m", "2")
    assert code == 0 and rec["m_used"] == 2 and rec["rel_err"] <= 1e-8
    code, rec = run_json("eval-green", "--theta", "1.0", "--phi", "0.2", "--theta0", "2.0",
                         "--phi0", "0.5")
    assert code == 0 and rec["rel_err"] <= 1e-8
    code, rec = run_json("eval-green", "--theta", "1.0", "--theta0", "2.0", "--m", "2")
    assert code == 2


def test_eval_legendre():
    code, rec = run_json("eval-legendre", "--lambda", "0.3", "0.2", "--q", "0.5")
    assert code == 0
    assert complex(*rec["series"]) == pytest.approx(
        complex(0.8997530926754336, -0.08762373745257743), rel=1e-12)
    assert complex(*rec["integral"]) == pytest.approx(complex(*rec["series"]), rel=1e-10)
    code, rec = run_json("eval-legendre", "--lambda", "0.3", "0.2", "--z", "10", "0")
    assert complex(*rec["infinity"]) == pytest.approx(
        complex(1.5994287933839333, 0.7556561100273399), rel=1e-12)
    code, rec = run_json("eval-legendre", "--lambda", "0.5", "0", "--z", "3", "0")
    assert code == 1 and rec["error"]["code"] == "PoleError"
    assert run("eval-legendre")[0] == 2


def test_degrees_are_rejected():
    code, _ = run("eval-green", "--theta", "90deg")
    assert code == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("no-such-command")[0] == 2
    assert run("eval-green", "--theta", "1", "--delta", "0.9")[0] == 2


def test_full_precision_json():
    assert dumps({"a": 0.1}) == '{"a": 0.10000000000000001}'
    assert json.loads(dumps({"a": 1 / 3}))["a"] == 1 / 3


def test_csv_output():
    code, text = run("eval-green", "--theta", "2.2", "--output", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and len(rows) == 2
    assert "closed_re" in rows[0] and "rel_err" in rows[0]


def _sweep(*extra):
    code, text = run("sweep", "--lambda", "0.3", "0.2", *extra)
    assert code == 0
    return text, list(csv.DictReader(io.StringIO(text)))


def test_sweep_empty_grid_is_header_only():
    text, rows = _sweep("--n-theta", "0", "--n-phi", "5")
    assert rows == [] and text.strip() == ",".join(SWEEP_COLUMNS)


def test_sweep_flags_cap_rows():
    _, rows = _sweep("--n-theta", "30", "--n-phi", "4")
    cap = [r for r in rows if r["error"]]
    assert cap and all(r["error"] == "NoValidDomain" for r in cap)
    assert all(float(r["theta"]) < 0.2 for r in cap)
    assert all(float(r["rel_err"]) <= 1e-7 for r in rows if not r["error"])


def test_sweep_40_by_40():
    _, rows = _sweep("--n-theta", "40", "--n-phi", "40")
    assert len(rows) == 1600
    good = [r for r in rows if float(r["theta"]) > 0.2 + 1e-12]
    assert all(not r["error"] for r in good)
    assert max(float(r["rel_err"]) for r in good) <= 1e-7


def test_sweep_is_deterministic_and_parallel_ordered():
    serial, _ = _sweep("--n-theta", "6", "--n-phi", "5")
    again, _ = _sweep("--n-theta", "6", "--n-phi", "5")
    parallel, _ = _sweep("--n-theta", "6", "--n-phi", "5", "--jobs", "2")
    assert serial == again == parallel


def test_sweep_grid_order():
    g = sweep_grid(2, 3)
    assert g[0] == (math.pi / 4, 0.0) and g[3][0] == 3 * math.pi / 4


def test_verify_default_passes_and_is_deterministic():
    code, text = run("verify")
    assert code == 0
    rec = json.loads(text)
    assert rec["passed"] and len(rec["suites"]) == 8
    assert all("seconds" not in s for s in rec["suites"])
    assert run("verify")[1] == text


def test_verify_single_suite_and_timing():
    code, rec = run_json("verify", "--suite", "planar", "--timing")
    assert code == 0 and [s["suite"] for s in rec["suites"]] == ["planar"]
    assert rec["suites"][0]["seconds"] >= 0


def test_verify_negative_control():
    code, rec = run_json("verify", "--suite", "special", "--tol", "1e-20")
    assert code == 1
    assert rec["failed"] == ["special"]


def test_planar_check():
    code, rec = run_json("planar-check", "--k", "1", "--y1", "0.6", "--y2", "0.8")
    assert code == 0 and set(rec["pw"]) == {"1", "2"}
    assert rec["max_rel_err"] <= 1e-9
    code, rec = run_json("planar-check", "--y1", "0.6", "--y2", "0.8", "--m", "3")
    assert code == 1 and rec["error"]["code"] == "DomainViolation"


def test_build_contour():
    code, rec = run_json("build-contour", "--m", "2", "--samples", "128")
    assert code == 0 and rec["closed"] and rec["chart"] == "beta"
    pts = rec["segments"][0]["samples"]
    assert len(pts) == 128
    assert pts[-1][0] - pts[0][0] == pytest.approx(2 * math.pi)
    assert run("build-contour", "--m", "2", "--samples", "8")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spherewave", "eval-green", "--theta", "2.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["rel_err"] <= 1e-8
