"""Acceptance criteria, judged from one ``hradon verify-all`` run.

The full report is produced once, in a subprocess and with wall-clock
timings; each criterion then checks its suite's pass flag at the suite's
own tolerance and its runtime limit.  Criterion 8 is the run itself: exit
code 0 within 30 minutes.
"""
import json
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES
from hradon.suites import RUNTIME_LIMITS

FULL_RUN_LIMIT = 30 * 60.0

CRITERIA = {
    1: "1-equivalence",
    2: "2-kernel",
    3: "3-certificates",
    4: "4-stein-wainger",
    5: "5-dichotomy",
    6: "6-fixed-polynomial",
    7: "7-audits",
}


def _summary(name: str, s: dict) -> str:
    """The headline measurement of each suite, for the printed line."""
    if name == "1-equivalence":
        return f"mismatches={s['mismatches']['value']} of {s['subsets']['value']}"
    if name == "2-kernel":
        return (f"reconstruction={s['reconstruction_max_abs_error']['value']:.2e} "
                f"cancellation={max(s['cancellation_s_max']['value'], s['cancellation_t_max']['value']):.2e}")
    if name == "3-certificates":
        return f"vdc violations={s['vdc_violations']['value']} nw violations={s['nw_violations']['value']}"
    if name == "4-stein-wainger":
        return f"sup ratio F16/F8={s['sup_ratio']['value']:.4f} (limit 2)"
    if name == "5-dichotomy":
        return (f"s*t^2 variation={s['s*t^2']['relative_variation']:.4f} (limit 0.10), "
                f"s*t slope={s['s*t']['fitted_slope']:.3f} increasing={s['s*t']['strictly_increasing']}")
    if name == "6-fixed-polynomial":
        return ", ".join(f"{m} max/min={s[m]['max_over_min']['value']:.3g}" for m in ("m=0", "m=4"))
    if name == "7-audits":
        return (f"partitions={s['partition_K'] and s['partition_L1_L2'] and s['appendix_Rr']} "
                f"Dk stable={all(v['stable'] for v in s['Dk'].values())}")
    return ""


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify") / "report.json"
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "hradon.cli", "verify-all", "--timings",
                           "--out", str(out)], capture_output=True, text=True,
                          timeout=2 * FULL_RUN_LIMIT)
    wall = time.perf_counter() - t0
    report = json.loads(out.read_text()) if out.exists() else {"suites": {}}
    return proc, wall, report


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(full_run, number):
    _, _, report = full_run
    name = CRITERIA[number]
    s = report["suites"].get(name)
    assert s is not None, f"suite {name} missing from the report"
    detail = s.get("detail") or _summary(name, s)
    ok = s["passed"] and s["seconds"] < RUNTIME_LIMITS[name]
    ACCEPTANCE_LINES.append(f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'}  "
                            f"{detail}; {s['seconds']:.1f} s of {RUNTIME_LIMITS[name]:.0f} s")
    assert s["passed"], f"{name}: {detail}"
    assert s["seconds"] < RUNTIME_LIMITS[name], f"{name} took {s['seconds']:.1f} s"


def test_criterion_8_full_run(full_run):
    proc, wall, report = full_run
    ok = proc.returncode == 0 and wall < FULL_RUN_LIMIT
    failed = [n for n, s in report["suites"].items() if not s["passed"]]
    ACCEPTANCE_LINES.append(f"criterion 8 [verify-all]: {'PASS' if ok else 'FAIL'}  "
                            f"exit code {proc.returncode}, {wall:.0f} s of {FULL_RUN_LIMIT:.0f} s"
                            + (f", failing suites: {', '.join(failed)}" if failed else ""))
    assert wall < FULL_RUN_LIMIT
    assert proc.returncode == 0, f"verify-all exit code {proc.returncode}; failing: {failed}"
