"""Acceptance criteria, each run at its stated range and tolerance.

Every test records one PASS/FAIL line that is printed in the pytest
terminal summary under "acceptance criteria".
"""

import hashlib
import json
import math
from pathlib import Path

import pytest

from flatsum.arith import factorize
from flatsum.flatnum import zhang_count
from flatsum.harness import SUITES, TARGETS, SweepConfig, render_report, run_bound_sweep, run_identity_suite

GOLDEN = Path(__file__).parent / "golden"
H_GRID_4 = ("1", "q/4", "q/2", "q")


def identity(name, q_max, **kw):
    cfg = SweepConfig(q_min=kw.pop("q_min", 1), q_max=q_max, **kw)
    report = run_identity_suite(name, cfg)
    worst_scaled = max((rec.ratio / max(rec.q, 1) for rec in report.records), default=0.0)
    return report, worst_scaled


def test_criterion_1_lemma2(criterion):
    report, worst = identity("lemma2", 300, tol=1e-7)
    ok = report.passed and worst < 1e-7 and len(report.records) > 0
    criterion(1, "lemma2 identity, q <= 300, all splits and characters", ok, f"(max_dev/q {worst:.2e}, {len(report.records)} records)")
    assert ok


def test_criterion_2_lemma3(criterion):
    report, worst = identity("lemma3", 500, tol=1e-7)
    qs = {rec.q for rec in report.records}
    expected = {q for q in range(1, 501, 2) if factorize(q).is_squarefree}
    ok = report.passed and worst < 1e-7 and qs >= expected - {1}
    criterion(2, "lemma3 Salie evaluation, odd squarefree q <= 500", ok, f"(max_dev/q {worst:.2e}, {len(qs)} moduli)")
    assert ok


def test_criterion_3_fourier(criterion):
    report, worst = identity("fourier", 300, tol=1e-7, h_grid=H_GRID_4)
    ok = report.passed and worst < 1e-7 and len(report.records) > 0
    criterion(3, "Fourier expansion of W*, q <= 300", ok, f"(max_dev/q {worst:.2e}, {len(report.records)} records)")
    assert ok


def test_criterion_4_salie_closed(criterion):
    report, worst = identity("salie-closed", 500, tol=1e-7, h_grid=H_GRID_4)
    zero_cases = [rec for rec in report.records if any(p % 4 == 3 for p in factorize(rec.q).primes)]
    zero_ok = all(rec.ratio < 1e-9 * rec.q and rec.lhs < 1e-9 * rec.q for rec in zero_cases)
    has_21 = any(rec.q == 21 for rec in zero_cases)
    ok = report.passed and worst < 1e-7 and zero_ok and has_21
    criterion(4, "closed form of W*(jacobi), odd squarefree q <= 500", ok, f"(max_dev/q {worst:.2e}, {len(zero_cases)} vanishing records)")
    assert ok


def test_criterion_5_lemma5_lemma6(criterion):
    r5, w5 = identity("lemma5", 400, tol=1e-7)
    r6, w6 = identity("lemma6", 400, tol=1e-7)
    q2_ok = all(factorize(rec.q).q2 > 1 for rec in r5.records)
    ok = r5.passed and r6.passed and max(w5, w6) < 1e-7 and q2_ok and r5.records and r6.records
    criterion(5, "lemma5 decomposition and lemma6 Gauss identities, q <= 400", bool(ok), f"(max_dev/q {max(w5, w6):.2e})")
    assert ok


def test_criterion_6_symmetry_and_zhang(criterion):
    report = run_identity_suite("symmetry", SweepConfig(q_min=1, q_max=500))
    sym_ok = report.passed and report.summary < 1e-9
    zhang_ok = all(zhang_count(q, 1).error == 0 for q in range(2, 2001))
    ok = sym_ok and zhang_ok
    criterion(6, "W = 0 for odd characters (q <= 500); Zhang error 0 at delta 1 (q <= 2000)", ok, f"(max |W| {report.summary:.2e})")
    assert ok


def test_criterion_7_classical_bounds(criterion):
    weil = run_bound_sweep("weil", SweepConfig(q_min=1, q_max=2000, chi="principal"))
    weil_ok = weil.passed and all(rec.ratio <= 1 + 1e-9 for rec in weil.records if rec.asserted)
    pv = run_bound_sweep("polya-vinogradov", SweepConfig(q_min=1, q_max=1000))
    pv_ok = pv.passed and all(rec.ratio <= 1 for rec in pv.records)
    ok = weil_ok and pv_ok and weil.records and pv.records
    criterion(
        7, "untwisted Weil (q <= 2000) and primitive Polya-Vinogradov (q <= 1000)", bool(ok),
        f"(Weil max {weil.summary:.4f}, PV max {pv.summary:.4f})",
    )
    assert ok


@pytest.mark.parametrize("target", ["theorem1", "theorem2", "theorem3"])
def test_criterion_8_ratio_regression(criterion, target):
    meta = json.loads((GOLDEN / f"{target}.meta.json").read_text())
    report = run_bound_sweep(target, SweepConfig(q_max=1000))
    text_json = render_report(report, "json")
    text_csv = render_report(report, "csv")
    obj = json.loads(text_json)
    ok = (
        text_csv == (GOLDEN / f"{target}.csv").read_text(encoding="utf-8")
        and hashlib.sha256(text_json.encode()).hexdigest() == meta["json_sha256"]
        and obj["max_ratio"] == meta["max_ratio"]
        and len(report.records) == meta["records"]
    )
    if target == "theorem1":
        spot = run_bound_sweep("theorem1", SweepConfig(q_list=(17,), h_grid=("4",), chi="jacobi")).records[0]
        expected = 6 / (math.sqrt(17) * 4 * max(math.log(4), 1))
        ok = ok and spot.lhs == pytest.approx(6) and abs(spot.ratio - expected) < 1e-12 and round(spot.ratio, 3) == 0.262
    criterion(8, f"{target} sweep q <= 1000 reproduces the golden report", ok, f"(max ratio {obj['max_ratio']})")
    assert ok


def test_criterion_9_determinism(criterion):
    cfg = SweepConfig(q_min=1, q_max=120, samples=16)
    mismatched = []
    for name in SUITES:
        for fmt in ("json", "csv"):
            if render_report(run_identity_suite(name, cfg), fmt) != render_report(run_identity_suite(name, cfg), fmt):
                mismatched.append(f"{name}/{fmt}")
    for target in TARGETS:
        for fmt in ("json", "csv"):
            if render_report(run_bound_sweep(target, cfg), fmt) != render_report(run_bound_sweep(target, cfg), fmt):
                mismatched.append(f"{target}/{fmt}")
    ok = not mismatched
    criterion(9, "identical flags give byte-identical reports for every suite and target", ok, f"({', '.join(mismatched)})" if mismatched else "")
    assert ok
