"""Acceptance criteria, at full scale.

Each test records one line in ``RESULTS``; the conftest summary hook prints
them after the run, and ``python tests/test_acceptance.py`` prints them
directly.
"""
import sys
import time
from pathlib import Path

import pytest

from refsim import oracle
from refsim.kripke import mfi_model
from refsim.relations import related
from refsim.semantics import check, check_base
from refsim.syntax import parse

sys.path.insert(0, str(Path(__file__).parent))
from conftest import load  # noqa: E402

RESULTS: dict[int, str] = {}

pytestmark = pytest.mark.acceptance


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail})"
    print(RESULTS[n])


def _summary(report: oracle.SuiteReport, limit: int = 3) -> str:
    bits = [f"{report.instances} checks", f"{len(report.failures)} failures", f"{report.wall_time:.1f}s"]
    labels = sorted({f.label for f in report.failures})
    if labels:
        bits.append("failing: " + ",".join(labels[:limit]))
    return ", ".join(bits)


def test_01_axiom_schemas():
    report = oracle.run_axiom_suite(0, n_instances=200, max_states=3, rules=())
    low = [s for s in oracle.AXIOMS if report.counts.get(s, 0) < 200]
    ok = report.passed and not low and report.wall_time <= 600
    record(1, "axiom schemas, 200 each, tableau and <=3-state models", ok, _summary(report))
    assert not low, low
    assert report.wall_time <= 600
    assert report.passed, report.to_json()


def test_02_quantifier_validities():
    report = oracle.run_quantifier_validities(0, n_instances=100, max_states=3)
    low = [s for s in oracle.QUANTIFIER_PROPS if report.counts.get(s, 0) < 100]
    ok = report.passed and not low
    detail = _summary(report, limit=8)
    if report.failures:
        per: dict[str, set] = {}
        for f in report.failures:
            per.setdefault(f.label.split("/")[0], set()).add(f.formula)
        detail += "; " + ", ".join(f"{k}: {len(v)}/{report.counts.get(k, 0)} instances invalid" for k, v in sorted(per.items()))
    record(2, "T/4/CR/MK for simulation and refinement quantifiers, 100 each", ok, detail)
    assert not low, low
    assert report.passed, report.to_json()


def test_03_unsoundness_regression():
    report = oracle.unsoundness_regression(3)
    record(3, "ungated SQ4_cons rewrite disagrees with gated reduction", report.passed,
           _summary(report) + "; " + "; ".join(report.notes))
    assert report.passed, report.to_json()


def test_04_mi2ref():
    t0 = time.perf_counter()
    total, failures = 0, []
    for atoms, agents in oracle.MI2REF_UNIVERSES:
        checked, fails = oracle.mi2ref_failures(3, atoms, agents)
        total += checked
        failures += fails
    ok = not failures and total > 0
    record(4, "every pointed model <=3 states refines the ignorance model", ok,
           f"{total} pointed models, {len(failures)} failures, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_05_negative_preservation():
    report = oracle.run_preservation_suite(max_states=2, mi2ref_universes=())
    record(5, "negative fragment preserved along every simulation, pairs <=2 states", report.passed, _summary(report))
    assert report.passed, report.to_json()


def test_06_origin_agreement():
    report = oracle.run_origin_agreement(0, n_instances=300, depth=2)
    ok = report.passed and report.instances >= 100
    record(6, "syntactic and semantic origin elimination agree", ok, _summary(report))
    assert ok, report.to_json()


def test_07_reduction_vs_search():
    formulas = oracle.curated_single_quantifier(0)
    assert len(formulas) >= 50
    report = oracle.cross_check_reduction_suite(0, max_states=3, bound=8, formulas=formulas)
    misses = report.counts["completeness-miss"]
    ok = report.passed and misses == 0
    record(7, "reduction vs bounded witness search, <=3 states, bound 8", ok,
           f"{len(formulas)} formulas, {report.counts['pointed-models']} pointed-model checks, "
           f"{len(report.failures)} strict failures, {misses} completeness misses, {report.wall_time:.1f}s")
    assert report.passed, report.to_json()
    assert misses == 0, report.notes[:10]


def test_08_derived_rules():
    report = oracle.run_axiom_suite(0, max_states=3, schemas=(), rules=oracle.RULES, n_rule_instances=50)
    low = [r for r in ("AR", "ONec") if report.counts.get(r, 0) < 50]
    ok = report.passed and not low
    record(8, "derived rules AR, OMP, ON, ONec as validity implications", ok, _summary(report))
    assert not low, low
    assert report.passed, report.to_json()


def _golden() -> list[tuple[str, bool]]:
    m, m1, m2, m3 = (load(f"chain_{k}") for k in ("M", "M1", "M2", "M3"))
    e, e2, o = load("epistemic_M"), load("epistemic_M2"), load("mfi_p_ab")
    return [
        ("M' refines M", related("ref", m, m1)),
        ("M'' refines M", related("ref", m, m2)),
        ("M''' bisimilar to M", related("bisim", m, m3)),
        ("M simulates M''", related("sim", m2, m)),
        ("M''' refines M''", related("ref", m3, m2)),
        ("M' not bisimilar to M", not related("bisim", m, m1)),
        ("two-agent model: [a]p & [b]p", check_base(e, parse("[a]p & [b]p"))),
        ("two-agent model: <a>~[b]p & <b>~[a]p", check_base(e, parse("<a>~[b]p & <b>~[a]p"))),
        ("ignorance model matches fixture", o.model == mfi_model(["p"], ["a", "b"])),
        ("ignorance model simulates M", related("sim", e, o)),
        ("M refines the ignorance model", related("ref", o, e)),
        ("M not bisimilar to the ignorance model", not related("bisim", e, o)),
        ("M2 bisimilar to the ignorance model", related("bisim", e2, o)),
        ("M refines M2", related("ref", e2, e)),
        ("[orig][a]p false at M", not check(e, parse("[orig][a]p"))),
    ]


def test_09_golden_fixtures():
    results = _golden()
    bad = [name for name, ok in results if not ok]
    record(9, "example-model judgments", not bad, f"{len(results)} judgments, {len(bad)} wrong" + (f": {bad}" if bad else ""))
    assert not bad, bad


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    print()
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(1 if failed else 0)
