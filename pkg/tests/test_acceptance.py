"""Acceptance criteria, one test each.  Every test prints a single
``criterion N PASS|FAIL`` line; the lines are repeated in the terminal summary."""
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from operad_forge import cli
from operad_forge import operads as ops
from operad_forge import suites

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_FILES = {
    "simple_graph_path_with_edge": "g_path_edge.json",
    "multigraph_loops_and_double_edge": "mg_loops.json",
    "pointed_graph_path_with_edge": "gpointed_path_edge.json",
    "pointed_oriented_path_with_arc": "mgor_path_arc.json",
}


def _all_pass(checks):
    return all(c["passed"] for c in checks)


def _failed(checks):
    return ", ".join(c["check"] for c in checks if not c["passed"]) or "all checks pass"


def test_criterion_01_operad_axioms(criterion):
    t0 = time.perf_counter()
    checks = suites.suite_axioms(seed=0, samples=500)
    elapsed = time.perf_counter() - t0
    exhaustive = all(c["detail"]["checked"]["sequential"] > 0 for c in checks)
    ok = _all_pass(checks) and exhaustive and elapsed < 60
    criterion(1, "operad axioms for mg, g, gpointed, mgor, plie", ok, f"{elapsed:.1f}s")
    assert ok, checks


def test_criterion_02_worked_compositions(criterion):
    results = {}
    for name, case in suites.worked_compositions().items():
        op = ops.get_operad(case["operad"])
        got = ops.compose(op, case["x"], "*", case["y"])
        golden = json.loads((GOLDEN / GOLDEN_FILES[name]).read_text())
        results[name] = cli.lincomb_json(got) == golden["terms"]
    coefs = sorted(int(t["coef"]) for t in json.loads((GOLDEN / "mg_loops.json").read_text())["terms"])
    ok = all(results.values()) and coefs == sorted([1, 1, 2, 2, 2, 4, 1, 1, 2])
    criterion(2, "four worked compositions equal golden files", ok,
              ", ".join(k for k, v in results.items() if not v) or "4/4")
    assert ok


def test_criterion_03_nonfree_relation(criterion):
    t0 = time.perf_counter()
    checks = suites.suite_nonfree()
    elapsed = time.perf_counter() - t0
    ok = _all_pass(checks) and elapsed < 1
    criterion(3, "non-freeness relation is zero", ok, f"{elapsed:.3f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "the edge-threshold claim does not hold as stated: compositions reach "
    "C(n-1,2)+1 edges for n = 3, 4, 5 and the 2-edge path on 3 vertices is "
    "decomposable; see test_threshold_corrected_bound"))
def test_criterion_04_edge_threshold(criterion):
    checks = {c["check"]: c for c in suites.suite_threshold(n_max=5)}
    supports = checks["threshold.supports_stay_below_bound"]
    generators = checks["threshold.heavy_graphs_are_generators"]
    ok = supports["passed"] and generators["passed"]
    criterion(4, "edge threshold: no composition support reaches C(n-1,2)+1 edges", ok,
              f"max support edges {supports['detail']['max_support_edges']} vs bound "
              f"{supports['detail']['bound']}; decomposable heavy graphs "
              f"{ {n: v['in_composable_span'] for n, v in generators['detail']['per_arity'].items()} }")
    assert ok


def test_threshold_corrected_bound():
    # supports never exceed C(n-1,2)+1 edges, and that value is attained from n = 3 on
    checks = {c["check"]: c for c in suites.suite_threshold(n_max=5)}
    assert checks["threshold.supports_stay_below_bound_plus_one"]["passed"]


def test_criterion_05_psi_homomorphism(criterion):
    checks = suites.suite_prelie()
    psi = checks[0]
    ok = psi["passed"] and psi["detail"]["cases"] > 0
    criterion(5, "psi is a homomorphism on trees |t1| <= 4, |t2| <= 3", ok, f"{psi['detail']['cases']} pairs")
    assert ok and _all_pass(checks)


def test_criterion_06_spanning_tree_orientations(criterion):
    checks = suites.suite_orientations(seed=0, cases=100)
    ok = _all_pass(checks) and all(c["detail"]["cases"] >= 100 for c in checks
                                   if c["check"] != "orientations.trees_give_psi_image")
    criterion(6, "spanning-tree orientation identities and kernel", ok, _failed(checks))
    assert ok


def test_criterion_07_suboperad_dimensions(criterion):
    checks = suites.suite_dimensions()
    ok = _all_pass(checks)
    criterion(7, "Com, ComMag and points/segment dimensions", ok, _failed(checks))
    assert ok


def test_criterion_08_generators(criterion):
    checks = suites.suite_generators()
    graph_checks = [c for c in checks if c["check"].startswith("generators.simple_graphs")]
    tree = next(c for c in checks if c["check"] == "generators.trees_report")
    ok = _all_pass(graph_checks) and len(graph_checks) == 3 and "note" in tree["detail"]
    criterion(8, "simple-graph generators at arities 2-4 with removal tests; tree report flagged", ok,
              f"tree list through arity 5 {'matches' if tree['passed'] else 'differs'}")
    assert ok


def test_criterion_09_koszul_data(criterion):
    checks = suites.suite_koszul()
    ok = _all_pass(checks)
    criterion(9, "relation spans 5 and 7, pairings vanish, orthogonal equals dual span", ok, _failed(checks))
    assert ok


def test_criterion_10_hilbert(criterion):
    t0 = time.perf_counter()
    checks = suites.suite_hilbert()
    elapsed = time.perf_counter() - t0
    ok = _all_pass(checks) and elapsed < 1
    criterion(10, "dual Hilbert series dimensions and functional equation", ok, f"{elapsed:.3f}s")
    assert ok


def test_criterion_11_loop_and_points(criterion):
    checks = suites.suite_lp()
    ok = _all_pass(checks)
    criterion(11, "loop/points closure memberships", ok, _failed(checks))
    assert ok


def test_criterion_12_determinism(criterion):
    cmd = [sys.executable, "-m", "operad_forge", "verify", "all", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    ok = a.stdout == b.stdout and len(a.stdout) > 0 and a.returncode == b.returncode
    criterion(12, "two verify runs give byte-identical reports", ok, f"{len(a.stdout)} bytes")
    assert ok
