"""Acceptance criteria, one test each; every test records a single pass/fail line.

The full suite is run once per session (serially, so per-benchmark wall
times are not inflated by sharing a core) and its rows feed AC3 to AC9.
"""

from __future__ import annotations

import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import record_ac
from hyqbench.benchmarks.common import REFERENCE_FEATURES, REFERENCE_METRICS, REFERENCE_NOISY
from hyqbench.benchmarks.shor import factors_from_period
from hyqbench.benchmarks.specs import BENCHMARKS, run_benchmark
from hyqbench.benchmarks.suite import kappa_sweep, run_suite
from hyqbench.metrics import CVDV_KEYS

GKP_TARGET, GKP_TOL = 0.66, 0.03
QFT_TARGET, QFT_TOL = 0.94, 0.02
QAOA_TARGET, QAOA_TOL = 3.0, 0.3
JCH_TOTAL, JCH_TOTAL_TOL, JCH_EDGE_MIN, JCH_MIDDLE_MAX = 2.0, 0.02, 1.8, 1.2
EXTREME_TOL = 0.005
METRIC_TOL = 0.1
NOISY_TOL = 0.03
KAPPAS = (1000.0, 2000.0, 4000.0)
PROPERTY_FILES = ("test_hilbert.py", "test_gates.py", "test_engine.py", "test_noise.py", "test_metrics.py",
                  "test_oracle.py")
LIMITS = {"gkp": 60, "qft": 60, "vqe": 600, "qaoa": 300, "jch": 300, "properties": 120}


@pytest.fixture(scope="session")
def suite():
    rows = run_suite(BENCHMARKS, jobs=1)
    return {r["name"]: r for r in rows}


def _row(suite, name):
    row = suite[name]
    assert row["status"] == "ok", row.get("error")
    return row


def test_ac1_gkp_fidelity():
    t = time.perf_counter()
    fid = run_benchmark("gkp").fidelities["ideal"]
    dt = time.perf_counter() - t
    ok = abs(fid - GKP_TARGET) <= GKP_TOL and dt < LIMITS["gkp"]
    record_ac(1, ok, f"GKP fidelity {fid:.4f} (target {GKP_TARGET} +- {GKP_TOL}), {dt:.1f} s")
    assert ok


def test_ac2_qft_fidelity():
    t = time.perf_counter()
    fid = run_benchmark("qft").fidelities["ideal"]
    dt = time.perf_counter() - t
    ok = abs(fid - QFT_TARGET) <= QFT_TOL and dt < LIMITS["qft"]
    record_ac(2, ok, f"QFT fidelity {fid:.4f} (target {QFT_TARGET} +- {QFT_TOL}), {dt:.1f} s")
    assert ok


def test_ac3_vqe_knapsack(suite):
    row = _row(suite, "vqe")
    out = row["outputs"]
    oracle = out["enumeration_optimum"]
    ok = (tuple(out["items"]) == (0, 1, 1, 1) and out["value"] == 19 and out["weight"] == 6
          and tuple(oracle["items"]) == (0, 1, 1, 1) and row["runtime_s"] < LIMITS["vqe"])
    record_ac(3, ok, f"VQE decoded {tuple(out['items'])} value {out['value']:g} weight {out['weight']:g} "
                     f"(p={out['probability']:.3f}, exhaustive {tuple(oracle['items'])}), {row['runtime_s']:.0f} s")
    assert ok


def test_ac4_cv_qaoa(suite):
    row = _row(suite, "qaoa")
    mean_x = row["outputs"]["mean_x"]
    ok = abs(mean_x - QAOA_TARGET) < QAOA_TOL and row["runtime_s"] < LIMITS["qaoa"]
    record_ac(4, ok, f"CV-QAOA <x> = {mean_x:.4f} (target {QAOA_TARGET} +- {QAOA_TOL}), {row['runtime_s']:.0f} s")
    assert ok


def test_ac5_jch(suite):
    row = _row(suite, "jch")
    out = row["outputs"]
    totals = out["total_photons"]
    occ = out["max_occupancy"]
    worst = max(abs(v - JCH_TOTAL) for v in totals)
    ok = (worst <= JCH_TOTAL_TOL and min(occ[0], occ[-1]) >= JCH_EDGE_MIN and max(occ[1:-1]) <= JCH_MIDDLE_MAX
          and row["runtime_s"] < LIMITS["jch"])
    record_ac(5, ok, f"JCH max |N-2| = {worst:.3f} (tol {JCH_TOTAL_TOL}), max occupancy "
                     f"{[round(v, 3) for v in occ]} (edges >= {JCH_EDGE_MIN}, middle <= {JCH_MIDDLE_MAX}), "
                     f"{row['runtime_s']:.0f} s")
    assert ok


def test_ac6_shor(suite):
    row = _row(suite, "shor")
    out = row["outputs"]
    post = factors_from_period(7, 15, 4)
    ok = bool(out["factors"]) and post == (3, 5)
    record_ac(6, ok, f"Shor N=15 factors {out['factors']} over {len(out['trials'])} trials; "
                     f"r=4, a=7 -> {post}; per-base success {out['success_probability']} "
                     f"vs random-phase {out['random_phase_success_probability']}")
    assert ok


def test_ac7_structural_features(suite):
    bad = []
    for name in BENCHMARKS:
        row = _row(suite, name)
        feats, ref = row["features"], REFERENCE_FEATURES[name]
        wrong = [k for k in ref if k != "depth" and feats[k] != ref[k]]
        # a depth mismatch is acceptable when a convention note explains it
        explained = any("depth" in n and not n.startswith("depth:") for n in row["notes"])
        if feats["depth"] != ref["depth"] and not explained:
            wrong.append("depth")
        if wrong:
            bad.append(f"{name}: " + ", ".join(f"{k} {feats[k]} vs {ref[k]}" for k in wrong))
    ok = not bad
    record_ac(7, ok, "all 8 rows match" if ok else "; ".join(bad))
    assert ok


def test_ac8_metric_extremes(suite):
    norm = {name: _row(suite, name)["cvdv_norm"] for name in BENCHMARKS}
    energy, neg, trunc = CVDV_KEYS
    extremes = {("qaoa", neg): norm["qaoa"][neg], ("shor", energy): norm["shor"][energy],
                ("vqe", trunc): norm["vqe"][trunc]}
    off = [f"{n}.{k.split('_', 1)[1]}={v:.2f}" for (n, k), v in extremes.items() if abs(v - 1) > EXTREME_TOL]
    far = []
    for name in BENCHMARKS:
        for key, want in zip(CVDV_KEYS, REFERENCE_METRICS[name]):
            if (name, key) in extremes:
                continue
            if abs(norm[name][key] - want) > METRIC_TOL:
                far.append(f"{name}.{key.split('_', 1)[1]} {norm[name][key]:.2f} vs {want:.2f}")
    ok = not off and not far
    record_ac(8, ok, f"extremes off: {off or 'none'}; outside +-{METRIC_TOL}: {len(far)} of 21 ({'; '.join(far)})")
    assert ok


def test_ac9_noise_fidelities(suite):
    cells = []
    bad = []
    for name, (want, _) in REFERENCE_NOISY.items():
        fid = _row(suite, name)["fidelities"]["noisy"]
        cells.append(f"{name} {fid:.3f}/{want}")
        if abs(fid - want) > NOISY_TOL:
            bad.append(name)
    sweeps = {name: kappa_sweep(name, KAPPAS) for name in ("cat", "gkp")}
    monotone = all(all(b < a for a, b in zip(f, f[1:])) for f in sweeps.values())
    ok = not bad and monotone
    record_ac(9, ok, f"measured/reference {', '.join(cells)}; outside +-{NOISY_TOL}: {bad or 'none'}; "
                     f"kappa doubling decreases cat and GKP fidelity: {monotone}")
    assert ok


def test_ac10_property_suites():
    here = Path(__file__).parent
    t = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           *[str(here / f) for f in PROPERTY_FILES]], capture_output=True, text=True)
    dt = time.perf_counter() - t
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and dt < LIMITS["properties"]
    record_ac(10, ok, f"property suites: {summary} ({dt:.0f} s, limit {LIMITS['properties']} s)")
    assert ok
