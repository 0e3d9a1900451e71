"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible in
``pytest -v`` output) and asserts the same condition, with the runtime
limit checked alongside the numeric tolerance.
"""
import io
import json
import math
import time

import numpy as np
import pytest

import oracles
from orlicz import (
    ExpMinusOne,
    Linear,
    PiecewiseLinear,
    Power,
    PreconditionError,
    ULogU,
    biconjugate_check,
    finiteness_duality,
)
from orlicz.catalog import CATALOG_FUNCTIONS, COLUMNS, run_catalog
from orlicz.cli import main
from orlicz.geometry import (
    SequenceSpace,
    SliceSpec,
    check_renorming,
    explicit_pair_diameter,
    sigma_bound,
    slice_diameter_lower_bound,
)
from orlicz.harness import RunConfig, run_suite
from orlicz.spaces import (
    StepFunction,
    amemiya_minimize,
    fundamental_function,
    luxemburg_norm,
    orlicz_norm_dual,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed, limit):
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {title}: {detail} "
                  f"[{elapsed:.1f} s, limit {limit:g} s]")
        assert ok, f"{title}: {detail} in {elapsed:.1f} s"
    return emit


def _records(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


# 1 -------------------------------------------------------------------------------
def test_criterion_01_norm_sandwich(report):
    t0 = time.perf_counter()
    cfg = RunConfig.from_dict({"command": "verify", "suite": "norms", "seed": 2024, "budget": 1000})
    res = run_suite(cfg.resolved(), "norms")
    elapsed = time.perf_counter() - t0
    worst = min(c.slack for c in res.cases)
    report(1, "norm sandwich, 5 families x 1000 step functions", res.run == 5000 and res.failed == 0,
           f"{res.passed}/{res.run} passed, min slack {worst:.3g}", elapsed, 30)


# 2 -------------------------------------------------------------------------------
def test_criterion_02_orlicz_norm_duality(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    families = [Power(2.0), Power(1.5), Power(4.0), Linear(1.0), ExpMinusOne()]
    worst = 0.0
    count = 0
    for i in range(200):
        f = families[i % len(families)]
        k = int(rng.integers(1, 9))
        x = StepFunction.nonatomic(list(zip(rng.normal(size=k) * 10 ** rng.uniform(-1, 0.5, size=k),
                                            rng.uniform(0.05, 2, size=k))))
        gap = abs(amemiya_minimize(f, x).value - orlicz_norm_dual(f, x))
        worst = max(worst, gap)
        count += 1
    elapsed = time.perf_counter() - t0
    report(2, "|amemiya - dual sup| on 200 step functions", worst <= 1e-4 and count == 200,
           f"max gap {worst:.3g} (tolerance 1e-4)", elapsed, 60)


# 3 -------------------------------------------------------------------------------
def test_criterion_03_fundamental_function(report):
    t0 = time.perf_counter()
    worst = 0.0
    for f in (Power(2.0), Linear(1.0), ExpMinusOne(), ULogU()):
        for t in 10.0 ** np.arange(-3, 4):
            direct = luxemburg_norm(f, StepFunction.nonatomic([(1.0, t)]))
            formula = fundamental_function(f, t)
            worst = max(worst, abs(direct - formula) / formula)
    elapsed = time.perf_counter() - t0
    report(3, "indicator norm vs 1/phi^-1(1/t)", worst <= 1e-9,
           f"max relative error {worst:.3g} (tolerance 1e-9)", elapsed, 5)


# 4 -------------------------------------------------------------------------------
def test_criterion_04_biconjugacy(report):
    t0 = time.perf_counter()
    grid = np.geomspace(1e-2, 1e2, 200)
    errs = {f.label(): biconjugate_check(f, grid).max_error
            for f in (Power(2.0), Power(4.0), ExpMinusOne(), ULogU())}
    elapsed = time.perf_counter() - t0
    report(4, "phi_** = phi on [1e-2, 1e2]", max(errs.values()) <= 1e-5,
           ", ".join(f"{k} {v:.2g}" for k, v in errs.items()), elapsed, 30)


# 5 -------------------------------------------------------------------------------
def test_criterion_05_finiteness_duality(report):
    t0 = time.perf_counter()
    checked, bad = 0, []
    for name, f in CATALOG_FUNCTIONS.items():
        try:
            d = finiteness_duality(f)
        except PreconditionError:
            continue  # stated for finite phi only; the capped entries are out of scope
        checked += 1
        if not d.consistent:
            bad.append(name)
    elapsed = time.perf_counter() - t0
    report(5, "N at infinity iff phi_* finite", checked == 7 and not bad,
           f"{checked} finite catalog functions, inconsistent: {bad or 'none'}", elapsed, 5)


# 6 -------------------------------------------------------------------------------
def test_criterion_06_sigma_bound(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    power_err = 0.0
    for p in (1.5, 2.0, 3.0, 4.0):
        for _ in range(20):
            a, d = sorted(rng.uniform(1e-3, 1e3, size=2))
            power_err = max(power_err, abs(sigma_bound(Power(p), (a, d)) - 2 ** (1 - p)))
    top = 0.0
    for f in CATALOG_FUNCTIONS.values():
        k = f.constants()
        if k.d == math.inf:
            continue  # linear: no admissible interval
        for _ in range(20):
            hi = min(k.b, k.d + 50.0) if math.isfinite(k.b) else k.d + 50.0
            a, d = sorted(rng.uniform(k.d, hi, size=2))
            if a <= k.d or f._scalar(a) <= 0:
                continue
            top = max(top, sigma_bound(f, (a, d)))
    elapsed = time.perf_counter() - t0
    report(6, "sigma = 2^(1-p) for powers, sigma < 1 on the catalog",
           power_err <= 1e-12 and top < 1, f"power error {power_err:.2g}, max catalog sigma {top:.6f}",
           elapsed, 5)


# 7 and 8 share their machine records with criterion 11 ---------------------------
WITNESS_ARGV = ["verify", "--suite", "witness", "--seed", "7", "--budget", "10000", "--format", "records"]
SLICES_ARGV = ["verify", "--suite", "slices", "--seed", "0", "--format", "records"]
_first_runs = {}


def test_criterion_07_witness_certification(report):
    t0 = time.perf_counter()
    code, out, err = _records(WITNESS_ARGV)
    elapsed = time.perf_counter() - t0
    _first_runs["witness"] = out
    recs = [json.loads(line) for line in out.splitlines()]
    cases = [r for r in recs if r["type"] == "case"]
    summary = recs[-1]
    hilbert = [r["detail"]["observed_min"] for r in cases if r["inputs"]["hilbert"]]
    bounds = [r["detail"]["certified_bound"] for r in cases]
    ok = (code == 0 and summary["failed"] == 0 and len(cases) >= 6 * 10_000
          and max(bounds) < 2 and max(hilbert) <= math.sqrt(2) + 1e-9)
    report(7, "witness certification, {u^2, u^4, e^u-1} x {NonAtomic(inf), Counting}", ok,
           f"{summary['passed']}/{summary['run']} certified, max bound {max(bounds):.6f}, "
           f"u^2 max observed {max(hilbert):.10f} vs sqrt 2", elapsed, 300)


def test_criterion_08_slice_geometry(report):
    t0 = time.perf_counter()
    l1, l2 = Linear(1.0), Power(2.0)
    ws = SliceSpec(4, (1, 0, 0, 0), 0.05, "weak_star_slice")
    pair = explicit_pair_diameter(l1, ws, [1, 1, 1, 1], [1, -1, -1, -1]).lower_bound
    cap = SliceSpec(4, (1, 0, 0, 0), 0.02)
    est = slice_diameter_lower_bound(l2, cap, budget=20_000, seed=0).lower_bound
    brute, pairs = oracles.cap_diameter_pairs(0.02)
    code, out, _ = _records(SLICES_ARGV)
    _first_runs["slices"] = out
    elapsed = time.perf_counter() - t0
    agree = abs(est - brute) / brute
    ok = pair >= 1.99 and 0.35 <= est <= 0.399 and agree <= 0.02 and pairs >= 10 ** 6 and code == 0
    report(8, "slice diameters", ok,
           f"l1 explicit pair {pair:.6f}; l2 cap lower bound {est:.6f} vs closed form "
           f"{2 * math.sqrt(2 * 0.02 - 0.02 ** 2):.6f}, brute force {brute:.6f} over {pairs} pairs "
           f"({100 * agree:.2f}% apart); slices suite exit {code}", elapsed, 120)


# 9 -------------------------------------------------------------------------------
# Verdicts derived by hand from the growth of each function:
# columns rnp, daugavet, ld2p, d2p, sd2p, orlicz_norm_ld2p; y = holds, n = fails, ? = not covered.
EXPECTED = {}
for fn in ("power1.5", "power2", "power4", "u_log_u"):  # N at infinity, Delta2 and Delta2^0 everywhere
    for ms in ("nonatomic1", "nonatomic_inf", "counting"):
        for nk in ("luxemburg", "orlicz"):
            EXPECTED[fn, ms, nk] = "ynnnnn"
EXPECTED.update({
    # phi = u: L_1 has the Daugavet property and no RNP; l_1 has RNP and no diameter two property
    ("linear", "nonatomic1", "luxemburg"): "nyyyyy",
    ("linear", "nonatomic1", "orlicz"): "nyyyyy",
    ("linear", "nonatomic_inf", "luxemburg"): "nyyyyy",
    ("linear", "nonatomic_inf", "orlicz"): "nyyyyy",
    ("linear", "counting", "luxemburg"): "ynnnnn",
    ("linear", "counting", "orlicz"): "ynnnnn",
    # e^u - 1: N at infinity, Delta2^inf fails, Delta2^0 holds
    ("exp_minus_one", "nonatomic1", "luxemburg"): "nnyyyn",
    ("exp_minus_one", "nonatomic1", "orlicz"): "nnnnnn",
    ("exp_minus_one", "nonatomic_inf", "luxemburg"): "nnyyyn",
    ("exp_minus_one", "nonatomic_inf", "orlicz"): "nnnnnn",
    ("exp_minus_one", "counting", "luxemburg"): "ynnnnn",
    ("exp_minus_one", "counting", "orlicz"): "ynnnnn",
    # max(0, u - 1): not N at infinity; Delta2^inf holds, Delta2 and Delta2^0 fail (phi vanishes on [0, 1])
    ("shifted_linear", "nonatomic1", "luxemburg"): "nn????",
    ("shifted_linear", "nonatomic1", "orlicz"): "n?????",
    ("shifted_linear", "nonatomic_inf", "luxemburg"): "nnyyy?",
    ("shifted_linear", "nonatomic_inf", "orlicz"): "n?????",
    ("shifted_linear", "counting", "luxemburg"): "nnyyy?",
    ("shifted_linear", "counting", "orlicz"): "nn????",
})
SYMBOL = {"holds": "y", "fails": "n", "not-covered": "?"}


def test_criterion_09_classifier_truth_table(report):
    t0 = time.perf_counter()
    rows = run_catalog()
    elapsed = time.perf_counter() - t0
    mismatches, inexact = [], []
    seen = 0
    for r in rows:
        if r.skipped:
            continue
        seen += 1
        got = "".join(SYMBOL[r.cells()[c]] for c in COLUMNS)
        if EXPECTED.get((r.function, r.measure, r.norm_kind)) != got:
            mismatches.append((r.function, r.measure, r.norm_kind, got))
        if CATALOG_FUNCTIONS[r.function].closed_form:
            for c in COLUMNS:
                if not getattr(r.report, c).exact:
                    inexact.append((r.function, r.measure, c))
    ok = seen == len(EXPECTED) and not mismatches and not inexact
    report(9, "catalog verdict matrix", ok,
           f"{seen} rows, mismatches {mismatches or 'none'}, non-exact labels {inexact or 'none'}",
           elapsed, 10)


# 10 ------------------------------------------------------------------------------
def test_criterion_10_renorming_membership(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    spaces = [
        ("l1^2", Linear(1.0), 1e-6),
        ("l_{u^1.02}^2", Power(1.02), 0.05),
        ("l_phi^2, phi = PL (0,0) (1,1) (2,3)", PiecewiseLinear(((0.0, 0.0), (1.0, 1.0), (2.0, 3.0))), 0.05),
    ]
    lines, total_bad, trials = [], 0, 0
    for name, f, delta in spaces:
        sp = SequenceSpace(f)
        e1, e2 = np.eye(2)
        x, y = e1 / sp.norm([e1])[0], e2 / sp.norm([e2])[0]
        ab = rng.uniform(-5, 5, size=(1000, 2))
        rep = check_renorming(sp.norm, x, y, delta, ab[:, 0], ab[:, 1])
        total_bad += rep.violations
        trials += rep.trials
        lines.append(f"{name}: {rep.violations} violations")
    elapsed = time.perf_counter() - t0
    report(10, "renorming interval membership", total_bad == 0 and trials == 3000,
           "; ".join(lines), elapsed, 30)


# 11 ------------------------------------------------------------------------------
def test_criterion_11_determinism(report):
    t0 = time.perf_counter()
    if "witness" not in _first_runs:
        _first_runs["witness"] = _records(WITNESS_ARGV)[1]
    if "slices" not in _first_runs:
        _first_runs["slices"] = _records(SLICES_ARGV)[1]
    again_w = _records(WITNESS_ARGV)[1]
    again_s = _records(SLICES_ARGV)[1]
    cap = SliceSpec(4, (1, 0, 0, 0), 0.02)
    est_a = slice_diameter_lower_bound(Power(2.0), cap, budget=20_000, seed=0).to_dict()
    est_b = slice_diameter_lower_bound(Power(2.0), cap, budget=20_000, seed=0).to_dict()
    elapsed = time.perf_counter() - t0
    same = again_w == _first_runs["witness"] and again_s == _first_runs["slices"] and est_a == est_b
    report(11, "repeat runs are bit-identical", same,
           f"witness records {len(again_w)} bytes, slices records {len(again_s)} bytes, "
           f"identical: {same}", elapsed, 600)
