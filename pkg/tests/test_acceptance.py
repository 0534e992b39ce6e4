"""One test per acceptance criterion; each prints a PASS/FAIL line with its numbers."""

import json
import math
import time
from pathlib import Path

import numpy as np

from oracles import J01, J11, bessel_series, bisect
from robinspec.ballspec import (
    g_eta_q,
    gap_functions,
    gap_identity_residual,
    robin_eigenvalue_ball,
    second_eigenvalue_check,
)
from robinspec.cli import RunConfig, convergence, run
from robinspec.errors import ConvexityError
from robinspec.femspec import parse_domain, robin_spectrum
from robinspec.specfun import Bracket, bessel_j, find_root
from robinspec.verify import (
    PAYNE_SCHAEFER_BOUND,
    chiti_reports,
    classical_checks,
    equimeasurability_reports,
    faber_krahn_robin,
    hardy_littlewood_reports,
    is_ball,
    radial_identity_reports,
    reflection_reports,
    reverse_holder,
    rm_lower_bound,
    slack_fraction,
    theorem11_bound,
)

H = 0.02
SUITE = ["disk(m=512)", "square", "rectangle(1,2)", "rectangle(1,3)", "ellipse(2,1,m=512)",
         "lshape"]
BETAS = [0.1, 1.0, 10.0, 100.0]
CHITI_BETAS = [0.1, 1.0, 10.0]
GAP_CASES = [(n, b) for n in (2, 3) for b in (0.5, 1.0, 5.0, math.inf)]
FROZEN_CONFIG = Path(__file__).parent / "acceptance_config.json"


def domains():
    return [parse_domain(s) for s in SUITE]


def worst(reports):
    """Most negative ``margin + slack`` among reports, with its claim and context."""
    r = min(reports, key=lambda r: r.margin + r.discretization_slack)
    return r.margin + r.discretization_slack, r


def failures(reports):
    return [(r.claim_id, r.context.get("domain"), r.context.get("beta")) for r in reports
            if not r.holds]


def test_criterion_01_bessel(record_criterion):
    t0 = time.perf_counter()
    j0 = lambda x: bessel_j(0, x)  # noqa: E731
    root = find_root(j0, Bracket.from_function(j0, 2.0, 3.0))
    oracle = bisect(lambda x: bessel_series(0, x), 2.0, 3.0)
    lam = robin_eigenvalue_ball(2, 1.0, math.inf).eigenvalue
    dt = time.perf_counter() - t0
    e1, e2 = abs(root - oracle), abs(lam - oracle ** 2)
    ok = e1 < 1e-10 and e2 < 1e-9 and dt < 1.0
    record_criterion(1, ok, f"|j01 - oracle| = {e1:.1e}, |λ1 - j01²| = {e2:.1e}, {dt:.2f} s")
    assert ok


def test_criterion_02_fem_convergence(record_criterion):
    t0 = time.perf_counter()
    table = convergence("disk(m=512)", math.inf, [0.08, 0.04, 0.02])
    dt = time.perf_counter() - t0
    exact = robin_eigenvalue_ball(2, 1.0, math.inf).eigenvalue
    err = abs(table.lambda1[-1] - exact) / exact
    ok = err < 5e-3 and 1.8 <= table.order1 <= 2.2 and dt < 120
    record_criterion(2, ok, f"rel err {err:.2e} at h=0.02, order {table.order1:.3f}, {dt:.0f} s")
    assert ok


def test_criterion_03_cross_solver(record_criterion):
    t0 = time.perf_counter()
    disk = parse_domain("disk(m=512)")
    errs = []
    for beta in (0.1, 1.0, 10.0):
        pair = robin_spectrum(disk, beta, H)
        l1 = robin_eigenvalue_ball(2, 1.0, beta).eigenvalue
        l2 = second_eigenvalue_check(2, 1.0, beta)[0]
        errs += [abs(pair.lambda1 - l1) / l1, abs(pair.lambda2 - l2) / l2]
    dt = time.perf_counter() - t0
    ok = max(errs) < 5e-3 and dt < 180
    record_criterion(3, ok, f"max rel err {max(errs):.2e}, {dt:.0f} s")
    assert ok


def test_criterion_04_gap_identity(record_criterion):
    t0 = time.perf_counter()
    res = max(gap_identity_residual(gap_functions(n, 1.0, b)) for n, b in GAP_CASES)
    dt = time.perf_counter() - t0
    ok = res < 1e-6 and dt < 10
    record_criterion(4, ok, f"max relative residual {res:.1e}, {dt:.1f} s")
    assert ok


def test_criterion_05_monotonicity(record_criterion):
    bad = []
    r = np.linspace(0.0, 1.0, 1000)
    for n, b in GAP_CASES:
        g, eta, q = g_eta_q(gap_functions(n, 1.0, b), r)
        checks = [q.min() >= -1e-8, q.max() <= 1 + 1e-8, np.all(np.diff(q) <= 1e-8),
                  np.all(np.diff(g) >= -1e-8), np.all(np.diff(eta) <= 1e-8)]
        if not all(checks):
            bad.append((n, b))
    ok = not bad
    record_criterion(5, ok, f"{len(GAP_CASES)} cases, violations: {bad or 'none'}")
    assert ok


def test_criterion_06_theorem11(record_criterion):
    t0 = time.perf_counter()
    reps = [theorem11_bound(d, b, H) for d in domains() for b in BETAS]
    dt = time.perf_counter() - t0
    disk = [r for r in reps if r.context["domain"] == "disk(m=512)"]
    disk_gap = max(abs(r.margin) - r.discretization_slack for r in disk)
    low, _ = worst(reps)
    ok = not failures(reps) and disk_gap <= 0 and dt < 900
    record_criterion(6, ok, f"{len(reps)} cases, min margin+slack {low:.2e}, "
                            f"disk max |margin|-slack {disk_gap:.2e}, {dt:.0f} s")
    assert ok


def test_criterion_07_dirichlet_limit(record_criterion):
    ab = (J11 / J01) ** 2
    beta = 1e4
    rhs_err, ratio_excess, clipped = [], [], []
    for d in domains():
        rep = theorem11_bound(d, beta, H, estimate_rm_error=False)
        rhs_err.append(abs(rep.rhs - ab) / ab)
        pair = robin_spectrum(d, beta, H)
        clipped.append(pair.clipped)
        ratio_excess.append(pair.ratio - ab - slack_fraction(H, d.m) * ab)
    ok = max(rhs_err) < 1e-2 and max(ratio_excess) <= 0
    record_criterion(7, ok, f"max |rhs - (j11/j01)²|/(j11/j01)² = {max(rhs_err):.2e}, "
                            f"max ratio - AB - slack = {max(ratio_excess):.2e}, "
                            f"max clipped ψ dip {max(clipped):.1e}")
    assert ok


def test_criterion_08_faber_krahn(record_criterion):
    reps = [faber_krahn_robin(d, b, H) for d in domains() for b in BETAS]
    disk = [r for r in reps if r.context["domain"] == "disk(m=512)"]
    disk_gap = max(abs(r.margin) - r.discretization_slack for r in disk)
    low, _ = worst(reps)
    ok = not failures(reps) and disk_gap <= 0
    record_criterion(8, ok, f"min margin+slack {low:.2e}, disk max |margin|-slack {disk_gap:.2e}")
    assert ok


def test_criterion_09_chiti(record_criterion):
    t0 = time.perf_counter()
    reps = []
    for d in domains():
        if is_ball(d):
            continue
        for b in CHITI_BETAS:
            reps += chiti_reports(d, b, H, p=2.0)
    dt = time.perf_counter() - t0
    crossings = [r for r in reps if r.claim_id == "thm3.1"]
    transfers = [r for r in reps if r.claim_id == "prop2.8" and r.context["exponent"] in (2, 3)]
    lemma = [r for r in reps if r.claim_id == "lemma3.2"]
    max_cross = max(r.lhs for r in crossings)
    max_viol = max(r.lhs - r.discretization_slack for r in lemma)
    ok = max_cross <= 1 and all(r.holds for r in transfers) and max_viol <= 0
    cases = {}
    for r in crossings:
        cases[r.context["case"]] = cases.get(r.context["case"], 0) + 1
    record_criterion(9, ok, f"{len(crossings)} cases {cases}, max crossings {max_cross:.0f}, "
                            f"transfer failures {sum(not r.holds for r in transfers)}, "
                            f"max lemma violation - slack {max_viol:.2e}, {dt:.0f} s")
    assert ok


def test_criterion_10_reverse_holder(record_criterion):
    reps = [reverse_holder(d, b, p, q, H) for d in domains() for b in BETAS
            for p, q in ((1, 2), (2, 3), (1, 3))]
    disk = [r for r in reps if r.context["domain"] == "disk(m=512)"]
    disk_gap = max(abs(r.margin) - r.discretization_slack for r in disk)
    same = [reverse_holder(d, 1.0, 2.0, 2.0, H) for d in domains()]
    exact = all(r.lhs == 1.0 and r.rhs == 1.0 for r in same)
    low, _ = worst(reps)
    ok = not failures(reps) and disk_gap <= 0 and exact
    record_criterion(10, ok, f"{len(reps)} cases, min margin+slack {low:.2e}, "
                             f"disk max |margin|-slack {disk_gap:.2e}, p=q exact: {exact}")
    assert ok


def test_criterion_11_rm_bound(record_criterion):
    reps, refused = [], []
    for d in domains():
        for b in BETAS:
            try:
                reps.append(rm_lower_bound(d, b, H))
            except ConvexityError:
                refused.append(d.name)
    low, _ = worst(reps)
    ok = not failures(reps) and set(refused) == {"lshape"}
    record_criterion(11, ok, f"{len(reps)} convex cases, min margin+slack {low:.2e}, "
                             f"refused {sorted(set(refused))}")
    assert ok


def test_criterion_12_rearrangement(record_criterion):
    eq = equimeasurability_reports(seed=0, count=50)
    rad = radial_identity_reports()
    hl = hardy_littlewood_reports(seed=0, count=50)
    refl = reflection_reports(seed=0)
    ok = (all(r.holds for r in eq) and max(r.lhs for r in eq) <= 1e-8
          and all(r.holds for r in rad) and max(r.lhs for r in rad) <= 1e-10
          and len(hl) == 50 and all(r.holds for r in hl)
          and all(r.lhs == 0.0 for r in refl))
    record_criterion(12, ok, f"equimeasurability {max(r.lhs for r in eq):.1e}, "
                             f"radial {max(r.lhs for r in rad):.1e}, "
                             f"Hardy-Littlewood {sum(r.holds for r in hl)}/50, "
                             f"reflection {max(r.lhs for r in refl):.0e}")
    assert ok


def test_criterion_13_classical(record_criterion):
    reps = [r for d in domains() for r in classical_checks(d, H)]
    by = lambda cid: [r for r in reps if r.claim_id == cid]  # noqa: E731
    ps_disk = [r for r in by("eq12.7") if r.context["domain"] == "disk(m=512)"]
    pr_disk = [r for r in by("eq1.4") if r.context["domain"] == "disk(m=512)"]
    small = by("eq12.3")
    ok = (PAYNE_SCHAEFER_BOUND == 3.0 and all(r.holds for r in ps_disk)
          and all(r.context["beta"] > r.context["p0"] * r.context["lambda1_dirichlet"]
                  for r in ps_disk)
          and all(abs(r.margin) <= r.discretization_slack for r in pr_disk)
          and all(r.holds for r in by("eq1.30.1"))
          and len(small) == len(SUITE) - 1 and all(r.holds for r in small))
    record_criterion(13, ok, f"Payne-Schaefer disk ratio {ps_disk[0].lhs:.4f} <= 3, "
                             f"Payne-Rayner disk margin {pr_disk[0].margin:.1e} "
                             f"(slack {pr_disk[0].discretization_slack:.1e}), "
                             f"failures {failures(reps) or 'none'}")
    assert ok


def test_criterion_14_determinism(record_criterion, tmp_path):
    cfg = RunConfig.from_json(FROZEN_CONFIG)
    first = run(cfg, out_dir=tmp_path / "a", jobs=2)
    run(cfg, out_dir=tmp_path / "b", jobs=2)
    a = (tmp_path / "a" / "reports.json").read_bytes()
    b = (tmp_path / "b" / "reports.json").read_bytes()
    n = len(json.loads(a))
    ok = a == b and n > 0
    record_criterion(14, ok, f"{n} records, byte-identical: {a == b}, "
                             f"exit status {first.exit_status}")
    assert ok
