"""Exit criteria for the simulator, one test per criterion.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the terminal summary) and asserts at the stated tolerance.
"""

import math
import time

import numpy as np
import pytest

from oracles import brute_force_partner, gaussian_spread
from poppersim.continuous import (
    ContinuousConfig,
    GridSpec,
    SlitAperture,
    build_epr_gaussian,
    free_evolve,
    momentum_marginal,
    position_marginal,
)
from poppersim.discrete import (
    DiscreteConfig,
    branch_mixture,
    build_state,
    decompose_x_basis,
    run_coincidence,
    run_unconditional,
    sample_unconditional_counts,
)
from poppersim.sweep import SweepGrid, run_sweep

PAPER = DiscreteConfig(alpha=math.sqrt(0.05), beta=math.sqrt(0.9))
R2 = math.sqrt(2)
X_VECS = {1: [0.5, 1 / R2, 0.5], 0: [1 / R2, 0, -1 / R2], -1: [0.5, -1 / R2, 0.5]}
SEEDS = range(10)


@pytest.fixture
def verdict(capsys, request):
    lines = []

    def record(ok: bool, detail: str):
        lines.append((ok, detail))
        return ok

    yield record
    with capsys.disabled():
        for ok, detail in lines:
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}", end="")


@pytest.fixture(scope="module")
def sweep_rows():
    grid = SweepGrid((2.0, 4.0, 8.0), (0.1, 0.25, 0.5), (0.25, 0.5, 1.0), grid=GridSpec(512, 512, 36.0, 36.0))
    t0 = time.perf_counter()
    rows = run_sweep(grid)
    return rows, time.perf_counter() - t0


def test_fig4a_unconditional(verdict):
    d = run_unconditional(PAPER)
    err = np.max(np.abs(d.probs - [0.05, 0.90, 0.05]))
    assert verdict(err <= 1e-12, f"D+/D0/D- = {d.probs.tolist()} (max err {err:.1e})")


def test_fig4b_coincidence(verdict):
    r = run_coincidence(PAPER)
    e_sel = abs(r.selection_probability - 0.05)
    e_cond = np.max(np.abs(r.conditional.probs - [0.5, 0.0, 0.5]))
    ok = e_sel <= 1e-12 and e_cond <= 1e-12
    assert verdict(ok, f"selection {r.selection_probability:.15f}, conditional {r.conditional.probs.tolist()}")


def test_eq3_coefficient_audit(verdict):
    a, b = math.sqrt(0.05), math.sqrt(0.9)
    written = {
        1: [a / 2, b / R2, a / 2],
        0: [a / R2, 0.0, a / R2],
        -1: [a / 2, b / R2, a / 2],
    }
    branches = decompose_x_basis(PAPER)
    state = build_state(PAPER)
    worst = 0.0
    for m in (1, 0, -1):
        ours = np.abs(branches[m])
        oracle = np.abs(brute_force_partner(state.amplitudes, (3, 3), 0, X_VECS[m]))
        worst = max(worst, np.max(np.abs(ours - written[m])), np.max(np.abs(oracle - written[m])))
    assert verdict(worst <= 1e-12, f"nine magnitudes match written and brute-force values (max err {worst:.1e})")


def test_universality_and_no_signaling(verdict):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst_cond = worst_mix = 0.0
    for _ in range(100):
        alpha = rng.uniform(1e-3, 1 / R2)
        cfg = DiscreteConfig(alpha=alpha, beta=math.sqrt(max(0.0, 1 - 2 * alpha**2)))
        r = run_coincidence(cfg)
        worst_cond = max(worst_cond, np.max(np.abs(r.conditional.probs - [0.5, 0, 0.5])))
        worst_mix = max(worst_mix, np.max(np.abs(branch_mixture(cfg).probs - run_unconditional(cfg).probs)))
    dt = time.perf_counter() - t0
    ok = worst_cond <= 1e-12 and worst_mix <= 1e-12 and dt < 1.0
    assert verdict(ok, f"100 configs, conditional err {worst_cond:.1e}, mixture err {worst_mix:.1e}, {dt:.2f}s")


def _within_3sigma(counts, probs, n):
    bad = []
    for det, p in probs.items():
        if n == 0:
            continue
        if abs(counts[det] / n - p) > 3 * math.sqrt(p * (1 - p) / n):
            bad.append(det)
    return bad


def test_monte_carlo_consistency(verdict):
    t0 = time.perf_counter()
    failures = []
    for seed in SEEDS:
        cfg = DiscreteConfig(PAPER.alpha, PAPER.beta, shots=10**5, seed=seed)
        uncond = sample_unconditional_counts(cfg)
        failures += [("4a", seed, d) for d in _within_3sigma(uncond, run_unconditional(cfg).as_dict(), 10**5)]
        r = run_coincidence(cfg)
        n_coinc = sum(r.conditional_counts.values())
        failures += [("4b", seed, d) for d in _within_3sigma(r.conditional_counts, r.conditional.as_dict(), n_coinc)]
        failures += [("4b-all", seed, d)
                     for d in _within_3sigma(r.unconditional_counts, r.unconditional.as_dict(), 10**5)]
    dt = time.perf_counter() - t0
    assert verdict(not failures and dt < 10, f"10 seeds x 1e5 shots, outliers {failures}, {dt:.2f}s")


def test_momentum_spread_sweep(verdict, sweep_rows):
    rows, dt = sweep_rows
    errors = [r for r in rows if r.error]
    violations = [(r.sigma_plus, r.sigma_minus, r.slit_width, r.ratio) for r in rows if not r.error and r.ratio > 1.001]
    worst = max(r.ratio for r in rows if not r.error)
    # separable control points
    controls = []
    for w in (0.25, 0.5, 1.0):
        for s in (0.5, 1.0):
            rep = run_sweep(SweepGrid((s,), (s,), (w,), grid=GridSpec(512, 512, 36.0, 36.0)))[0]
            controls.append(abs(rep.ratio - 1))
    ok = len(rows) == 27 and not errors and not violations and max(controls) <= 1e-6 and dt < 300
    assert verdict(ok, f"27 points, max ratio {worst:.12f}, control |ratio-1| {max(controls):.1e}, "
                       f"violations {violations}, {dt:.1f}s")


def test_continuous_engine_oracles(verdict):
    t0 = time.perf_counter()
    grid = GridSpec(256, 256, 16.0, 16.0)
    sep = build_epr_gaussian(ContinuousConfig(grid, 1.0, 1.0, SlitAperture()))
    fourier = max(abs(momentum_marginal(sep, k).std() - 0.5) / 0.5 for k in (0, 1))
    epr = build_epr_gaussian(ContinuousConfig(GridSpec(512, 512, 36.0, 36.0), 4.0, 0.25, SlitAperture()))
    p_ref = math.sqrt(1 / 16 + 1 / 0.0625) / (2 * R2)
    fourier = max(fourier, abs(momentum_marginal(epr, 1).std() - p_ref) / p_ref)
    parseval = max(
        abs(dist(s, k).total() - 1)
        for s in (sep, epr) for k in (0, 1) for dist in (position_marginal, momentum_marginal)
    )
    later = free_evolve(epr, 1.0)
    unitarity = abs(later.norm() - 1)
    p_cons = max(np.max(np.abs(momentum_marginal(later, k).density - momentum_marginal(epr, k).density)) for k in (0, 1))
    spread = max(
        abs(position_marginal(free_evolve(sep, t), 0).std() - gaussian_spread(1.0, t)) / gaussian_spread(1.0, t)
        for t in (0.5, 1.0, 2.0, 4.0)
    )
    dt = time.perf_counter() - t0
    ok = fourier <= 0.02 and parseval <= 1e-9 and unitarity <= 1e-9 and p_cons <= 1e-9 and spread <= 0.02 and dt < 60
    assert verdict(ok, f"Fourier rel err {fourier:.1e}, Parseval {parseval:.1e}, norm {unitarity:.1e}, "
                       f"momentum drift {p_cons:.1e}, spreading rel err {spread:.1e}, {dt:.1f}s")


def test_uncertainty_floor(verdict, sweep_rows):
    rows, _ = sweep_rows
    worst = min(r.uncertainty_product for r in rows if not r.error)
    assert verdict(worst >= 0.499, f"min conditional dy2*dp2 over sweep = {worst:.6f}")
