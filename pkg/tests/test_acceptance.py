"""Acceptance suite: one criterion per test, one PASS/FAIL line per criterion.

The lines bypass pytest's output capture so they are visible in any run.
Every tolerance is stated inline next to its check.
"""

import math
import time

import numpy as np
import pytest

from nlamp import (
    BRANCH_ORDER,
    BeamSplitter,
    FockState,
    GridSpec,
    OptProblem,
    SUCCESS_OUTCOME,
    SchemeConfig,
    SplitterTriple,
    TwoModeState,
    apply_beam_splitter,
    coherence_check,
    enumerate_single_photon_branches,
    fidelity_grid,
    expect_a_grid,
    g_eff_closed,
    inner_product,
    maximize,
    metrics,
    normalized,
    operator_oracle,
    p_succ_closed,
    pad,
    run_branch,
    sweep,
    verify_symmetry,
    wigner_of_state,
)

# published branch table at |alpha| = 0.5, r = 0.4: outcome ->
# (|<a>|, 1 - F, P), all printed to three significant figures
PRINTED_TABLE = {
    (1, 0, 1): (0.686, 4.84e-3, 1.36e-3),
    (1, 0, 0): (0.720, 0.362, 5.58e-3),
    (1, 1, 1): (0.292, 3.79e-5, 5.27e-4),
    (1, 1, 0): (0.310, 1.60e-5, 2.88e-2),
    (0, 1, 1): (0.385, 0.0, 8.57e-4),
    (0, 1, 0): (0.385, 0.0, 3.03e-2),
    (0, 0, 1): (0.385, 0.0, 2.55e-2),
    (0, 0, 0): (0.385, 0.0, 0.903),
}
PRINTED_OTHER = 3.84e-3


_CAPSYS = None


@pytest.fixture(autouse=True)
def _uncaptured_reporting(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def report(number, label, passed):
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] criterion {number}: {label}"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line)
    else:
        print(line)
    assert passed, f"criterion {number}: {label}"


def matches_3sf(computed, printed):
    """True when computed rounds to the printed three-significant-figure value."""
    if printed == 0.0:
        return abs(computed) < 1e-10
    half_ulp = 0.5 * 10.0 ** (math.floor(math.log10(abs(printed))) - 2)
    return abs(computed - printed) <= half_ulp * (1.0 + 1e-9)


def test_criterion_1_branch_table():
    start = time.perf_counter()
    cfg = SchemeConfig.symmetric(0.5 + 0j, 0.4)
    ok = cfg.effective_dim >= 30
    branches, other = enumerate_single_photon_branches(cfg)
    for branch in branches:
        mean_a, one_minus_f, p = PRINTED_TABLE[branch.outcome]
        ok &= matches_3sf(branch.mean_a_abs, mean_a)
        ok &= matches_3sf(1.0 - branch.fidelity_energy, one_minus_f)
        ok &= matches_3sf(branch.probability, p)
    ok &= abs(other - PRINTED_OTHER) <= 0.02 * PRINTED_OTHER
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    report(1, f"branch table to 3 s.f. ({elapsed:.2f} s)", ok)


def test_criterion_2_closed_form_equivalence():
    start = time.perf_counter()
    ok = True
    worst = 0.0
    for alpha in np.linspace(0.1, 1.0, 5):
        for r_a in np.linspace(0.05, 0.5, 5):
            for r_b in np.linspace(0.05, 0.5, 5):
                triple = SplitterTriple(r_a, r_b, r_a)
                cfg = SchemeConfig(complex(alpha), r_a, r_b, r_a)
                branch = run_branch(cfg, SUCCESS_OUTCOME)
                worst = max(
                    worst,
                    abs(branch.probability - p_succ_closed(alpha, triple)),
                    abs(branch.g_eff - g_eff_closed(alpha, triple)),
                )
    ok &= worst < 1e-10
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60.0
    report(2, f"closed forms vs simulation on 125 points, worst {worst:.2e} ({elapsed:.2f} s)", ok)


def test_criterion_3_optimization():
    start = time.perf_counter()
    result = maximize(OptProblem(g_eff0=1.4))
    ok = result.converged
    ok &= abs(result.p_opt - 1e-3) <= 0.15e-3
    ok &= abs(result.alpha_opt - 0.51) <= 0.01
    ok &= all(abs(r - 0.38) <= 0.01 for r in result.r_opt)
    ok &= verify_symmetry(result) < 1e-4

    thresholds = [round(1.04 + 0.01 * i, 2) for i in range(23)]
    results = sweep(thresholds)
    ok &= all(res is not None and res.converged for _, res in results)
    r_curve = [res.r_opt[0] for _, res in results]
    f_curve = [res.f_opt for _, res in results]
    g_at_r_max = thresholds[int(np.argmax(r_curve))]
    g_at_f_min = thresholds[int(np.argmin(f_curve))]
    ok &= abs(max(r_curve) - 0.42) <= 0.02
    ok &= abs(g_at_r_max - 1.18) <= 0.03
    ok &= abs(min(f_curve) - 0.982) <= 0.002
    ok &= abs(g_at_f_min - 1.08) <= 0.03
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300.0
    report(3, f"constrained optimum and sweep extrema ({elapsed:.1f} s)", ok)


def test_criterion_4_coherence_of_unclicked_branches():
    ok = True
    for r, amplitude in ((0.4, 0.385), (0.1, 0.493)):
        cfg = SchemeConfig.symmetric(0.5 + 0j, r)
        for outcome in BRANCH_ORDER:
            if outcome[0] != 0:
                continue
            branch = run_branch(cfg, outcome)
            ok &= coherence_check(branch) < 1e-10
            ok &= abs(branch.mean_a_abs - amplitude) <= 1e-3
    report(4, "QND=0 branches exactly coherent with attenuated amplitude", ok)


def test_criterion_5_dual_oracle_phase_space():
    spec = GridSpec(-8.0, 8.0, -8.0, 8.0, 321, 321)
    rng = np.random.default_rng(12345)
    ok = True
    worst_f = worst_a = worst_p = 0.0
    for _ in range(50):
        dim = int(rng.integers(4, 26))
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps *= 0.7 ** np.arange(dim)
        a = normalized(FockState(amps))
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps *= 0.7 ** np.arange(dim)
        b = normalized(FockState(amps))
        wa = wigner_of_state(a, spec)
        wb = wigner_of_state(b, spec)
        worst_f = max(worst_f, abs(fidelity_grid(wa, wb) - abs(inner_product(a, b)) ** 2))
        worst_a = max(worst_a, abs(expect_a_grid(wa) - metrics(a).mean_a))
        i, j = spec.n_x // 2, spec.n_p // 2
        parity = float(np.sum((-1.0) ** np.arange(a.dim) * np.abs(a.amps) ** 2))
        worst_p = max(worst_p, abs(math.pi * wa.values[i, j] - parity))
    ok &= worst_f < 1e-5
    ok &= worst_a < 1e-5
    ok &= worst_p < 1e-8
    report(
        5,
        f"phase-space vs number-basis oracles on 50 states "
        f"(F {worst_f:.1e}, <a> {worst_a:.1e}, parity {worst_p:.1e})",
        ok,
    )


def test_criterion_6_asymptotic_operator_limit():
    overlaps = []
    for r in (0.2, 0.1, 0.05):
        cfg = SchemeConfig.symmetric(0.5 + 0j, r)
        branch = run_branch(cfg, SUCCESS_OUTCOME)
        oracle = operator_oracle(cfg)
        dim = max(branch.output.dim, oracle.dim)
        overlaps.append(
            abs(inner_product(pad(oracle, dim), pad(branch.output, dim))) ** 2
        )
    ok = overlaps[-1] > 0.999
    ok &= overlaps[0] < overlaps[1] < overlaps[2]
    report(6, f"ladder-operator limit, overlap {overlaps[-1]:.6f} at r=0.05", ok)


def test_criterion_7_invariants():
    ok = True

    # probability completeness over several operating points
    for alpha, r in ((0.5, 0.4), (0.3, 0.2), (0.9, 0.45)):
        cfg = SchemeConfig.symmetric(complex(alpha), r)
        branches, other = enumerate_single_photon_branches(cfg)
        total = sum(b.probability for b in branches) + other
        ok &= abs(total - 1.0) < 1e-12

    # phase covariance of the success branch
    theta = 1.234
    base = run_branch(SchemeConfig.symmetric(0.5 + 0j, 0.4), SUCCESS_OUTCOME)
    rotated = run_branch(
        SchemeConfig.symmetric(0.5 * complex(math.cos(theta), math.sin(theta)), 0.4),
        SUCCESS_OUTCOME,
    )
    ok &= abs(rotated.probability - base.probability) < 1e-12
    ok &= abs(rotated.g_eff - base.g_eff) < 1e-12
    ok &= abs(rotated.fidelity_eff - base.fidelity_eff) < 1e-12

    # beam-splitter unitarity and photon-number conservation
    rng = np.random.default_rng(7)
    number = np.arange(9)[:, None] + np.arange(8)[None, :]
    for _ in range(20):
        amps = rng.normal(size=(9, 8)) + 1j * rng.normal(size=(9, 8))
        state = TwoModeState(amps / np.linalg.norm(amps))
        out = apply_beam_splitter(state, BeamSplitter(0.55))
        ok &= abs(np.linalg.norm(out.amps) - 1.0) < 1e-12
        d1, d2 = out.dims
        number_out = np.arange(d1)[:, None] + np.arange(d2)[None, :]
        before = float(np.sum(number * np.abs(state.amps) ** 2))
        after = float(np.sum(number_out * np.abs(out.amps) ** 2))
        ok &= abs(before - after) < 1e-12

    # truncation-doubling stability of every reported table number
    shift = 0.0
    for outcome in BRANCH_ORDER:
        b30 = run_branch(SchemeConfig.symmetric(0.5 + 0j, 0.4, dim=30), outcome)
        b60 = run_branch(SchemeConfig.symmetric(0.5 + 0j, 0.4, dim=60), outcome)
        shift = max(
            shift,
            abs(b30.probability - b60.probability),
            abs(b30.mean_a_abs - b60.mean_a_abs),
            abs(b30.fidelity_energy - b60.fidelity_energy),
        )
    ok &= shift < 1e-10

    report(7, f"completeness, covariance, unitarity, doubling shift {shift:.1e}", ok)
