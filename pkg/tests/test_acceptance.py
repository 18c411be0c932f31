"""End-to-end acceptance checks, one per guaranteed behavior.

Each test prints a single ``[criterion N] PASS/FAIL`` line (visible with
``pytest -s``) and then asserts.  Criterion 8a documents a known validity
boundary of the small-detuning scattering closed form and is expected to
fail; see the README's acceptance notes.
"""

import math
import time
import warnings

import numpy as np

from cavsq import (
    DriveParams,
    EnsembleSpec,
    IdealModelInput,
    RegimeWarning,
    build_phase_band,
    evolve,
    make_css,
    minimize_1d,
    moments_from_band,
    phase_analytic,
    phase_numeric,
    scaling_fit,
    sweep_trajectory,
    time_for_shearing,
    xi2_ideal,
)
from cavsq.optimize import minimize_scatter_over_qx, optimal_over_detuning
from oracles import dense_density_matrix, dense_moments, xi2_by_angle_scan


def report(criterion, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {criterion}] {status} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def exact_scaling_exponent(x):
    params = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=x)
    fit = scaling_fit(params, [50, 100, 200, 400, 800], mode="exact")
    return fit.exponent


def test_criterion_1_scaling_small_detuning():
    start = time.time()
    exponent = exact_scaling_exponent(1.0)
    elapsed = time.time() - start
    ok = abs(exponent - (-0.40)) <= 0.10 and elapsed < 120.0
    report(1, ok, f"x=1 scaling exponent {exponent:+.4f} (want -0.40 +/- 0.10), {elapsed:.1f}s")


def test_criterion_2_scaling_large_detuning():
    start = time.time()
    exponent = exact_scaling_exponent(500.0)
    elapsed = time.time() - start
    ok = abs(exponent - (-0.667)) <= 0.10 and elapsed < 120.0
    report(2, ok, f"x=500 scaling exponent {exponent:+.4f} (want -0.667 +/- 0.10), {elapsed:.1f}s")


def test_criterion_3_ideal_closed_form_optima():
    res = minimize_1d(
        lambda q: xi2_ideal(IdealModelInput(Qx=q, x=1e4, S=50.0)),
        0.5, 200.0, tol=1e-10, log_spacing=True,
    )
    target = 1.5 * 12.0 ** (-1.0 / 3.0) * 50.0 ** (-2.0 / 3.0)
    rel_large = abs(res.value - target) / target

    res_mid = minimize_1d(
        lambda q: xi2_ideal(IdealModelInput(Qx=q, x=10.0, S=1e6)),
        1.0, 5000.0, tol=1e-8, log_spacing=True,
    )
    closed_mid_qx = 12.0**0.2 * 1e6**0.4 * 10.0**-0.2
    closed_mid_xi = 2.5 * 12.0**-0.2 * 1e6**-0.4 * 10.0**-0.8
    rel_mid_q = abs(res_mid.argmin - closed_mid_qx) / closed_mid_qx
    rel_mid_xi = abs(res_mid.value - closed_mid_xi) / closed_mid_xi
    ok = rel_large <= 0.01 and rel_mid_xi <= 0.02 and rel_mid_q <= 0.02
    report(
        3,
        ok,
        f"large-detuning min within {rel_large:.2%} of {target:.4f}; "
        f"intermediate within {rel_mid_xi:.2%} (Qx within {rel_mid_q:.2%})",
    )


def test_criterion_4_phase_slope_oracle():
    worst = 0.0
    kappa = 4.0
    t1, t2 = 50.0 / kappa, 100.0 / kappa
    m_all = np.arange(-50.0, 51.0)
    for x in (0.5, 1.0, 500.0):
        p = DriveParams(kappa=kappa, Omega=0.2, beta0=1.0, x=x)
        for k in (1, 2):
            m_lo = m_all[:-k]
            n_hi = m_lo + k
            phi1, _ = phase_numeric(p, m_lo, n_hi, t1)
            phi2, _ = phase_numeric(p, m_lo, n_hi, t2)
            slope = (phi2 - phi1) / (t2 - t1)
            ref = phase_analytic(p, m_lo, n_hi, 1.0)
            worst = max(worst, float(np.max(np.abs(slope - ref) / np.abs(ref))))
    ok = worst <= 1e-6
    report(4, ok, f"integrated-vs-analytic phase slope, worst relative error {worst:.2e}")


def test_criterion_5_dense_oracle_equivalence():
    rng = np.random.default_rng(20260809)
    worst = 0.0
    for draw in range(50):
        S = float(rng.choice([0.5, 1.0, 1.5, 2.0, 2.5, 3.0]))
        spec = EnsembleSpec(S)
        params = DriveParams(
            kappa=float(rng.uniform(0.5, 8.0)),
            Omega=float(rng.uniform(0.02, 0.5)),
            beta0=float(rng.uniform(0.2, 1.5)),
            x=float(rng.uniform(-5.0, 5.0)),
        )
        t = float(rng.uniform(0.05, 20.0))
        mode = "numeric" if draw % 2 == 0 else "analytic"
        mom, rep = evolve(spec, params, t, phase_mode=mode)
        rho = dense_density_matrix(spec, params, t, phase_mode=mode)
        ref_mean, ref_second = dense_moments(S, rho)
        worst = max(worst, float(np.max(np.abs(mom.mean - ref_mean))))
        worst = max(worst, float(np.max(np.abs(mom.second - ref_second))))
        worst = max(worst, abs(rep.xi2 - xi2_by_angle_scan(S, ref_mean, ref_second)))
    ok = worst <= 1e-10
    report(5, ok, f"banded vs dense evolution over 50 draws, worst deviation {worst:.2e}")


def test_criterion_6_invariant_suite():
    rng = np.random.default_rng(77)
    worst = {"trace": 0.0, "diag": 0.0, "mag": 0.0, "sz2": 0.0, "xi0": 0.0, "casimir": 0.0}
    for _ in range(100):
        S = float(rng.integers(1, 61))
        spec = EnsembleSpec(S)
        params = DriveParams(
            kappa=float(rng.uniform(0.5, 8.0)),
            Omega=float(rng.uniform(0.005, 0.4)),
            beta0=float(rng.uniform(0.1, 1.5)),
            x=float(rng.uniform(-200.0, 200.0)),
        )
        t = float(rng.uniform(0.0, 40.0))
        mode = "numeric" if rng.integers(2) else "analytic"
        band = build_phase_band(S, params, t, phase_mode=mode)
        css = make_css(spec)
        worst["trace"] = max(
            worst["trace"], abs(np.sum(np.exp(2 * css.logmag) * band.factor(0)) - 1.0)
        )
        worst["diag"] = max(worst["diag"], float(np.max(np.abs(band.phi[0]))))
        for k in (1, 2):
            mags = np.abs(np.exp(band.phi[k]))
            if mags.size:
                worst["mag"] = max(worst["mag"], float(np.max(mags)) - 1.0)
        mom = moments_from_band(spec, css, band)
        worst["sz2"] = max(worst["sz2"], abs(mom.second[2, 2] - S / 2.0) / (S / 2.0))
        worst["casimir"] = max(
            worst["casimir"], abs(np.trace(mom.second) - S * (S + 1.0)) / S**2
        )
        _, rep0 = evolve(spec, params, 0.0, phase_mode=mode)
        worst["xi0"] = max(worst["xi0"], abs(rep0.xi2 - 1.0))
    ok = (
        worst["trace"] <= 1e-10
        and worst["diag"] <= 1e-10
        and worst["mag"] <= 1e-10
        and worst["sz2"] <= 1e-10
        and worst["xi0"] <= 1e-9
        and worst["casimir"] <= 1e-9
    )
    detail = ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
    report(6, ok, f"invariants over 100 random draws: {detail}")


def test_criterion_7_zero_detuning_null_result():
    start = time.time()
    spec = EnsembleSpec(50.0)
    params = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=0.0)  # Omega/kappa = 2.5e-3
    t_grid = np.array([time_for_shearing(params, 50.0, Q=q) for q in np.geomspace(0.01, 200.0, 200)])
    traj = sweep_trajectory(spec, params, t_grid)
    elapsed = time.time() - start
    min_xi2 = traj.minimum[1].xi2
    ok = min_xi2 >= 0.98 and elapsed < 10.0
    report(7, ok, f"min xi2 at zero detuning {min_xi2:.4f} (want >= 0.98), {elapsed:.1f}s")


def test_criterion_8a_scatter_optimum_small_detuning():
    # Known to fail: the small-detuning closed form drops the shearing
    # curvature, which dominates at these parameters, so the moment model's
    # true minimum sits near the no-scattering limit instead.
    res = minimize_scatter_over_qx(1e4, 1.0, 1.0)
    q_target = math.sqrt(12.0 * 1e4 / 2.0)
    xi_target = math.sqrt(8.0 / 3e4)
    rel_q = abs(res.argmin - q_target) / q_target
    rel_xi = abs(res.value - xi_target) / xi_target
    ok = rel_q <= 0.20 and rel_xi <= 0.20
    report(
        "8a",
        ok,
        f"moment-model minimum Qx={res.argmin:.1f}, xi2={res.value:.4f} vs closed form "
        f"Qx={q_target:.1f}, xi2={xi_target:.4f} (off by {rel_q:.0%}, {rel_xi:.0%}; want 20%)",
    )


def test_criterion_8b_scatter_optimum_large_detuning():
    res = minimize_scatter_over_qx(1e4, 2.0, 200.0)
    closed = 3.0 * ((1.0 + 200.0**2) / (12.0 * 200.0 * 1e4 * 2.0)) ** (2.0 / 3.0)
    rel = abs(res.value - closed) / closed
    ok = rel <= 0.30
    report("8b", ok, f"moment-model minimum {res.value:.4f} vs closed form {closed:.4f} ({rel:.1%})")


def test_criterion_9_detuning_orderings():
    minima = [minimize_scatter_over_qx(1e4, eta, 200.0).value for eta in (1.0, 2.0, 20.0)]
    decreasing = all(a > b for a, b in zip(minima, minima[1:]))

    always_better = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        for eta in np.geomspace(0.1, 100.0, 10):
            fixed = minimize_scatter_over_qx(1e4, float(eta), 1.0).value
            best = optimal_over_detuning(1e4, float(eta), (1.0, 1e4)).value
            if best > fixed + 1e-12:
                always_better = False
    ok = decreasing and always_better
    report(
        9,
        ok,
        f"minima along eta=(1,2,20) at x=200: {[f'{v:.4f}' for v in minima]} strictly "
        f"decreasing={decreasing}; optimized detuning never worse={always_better}",
    )
