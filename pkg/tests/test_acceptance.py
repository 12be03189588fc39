# Acceptance gate: each criterion runs at its stated tolerance and prints one
# pass/fail line (visible with `pytest tests/test_acceptance.py -v -s`).
#
# Criterion 5a (slow-drive recovery of the dissipative geometric phase at
# omega0/b = 0.01 within 1e-2 rad) is implemented verbatim but expected to
# fail: the printed slow-drive split freezes the cutoff logarithm, so the two
# routes differ by an O(eta) offset -sign(omega0) 2 eta sin^2(theta) cos(theta)
# omega_c/(b +- omega_c) (up to ~0.35 rad at eta = 0.3, omega_c = 3b) even as
# omega0 -> 0.  See phase_analysis's module docstring; the offset itself is
# verified in tests/test_phase_analysis.py.

import math
import time

import numpy as np
import pytest

from gpd import oracle
from gpd.bath import (
    OHMIC,
    BathSpectrum,
    decay_width,
    lower_level,
    total_energy,
    upper_level,
)
from gpd.config import parse_config
from gpd.density import SuperposedState, offdiagonal_coherence, reduced_density
from gpd.phase_analysis import adiabatic_phases, geometric_energy
from gpd.reports import build_fig2, build_fig3, write_csv
from gpd.spin_core import (
    FieldParams,
    basis_pair,
    basis_trajectory,
    exact_amplitude,
    geometric_phase,
    holonomy_phase,
    principal_angle,
)


def _passed(number, label, elapsed, detail=""):
    suffix = f" [{detail}]" if detail else ""
    print(f"\nACCEPTANCE {number} PASS ({elapsed:.2f}s) {label}{suffix}")


def test_acceptance_01_exact_solution_oracle_equivalence():
    # 25 random (theta, omega0/b) points, RK4 at dt = T/1e4 over one period,
    # componentwise agreement <= 1e-8, under 10 s
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    thetas = rng.uniform(0.0, math.pi, 25)
    ratios = rng.uniform(1e-3, 10.0, 25)
    worst = 0.0
    for theta, ratio in zip(thetas, ratios):
        field = FieldParams(1.0, float(theta), float(ratio))
        t_final = field.period
        pair = basis_pair(field, 0.0)
        for level, psi0 in (("+", pair.w_plus), ("-", pair.w_minus)):
            traj = oracle.integrate_schrodinger(field, psi0, t_final, t_final / 10_000)
            err = float(np.max(np.abs(traj.states[-1] - exact_amplitude(field, level, t_final))))
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 10.0
    _passed(1, "exact-solution oracle equivalence", elapsed, f"max error {worst:.2e}")


def test_acceptance_02_geometric_phase_consistency():
    # quadrature vs closed form on a 50x20 grid at 1e4 nodes (<= 1e-6), and the
    # trajectory phase functional vs the closed form mod 2pi (<= 1e-6), under 30 s
    start = time.perf_counter()
    thetas = np.linspace(0.0, math.pi, 50)
    ratios = np.geomspace(1e-3, 1e3, 20)
    worst_grid = 0.0
    for theta in thetas:
        for ratio in ratios:
            field = FieldParams(1.0, float(theta), float(ratio))
            t_final = field.period
            for level in ("+", "-"):
                quad = geometric_phase(field, level, t_final, "quadrature", num_steps=10_000)
                closed = geometric_phase(field, level, t_final, "closed")
                worst_grid = max(worst_grid, abs(principal_angle(quad - closed)))
    worst_aa = 0.0
    for theta in (0.5, 1.2, 2.2, 2.9):
        for ratio in (0.05, 0.5, 5.0):
            field = FieldParams(1.0, theta, ratio)
            t_final = field.period
            pair = basis_pair(field, 0.0)
            for level, psi0 in (("+", pair.w_plus), ("-", pair.w_minus)):
                traj = oracle.integrate_schrodinger(field, psi0, t_final, t_final / 10_000)
                aa = oracle.aharonov_anandan_phase(traj)
                closed = geometric_phase(field, level, t_final, "closed")
                worst_aa = max(worst_aa, abs(principal_angle(aa - closed)))
    elapsed = time.perf_counter() - start
    assert worst_grid <= 1e-6
    assert worst_aa <= 1e-6
    assert elapsed < 30.0
    _passed(
        2,
        "geometric-phase consistency",
        elapsed,
        f"grid {worst_grid:.2e}, trajectory functional {worst_aa:.2e}",
    )


def test_acceptance_03_adiabatic_recovery():
    # slow drive reproduces +-pi(1 - cos theta) mod 2pi to <= 1e-3; the fast
    # limit is <= 1e-3 from the trivial phase
    start = time.perf_counter()
    worst_slow = 0.0
    worst_fast = 0.0
    for theta in np.linspace(0.0, math.pi, 41):
        slow = FieldParams(1.0, float(theta), 1e-4)
        fast = FieldParams(1.0, float(theta), 1e4)
        for level, sign in (("+", 1.0), ("-", -1.0)):
            beta = geometric_phase(slow, level, slow.period, "quadrature")
            target = math.pi * (1.0 + sign * math.cos(theta))
            worst_slow = max(worst_slow, abs(principal_angle(beta - target)))
            worst_fast = max(
                worst_fast, abs(geometric_phase(fast, level, fast.period, "quadrature"))
            )
    elapsed = time.perf_counter() - start
    assert worst_slow <= 1e-3
    assert worst_fast <= 1e-3
    _passed(
        3, "adiabatic and sudden recovery", elapsed,
        f"slow {worst_slow:.2e}, fast {worst_fast:.2e}",
    )


def test_acceptance_04_fig2_reproduction_properties():
    # dissipationless curve exactly +-pi(1 - cos theta); dissipative curves
    # cross it exactly (<= 1e-12) at theta in {0, pi/2, pi}; relative sign of
    # the two levels' corrections: same at omega_c = 1.5b, opposite at 3b
    start = time.perf_counter()
    free = parse_config({"bath": {"eta": 0.0}, "fig2": {"omega_c_over_b_set": [1.5, 2.0, 3.0]}})
    report = build_fig2(free)
    cols = report.columns
    for row in report.rows:
        sign = 1.0 if row[cols.index("level")] == "+" else -1.0
        expected = sign * math.pi * (1.0 - math.cos(row[cols.index("theta")]))
        assert row[cols.index("gp_total")] == expected  # bitwise
    noisy = parse_config({"bath": {"eta": 0.3}, "fig2": {"omega_c_over_b_set": [1.5, 2.0, 3.0]}})
    report = build_fig2(noisy)
    cols = report.columns
    corrections = {}
    crossings = 0
    for row in report.rows:
        theta = row[cols.index("theta")]
        if min(abs(theta - x) for x in (0.0, math.pi / 2, math.pi)) < 1e-12:
            assert abs(row[cols.index("gp_correction")]) <= 1e-12
            crossings += 1
        if abs(theta - math.pi / 4) < 1e-9:
            key = (row[cols.index("omega_c_over_b")], row[cols.index("level")])
            corrections[key] = row[cols.index("gp_correction")]
    assert crossings == 3 * 3 * 2
    same_sign = math.copysign(1.0, corrections[(1.5, "+")]) * math.copysign(
        1.0, corrections[(1.5, "-")]
    )
    opposite_sign = math.copysign(1.0, corrections[(3.0, "+")]) * math.copysign(
        1.0, corrections[(3.0, "-")]
    )
    assert same_sign == 1.0
    assert opposite_sign == -1.0
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _passed(4, "fig2 reproduction properties", elapsed)


def test_acceptance_05_fig3_reproduction_properties():
    # dissipationless column equals the solid angle exactly; theta = pi values
    # land in {0, +-pi, +-2pi}
    start = time.perf_counter()
    free = parse_config({"bath": {"eta": 0.0}})
    report = build_fig3(free)
    cols = report.columns
    for row in report.rows:
        assert row[cols.index("te_geomet")] == row[cols.index("omega_k")]  # bitwise
    noisy = parse_config({"bath": {"eta": 0.3}, "fig3": {"omega0_over_b_set": [0.2, 1.0, 5.0]}})
    report = build_fig3(noisy)
    cols = report.columns
    endpoint_targets = {0.2: 2.0 * math.pi, 1.0: math.pi, 5.0: 0.0}
    checked = 0
    for row in report.rows:
        if abs(row[cols.index("theta")] - math.pi) < 1e-12:
            ratio = row[cols.index("omega0_over_b")]
            sign = 1.0 if row[cols.index("level")] == "+" else -1.0
            target = sign * endpoint_targets[ratio]
            assert row[cols.index("omega_k")] == pytest.approx(target, abs=1e-6)
            assert row[cols.index("te_geomet")] == pytest.approx(target, abs=1e-6)
            checked += 1
    assert checked == 6
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _passed(5, "fig3 reproduction properties (dissipationless column, endpoints)", elapsed)


@pytest.mark.xfail(
    strict=True,
    reason="stated tolerance is unattainable: the slow-drive split freezes the "
    "cutoff logarithm, so T E_k^geomet differs from it by an O(eta) offset "
    "2 eta sin^2(theta) cos(theta) omega_c/(b +- omega_c) (~0.35 rad at "
    "eta=0.3, omega_c=3b), not O(omega0); see decisions ledger and "
    "test_phase_analysis.py for the verified offset",
)
def test_acceptance_05a_fig3_slow_drive_recovery_verbatim():
    # verbatim clause: te_geomet at omega0/b = 0.01 matches the slow-drive
    # pipeline within 1e-2 rad across theta
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    worst = 0.0
    for theta in np.linspace(0.0, math.pi, 181):
        field = FieldParams(1.0, float(theta), 0.01)
        plus, minus = adiabatic_phases(field, spec)
        for level, breakdown in (("+", plus), ("-", minus)):
            gap = abs(geometric_energy(field, spec, level) - breakdown.gp_total)
            worst = max(worst, gap)
    print(f"\nACCEPTANCE 5a FAIL(expected) slow-drive recovery: max gap {worst:.3f} rad vs 1e-2")
    assert worst <= 1e-2


@pytest.mark.filterwarnings("ignore:estimated double-excitation")
def test_acceptance_06_truncated_bath_width_and_shift():
    # eta = 0.01, 400 modes: fitted decay rate within 10% of the one-loop
    # width; fitted upper-lower shift difference within 15% of the one-loop
    # shifts (the level-independent -eta omega_c/pi constant cancels in the
    # difference); under 60 s.  The ~1.2% truncation-estimate advisory is
    # expected at Gamma * t_final ~ 2.2 and is part of what the 10% budget
    # absorbs.
    start = time.perf_counter()
    field = FieldParams(1.0, math.pi / 3, 0.02)
    spec = BathSpectrum(OHMIC, 0.01, 3.0)
    disc = oracle.discretize_bath(spec, 400)
    up, low = upper_level(field), lower_level(field)
    fits = {}
    for level in (up, low):
        sim = oracle.simulate_truncated_bath(field, spec, disc, 150.0, 0.02, level=level)
        window = sim.times >= 5.0
        fits[level] = oracle.fit_exponential(sim.amplitude[window], sim.times[window])
    gamma_expected = decay_width(field, spec, up)
    gamma_rel = abs(2.0 * fits[up].rate - gamma_expected) / gamma_expected
    shift_expected = (
        total_energy(field, spec, up).energy_shift - total_energy(field, spec, low).energy_shift
    )
    drift_up = fits[up].frequency - total_energy(field, spec, up).bare_energy
    drift_low = fits[low].frequency - total_energy(field, spec, low).bare_energy
    shift_rel = abs((drift_up - drift_low) - shift_expected) / abs(shift_expected)
    elapsed = time.perf_counter() - start
    assert gamma_rel <= 0.10
    assert shift_rel <= 0.15
    assert elapsed < 60.0
    _passed(
        6, "truncated-bath width and shift", elapsed,
        f"width {gamma_rel:.1%}, shift {shift_rel:.1%}",
    )


def test_acceptance_07_density_matrix_suite():
    # trace preserved to 1e-12 on 100 x 20 random amplitudes; long-time state
    # reaches the lower-level projector to 1e-12 at Gamma t = 50 (single-branch
    # preparation: a generic superposition's off-diagonals decay at Gamma/2,
    # leaving ~|ab| e^{-25} = 1.4e-11 |ab| there, which cannot meet 1e-12 —
    # see the decisions ledger); coherence decays at Gamma/2 to 1e-6 relative
    start = time.perf_counter()
    field = FieldParams(1.0, math.pi / 3, 0.05)
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    gamma = total_energy(field, spec, upper_level(field)).width
    rng = np.random.default_rng(42)
    times = np.linspace(0.0, 6.0 / gamma, 100)
    worst_trace = 0.0
    for _ in range(20):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        state = SuperposedState(complex(a), complex(b))
        for t in times:
            rho = reduced_density(state, field, spec, float(t))
            worst_trace = max(worst_trace, abs(rho.trace - state.trace))
    assert worst_trace <= 1e-12

    state = SuperposedState(1.0, 0.0)
    rho = reduced_density(state, field, spec, 50.0 / gamma)
    ilow = 0 if lower_level(field) == "+" else 1
    target = np.zeros((2, 2), dtype=complex)
    target[ilow, ilow] = state.trace
    projector_residual = float(np.linalg.norm(rho.matrix - target, ord=2))
    assert projector_residual <= 1e-12

    state = SuperposedState(0.8, 0.6)
    fit_times = np.linspace(0.0, 4.0 / gamma, 400)
    series = np.array(
        [offdiagonal_coherence(state, field, spec, float(t)) for t in fit_times]
    )
    fit = oracle.fit_exponential(series, fit_times)
    rate_rel = abs(fit.rate - 0.5 * gamma) / (0.5 * gamma)
    assert rate_rel <= 1e-6
    elapsed = time.perf_counter() - start
    _passed(
        7, "density-matrix suite", elapsed,
        f"trace {worst_trace:.1e}, projector {projector_residual:.1e}, rate {rate_rel:.1e}",
    )


def test_acceptance_08_gauge_invariance_suite():
    # 20 random smooth gauge functions with integer winding shift the
    # geometric phase by <= 1e-8
    start = time.perf_counter()
    field = FieldParams(1.0, 1.2, 0.4)
    t_final = field.period
    times = np.linspace(0.0, t_final, 4097)
    rng = np.random.default_rng(5)
    worst = 0.0
    for level in ("+", "-"):
        states = basis_trajectory(field, level, times)
        reference = holonomy_phase(states)
        for _ in range(10):
            winding = rng.integers(-3, 4)
            amps = rng.normal(0.0, 0.4, size=3)
            phases = rng.uniform(0.0, 2 * math.pi, size=3)
            x = times / t_final
            alpha = 2 * math.pi * winding * x
            for j, (a, p) in enumerate(zip(amps, phases), start=1):
                alpha = alpha + a * (np.sin(2 * math.pi * j * x + p) - math.sin(p))
            shifted = holonomy_phase(states * np.exp(1j * alpha)[:, None])
            worst = max(worst, abs(principal_angle(shifted - reference)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    _passed(8, "gauge-invariance suite", elapsed, f"max shift {worst:.2e}")


def test_acceptance_09_linearity_in_eta():
    # doubling eta doubles every one-loop shift and width bit-for-bit
    start = time.perf_counter()
    for theta in (0.3, 1.0, 2.0, 2.9):
        for ratio in (0.01, 0.3, 2.0):
            field = FieldParams(1.0, theta, ratio)
            for eta in (0.005, 0.02, 0.15):
                spec1 = BathSpectrum(OHMIC, eta, 4.0)
                spec2 = BathSpectrum(OHMIC, 2.0 * eta, 4.0)
                for level in ("+", "-"):
                    one = total_energy(field, spec1, level)
                    two = total_energy(field, spec2, level)
                    assert two.energy_shift == 2.0 * one.energy_shift
                    assert two.width == 2.0 * one.width
    elapsed = time.perf_counter() - start
    _passed(9, "linearity in the coupling", elapsed, "bit-for-bit")


def test_acceptance_10_determinism(tmp_path):
    # identical configurations give byte-identical fig2/fig3 CSV files
    start = time.perf_counter()
    for mode, builder in (("fig2", build_fig2), ("fig3", build_fig3)):
        cfg = parse_config({"mode": mode})
        paths = [tmp_path / f"{mode}_{i}.csv" for i in (1, 2)]
        for path in paths:
            write_csv(builder(cfg), path)
        assert paths[0].read_bytes() == paths[1].read_bytes()
    elapsed = time.perf_counter() - start
    _passed(10, "byte-identical dataset reruns", elapsed)
