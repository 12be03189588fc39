"""Dataset builders shared by the command line and the test suite.

Each mode produces a column-oriented Report carrying per-column units, written
either as CSV (with a '#' metadata header echoing the configuration) or as a
JSON mirror of the same content.  Floats are serialized with their shortest
round-trip representation and every code path is deterministic, so identical
configurations give byte-identical files.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import bath as bath_mod
from . import density as density_mod
from . import oracle as oracle_mod
from . import phase_analysis, spin_core
from .bath import BathSpectrum, CutoffResonanceError
from .config import ConfigError, RunConfig
from .spin_core import FieldParams


@dataclass
class Report:
    mode: str
    columns: list
    units: list
    rows: list
    metadata: dict


def _metadata(cfg: RunConfig, mode: str) -> dict:
    # the echoed config describes the computation, not the destination: the
    # output path is dropped so dataset bytes are independent of where they go
    echo = cfg.to_dict()
    echo["output"] = dict(echo["output"], path=None)
    return {"mode": mode, "version": __version__, "config": echo}


def _require_ohmic_config(cfg: RunConfig, mode: str) -> None:
    if cfg.bath.kind != bath_mod.OHMIC:
        raise ConfigError("bath.kind", f"mode {mode!r} requires an ohmic bath")


def _sweep_points(cfg: RunConfig, allowed: tuple) -> list:
    """Resolve the sweep into (theta, omega0_over_b, eta, omega_c_over_b) tuples."""
    sweep = cfg.sweep
    if sweep.name not in allowed:
        raise ConfigError("sweep.name", f"axis {sweep.name!r} has no effect here (allowed: {allowed})")
    base_field = cfg.field.params()
    base = {
        "theta": cfg.field.theta,
        "omega0_over_b": base_field.omega0 / base_field.b,
        "eta": cfg.bath.eta,
        "omega_c_over_b": cfg.bath.omega_c_over_b,
    }
    points = []
    for value in sweep.values():
        row = dict(base)
        row[sweep.name] = float(value)
        points.append(row)
    return points


def _point_field_spec(cfg: RunConfig, point: dict):
    field = FieldParams(cfg.field.b, point["theta"], point["omega0_over_b"] * cfg.field.b)
    spec = BathSpectrum(cfg.bath.kind, point["eta"], point["omega_c_over_b"] * cfg.field.b)
    return field, spec


def build_fig2(cfg: RunConfig) -> Report:
    """Slow-drive geometric phases vs theta for a set of cutoffs.

    One row per (theta, omega_c/b, level); gp_total is the continuous lift
    anchored at theta = 0 (the closed forms are already continuous, so no
    rewrapping is applied).  At omega_c = b the "-" level's correction is the
    exact IEEE -inf of its divergent cutoff logarithm.
    """
    _require_ohmic_config(cfg, "fig2")
    base_field = cfg.field.params()
    thetas = np.linspace(0.0, math.pi, cfg.fig2.theta_points)
    rows = []
    for wc_over_b in cfg.fig2.omega_c_over_b_set:
        spec = BathSpectrum(cfg.bath.kind, cfg.bath.eta, wc_over_b * cfg.field.b)
        for theta in thetas:
            field = FieldParams(cfg.field.b, float(theta), base_field.omega0)
            for breakdown in phase_analysis.adiabatic_phases(field, spec):
                rows.append(
                    (
                        float(theta),
                        float(wc_over_b),
                        breakdown.level,
                        breakdown.gp_bare,
                        breakdown.gp_correction,
                        breakdown.gp_total,
                    )
                )
    return Report(
        mode="fig2",
        columns=["theta", "omega_c_over_b", "level", "gp_bare", "gp_correction", "gp_total"],
        units=["rad", "dimensionless", "label", "rad", "rad", "rad"],
        rows=rows,
        metadata=_metadata(cfg, "fig2"),
    )


def build_fig3(cfg: RunConfig) -> Report:
    """Geometric phases at arbitrary drive speed vs theta.

    omega_k is the dissipationless value; te_geomet adds the O(eta) correction.
    Points whose level splitting hits the cutoff are emitted with
    status=cutoff_resonance and te_geomet=nan, never dropped.
    """
    _require_ohmic_config(cfg, "fig3")
    thetas = np.linspace(0.0, math.pi, cfg.fig3.theta_points)
    spec = cfg.bath.spectrum(cfg.field.b)
    rows = []
    for r in cfg.fig3.omega0_over_b_set:
        for theta in thetas:
            field = FieldParams(cfg.field.b, float(theta), r * cfg.field.b)
            for level in ("+", "-"):
                omega_k = phase_analysis.solid_angle_nonadiabatic(field, level)
                try:
                    te = phase_analysis.geometric_energy(field, spec, level)
                    status = "ok"
                except CutoffResonanceError:
                    te = float("nan")
                    status = "cutoff_resonance"
                rows.append((float(theta), float(r), level, omega_k, te, status))
    return Report(
        mode="fig3",
        columns=["theta", "omega0_over_b", "level", "omega_k", "te_geomet", "status"],
        units=["rad", "dimensionless", "label", "rad", "rad", "flag"],
        rows=rows,
        metadata=_metadata(cfg, "fig3"),
    )


def build_exact(cfg: RunConfig) -> Report:
    """Dissipationless sweep: tilt angle, level energies and one-period
    geometric phases (principal values plus a continuity-lifted series)."""
    points = _sweep_points(cfg, ("theta", "omega0_over_b"))
    if any(p["omega0_over_b"] == 0.0 for p in points):
        raise ConfigError("sweep", "omega0_over_b sweep must not contain 0 (period undefined)")
    data = []
    for p in points:
        field = FieldParams(cfg.field.b, p["theta"], p["omega0_over_b"] * cfg.field.b)
        en = spin_core.effective_energies(field)
        beta = {
            level: spin_core.geometric_phase(field, level, field.period, method="closed")
            for level in ("+", "-")
        }
        data.append((p, field, en, beta))
    anchor = 0.0 if cfg.sweep.name == "theta" and points[0]["theta"] == 0.0 else None
    lifted_plus = spin_core.unwrap_by_continuity([d[3]["+"] for d in data], anchor)
    lifted_minus = spin_core.unwrap_by_continuity([d[3]["-"] for d in data], anchor)
    rows = []
    for i, (p, field, en, beta) in enumerate(data):
        rows.append(
            (
                p["theta"],
                p["omega0_over_b"],
                spin_core.theta0(field),
                en.e_plus,
                en.e_minus,
                beta["+"],
                beta["-"],
                float(lifted_plus[i]),
                float(lifted_minus[i]),
            )
        )
    return Report(
        mode="exact",
        columns=["theta", "omega0_over_b", "theta0", "e_plus", "e_minus",
                 "beta_plus", "beta_minus", "beta_plus_lifted", "beta_minus_lifted"],
        units=["rad", "dimensionless", "rad", "b", "b", "rad", "rad", "rad", "rad"],
        rows=rows,
        metadata=_metadata(cfg, "exact"),
    )


def build_adiabatic(cfg: RunConfig) -> Report:
    """Slow-drive sweep: phase split per level plus the dephasing report.

    With a super-ohmic bath the dynamical correction has no closed form here;
    those entries are nan and gp_correction carries the super-ohmic value.
    """
    points = _sweep_points(cfg, ("theta", "omega0_over_b", "eta", "omega_c_over_b"))
    rows = []
    for p in points:
        field, spec = _point_field_spec(cfg, p)
        dephasing = phase_analysis.adiabatic_dephasing(field, spec)
        if spec.kind == bath_mod.OHMIC:
            breakdowns = phase_analysis.adiabatic_phases(field, spec)
        else:
            bare_spec = BathSpectrum(bath_mod.OHMIC, 0.0, spec.omega_c)
            bare = phase_analysis.adiabatic_phases(field, bare_spec)
            corr = phase_analysis.super_ohmic_bp_correction(field, spec)
            breakdowns = tuple(
                phase_analysis.PhaseBreakdown(b.level, b.dp_bare, float("nan"), b.gp_bare, c)
                for b, c in zip(bare, corr)
            )
        for b in breakdowns:
            rows.append(
                (
                    p["theta"], p["omega0_over_b"], p["eta"], p["omega_c_over_b"],
                    b.level, b.dp_bare, b.dp_correction, b.gp_bare, b.gp_correction,
                    b.gp_total, dephasing.tau_phi, dephasing.gamma,
                    dephasing.feasibility_margin, dephasing.feasible,
                )
            )
    return Report(
        mode="adiabatic",
        columns=["theta", "omega0_over_b", "eta", "omega_c_over_b", "level",
                 "dp_bare", "dp_correction", "gp_bare", "gp_correction", "gp_total",
                 "tau_phi", "gamma_upper", "feasibility_margin", "feasible"],
        units=["rad", "dimensionless", "dimensionless", "dimensionless", "label",
               "rad", "rad", "rad", "rad", "rad", "1/b", "b", "dimensionless", "bool"],
        rows=rows,
        metadata=_metadata(cfg, "adiabatic"),
    )


def build_nonadiabatic(cfg: RunConfig) -> Report:
    """Any-speed sweep: solid angle, dissipative geometric phase and dephasing;
    cutoff-resonant points flagged, not dropped."""
    _require_ohmic_config(cfg, "nonadiabatic")
    points = _sweep_points(cfg, ("theta", "omega0_over_b", "eta", "omega_c_over_b"))
    if any(p["omega0_over_b"] == 0.0 for p in points):
        raise ConfigError("sweep", "omega0_over_b sweep must not contain 0 (period undefined)")
    rows = []
    for p in points:
        field, spec = _point_field_spec(cfg, p)
        dephasing = phase_analysis.nonadiabatic_dephasing(field, spec)
        for level in ("+", "-"):
            omega_k = phase_analysis.solid_angle_nonadiabatic(field, level)
            try:
                te = phase_analysis.geometric_energy(field, spec, level)
                status = "ok"
            except CutoffResonanceError:
                te = float("nan")
                status = "cutoff_resonance"
            rows.append(
                (
                    p["theta"], p["omega0_over_b"], p["eta"], p["omega_c_over_b"],
                    level, omega_k, te, dephasing.gamma, dephasing.tau_phi,
                    dephasing.feasibility_margin, dephasing.feasible, status,
                )
            )
    return Report(
        mode="nonadiabatic",
        columns=["theta", "omega0_over_b", "eta", "omega_c_over_b", "level",
                 "omega_k", "te_geomet", "gamma_upper", "tau_phi",
                 "feasibility_margin", "feasible", "status"],
        units=["rad", "dimensionless", "dimensionless", "dimensionless", "label",
               "rad", "rad", "b", "1/b", "dimensionless", "bool", "flag"],
        rows=rows,
        metadata=_metadata(cfg, "nonadiabatic"),
    )


def build_density(cfg: RunConfig) -> Report:
    """Reduced-density time series: trace, purity, coherence and populations on
    a grid reaching a configured multiple of tau_phi (of the drive period when
    the width vanishes)."""
    _require_ohmic_config(cfg, "density")
    field = cfg.field.params()
    spec = cfg.bath.spectrum(cfg.field.b)
    state = cfg.density.state()
    width = bath_mod.total_energy(field, spec, bath_mod.upper_level(field)).width
    if width > 0.0:
        horizon = cfg.density.tau_phi_multiples * 2.0 / width
    elif field.omega0 != 0.0:
        horizon = cfg.density.tau_phi_multiples * field.period
    else:
        horizon = cfg.density.tau_phi_multiples * 2.0 * math.pi / field.b
    t0 = cfg.density.t0
    times = t0 + np.linspace(0.0, horizon, cfg.density.time_points)
    rows = []
    for t in times:
        rho = density_mod.reduced_density(state, field, spec, float(t), t0)
        coherence = density_mod.offdiagonal_coherence(state, field, spec, float(t), t0)
        pop_u, pop_l = density_mod.populations(rho, field)
        rows.append(
            (
                float(t),
                rho.trace,
                density_mod.purity(rho),
                abs(coherence),
                pop_u,
                pop_l,
            )
        )
    return Report(
        mode="density",
        columns=["t", "trace", "purity", "coherence_magnitude",
                 "population_upper", "population_lower"],
        units=["1/b", "dimensionless", "dimensionless", "dimensionless",
               "dimensionless", "dimensionless"],
        rows=rows,
        metadata=_metadata(cfg, "density"),
    )


BUILDERS = {
    "exact": build_exact,
    "adiabatic": build_adiabatic,
    "nonadiabatic": build_nonadiabatic,
    "density": build_density,
    "fig2": build_fig2,
    "fig3": build_fig3,
}


# --- oracle cross-checks ----------------------------------------------------


def run_oracle_checks(cfg: RunConfig) -> dict:
    """Run the three independent validation checks and report machine-readable
    results: direct integration vs the closed-form amplitude, the trajectory
    phase functional vs the basis-holonomy phase, and the truncated-bath width
    and level-shift fits vs the one-loop formulas."""
    oc = cfg.oracle
    b = cfg.field.b
    checks = []
    started = time.perf_counter()

    t0 = time.perf_counter()
    field = FieldParams(b, oc.theta, oc.omega0_over_b * b)
    period = field.period
    trajectories = {}
    ode_error = 0.0
    for level in ("+", "-"):
        traj = oracle_mod.integrate_schrodinger(
            field, spin_core.basis_pair(field, 0.0).w_plus if level == "+"
            else spin_core.basis_pair(field, 0.0).w_minus,
            period, period / oc.ode_steps,
        )
        trajectories[level] = traj
        exact_end = spin_core.exact_amplitude(field, level, period)
        ode_error = max(ode_error, float(np.max(np.abs(traj.states[-1] - exact_end))))
    checks.append(
        {
            "name": "ode_vs_closed_form",
            "passed": ode_error <= oc.ode_tolerance,
            "error": ode_error,
            "tolerance": oc.ode_tolerance,
            "elapsed_s": time.perf_counter() - t0,
        }
    )

    t0 = time.perf_counter()
    aa_error = 0.0
    for level in ("+", "-"):
        aa = oracle_mod.aharonov_anandan_phase(trajectories[level])
        beta = spin_core.geometric_phase(field, level, period, method="closed")
        aa_error = max(aa_error, abs(spin_core.principal_angle(aa - beta)))
    checks.append(
        {
            "name": "aharonov_anandan_vs_basis_holonomy",
            "passed": aa_error <= oc.aa_tolerance,
            "error": aa_error,
            "tolerance": oc.aa_tolerance,
            "elapsed_s": time.perf_counter() - t0,
        }
    )

    t0 = time.perf_counter()
    bath_field = FieldParams(b, oc.bath_theta, oc.bath_omega0_over_b * b)
    spec = BathSpectrum(bath_mod.OHMIC, oc.bath_eta, oc.bath_omega_c_over_b * b)
    disc = oracle_mod.discretize_bath(spec, oc.bath_modes)
    upper = bath_mod.upper_level(bath_field)
    lower = bath_mod.lower_level(bath_field)
    fits = {}
    for level in (upper, lower):
        sim = oracle_mod.simulate_truncated_bath(
            bath_field, spec, disc, oc.bath_t_final, oc.bath_dt, level=level
        )
        window = sim.times >= oc.bath_fit_start
        fits[level] = oracle_mod.fit_exponential(sim.amplitude[window], sim.times[window])
    gamma_expected = bath_mod.decay_width(bath_field, spec, upper)
    gamma_fitted = 2.0 * fits[upper].rate
    shift_expected = (
        bath_mod.total_energy(bath_field, spec, upper).energy_shift
        - bath_mod.total_energy(bath_field, spec, lower).energy_shift
    )
    en = spin_core.effective_energies(bath_field)
    bare = {"+": en.e_plus, "-": en.e_minus}
    shift_fitted = (fits[upper].frequency - bare[upper]) - (fits[lower].frequency - bare[lower])
    if gamma_expected > 0.0:
        width_error = abs(gamma_fitted - gamma_expected) / gamma_expected
        shift_error = abs(shift_fitted - shift_expected) / abs(shift_expected)
        width_ok = width_error <= oc.width_rel_tolerance
        shift_ok = shift_error <= oc.shift_rel_tolerance
    else:
        # decoupled runs: the decay rate must vanish to 1e-10; the phase drift
        # only to integrator truncation (~(E dt)^5 per step)
        width_error = abs(gamma_fitted)
        shift_error = abs(shift_fitted)
        width_ok = width_error < 1e-10
        shift_ok = shift_error < 1e-6
    checks.append(
        {
            "name": "truncated_bath_width_and_shift",
            "passed": bool(width_ok and shift_ok),
            "width_fitted": gamma_fitted,
            "width_expected": gamma_expected,
            "width_rel_error": width_error,
            "width_tolerance": oc.width_rel_tolerance,
            "shift_fitted": shift_fitted,
            "shift_expected": shift_expected,
            "shift_rel_error": shift_error,
            "shift_tolerance": oc.shift_rel_tolerance,
            "elapsed_s": time.perf_counter() - t0,
        }
    )

    return {
        "mode": "oracle",
        "version": __version__,
        "config": cfg.to_dict(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "elapsed_s": time.perf_counter() - started,
    }


# --- serialization ----------------------------------------------------------


def format_value(value) -> str:
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(report: Report, path) -> None:
    lines = [
        f"# gpd {report.mode} dataset",
        f"# version: {report.metadata['version']}",
        "# config: " + json.dumps(report.metadata["config"], sort_keys=True, separators=(",", ":")),
        "# units: " + ", ".join(f"{c}={u}" for c, u in zip(report.columns, report.units)),
        ",".join(report.columns),
    ]
    for row in report.rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def write_json(report: Report, path) -> None:
    payload = {
        "mode": report.mode,
        "metadata": report.metadata,
        "columns": report.columns,
        "units": dict(zip(report.columns, report.units)),
        "rows": [[_json_value(v) for v in row] for row in report.rows],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
