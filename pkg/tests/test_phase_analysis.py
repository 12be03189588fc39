# Phase decomposition with dissipation: slow-drive closed forms, any-speed
# geometric energies, dephasing reports.  Phase conventions: these quantities
# follow Phi = integral of E dt, equal to -beta of spin_core mod 2pi.

import math

import numpy as np
import pytest

from gpd.bath import OHMIC, SUPER_OHMIC, BathSpectrum, CutoffResonanceError, decay_width, upper_level
from gpd.phase_analysis import (
    AdiabaticityWarning,
    adiabatic_dephasing,
    adiabatic_phases,
    geometric_energy,
    nonadiabatic_dephasing,
    solid_angle_nonadiabatic,
    super_ohmic_bp_correction,
)
from gpd.spin_core import FieldParams, geometric_phase, principal_angle, theta0

SLOW = 0.02  # comfortably inside the adiabatic advisory bound


def slow_field(theta, omega0=SLOW):
    return FieldParams(1.0, theta, omega0)


def test_breakdown_total_identity():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    plus, minus = adiabatic_phases(slow_field(1.1), spec)
    for b in (plus, minus):
        assert b.total == b.dp_bare + b.dp_correction + b.gp_bare + b.gp_correction
        assert b.gp_total == b.gp_bare + b.gp_correction


def test_adiabatic_phases_dissipationless_values():
    theta = 1.1
    spec = BathSpectrum(OHMIC, 0.0, 3.0)
    solid = math.pi * (1.0 - math.cos(theta))
    for omega0, sign in ((SLOW, 1.0), (-SLOW, -1.0)):
        plus, minus = adiabatic_phases(slow_field(theta, omega0), spec)
        assert plus.gp_bare == pytest.approx(sign * solid, abs=1e-15)
        assert minus.gp_bare == pytest.approx(-sign * solid, abs=1e-15)
        assert plus.gp_correction == 0.0
        assert minus.gp_correction == 0.0
        # bare dynamical phase is -+ (1/2) b T
        t_period = 2 * math.pi / abs(omega0)
        assert plus.dp_bare == pytest.approx(-0.5 * t_period)
        assert minus.dp_bare == pytest.approx(0.5 * t_period)


def test_adiabatic_gp_correction_vanishes_at_special_angles():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    for theta in (0.0, math.pi / 2, math.pi):
        plus, minus = adiabatic_phases(slow_field(theta), spec)
        assert abs(plus.gp_correction) < 1e-12
        assert abs(minus.gp_correction) < 1e-12


def test_adiabatic_correction_sign_flip_across_twice_the_field():
    # relative sign of the two levels' corrections: same below omega_c = 2b,
    # opposite above
    theta = math.pi / 4
    for wc, expected in ((1.5, 1.0), (3.0, -1.0)):
        spec = BathSpectrum(OHMIC, 0.3, wc)
        plus, minus = adiabatic_phases(slow_field(theta), spec)
        product = math.copysign(1.0, plus.gp_correction) * math.copysign(1.0, minus.gp_correction)
        assert product == expected


def test_adiabatic_phases_at_cutoff_equal_to_field_are_infinite():
    # the "-" level's logarithm diverges at omega_c = b; closed forms return
    # the IEEE limit rather than raising
    spec = BathSpectrum(OHMIC, 0.3, 1.0)
    plus, minus = adiabatic_phases(slow_field(math.pi / 4), spec)
    assert math.isfinite(plus.gp_correction)
    assert math.isinf(minus.gp_correction)
    assert minus.gp_correction < 0.0  # sign(ln 0) side


def test_adiabatic_phases_guards():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    with pytest.raises(ValueError):
        adiabatic_phases(FieldParams(1.0, 1.0, 0.0), spec)
    with pytest.raises(ValueError):
        adiabatic_phases(FieldParams(1.0, math.pi, 1.0), spec)  # degenerate
    with pytest.raises(ValueError):
        adiabatic_phases(slow_field(1.0), BathSpectrum(SUPER_OHMIC, 0.3, 3.0))
    with pytest.warns(AdiabaticityWarning):
        adiabatic_phases(FieldParams(1.0, 1.0, 0.5), spec)


def frozen_log_offset(theta, eta, wc, b, level_sign, sign_omega0=1.0):
    # O(eta) gap between the exact-shift geometric energy and the printed
    # slow-drive split, from the drive dependence of the cutoff logarithm
    s2c = math.sin(theta) ** 2 * math.cos(theta)
    return -sign_omega0 * 2.0 * eta * s2c * wc / (b + level_sign * wc)


def test_adiabatic_gp_agrees_with_spin_core_mod_2pi():
    # Phi convention vs amplitude-holonomy convention: gp_bare_k = -beta_k mod 2pi
    spec = BathSpectrum(OHMIC, 0.0, 3.0)
    for theta in (0.4, 1.0, 2.0, 2.9):
        field = FieldParams(1.0, theta, 1e-4)
        plus, minus = adiabatic_phases(field, spec)
        for breakdown, level in ((plus, "+"), (minus, "-")):
            beta = geometric_phase(field, level, field.period, method="closed")
            assert abs(principal_angle(breakdown.gp_total + beta)) < 1e-3


def test_adiabatic_dephasing_values_and_sentinel():
    # theta = 0: no transverse coupling, infinite dephasing time, feasible
    spec = BathSpectrum(OHMIC, 0.2, 3.0)
    report = adiabatic_dephasing(slow_field(0.0), spec)
    assert math.isinf(report.tau_phi)
    assert report.gamma == 0.0
    assert report.feasible
    # generic angle: 1/tau_phi = eta sin^2(theta) (b - omega0 cos theta)
    theta = 1.0
    report = adiabatic_dephasing(slow_field(theta), spec)
    rate = 0.2 * math.sin(theta) ** 2 * (1.0 - SLOW * math.cos(theta))
    assert report.tau_phi == pytest.approx(1.0 / rate)
    assert report.gamma == pytest.approx(2.0 * rate)
    assert report.feasibility_margin == pytest.approx(SLOW / (math.pi * 2.0 * rate))


def test_adiabatic_dephasing_super_ohmic_ratio():
    # at omega0 = 0 the super-ohmic and ohmic rates differ exactly by b^2...
    theta = 1.3
    b = 1.0
    field = FieldParams(b, theta, 0.0)
    ohmic = adiabatic_dephasing(field, BathSpectrum(OHMIC, 0.2, 3.0))
    soft = adiabatic_dephasing(field, BathSpectrum(SUPER_OHMIC, 0.2, 3.0))
    assert soft.gamma / ohmic.gamma == pytest.approx(b**2)
    # ...and scale with b^2 when the field strength changes
    field4 = FieldParams(2.0, theta, 0.0)
    soft4 = adiabatic_dephasing(field4, BathSpectrum(SUPER_OHMIC, 0.2, 6.0))
    ohmic4 = adiabatic_dephasing(field4, BathSpectrum(OHMIC, 0.2, 6.0))
    assert soft4.gamma / ohmic4.gamma == pytest.approx(4.0)


def test_adiabatic_dephasing_si_anchored_case():
    # drive period 1 microsecond at b/2pi = 50 MHz: omega0/b = 0.02
    from gpd.config import FieldConfig

    cfg = FieldConfig(theta=math.pi / 2, omega0_over_b=None, period_us=1.0)
    field = cfg.params()
    assert field.omega0 == pytest.approx(0.02)
    report = adiabatic_dephasing(field, BathSpectrum(OHMIC, 0.01, 3.0))
    assert report.feasibility_margin > 0.0
    assert math.isfinite(report.feasibility_margin)


def test_feasibility_margin_decreases_with_eta():
    field = slow_field(1.2)
    margins = [
        adiabatic_dephasing(field, BathSpectrum(OHMIC, eta, 3.0)).feasibility_margin
        for eta in (0.05, 0.1, 0.2, 0.4)
    ]
    assert all(a > b for a, b in zip(margins, margins[1:]))


def test_adiabatic_dephasing_out_of_domain_rejected():
    with pytest.warns(AdiabaticityWarning):
        with pytest.raises(ValueError):
            adiabatic_dephasing(FieldParams(1.0, 0.5, 2.0), BathSpectrum(OHMIC, 0.2, 3.0))


def test_super_ohmic_bp_correction_zeros():
    spec = BathSpectrum(SUPER_OHMIC, 0.3, 3.0)
    for theta in (0.0, math.pi / 2, math.pi):
        plus, minus = super_ohmic_bp_correction(slow_field(theta), spec)
        assert abs(plus) < 1e-12
        assert abs(minus) < 1e-12
    plus, minus = super_ohmic_bp_correction(slow_field(0.7), BathSpectrum(SUPER_OHMIC, 0.0, 3.0))
    assert plus == 0.0
    assert minus == 0.0
    with pytest.raises(ValueError):
        super_ohmic_bp_correction(slow_field(0.7), BathSpectrum(OHMIC, 0.3, 3.0))


def test_super_ohmic_bp_correction_frozen_values():
    # (b=1, theta=pi/4, omega_c=3, eta=0.3), sign(omega0)=+1, evaluated at 50
    # decimal digits
    spec = BathSpectrum(SUPER_OHMIC, 0.3, 3.0)
    plus, minus = super_ohmic_bp_correction(slow_field(math.pi / 4), spec)
    assert plus == pytest.approx(-0.66051671156127500043, abs=1e-13)
    assert minus == pytest.approx(0.80755543308155707918, abs=1e-13)


def test_solid_angle_nonadiabatic_limits():
    theta = 1.2
    slow = FieldParams(1.0, theta, 1e-6)
    assert solid_angle_nonadiabatic(slow, "+") == pytest.approx(
        math.pi * (1 - math.cos(theta)), abs=1e-5
    )
    fast = FieldParams(1.0, theta, 1e6)
    assert abs(solid_angle_nonadiabatic(fast, "+")) < 1e-5
    # sign conventions: level flips the sign exactly, the rotation direction up
    # to the tiny theta0 asymmetry
    assert solid_angle_nonadiabatic(slow, "-") == -solid_angle_nonadiabatic(slow, "+")
    rev = FieldParams(1.0, theta, -1e-6)
    assert solid_angle_nonadiabatic(rev, "+") == pytest.approx(
        -solid_angle_nonadiabatic(slow, "+"), abs=1e-5
    )


def test_geometric_energy_dissipationless_reduction():
    spec = BathSpectrum(OHMIC, 0.0, 3.0)
    for theta in (0.5, 1.5, 2.5):
        for r in (0.05, 1.0, 4.0):
            field = FieldParams(1.0, theta, r)
            for level in ("+", "-"):
                assert geometric_energy(field, spec, level) == solid_angle_nonadiabatic(
                    field, level
                )


def test_geometric_energy_slow_drive_matches_adiabatic_plus_offset():
    # the slow-drive limit reproduces the printed adiabatic split only up to
    # the frozen-logarithm offset (see phase_analysis module docstring); with
    # the offset restored the two routes agree to O(omega0)
    eta, wc = 0.3, 3.0
    spec = BathSpectrum(OHMIC, eta, wc)
    for theta in (0.4, 1.0, 1.6, 2.4):
        field = FieldParams(1.0, theta, 1e-4)
        plus, minus = adiabatic_phases(field, spec)
        for breakdown, level, ls in ((plus, "+", 1.0), (minus, "-", -1.0)):
            te = geometric_energy(field, spec, level)
            offset = frozen_log_offset(theta, eta, wc, 1.0, ls)
            assert te == pytest.approx(breakdown.gp_total + offset, abs=2e-3)


def test_geometric_energy_frozen_log_offset_is_the_whole_gap():
    # as omega0 -> 0 the measured gap converges to the analytic offset
    eta, wc = 0.3, 3.0
    spec = BathSpectrum(OHMIC, eta, wc)
    theta = 0.9

    def gap(ratio, level):
        field = FieldParams(1.0, theta, ratio)
        plus, minus = adiabatic_phases(field, spec)
        breakdown = plus if level == "+" else minus
        return geometric_energy(field, spec, level) - breakdown.gp_total

    for level, ls in (("+", 1.0), ("-", -1.0)):
        offset = frozen_log_offset(theta, eta, wc, 1.0, ls)
        assert gap(1e-4, level) == pytest.approx(offset, rel=2e-3)
        # residual beyond the offset shrinks linearly with the drive
        r2 = gap(2e-3, level) - offset
        r1 = gap(1e-3, level) - offset
        assert r2 / r1 == pytest.approx(2.0, rel=0.15)


def test_geometric_energy_fast_drive_trivial():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    for level in ("+", "-"):
        value = geometric_energy(FieldParams(1.0, math.pi / 3, 1e4), spec, level)
        assert abs(value) < 1e-2


def test_geometric_energy_guards_and_resonance():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    with pytest.raises(ValueError):
        geometric_energy(FieldParams(1.0, 1.0, 0.0), spec, "+")
    # splitting b_eff = 3b = omega_c at theta=0, omega0=2b
    with pytest.raises(CutoffResonanceError):
        geometric_energy(FieldParams(1.0, 0.0, 2.0), spec, "-")


def test_geometric_energy_asymmetry_between_levels():
    # the logarithmic shifts break the +/- mirror symmetry
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    field = FieldParams(1.0, math.pi / 4, 0.2)
    total = geometric_energy(field, spec, "+") + geometric_energy(field, spec, "-")
    assert abs(total) > 1e-6


def test_geometric_energy_continuity_in_theta():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    thetas = np.linspace(0.0, math.pi, 401)
    values = np.array(
        [geometric_energy(FieldParams(1.0, float(t), 0.2), spec, "-") for t in thetas]
    )
    assert np.all(np.isfinite(values))
    assert np.max(np.abs(np.diff(values))) < 0.15


def test_nonadiabatic_dephasing_matches_generic_width():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    for theta in (0.3, 1.2, 2.7):
        for r in (0.02, 0.5, 2.0):
            field = FieldParams(1.0, theta, r)
            report = nonadiabatic_dephasing(field, spec)
            assert report.gamma == pytest.approx(
                decay_width(field, spec, upper_level(field)), abs=1e-12
            )


def test_nonadiabatic_dephasing_free_cases():
    spec = BathSpectrum(OHMIC, 0.3, 3.0)
    # vanishing matrix element (theta = 0) and vanishing coupling
    for field, spec_k in (
        (FieldParams(1.0, 0.0, 0.5), spec),
        (FieldParams(1.0, 1.0, 0.5), BathSpectrum(OHMIC, 0.0, 3.0)),
    ):
        report = nonadiabatic_dephasing(field, spec_k)
        assert report.gamma == 0.0
        assert math.isinf(report.tau_phi)
        assert report.feasible


def test_slow_drive_rate_is_first_order_of_generic_width():
    # the closed slow-drive rate eta sin^2(theta)(b - omega0 cos theta) matches
    # the generic width to O(omega0^2): the sin^2(theta - theta0) expansion
    # flips the bracket's +omega0 cos theta term
    eta = 0.2
    spec = BathSpectrum(OHMIC, eta, 3.0)
    theta = 1.0

    def gap(omega0):
        slow = adiabatic_dephasing(FieldParams(1.0, theta, omega0), spec)
        generic = nonadiabatic_dephasing(FieldParams(1.0, theta, omega0), spec)
        return abs(slow.gamma - generic.gamma)

    g2, g1 = gap(0.02), gap(0.01)
    assert g1 < 5.0 * eta * 0.01**2
    assert g2 / g1 == pytest.approx(4.0, rel=0.3)
