"""Bosonic environment at zero temperature: spectral densities and the one-loop
corrections they induce on the two co-rotating levels.

The environment couples through σz with spectral density J(ω) = ηω (ohmic) or
ηω³ (super-ohmic), sharply cut off at ω_c (> b when paired with a field).  With
S the σz matrix in the co-rotating basis, the on-shell one-loop self-energy of
level k is

    Σ_kk = η Σ_{l≠k} S_kl² [ i (E_k - E_l) Θ(E_k - E_l)
                             - ((E_l - E_k)/π) ln|ω_c/(E_k - E_l) - 1| ],

with Θ(0) ≡ 0 and the degenerate l = k term dropped outright: its prefactor
vanishes identically, and multiplying it against the divergent logarithm would
poison the sum.  The imaginary part is half the decay width,

    Γ_k/2 = η Σ_l S_kl² (E_k - E_l) Θ(E_k - E_l),

nonzero only for the level of higher effective energy, which decays by boson
emission; the real part shifts the level,

    E_k^tot = E_k + (η/π) Σ_{l≠k} S_kl² (E_l - E_k) ln|ω_c/(E_k - E_l) - 1|.

The logarithm diverges when the splitting hits the cutoff exactly — an artifact
of the sharp cutoff — so points within 1e-9·b of the resonance raise
CutoffResonanceError instead of returning ±inf; sweeps can skip or flag them.

To lowest order in η the amplitude is ψ_l(t) = e^{-Γ_l t/2} e^{-iE_l^tot t} w_l(t).
The lost upper-level weight is the boson-emission channel; for this exponential
form |ψ(t)|² + Γ ∫0^t |ψ(s)|² ds = 1 holds identically, so the evolution stays
unitary once the emitted channel is counted.

All functions are pure; evaluating them in parallel over parameter grids is safe.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import spin_core

OHMIC = "ohmic"
SUPER_OHMIC = "super_ohmic"
_KINDS = (OHMIC, SUPER_OHMIC)

CUTOFF_GUARD = 1e-9  # guard half-width around |splitting - omega_c|, relative to b

_LEVEL_INDEX = {"+": 0, "-": 1}


class CutoffResonanceError(RuntimeError):
    """Level splitting within the guard band of the sharp cutoff: the one-loop
    logarithm diverges there.  Callers evaluating sweeps should skip the point."""


@dataclass(frozen=True)
class BathSpectrum:
    """Environment description: kind ("ohmic" | "super_ohmic"), dimensionless
    coupling eta >= 0 and sharp frequency cutoff omega_c > 0.

    Everything downstream is perturbative in eta; construction warns (but does
    not fail) above eta = 0.5.
    """

    kind: str
    eta: float
    omega_c: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.eta < 0.0:
            raise ValueError(f"coupling eta must be nonnegative, got {self.eta}")
        if not self.omega_c > 0.0:
            raise ValueError(f"cutoff omega_c must be positive, got {self.omega_c}")
        if self.eta > 0.5:
            warnings.warn(
                f"eta={self.eta} is outside the weak-coupling domain (eta << 1); "
                "one-loop results are uncontrolled",
                UserWarning,
                stacklevel=2,
            )


def spectral_density(spec: BathSpectrum, omega):
    """J(ω) = η ω (ohmic) or η ω³ (super-ohmic) for ω <= ω_c, zero beyond.

    Accepts a scalar or array of nonnegative frequencies.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("frequencies must be nonnegative")
    power = 1 if spec.kind == OHMIC else 3
    j = np.where(w <= spec.omega_c, spec.eta * w**power, 0.0)
    if np.ndim(omega) == 0:
        return float(j)
    return j


def upper_level(field: spin_core.FieldParams) -> str:
    """Label of the co-rotating level with the higher effective energy.

    The splitting e_minus - e_plus equals the co-rotating-frame field magnitude
    and is nonnegative, so this is "-" everywhere (including, by convention, at
    the isolated degenerate point θ = π, ω0 = b where both widths vanish).
    """
    en = spin_core.effective_energies(field)
    return "-" if en.e_minus >= en.e_plus else "+"


def lower_level(field: spin_core.FieldParams) -> str:
    """Label of the co-rotating level with the lower effective energy."""
    return "+" if upper_level(field) == "-" else "-"


def _require_ohmic(spec: BathSpectrum, what: str) -> None:
    if spec.kind != OHMIC:
        raise ValueError(f"{what} requires an ohmic spectrum, got kind={spec.kind!r}")


def _check_pairing(field: spin_core.FieldParams, spec: BathSpectrum) -> None:
    # one-loop formulas assume the cutoff lies above the field scale
    if not spec.omega_c > field.b:
        raise ValueError(
            f"cutoff must exceed the field magnitude (omega_c={spec.omega_c}, b={field.b})"
        )


def self_energy(field: spin_core.FieldParams, spec: BathSpectrum, m: str, k: str) -> complex:
    """One-loop self-energy Σ_mk, evaluated on shell at the energy of level k.

    Only the diagonal entries feed the O(η) amplitude; off-diagonal entries are
    exposed for diagnostics.  Raises CutoffResonanceError near the cutoff
    resonance of any contributing channel.
    """
    _require_ohmic(spec, "self_energy")
    _check_pairing(field, spec)
    s = spin_core.sigma_z_matrix(field)
    en = spin_core.effective_energies(field)
    e = (en.e_plus, en.e_minus)
    im, ik = _LEVEL_INDEX[m], _LEVEL_INDEX[k]
    ek = e[ik]
    total = 0.0 + 0.0j
    for il in (0, 1):
        de = ek - e[il]
        if de == 0.0:
            continue  # vanishing prefactor; never multiplied against the bare log
        if abs(de - spec.omega_c) < CUTOFF_GUARD * field.b:
            raise CutoffResonanceError(
                f"splitting {de!r} within guard band of cutoff {spec.omega_c!r}"
            )
        log_term = math.log(abs(spec.omega_c / de - 1.0))
        bracket = complex((de / math.pi) * log_term, de if de > 0.0 else 0.0)
        total += float(s[im, il] * s[il, ik]) * bracket
    return spec.eta * total


def self_energy_diag(field: spin_core.FieldParams, spec: BathSpectrum, k: str) -> complex:
    """Σ_kk on shell: imaginary part Γ_k/2, real part minus the level shift."""
    return self_energy(field, spec, k, k)


def decay_width(field: spin_core.FieldParams, spec: BathSpectrum, k: str) -> float:
    """Γ_k = 2η Σ_l S_kl² (E_k - E_l) Θ(E_k - E_l), with Θ(0) ≡ 0.

    Only downward channels contribute, so the lower level is exactly stable;
    for this model Γ_upper/2 = η sin²ϑ (b cos θ0 + ω0 cos ϑ).
    """
    _require_ohmic(spec, "decay_width")
    _check_pairing(field, spec)
    s = spin_core.sigma_z_matrix(field)
    en = spin_core.effective_energies(field)
    e = (en.e_plus, en.e_minus)
    ik = _LEVEL_INDEX[k]
    acc = 0.0
    for il in (0, 1):
        de = e[ik] - e[il]
        if de > 0.0:
            acc += float(s[ik, il]) ** 2 * de
    return 2.0 * spec.eta * acc


@dataclass(frozen=True)
class DissipativeLevel:
    """One level dressed by the environment: bare effective energy, O(η) shift,
    and decay width (>= 0; exactly 0 for the lower level)."""

    level: str
    bare_energy: float
    energy_shift: float
    width: float

    @property
    def total(self) -> float:
        """E^tot = bare energy plus the O(η) shift."""
        return self.bare_energy + self.energy_shift


def total_energy(field: spin_core.FieldParams, spec: BathSpectrum, k: str) -> DissipativeLevel:
    """Dressed level data: E_k^tot = E_k - Re Σ_kk, width Γ_k."""
    sigma = self_energy_diag(field, spec, k)
    en = spin_core.effective_energies(field)
    bare = en.e_plus if k == "+" else en.e_minus
    return DissipativeLevel(
        level=k,
        bare_energy=bare,
        energy_shift=-sigma.real,
        width=decay_width(field, spec, k),
    )


def dissipative_amplitude(
    field: spin_core.FieldParams, spec: BathSpectrum, level: str, t: float
) -> np.ndarray:
    """ψ_l(t) = e^{-Γ_l t/2} e^{-i E_l^tot t} w_l(t), the persistent amplitude to
    O(η).  Norm e^{-Γ_l t/2}: decaying for the upper level, constant for the
    lower one; reduces exactly to `spin_core.exact_amplitude` at η = 0."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    dressed = total_energy(field, spec, level)
    pair = spin_core.basis_pair(field, t)
    w = pair.w_plus if level == "+" else pair.w_minus
    envelope = math.exp(-0.5 * dressed.width * t)
    return w * (envelope * cmath.exp(-1j * dressed.total * t))
