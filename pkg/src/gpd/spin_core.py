"""Exact solution of a spin-1/2 driven by a uniformly rotating magnetic field.

The field is B(t) = b (sin θ cos ω0 t, sin θ sin ω0 t, cos θ) with constant
magnitude b > 0, cone angle θ and signed angular velocity ω0 (ħ = 1, Hamiltonian
h(t) = -B(t)·σ/2).  In the co-rotating basis

    w+(t) = (e^{-iφ(t)} cos(ϑ/2),  sin(ϑ/2)),
    w-(t) = (e^{-iφ(t)} sin(ϑ/2), -cos(ϑ/2)),     φ(t) = ω0 t,  ϑ = θ - θ0,

with the tilt angle θ0 fixed by tan θ0 = ω0 sin θ / (b + ω0 cos θ), the operator
(h - i ∂t) is diagonal with the constant eigenvalues

    E± = ∓(b/2) cos θ0 - (ω0/2) [1 ± cos ϑ],

so ψ±(t) = w±(t) e^{-iE± t} solves the Schrödinger equation exactly at any
drive speed.  The basis is periodic, w±(T) = w±(0) with T = 2π/|ω0|, and the
gauge-invariant geometric phase of level l after time t is

    β_l = arg{ w_l†(0) w_l(t) · exp[ i ∫0^t w_l† i ∂t' w_l dt' ] },

invariant under w_l(t) → e^{iα(t)} w_l(t).  Over one period it equals
sign(ω0) π [1 ± cos ϑ] mod 2π: the Berry solid-angle value as θ0 → 0 (slow
drive) and the trivial phase as θ0 → θ (fast drive), smoothly interpolated.

Phases are reported as principal values in (-π, π].  Phase splits defined via
Φ = ∫ E dt (see `phase_analysis`) use the opposite overall sign, Φ ≡ -β mod 2π.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

_LEVEL_SIGNS = {"+": 1.0, "-": -1.0}


def _level_sign(level: str) -> float:
    try:
        return _LEVEL_SIGNS[level]
    except KeyError:
        raise ValueError(f"level must be '+' or '-', got {level!r}") from None


def principal_angle(x):
    """Reduce an angle (scalar or array, radians) to the interval (-pi, pi]."""
    wrapped = np.remainder(x, TWO_PI)
    wrapped = np.where(wrapped > math.pi, wrapped - TWO_PI, wrapped)
    if np.ndim(x) == 0:
        return float(wrapped)
    return wrapped


def unwrap_by_continuity(values, anchor=None):
    """Lift a sequence of phases to a continuous branch.

    Adjacent jumps larger than pi are folded back by whole turns.  When
    `anchor` is given, the whole series is shifted by a multiple of 2*pi so
    its first element lands within pi of the anchor; sweep outputs use
    anchor=0 at the theta=0 end, where every phase here vanishes mod 2*pi.
    """
    series = np.unwrap(np.asarray(values, dtype=float))
    if anchor is not None:
        series = series - TWO_PI * round((series[0] - anchor) / TWO_PI)
    return series


@dataclass(frozen=True)
class FieldParams:
    """Rotating-field parameters (angular-frequency units, ħ = 1).

    b > 0 is the field magnitude, theta in [0, pi] the cone angle, omega0 the
    signed rotation rate.  All derived objects are pure functions of these
    three numbers; instances are immutable and safe to share across threads.
    """

    b: float
    theta: float
    omega0: float

    def __post_init__(self):
        if not self.b > 0.0:
            raise ValueError(f"field magnitude must be positive, got b={self.b}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got theta={self.theta}")

    @property
    def period(self) -> float:
        """Drive period 2*pi/|omega0|; undefined for a static field."""
        if self.omega0 == 0.0:
            raise ValueError("period is undefined for omega0 = 0")
        return TWO_PI / abs(self.omega0)

    @property
    def sign_omega0(self) -> float:
        """Sign of the rotation (0.0 for a static field)."""
        if self.omega0 == 0.0:
            return 0.0
        return math.copysign(1.0, self.omega0)


def theta0(field: FieldParams) -> float:
    """Tilt angle between the field frame and the co-rotating eigenframe.

    Branch fixed by the two-argument arctangent of (ω0 sin θ, b + ω0 cos θ),
    which makes θ0 continuous in ω0 near 0 (θ0(0) = 0, since b > 0) and drives
    θ0 → θ in the fast limit |ω0| ≫ b.  Result in (-π, π]; for ω0 > 0 and
    θ in (0, π), θ0 grows monotonically from 0 towards θ with |ω0|.
    """
    return math.atan2(
        field.omega0 * math.sin(field.theta),
        field.b + field.omega0 * math.cos(field.theta),
    )


def vartheta(field: FieldParams) -> float:
    """Co-rotating cone angle ϑ = θ - θ0."""
    return field.theta - theta0(field)


@dataclass(frozen=True)
class BasisPair:
    """The two co-rotating spinors at one instant, with their angles.

    Orthonormal by construction; σz matrix elements between them are real:
    ⟨w±|σz|w±⟩ = ±cos ϑ and ⟨w+|σz|w-⟩ = sin ϑ.
    """

    w_plus: np.ndarray
    w_minus: np.ndarray
    vartheta: float
    phi: float


def basis_pair(field: FieldParams, t: float) -> BasisPair:
    """Co-rotating basis spinors w±(t)."""
    vt = vartheta(field)
    phi = field.omega0 * t
    phase = cmath.exp(-1j * phi)
    c, s = math.cos(0.5 * vt), math.sin(0.5 * vt)
    w_plus = np.array([phase * c, s], dtype=complex)
    w_minus = np.array([phase * s, -c], dtype=complex)
    return BasisPair(w_plus, w_minus, vt, phi)


def basis_trajectory(field: FieldParams, level: str, times) -> np.ndarray:
    """w_level(t) sampled at `times`, as an (n, 2) complex array."""
    sign = _level_sign(level)
    half = 0.5 * vartheta(field)
    t = np.asarray(times, dtype=float)
    phase = np.exp(-1j * field.omega0 * t)
    if sign > 0:
        top, bottom = math.cos(half), math.sin(half)
    else:
        top, bottom = math.sin(half), -math.cos(half)
    states = np.empty((t.size, 2), dtype=complex)
    states[:, 0] = top * phase
    states[:, 1] = bottom
    return states


def sigma_z_matrix(field: FieldParams) -> np.ndarray:
    """σz matrix elements ⟨w_a|σz|w_b⟩ in the co-rotating basis, order (+, -).

    Real and time independent: [[cos ϑ, sin ϑ], [sin ϑ, -cos ϑ]].
    """
    vt = vartheta(field)
    c, s = math.cos(vt), math.sin(vt)
    return np.array([[c, s], [s, -c]])


@dataclass(frozen=True)
class EffectiveEnergies:
    """Constant co-rotating level energies E± (ħ = 1)."""

    e_plus: float
    e_minus: float

    @property
    def splitting(self) -> float:
        return self.e_minus - self.e_plus


def effective_energies(field: FieldParams) -> EffectiveEnergies:
    """E± = ∓(b/2) cos θ0 - (ω0/2)[1 ± cos ϑ]."""
    th0 = theta0(field)
    vt = field.theta - th0
    base = 0.5 * field.b * math.cos(th0)
    geo = math.cos(vt)
    e_plus = -base - 0.5 * field.omega0 * (1.0 + geo)
    e_minus = base - 0.5 * field.omega0 * (1.0 - geo)
    return EffectiveEnergies(e_plus, e_minus)


def effective_splitting(field: FieldParams) -> float:
    """e_minus - e_plus = b cos θ0 + ω0 cos ϑ.

    Equals the co-rotating-frame field magnitude sqrt(b² + ω0² + 2 b ω0 cos θ),
    hence nonnegative; it vanishes only at the degenerate point θ = π, ω0 = b.
    """
    th0 = theta0(field)
    return field.b * math.cos(th0) + field.omega0 * math.cos(field.theta - th0)


def exact_amplitude(field: FieldParams, level: str, t: float) -> np.ndarray:
    """ψ_level(t) = w_level(t) e^{-i E_level t}: the exact driven amplitude with
    initial condition ψ(0) = w(0).  Unit norm for all t."""
    sign = _level_sign(level)
    pair = basis_pair(field, t)
    en = effective_energies(field)
    if sign > 0:
        w, e = pair.w_plus, en.e_plus
    else:
        w, e = pair.w_minus, en.e_minus
    return w * cmath.exp(-1j * e * t)


def holonomy_phase(states) -> float:
    """Gauge-invariant phase of an ordered sequence of normalized states.

    Discrete form of arg{ s†(0) s(t) · exp[i ∫ s† i∂t s dt] }: the integral is
    accumulated as -Σ arg(s_i† s_{i+1}), so any per-sample rephasing
    s_i → e^{iα_i} s_i telescopes against the endpoint overlap and the value is
    invariant on the sample lattice itself (up to branch crossings, avoided
    when per-step phases stay below π).  Principal value in (-π, π].
    """
    arr = np.asarray(states)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise ValueError("need an (n >= 2, dim) array of states")
    step_args = np.angle(np.einsum("ij,ij->i", arr[:-1].conj(), arr[1:]))
    closure = np.angle(np.vdot(arr[0], arr[-1]))
    return principal_angle(closure - step_args.sum())


def geometric_phase(
    field: FieldParams,
    level: str,
    t_final: float,
    method: str = "quadrature",
    num_steps: int = 4096,
) -> float:
    """Geometric phase β of one co-rotating level accumulated over [0, t_final].

    Two independent routes are exposed:

    * ``"closed"``: analytic endpoint overlap plus the phase integral
      ω0 t (1 ± cos ϑ)/2; at t_final = T this is sign(ω0) π [1 ± cos ϑ] mod 2π.
    * ``"quadrature"``: discrete holonomy of the basis trajectory sampled on
      `num_steps` uniform intervals (see `holonomy_phase`).

    Principal value in (-π, π].  Rejects t_final <= 0.
    """
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    sign = _level_sign(level)
    if method == "closed":
        half = 0.5 * vartheta(field)
        weight = math.cos(half) ** 2 if sign > 0 else math.sin(half) ** 2
        overlap = weight * cmath.exp(-1j * field.omega0 * t_final) + (1.0 - weight)
        integral = field.omega0 * t_final * weight
        return principal_angle(cmath.phase(overlap) + integral)
    if method == "quadrature":
        times = np.linspace(0.0, t_final, num_steps + 1)
        return holonomy_phase(basis_trajectory(field, level, times))
    raise ValueError(f"unknown method {method!r}; use 'closed' or 'quadrature'")
