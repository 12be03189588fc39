"""Reduced state of the two-level system after tracing out emitted bosons.

A superposition ψ(t) = a ψ_upper(t) + b ψ_lower(t) of the two dissipative level
amplitudes is no longer cyclic; its upper-level weight leaks into the
boson-emission channel at rate Γ.  Tracing the full (system + bath) projector
over the one-boson final states returns that weight as an incoherent
lower-level contribution:

    ρ(t) = |ψ(t)⟩⟨ψ(t)| + |a|² (1 - e^{-Γτ}) |ψ_lower(t)⟩⟨ψ_lower(t)|,  τ = t - t0,

with t0 the preparation time (each level amplitude starts as its basis vector
at t0; the non-cyclic window t0 ≤ t ≤ t0 + T is supported by passing t0 ≠ 0).
The trace |a|² + |b|² is conserved exactly, ρ stays positive, and the
upper-lower coherence decays as e^{-Γτ/2} — the operational dephasing time.
For Γτ → ∞ everything piles into the pure lower-level projector, so the purity
dips (fastest mixing at e^{-Γτ} = 1/2, i.e. τ = ln 2/Γ) and then recovers to 1.

Matrices are expressed in the instantaneous (w+, w-) basis, index 0 = "+";
`lab_basis_matrix` rotates a matrix to the fixed σz basis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import bath as bath_mod
from . import spin_core
from .bath import BathSpectrum
from .spin_core import FieldParams

_LEVEL_INDEX = {"+": 0, "-": 1}


@dataclass(frozen=True)
class SuperposedState:
    """Constant amplitudes on the upper (a) and lower (b) dissipative level.

    Normalization is the caller's choice; |a|² + |b|² is the trace target of
    the reduced density matrix at all times.
    """

    a: complex
    b: complex

    @property
    def trace(self) -> float:
        return abs(self.a) ** 2 + abs(self.b) ** 2


@dataclass(frozen=True)
class ReducedDensity:
    """2x2 reduced matrix in the instantaneous (w+, w-) basis at `time`."""

    matrix: np.ndarray
    time: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _branches(field: FieldParams, spec: BathSpectrum):
    upper = bath_mod.upper_level(field)
    lower = bath_mod.lower_level(field)
    return (
        upper,
        lower,
        bath_mod.total_energy(field, spec, upper),
        bath_mod.total_energy(field, spec, lower),
    )


def _coefficients(state, dressed_upper, dressed_lower, tau):
    """w-basis coefficients of the persistent (pure) branch after elapsed tau."""
    cu = state.a * math.exp(-0.5 * dressed_upper.width * tau) * cmath.exp(
        -1j * dressed_upper.total * tau
    )
    cl = state.b * cmath.exp(-1j * dressed_lower.total * tau)
    return cu, cl


def evolve_pure(
    state: SuperposedState, field: FieldParams, spec: BathSpectrum, t: float, t0: float = 0.0
) -> np.ndarray:
    """Lab-frame spinor of the persistent branch a ψ_upper + b ψ_lower prepared
    at t0.  Its squared norm is |a|² e^{-Γτ} + |b|² (the basis cross terms
    vanish by orthogonality)."""
    if t < t0:
        raise ValueError(f"t must be >= t0, got t={t}, t0={t0}")
    upper, lower, du, dl = _branches(field, spec)
    cu, cl = _coefficients(state, du, dl, t - t0)
    pair = spin_core.basis_pair(field, t)
    vecs = {"+": pair.w_plus, "-": pair.w_minus}
    return cu * vecs[upper] + cl * vecs[lower]


def reduced_density(
    state: SuperposedState, field: FieldParams, spec: BathSpectrum, t: float, t0: float = 0.0
) -> ReducedDensity:
    """Reduced matrix ρ(t) after the partial trace over boson-carrying final
    states (module docstring); Hermitian, positive, trace |a|² + |b|²."""
    if t < t0:
        raise ValueError(f"t must be >= t0, got t={t}, t0={t0}")
    upper, lower, du, dl = _branches(field, spec)
    tau = t - t0
    cu, cl = _coefficients(state, du, dl, tau)
    leaked = abs(state.a) ** 2 * (-math.expm1(-du.width * tau))
    iu, il = _LEVEL_INDEX[upper], _LEVEL_INDEX[lower]
    rho = np.zeros((2, 2), dtype=complex)
    rho[iu, iu] = abs(cu) ** 2
    rho[il, il] = abs(cl) ** 2 + leaked
    rho[iu, il] = cu * cl.conjugate()
    rho[il, iu] = rho[iu, il].conjugate()
    return ReducedDensity(rho, t)


def offdiagonal_coherence(
    state: SuperposedState, field: FieldParams, spec: BathSpectrum, t: float, t0: float = 0.0
) -> complex:
    """⟨w_upper(t)| ρ(t) |w_lower(t)⟩ = a b* e^{-Γτ/2} e^{-i(E_u - E_l)τ}.

    Its magnitude |a b| e^{-Γτ/2} defines τφ operationally: the leaked weight
    is diagonal and never contributes here."""
    if t < t0:
        raise ValueError(f"t must be >= t0, got t={t}, t0={t0}")
    _, _, du, dl = _branches(field, spec)
    cu, cl = _coefficients(state, du, dl, t - t0)
    return cu * cl.conjugate()


def leaked_probability(
    state: SuperposedState, field: FieldParams, spec: BathSpectrum, t: float, t0: float = 0.0
) -> float:
    """Weight |a|²(1 - e^{-Γτ}) lost to the boson-emission channel; equals one
    minus the persistent norm of the upper-level branch."""
    if t < t0:
        raise ValueError(f"t must be >= t0, got t={t}, t0={t0}")
    upper = bath_mod.upper_level(field)
    width = bath_mod.total_energy(field, spec, upper).width
    return abs(state.a) ** 2 * (-math.expm1(-width * (t - t0)))


def populations(rho: ReducedDensity, field: FieldParams):
    """(upper, lower) diagonal populations of a reduced matrix."""
    iu = _LEVEL_INDEX[bath_mod.upper_level(field)]
    il = 1 - iu
    return float(rho.matrix[iu, iu].real), float(rho.matrix[il, il].real)


def purity(rho: ReducedDensity) -> float:
    """Normalized purity Tr(ρ²)/(Tr ρ)²: 1 on pure states, 1/2 at maximal
    two-level mixing; dips and then recovers as the state collapses onto the
    lower level."""
    m = rho.matrix
    tr = np.trace(m).real
    return float(np.trace(m @ m).real / tr**2)


def lab_basis_matrix(rho: ReducedDensity, field: FieldParams) -> np.ndarray:
    """Rotate from the instantaneous (w+, w-) representation to the fixed lab
    (σz) basis: W ρ W† with W = [w+(t), w-(t)] as columns."""
    pair = spin_core.basis_pair(field, rho.time)
    w = np.column_stack([pair.w_plus, pair.w_minus])
    return w @ rho.matrix @ w.conj().T
