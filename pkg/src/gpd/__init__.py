"""Geometric phase of a driven two-level system in a dissipative environment.

Modules:
    spin_core       exact rotating-field solution and its geometric phase
    bath            ohmic/super-ohmic environments: one-loop widths and shifts
    phase_analysis  dynamical/geometric phase split, dephasing, feasibility
    density         reduced density matrix after tracing out emitted bosons
    oracle          independent numerical cross-checks
    cli             the `gpd` command line front end (CSV/JSON datasets, figures)
"""

__version__ = "0.1.0"

from .bath import BathSpectrum, CutoffResonanceError, DissipativeLevel
from .density import ReducedDensity, SuperposedState
from .phase_analysis import DephasingReport, PhaseBreakdown
from .spin_core import BasisPair, EffectiveEnergies, FieldParams

__all__ = [
    "__version__",
    "BasisPair",
    "BathSpectrum",
    "CutoffResonanceError",
    "DephasingReport",
    "DissipativeLevel",
    "EffectiveEnergies",
    "FieldParams",
    "PhaseBreakdown",
    "ReducedDensity",
    "SuperposedState",
]
