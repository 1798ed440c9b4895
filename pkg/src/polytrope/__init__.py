"""Scale-invariant spherical hydrostatics.

Solves polytropic stellar structure three independent ways: direct
Lane-Emden integration, the first-order homology-invariant reduction
with reconstruction by quadrature, and closed-form approximants; plus
the scaling-charge diagnostics and the classic n = 3 applications
(Chandrasekhar mass, Eddington standard model).
"""

from .approximations import (
    ApproximantKind,
    approx_error_report,
    pade3_first_zero,
    pade3_theta,
    picard_theta,
    taylor_theta,
)
from .invariants import (
    CorePoint,
    HomologyState,
    InvariantCurve,
    ProfileTable,
    core_locator,
    invariants_at,
    picard_w,
    quadrature_profiles,
    series_matched_exponent,
    solve_uw_plane,
    volterra_exponent,
)
from .lane_emden import (
    DerivedConstants,
    EmdenSolution,
    PolytropicIndex,
    derived_constants,
    exact_theta,
    integrate_emden,
    n5_asymptotics,
    series_start,
)
from .noether import (
    G5Check,
    NoetherDiagnostics,
    g5_conservation_check,
    noether_charge,
    nonconservation_residual,
)
from .stellar import (
    ChandrasekharResult,
    EddingtonModel,
    EntropyStructure,
    LuminosityResult,
    PhysicalConstants,
    StellarModel,
    build_model,
    chandrasekhar_mass,
    eddington_beta,
    eddington_m_star,
    entropy_structure,
    luminosity,
)

__version__ = "0.1.0"

__all__ = [
    "ApproximantKind",
    "ChandrasekharResult",
    "CorePoint",
    "DerivedConstants",
    "EddingtonModel",
    "EmdenSolution",
    "EntropyStructure",
    "G5Check",
    "HomologyState",
    "InvariantCurve",
    "LuminosityResult",
    "NoetherDiagnostics",
    "PhysicalConstants",
    "PolytropicIndex",
    "ProfileTable",
    "StellarModel",
    "approx_error_report",
    "build_model",
    "chandrasekhar_mass",
    "core_locator",
    "derived_constants",
    "eddington_beta",
    "eddington_m_star",
    "entropy_structure",
    "exact_theta",
    "g5_conservation_check",
    "integrate_emden",
    "invariants_at",
    "luminosity",
    "n5_asymptotics",
    "noether_charge",
    "nonconservation_residual",
    "pade3_first_zero",
    "pade3_theta",
    "picard_theta",
    "picard_w",
    "quadrature_profiles",
    "series_matched_exponent",
    "series_start",
    "solve_uw_plane",
    "taylor_theta",
    "volterra_exponent",
]
