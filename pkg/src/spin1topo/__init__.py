"""Berry curvature, Chern numbers and topological phases of spin-1 systems."""

from .berry import CurvatureTrace, RampProtocol, exact_chern_flux, exact_curvature, oscillation_count, simulate_ramp
from .hamiltonians import (
    CircuitParams,
    CoupledParams,
    FieldVector,
    SignConvention,
    SingleSpinParams,
    coupled,
    coupled_family,
    family_for,
    single_family,
    single_spin,
    u1_rotate,
)
from .phases import (
    PhaseDiagram,
    WeylPoint,
    phase_diagram,
    predict_chern,
    scan_weyl_points,
    weyl_points_g,
    weyl_points_j02,
    weyl_points_jz,
)
from .spin import SpinOperators, embed, spin1_operators, total_sz

__version__ = "0.1.0"

__all__ = [
    "CircuitParams",
    "CoupledParams",
    "CurvatureTrace",
    "FieldVector",
    "PhaseDiagram",
    "RampProtocol",
    "SignConvention",
    "SingleSpinParams",
    "SpinOperators",
    "WeylPoint",
    "coupled",
    "coupled_family",
    "embed",
    "exact_chern_flux",
    "exact_curvature",
    "family_for",
    "oscillation_count",
    "phase_diagram",
    "predict_chern",
    "scan_weyl_points",
    "simulate_ramp",
    "single_family",
    "single_spin",
    "spin1_operators",
    "total_sz",
    "u1_rotate",
    "weyl_points_g",
    "weyl_points_j02",
    "weyl_points_jz",
]
