"""Optimization-based time stepping for data-driven director-beam dynamics."""

from .beam_model import (
    BeamMesh,
    Configuration,
    InertiaCoefficients,
    LoadCase,
    NodeState,
    TriangularPulse,
    quarter_arc_mesh,
)
from .constitutive import ConstitutiveLaw, MeasurementDataSet, sample_data_set, validate_manifold
from .dynamics import (
    Simulation,
    SimulationError,
    TimeGrid,
    Trajectory,
    angular_momentum,
    discrete_momenta,
    linear_momentum,
    run_simulation,
)
from .step_solver import (
    EnumerationResult,
    NewtonOptions,
    NewtonReport,
    PrimalDualState,
    SolverError,
    StepProblem,
    StepWeights,
    newton_solve,
    solve_by_enumeration,
)

__all__ = [
    "BeamMesh",
    "Configuration",
    "ConstitutiveLaw",
    "EnumerationResult",
    "InertiaCoefficients",
    "LoadCase",
    "MeasurementDataSet",
    "NewtonOptions",
    "NewtonReport",
    "NodeState",
    "PrimalDualState",
    "Simulation",
    "SimulationError",
    "SolverError",
    "StepProblem",
    "StepWeights",
    "TimeGrid",
    "Trajectory",
    "TriangularPulse",
    "angular_momentum",
    "discrete_momenta",
    "linear_momentum",
    "newton_solve",
    "quarter_arc_mesh",
    "run_simulation",
    "sample_data_set",
    "solve_by_enumeration",
    "validate_manifold",
]

__version__ = "0.1.0"
