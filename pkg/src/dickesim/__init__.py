"""Classical deformed Dicke model: Hamiltonian dynamics, equilibrium and
phase-diagram analysis, and chaos diagnostics."""

from .errors import (
    ConvergenceError,
    DickeError,
    DomainError,
    NoRealRootError,
    SingularityError,
    WellNotPresentError,
)
from .model import (
    ElectricalState,
    ModelParams,
    Observables,
    PhaseState,
    effective_potential,
    effective_potential_minimizer,
    flow,
    flow_jacobian,
    from_electrical,
    hamiltonian,
    hamiltonian_hessian,
    observables,
    to_electrical,
)
from .integrate import IntegrationConfig, Trajectory, evolve, ground_state_hold
from .equilibria import (
    Equilibrium,
    WellStructure,
    find_equilibria,
    ground_state,
    well_structure,
)
from .phase_diagram import (
    AccessibleRegion,
    PhaseDiagram,
    PhaseDiagramCell,
    SweepSpec,
    accessible_region,
    classify_grid,
    critical_alpha,
    ground_state_sweep,
)
from .chaos import (
    LyapunovResult,
    PoincareSection,
    SectionPlane,
    classify_well_chaos,
    lyapunov_max,
    poincare,
)
from .shell import AmbiguousWellWarning, ShellRequest, in_well_ic, solve_q_on_shell

__version__ = "0.1.0"

__all__ = [
    "AccessibleRegion",
    "AmbiguousWellWarning",
    "ConvergenceError",
    "DickeError",
    "DomainError",
    "ElectricalState",
    "Equilibrium",
    "IntegrationConfig",
    "LyapunovResult",
    "ModelParams",
    "NoRealRootError",
    "Observables",
    "PhaseDiagram",
    "PhaseDiagramCell",
    "PhaseState",
    "PoincareSection",
    "SectionPlane",
    "ShellRequest",
    "SingularityError",
    "Trajectory",
    "WellNotPresentError",
    "WellStructure",
    "accessible_region",
    "classify_grid",
    "classify_well_chaos",
    "critical_alpha",
    "effective_potential",
    "effective_potential_minimizer",
    "evolve",
    "find_equilibria",
    "flow",
    "flow_jacobian",
    "from_electrical",
    "ground_state",
    "ground_state_hold",
    "ground_state_sweep",
    "hamiltonian",
    "hamiltonian_hessian",
    "in_well_ic",
    "lyapunov_max",
    "observables",
    "poincare",
    "solve_q_on_shell",
    "to_electrical",
    "well_structure",
]
