"""Mach-Zehnder interferometer simulator with a semitransparent obstacle.

State-vector simulation of single-photon interferometer circuits on the
composite channel (x) Fock space, with closed-form detection laws as
independent cross-checks, a small circuit text format, parameter sweeps,
seeded Monte Carlo sampling, and a command-line front end.
"""

from .algebra import (
    BasisLabel,
    Channel,
    DimensionError,
    LinearOperator,
    SpaceConfig,
    StateVector,
    annihilation,
    apply,
    basis_state,
    compose,
    dyad,
    fock_identity,
    identity,
    inner_product,
    spatial_identity,
    tensor,
)
from .analysis import (
    McResult,
    OutcomeDistribution,
    SweepRow,
    SweepSource,
    TraceRecord,
    closed_form_mz,
    closed_form_obstacle,
    monte_carlo,
    mz_circuit,
    obstructed_circuit,
    outcome_distribution,
    relative_output_phase,
    run_circuit,
    success_threshold,
    sweep,
    trace_states,
    wrap_to_pi,
)
from .dsl import (
    CircuitSpec,
    ParseDiagnostic,
    ParseResult,
    Severity,
    format_element,
    format_input,
    parse_circuit,
    serialize_circuit,
)
from .elements import (
    ElementKind,
    ElementSpec,
    ObstacleParams,
    beam_splitter,
    beam_splitter_operator,
    element_to_operator,
    mirror,
    mirror_operator,
    obstacle,
    obstacle_operator,
    phase_shifter,
    phase_shifter_operator,
    wrap_angle,
)

__version__ = "0.1.0"

__all__ = [
    "BasisLabel",
    "Channel",
    "CircuitSpec",
    "DimensionError",
    "ElementKind",
    "ElementSpec",
    "LinearOperator",
    "McResult",
    "ObstacleParams",
    "OutcomeDistribution",
    "ParseDiagnostic",
    "ParseResult",
    "Severity",
    "SpaceConfig",
    "StateVector",
    "SweepRow",
    "SweepSource",
    "TraceRecord",
    "annihilation",
    "apply",
    "basis_state",
    "beam_splitter",
    "beam_splitter_operator",
    "closed_form_mz",
    "closed_form_obstacle",
    "compose",
    "dyad",
    "element_to_operator",
    "fock_identity",
    "format_element",
    "format_input",
    "identity",
    "inner_product",
    "mirror",
    "mirror_operator",
    "monte_carlo",
    "mz_circuit",
    "obstacle",
    "obstacle_operator",
    "obstructed_circuit",
    "outcome_distribution",
    "parse_circuit",
    "phase_shifter",
    "phase_shifter_operator",
    "relative_output_phase",
    "run_circuit",
    "serialize_circuit",
    "spatial_identity",
    "success_threshold",
    "sweep",
    "tensor",
    "trace_states",
    "wrap_angle",
    "wrap_to_pi",
]
