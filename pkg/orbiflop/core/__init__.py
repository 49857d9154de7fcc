"""Core modules: local models, flops, resolutions and geometry."""

from .charts import assemble_chart_rings
from .flop import (
    QuantumCorrectedValue,
    associativity_report,
    check_pairing_compatibility,
    local_flop_check,
    phi_map,
    ruan_structure_constants,
    ruan_three_point,
    verify_ruan_isomorphism,
)
from .local_model import CRClass, LocalModel, TwistedSector, validate_model
from .resolution import (
    ResolutionChoice,
    SignPattern,
    feasible_patterns,
    pattern_feasible,
    sampling_oracle,
    symplectic_resolutions,
)

__all__ = [
    "assemble_chart_rings",
    "QuantumCorrectedValue",
    "associativity_report",
    "check_pairing_compatibility",
    "local_flop_check",
    "phi_map",
    "ruan_structure_constants",
    "ruan_three_point",
    "verify_ruan_isomorphism",
    "CRClass",
    "LocalModel",
    "TwistedSector",
    "validate_model",
    "ResolutionChoice",
    "SignPattern",
    "feasible_patterns",
    "pattern_feasible",
    "sampling_oracle",
    "symplectic_resolutions",
]
