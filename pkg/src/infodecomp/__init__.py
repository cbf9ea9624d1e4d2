"""Exact information decomposition for small discrete multivariate systems.

Distributions carry exact rational probabilities; decomposition lattices are
enumerated antichains of source subsets; redundancy is the common-partition
(Gács-Körner style) value; the ten-atom entropy decomposition of three
variables has a closed form given any redundancy; and a constraint-propagation
engine mechanizes the axiom-driven deductions that expose whole-versus-parts
violations.
"""

from .dist import (
    DEFAULT_SUPPORT_CAP,
    DEFAULT_TOLERANCE,
    CircuitSpec,
    JointDistribution,
    VariableId,
    from_circuit,
)
from .engine import (
    AtomRef,
    Constraint,
    DeductionState,
    WespReport,
    build_constraints,
    propagate,
    replay_certificate,
    wesp_report,
)
from .errors import InfodecompError
from .lattice import (
    Antichain,
    AntichainLattice,
    enumerate_full,
    enumerate_half,
    format_antichain,
    leq,
    parse_antichain,
)
from .redundancy import CommonPartition, common_partition, red2, red3
from .sid import (
    ATOM_ORDER,
    SUM_RULE_MATRIX,
    EntropyVector,
    SIAtomTable,
    check_sum_rules,
    decompose,
    si_atoms,
    synergy_sum_check,
    verify_linear_system,
)
from .systems import (
    AtomAssignment,
    BuiltSystem,
    build_system1,
    build_system2,
    get_builtin,
    run_all_checks,
    scan_universal_subsets,
    verify_contradiction_system2,
    verify_matching_tables,
    verify_no_universal_subset,
    verify_synergy_excess,
)

__version__ = "0.1.0"

__all__ = [
    "ATOM_ORDER",
    "Antichain",
    "AntichainLattice",
    "AtomAssignment",
    "AtomRef",
    "BuiltSystem",
    "CircuitSpec",
    "CommonPartition",
    "Constraint",
    "DEFAULT_SUPPORT_CAP",
    "DEFAULT_TOLERANCE",
    "DeductionState",
    "EntropyVector",
    "InfodecompError",
    "JointDistribution",
    "SIAtomTable",
    "SUM_RULE_MATRIX",
    "VariableId",
    "WespReport",
    "build_constraints",
    "build_system1",
    "build_system2",
    "check_sum_rules",
    "common_partition",
    "decompose",
    "enumerate_full",
    "enumerate_half",
    "format_antichain",
    "from_circuit",
    "get_builtin",
    "leq",
    "parse_antichain",
    "propagate",
    "red2",
    "red3",
    "replay_certificate",
    "run_all_checks",
    "scan_universal_subsets",
    "si_atoms",
    "synergy_sum_check",
    "verify_contradiction_system2",
    "verify_linear_system",
    "verify_matching_tables",
    "verify_no_universal_subset",
    "verify_synergy_excess",
    "wesp_report",
]
