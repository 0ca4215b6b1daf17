"""Certified measure-theoretic network flows on finite atom spaces."""

from .certificates import (
    CutCertificate,
    DualPair,
    PotentialCertificate,
    RectangleCertificate,
)
from .errors import (
    BoundOrderViolation,
    Decomposable,
    DensityOutOfRange,
    EmptyTarget,
    ExtractFailure,
    MassMismatch,
    MeasureFlowError,
    NegativeCapacity,
    NegativeEpsilon,
    NegativeMeasure,
    NonIntegerCost,
    NotAcyclic,
    NotErgodicCirculation,
    NotProbability,
    NotPseudometric,
    NotSymmetric,
    ParseError,
    PartitionInvalid,
    SameEndpoints,
    TooLarge,
    VerificationFailure,
)
from .flows import (
    ergodic_circulation,
    feasible_circulation,
    integralize_potential,
    iter_ordered_partitions,
    max_flow,
    min_cost_flow,
    partition_condition,
    strassen_coupling,
    supply_demand_flow,
    transship_feasible,
    transship_min_cost,
    valued_circulation,
)
from .generators import gen_cyclic, gen_graphon, graphon_from_spec
from .instance import InstanceFile, ResultReport, emit_instance, emit_report, parse_instance
from .markov import (
    MarkovSpace,
    from_circulation,
    hitting_stats,
    is_indecomposable,
    is_reversible,
    reverse_chain,
    simulate_walk,
)
from .measures import (
    AtomSpace,
    CutChain,
    Potential,
    SignedMeasure1,
    SignedMeasure2,
    circulation_space_dim,
    eval_potential,
    is_circulation,
    jordan,
    marginals,
    meet,
    positive_part,
    potential_to_cuts,
    product,
    setminus,
    transpose,
    tv_norm,
)
from .multiflow import (
    AxiomReport,
    LoadTensor,
    MultiFlow,
    Pseudometric,
    build_load_tensor,
    extract_flows,
    is_pseudometric,
    metrical_axiom_check,
    search_noncut_instance,
    solve_multicommodity,
    volume_condition,
    worst_pseudometric,
)
from .oracle import OracleVerdict, lp_oracle
from .paths import (
    WalkMeasure,
    decompose_paths,
    is_acyclic,
    shortcut_check,
    split_acyclic_circulation,
    walk_operators,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
