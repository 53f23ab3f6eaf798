"""Entropy-based characterisation of discrete distributions and network
coding outer bounds.

The package has two halves. The characterisation half enumerates the binary
partition variables of a finite support, serves their joint entropies, and
uses them to recognise indicator variables, reconstruct probability vectors
from entropies alone, and decide equivalence of distributions up to outcome
relabeling (coordinate-wise in the vector case). The bounding half models
networks with correlated sources, assembles the Shannon-cone LP whose
feasibility defines a computable outer bound on achievable link capacities,
and answers membership and ray-threshold queries, optionally sharpened by
auxiliary variables built from source partitions.
"""

from .distributions import (
    DiscreteDistribution,
    InvalidDistributionError,
    PROB_TOL,
    RandomVectorDistribution,
    binary_entropy,
    conditional_subset_entropy,
    distribution_from_json,
    entropy,
    invert_binary_entropy,
    load_distribution,
    marginal,
    subset_entropy,
)
from .partitions import (
    BinaryPartition,
    DegenerateSupportError,
    EntropyOracle,
    PartitionFamily,
    SupportTooLargeError,
    canonical_mask,
    enumerate_partitions,
    format_partition,
    indicator_partitions,
    joint_entropy,
    masks_joint_entropy,
    oracle_from_distribution,
    partition_probability,
)
from .characterise import (
    AmbiguousReconstructionError,
    AppendixReport,
    ENTROPY_TOL,
    MatchWitness,
    NonEntropicOracleError,
    PropertyReport,
    Relabeling,
    SearchBoundExceededError,
    check_appendix_b_props,
    check_basis,
    check_completeness,
    check_distinctness,
    check_indicator_minimality,
    factorize_relabeling,
    identify_indicators,
    reconstruct_scalar,
    scalar_equivalent,
    vector_equivalent,
    verify_partition_match,
)
from .entropy_space import (
    EntropySpacePoint,
    FeasibilityResult,
    GroundSet,
    LinearConstraint,
    LPNumericalError,
    LP_TOL,
    OptimizeResult,
    constraint_value,
    dump_constraints,
    elemental_inequalities,
    entropic_point,
    feasibility,
    maximize,
    parse_dump,
)
from .netbound import (
    AuxVariable,
    BoundProblem,
    Edge,
    MembershipVerdict,
    NetworkSpec,
    NetworkStructureError,
    PartitionAuxPolicy,
    ScaleResult,
    SourceSpec,
    aux_from_json,
    build_constraints,
    corollary_aux,
    example_network,
    load_aux,
    load_network,
    membership,
    network_from_json,
    push_aux,
    scale_query,
)

__version__ = "0.1.0"
