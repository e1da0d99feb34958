"""Finite ultrametric spaces: balls, representing trees, isometry, transforms."""

from .core import (
    FiniteMetricSpace,
    FiniteUltrametricSpace,
    MultipartitePartition,
    NotUltrametricError,
    SpaceValidationError,
    diam,
    diametrical_partition,
    distance_set,
    is_ultrametric_multipartite,
    is_ultrametric_triangle,
    make_space,
    parse_rational,
    format_rational,
    space_from_json,
    space_from_sequence,
    space_to_json,
    threshold_partition,
)
from .balls import (
    Ball,
    Ballean,
    BallPoset,
    HausdorffBallSpace,
    ball_poset,
    ballean,
    ballean_to_json,
    closed_ball,
    hausdorff_ball_space,
    hausdorff_distance,
    hausdorff_distance_direct,
    smallest_enclosing_ball,
)
from .repr_tree import (
    InvariantReport,
    RootedLabeledTree,
    TreeOrder,
    build_representing_tree,
    edge_characterization_check,
    tree_from_json,
    tree_order,
    tree_to_dot,
    tree_to_json,
    verify_tree_invariants,
)
from .tree_metric import (
    MaxChain,
    MaxChainSpace,
    PosetCheckReport,
    PseudoUltrametricSpace,
    Representability,
    check_ballean_poset,
    check_representable,
    is_monotone_labeling,
    maximal_chains,
    path_max_metric,
    poset_from_json,
    reconstruct_space,
    sphere_plus_center_condition,
)
from .morphisms import (
    CanonicalCode,
    PiecewiseLinearFn,
    PreservingFunctionError,
    ScalingFunction,
    apply_preserving,
    bound_transform,
    brute_force_isometry,
    canonical_code,
    extend_scaling_function,
    quantize_binary,
    quantize_ladder,
    rank_transform,
    spaces_isometric,
    threshold_function,
    unbound_transform,
    weak_similarity_check,
    weakly_similar,
)
from .padic import (
    PAdicValuation,
    bethe_ball_tree,
    is_prime,
    p_valuation,
    padic_ball_tree_vs_sample,
    padic_metric,
    padic_space,
    residue_partition_check,
    sphere_tree,
)

__all__ = [name for name in dir() if not name.startswith("_")]
