"""Collaborative kernel regression.

Kernels and representer-form expansions, agent/example ensembles, the
successive-projection collaborative trainer, exact oracles for the
centralized and relaxed estimators, and the ensemble connectivity analyzer.
"""

from dkr._core import (
    AuxiliaryGraph,
    CycleRecord,
    EdgeWitness,
    Ensemble,
    GramMatrix,
    Kernel,
    KernelExpansion,
    KernelFamily,
    LocalUpdateResult,
    MessageBoard,
    ProductPoint,
    ProjectionRecord,
    RelaxedSolution,
    Schedule,
    SyntheticTarget,
    TrainConfig,
    TrainingSet,
    TrainState,
    VerifyReport,
    apply_update,
    conflict_coloring,
    eval_expansion,
    eval_kernel,
    format_edge_list,
    generate_data,
    gram,
    gram_all,
    init_board,
    is_connected,
    local_update,
    make_centralized,
    make_geometric,
    make_public_private,
    numerical_rank,
    product_distance_sq,
    relaxed_objective,
    rkhs_diff_norm_sq,
    rkhs_norm_sq,
    solve_centralized,
    solve_relaxed,
    spans_equal,
    train,
    verify_against_trainer,
)

__all__ = [name for name in dir() if not name.startswith("_")]
