"""Choice-augmented preferential attachment trees.

Simulator for max/min/no-choice preferential (or uniform) attachment tree
growth, with the matching fixed-point theory, two-color urn, exact small-n
laws and maximum-degree observables. The heavy lifting lives in the C++
extension module `_core`.
"""

from ._core import (
    Attachment,
    CheckpointSnapshot,
    ChoiceRule,
    DiagnosticScales,
    DriftRatios,
    ExactDistribution,
    ExperimentKind,
    ExperimentSpec,
    FixedPointResult,
    MaxStats,
    ModelConfig,
    NoInteriorRoot,
    Rng,
    RunSummary,
    SpecError,
    StepOutcome,
    TieBreak,
    TrajectoryRecord,
    TreeState,
    UrnState,
    UrnTracePoint,
    __version__,
    attachment_probability,
    choice_intensity,
    drift_check_d2,
    drift_step_probability,
    effective_draw_count,
    exact_distribution,
    export_edge_list,
    fixed_point_map,
    grow_step,
    init_tree,
    parse_spec,
    predicted_max,
    run_and_emit,
    run_experiment,
    run_growth,
    run_urn,
    sample_candidate,
    scale_functions,
    scaled_metric,
    select_attachment,
    solve_x_star,
    urn_increment_probability,
    urn_step,
)

__all__ = [
    "Attachment",
    "CheckpointSnapshot",
    "ChoiceRule",
    "DiagnosticScales",
    "DriftRatios",
    "ExactDistribution",
    "ExperimentKind",
    "ExperimentSpec",
    "FixedPointResult",
    "MaxStats",
    "ModelConfig",
    "NoInteriorRoot",
    "Rng",
    "RunSummary",
    "SpecError",
    "StepOutcome",
    "TieBreak",
    "TrajectoryRecord",
    "TreeState",
    "UrnState",
    "UrnTracePoint",
    "__version__",
    "attachment_probability",
    "choice_intensity",
    "drift_check_d2",
    "drift_step_probability",
    "effective_draw_count",
    "exact_distribution",
    "export_edge_list",
    "fixed_point_map",
    "grow_step",
    "init_tree",
    "parse_spec",
    "predicted_max",
    "run_and_emit",
    "run_experiment",
    "run_growth",
    "run_urn",
    "sample_candidate",
    "scale_functions",
    "scaled_metric",
    "select_attachment",
    "solve_x_star",
    "urn_increment_probability",
    "urn_step",
]
