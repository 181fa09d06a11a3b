#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <choicepa/model.hpp>

namespace choicepa {

/**
 * Running maximum-degree statistics, maintained in O(1) per step.
 *
 * leader is the smallest vertex id among the vertices of maximal degree;
 * change_count counts identity changes of that function. Once a single
 * persistent hub dominates, leader stops changing.
 */
struct MaxStats {
    std::uint64_t n = 1;                // index of the current tree P_n
    std::uint32_t max_degree = 1;       // M_n
    std::uint64_t max_count = 2;        // L_n = #vertices of degree M_n
    VertexId leader = 1;
    std::uint64_t last_change_step = 1;
    std::uint64_t change_count = 0;

    static MaxStats initial() { return MaxStats{}; }  // matches TreeState::initial()

    /**
     * Folds one growth step in. Degrees never decrease, so the max set can
     * only be replaced by the incremented vertex (when it was maximal) or
     * gain it (when it was one below); everything else leaves M, L, leader
     * untouched. histogram is the post-step degree histogram, used to keep
     * L verifiable against a recount.
     */
    void update(const StepOutcome& outcome, const std::vector<std::uint64_t>& histogram);
};

struct CheckpointSnapshot {
    std::uint64_t n = 0;
    std::uint32_t max_degree = 0;
    std::uint64_t max_count = 0;
    VertexId leader = 0;
    std::uint64_t change_count = 0;
    std::uint64_t last_change_step = 0;
    double scaled_metric = 0.0;
};

struct TrajectoryRecord {
    ModelConfig config;
    std::vector<CheckpointSnapshot> snapshots;  // strictly increasing n
    MaxStats final_stats;
    std::uint64_t final_edges = 0;
};

using StepObserver =
    std::function<void(const TreeState&, const StepOutcome&, const MaxStats&)>;

/**
 * Grows a tree from P_1 to P_{n_steps} (n_steps - 1 steps), invoking the
 * observers after every step and snapshotting MaxStats at each checkpoint.
 * Checkpoints must be strictly increasing within [1, n_steps]. Identical
 * (config, n_steps, checkpoints) with the same seed reproduce the same
 * trajectory bit for bit. Pass final_state to keep the tree (for export).
 */
TrajectoryRecord run_growth(const ModelConfig& config, std::uint64_t n_steps,
                            std::span<const std::uint64_t> checkpoints,
                            std::span<const StepObserver> observers = {},
                            TreeState* final_state = nullptr);

/// Draw count that sets the scaling of the summary metric: a kNone run is
/// the single-draw baseline whatever its d.
std::uint32_t effective_draw_count(const ModelConfig& config);

/// M*ln(n)/n for d = 2, M/n for d >= 3, M/sqrt(n) for the d = 1 baseline.
double scaled_metric(std::uint64_t n, std::uint32_t max_degree, std::uint32_t d);

/**
 * Scale-function diagnostics Q = exp(c*n/M)/n and U = n*exp(-c*n/M).
 * Q*U = 1 identically.
 */
struct DiagnosticScales {
    double c = 0.0;
    double q = 0.0;
    double u = 0.0;
};

DiagnosticScales scale_functions(std::uint64_t n, std::uint32_t max_degree, double c);

/// The d=2, L=1 one-step increment probability (M/n)(1 - M/4n).
double drift_step_probability(std::uint64_t n, std::uint64_t max_degree);

/**
 * Exact one-step conditional expectation ratios of the scale functions in
 * the d=2, L=1 regime, minus 1. Negative q_drift for c < 4 (resp. negative
 * u_drift for c > 4) is the computable shadow of the supermartingale
 * property; it holds only deep enough into the M >> n^2/3 regime for the
 * convexity correction ~c^2 n/(2 M^3) to fall below (|1 - c/4|)/n.
 */
struct DriftRatios {
    double q_drift = 0.0;  // E[Q_{n+1}]/Q_n - 1
    double u_drift = 0.0;  // E[U_{n+1}]/U_n - 1
};

DriftRatios drift_check_d2(std::uint64_t n, std::uint64_t max_degree, double c);

}  // namespace choicepa
