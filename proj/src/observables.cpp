#include <choicepa/observables.hpp>

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace choicepa {

void MaxStats::update(const StepOutcome& outcome, const std::vector<std::uint64_t>& histogram) {
    n = outcome.step;
    const std::uint32_t degree_before = outcome.chosen_degree_before;
    if (degree_before == max_degree) {
        // A maximal vertex grew: it is now the unique maximum.
        ++max_degree;
        max_count = 1;
        if (outcome.chosen != leader) {
            leader = outcome.chosen;
            last_change_step = n;
            ++change_count;
        }
    } else if (degree_before + 1 == max_degree) {
        ++max_count;
        if (outcome.chosen < leader) {
            leader = outcome.chosen;
            last_change_step = n;
            ++change_count;
        }
    }
    assert(max_degree < histogram.size() && histogram[max_degree] == max_count);
    (void)histogram;
}

std::uint32_t effective_draw_count(const ModelConfig& config) {
    return config.rule == ChoiceRule::kNone ? 1 : config.d;
}

double scaled_metric(std::uint64_t n, std::uint32_t max_degree, std::uint32_t d) {
    if (d < 1) throw std::invalid_argument("scaled_metric: d must be >= 1");
    if (n < 1) throw std::invalid_argument("scaled_metric: n must be >= 1");
    const auto nd = static_cast<double>(n);
    if (d == 2) return max_degree * std::log(nd) / nd;
    if (d >= 3) return max_degree / nd;
    return max_degree / std::sqrt(nd);
}

DiagnosticScales scale_functions(std::uint64_t n, std::uint32_t max_degree, double c) {
    if (n < 1 || max_degree < 1) throw std::invalid_argument("scale_functions: n, M must be >= 1");
    if (c <= 0.0) throw std::invalid_argument("scale_functions: c must be positive");
    const double ratio = c * static_cast<double>(n) / static_cast<double>(max_degree);
    const auto nd = static_cast<double>(n);
    return DiagnosticScales{c, std::exp(ratio) / nd, nd * std::exp(-ratio)};
}

double drift_step_probability(std::uint64_t n, std::uint64_t max_degree) {
    const auto nd = static_cast<double>(n);
    const auto md = static_cast<double>(max_degree);
    return (md / nd) * (1.0 - md / (4.0 * nd));
}

DriftRatios drift_check_d2(std::uint64_t n, std::uint64_t max_degree, double c) {
    if (n < 2) throw std::invalid_argument("drift_check_d2: n must be >= 2");
    if (max_degree < 1 || max_degree > 2 * n)
        throw std::invalid_argument("drift_check_d2: M must satisfy 1 <= M <= 2n");
    const double p = drift_step_probability(n, max_degree);
    const auto nd = static_cast<double>(n);
    const auto md = static_cast<double>(max_degree);

    // Two branches: with probability p both n and M advance, else only n.
    const double jump_q = c * (nd + 1.0) / (md + 1.0) - c * nd / md;
    const double q_ratio =
        nd / (nd + 1.0) * ((1.0 - p) * std::exp(c / md) + p * std::exp(jump_q));
    const double u_ratio =
        (nd + 1.0) / nd * ((1.0 - p) * std::exp(-c / md) + p * std::exp(-jump_q));
    return DriftRatios{q_ratio - 1.0, u_ratio - 1.0};
}

TrajectoryRecord run_growth(const ModelConfig& config, std::uint64_t n_steps,
                            std::span<const std::uint64_t> checkpoints,
                            std::span<const StepObserver> observers, TreeState* final_state) {
    config.validate();
    if (n_steps < 1) throw std::invalid_argument("run_growth: n_steps must be >= 1");
    if (n_steps > (std::uint64_t{1} << 31))
        throw std::invalid_argument("run_growth: n_steps exceeds the 2^31 vertex-id budget");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > n_steps)
            throw std::invalid_argument("run_growth: checkpoint outside [1, n_steps]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("run_growth: checkpoints must be strictly increasing");
    }

    TreeState state = TreeState::initial();
    state.reserve(n_steps);
    MaxStats stats = MaxStats::initial();
    Rng rng(config.seed);
    const std::uint32_t metric_d = effective_draw_count(config);

    TrajectoryRecord record;
    record.config = config;
    record.snapshots.reserve(checkpoints.size());

    auto snapshot = [&]() {
        record.snapshots.push_back(CheckpointSnapshot{
            stats.n, stats.max_degree, stats.max_count, stats.leader, stats.change_count,
            stats.last_change_step, scaled_metric(stats.n, stats.max_degree, metric_d)});
    };

    std::size_t next_checkpoint = 0;
    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == 1) {
        snapshot();
        ++next_checkpoint;
    }

    StepOutcome outcome;
    for (std::uint64_t n = 2; n <= n_steps; ++n) {
        grow_step(state, config, rng, outcome);
        stats.update(outcome, state.degree_histogram());
        for (const auto& observer : observers) observer(state, outcome, stats);
        if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == n) {
            snapshot();
            ++next_checkpoint;
        }
    }

    record.final_stats = stats;
    record.final_edges = state.edge_count();
    if (final_state != nullptr) *final_state = std::move(state);
    return record;
}

}  // namespace choicepa
