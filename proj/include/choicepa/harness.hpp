#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <choicepa/model.hpp>
#include <choicepa/observables.hpp>

namespace choicepa {

enum class ExperimentKind { kGrow, kUrn, kXstar, kExact, kTable1, kHub };

const char* to_string(ExperimentKind kind);

/// Rejected experiment description (bad key, bad value, missing key, ...).
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * A fully validated experiment: model variant, run length, checkpoint
 * schedule, seed set, and output directory. For kind = kExact, n_steps is
 * the target tree index of the exact law.
 */
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::kGrow;
    ModelConfig model;  // per-run seeds come from `seeds`, not model.seed
    std::uint64_t n_steps = 0;
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = ".";
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct SpecEntry {
    int line = 0;
    std::string key;
    std::string value;
};

/// Splits line-oriented `key = value` text ('#' starts a comment). Throws
/// SpecError naming the offending line.
std::vector<SpecEntry> tokenize_spec(std::string_view text);

/**
 * Validates entries into an ExperimentSpec. Keys: kind, d, rule,
 * attachment, steps, checkpoints (comma list or "geometric:start,factor"),
 * seeds ("a..b" or comma list), out. Unknown and duplicate keys are errors.
 * Missing rule/attachment/checkpoints take the documented defaults
 * (max, preferential, geometric:10000,10); d defaults to 2 for table1 only.
 */
ExperimentSpec build_spec(std::span<const SpecEntry> entries);

ExperimentSpec parse_spec(std::string_view text);

/// One seed's results: final maximum-degree statistics plus the checkpoint
/// snapshots. For urn runs, max_degree carries the black count and
/// scaled_metric the black/steps fraction.
struct RunSummary {
    std::uint64_t seed = 0;
    std::uint32_t final_max_degree = 0;
    std::uint64_t final_max_count = 0;
    VertexId final_leader = 0;
    std::uint64_t change_count = 0;
    std::uint64_t last_change_step = 0;
    std::vector<CheckpointSnapshot> snapshots;
    double wall_seconds = 0.0;
};

/**
 * Executes every seed of a kGrow/kHub/kUrn spec. Runs may execute
 * concurrently; the returned order always matches the seed list. Each run
 * owns its state and random stream, so results do not depend on the thread
 * count.
 */
std::vector<RunSummary> run_experiment(const ExperimentSpec& spec);

/// trajectory.csv (seed,n,M,L,leader,change_count,scaled_metric) plus the
/// summary.csv aggregate (n,median_scaled,min_scaled,max_scaled). Doubles
/// carry 10 significant digits; LF line endings; byte-identical on rerun.
void emit_csv(const std::vector<RunSummary>& summaries, const ExperimentSpec& spec);

/// table1.csv: the 2x3 attachment-by-rule comparison of median final
/// maximum degree, one row per cell, with the predicted growth order.
void emit_table1(const ExperimentSpec& spec);

/// hub.csv (per seed: leader at each checkpoint, last change step, change
/// count) and hub_summary.csv (fraction of seeds with no leader change
/// after each checkpoint). Requires >= 2 checkpoints.
void emit_hub_report(const std::vector<RunSummary>& summaries, const ExperimentSpec& spec);

/// xstar.csv: d,x_star,residual,derivative,iterations.
void emit_xstar(const ExperimentSpec& spec);

/// exact_max_degree.csv and exact_multisets.csv for the law of P_{n_steps}.
void emit_exact(const ExperimentSpec& spec);

/// Runs a spec end to end and writes this kind's files into out_dir.
/// Returns the per-seed summaries for seed-driven kinds (empty otherwise).
std::vector<RunSummary> run_and_emit(const ExperimentSpec& spec);

/// Median by sorted midpoint; even-sized inputs average the two middles.
double median(std::vector<double> values);

std::string format_double(double value);  // %.10g

}  // namespace choicepa
