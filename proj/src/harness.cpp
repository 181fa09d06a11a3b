#include <choicepa/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <choicepa/exact.hpp>
#include <choicepa/theory.hpp>

namespace choicepa {

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kGrow: return "grow";
        case ExperimentKind::kUrn: return "urn";
        case ExperimentKind::kXstar: return "xstar";
        case ExperimentKind::kExact: return "exact";
        case ExperimentKind::kTable1: return "table1";
        case ExperimentKind::kHub: return "hub";
    }
    return "?";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, const std::string& message) {
    if (line > 0) throw SpecError("line " + std::to_string(line) + ": " + message);
    throw SpecError(message);
}

std::uint64_t parse_u64(std::string_view text, int line, const std::string& key) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        fail(line, key + ": expected an unsigned integer, got '" + std::string(text) + "'");
    return value;
}

std::vector<std::uint64_t> parse_u64_list(std::string_view text, int line, const std::string& key) {
    std::vector<std::uint64_t> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma - start));
        if (piece.empty()) fail(line, key + ": empty list element");
        values.push_back(parse_u64(piece, line, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text, int line) {
    const std::size_t dots = text.find("..");
    if (dots == std::string_view::npos) return parse_u64_list(text, line, "seeds");
    const std::uint64_t first = parse_u64(trim(text.substr(0, dots)), line, "seeds");
    const std::uint64_t last = parse_u64(trim(text.substr(dots + 2)), line, "seeds");
    if (last < first) fail(line, "seeds: range end precedes start");
    if (last - first >= 1u << 20) fail(line, "seeds: range too large");
    std::vector<std::uint64_t> values;
    values.reserve(last - first + 1);
    for (std::uint64_t s = first; s <= last; ++s) values.push_back(s);
    return values;
}

struct CheckpointRule {
    bool geometric = false;
    std::uint64_t start = 10000;
    std::uint64_t factor = 10;
    std::vector<std::uint64_t> explicit_list;
    int line = 0;

    std::vector<std::uint64_t> expand(std::uint64_t n_steps) const {
        if (!geometric) return explicit_list;
        std::vector<std::uint64_t> values;
        for (std::uint64_t c = start; c <= n_steps; c *= factor) values.push_back(c);
        return values;
    }
};

CheckpointRule parse_checkpoints(std::string_view text, int line) {
    CheckpointRule rule;
    rule.line = line;
    constexpr std::string_view kPrefix = "geometric:";
    if (text.substr(0, kPrefix.size()) == kPrefix) {
        rule.geometric = true;
        const auto args = text.substr(kPrefix.size());
        const auto parts = parse_u64_list(args, line, "checkpoints");
        if (parts.size() != 2) fail(line, "checkpoints: geometric takes start,factor");
        rule.start = parts[0];
        rule.factor = parts[1];
        if (rule.start < 1 || rule.factor < 2)
            fail(line, "checkpoints: geometric needs start >= 1 and factor >= 2");
        return rule;
    }
    rule.explicit_list = parse_u64_list(text, line, "checkpoints");
    return rule;
}

}  // namespace

std::vector<SpecEntry> tokenize_spec(std::string_view text) {
    std::vector<SpecEntry> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                fail(line_no, "expected key = value, got '" + std::string(line) + "'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty()) fail(line_no, "empty key");
            entries.push_back(SpecEntry{line_no, std::string(key), std::string(value)});
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return entries;
}

ExperimentSpec build_spec(std::span<const SpecEntry> entries) {
    std::map<std::string, const SpecEntry*> seen;
    for (const auto& entry : entries) {
        const auto [it, inserted] = seen.emplace(entry.key, &entry);
        if (!inserted) fail(entry.line, "duplicate key '" + entry.key + "'");
    }
    static const std::vector<std::string> known = {"kind",  "d",     "rule", "attachment",
                                                  "steps", "checkpoints", "seeds", "out"};
    for (const auto& entry : entries)
        if (std::find(known.begin(), known.end(), entry.key) == known.end())
            fail(entry.line, "unknown key '" + entry.key + "'");

    auto get = [&seen](const std::string& key) -> const SpecEntry* {
        const auto it = seen.find(key);
        return it == seen.end() ? nullptr : it->second;
    };

    ExperimentSpec spec;

    const auto* kind = get("kind");
    if (kind == nullptr) fail(0, "missing key 'kind'");
    if (kind->value == "grow") spec.kind = ExperimentKind::kGrow;
    else if (kind->value == "urn") spec.kind = ExperimentKind::kUrn;
    else if (kind->value == "xstar") spec.kind = ExperimentKind::kXstar;
    else if (kind->value == "exact") spec.kind = ExperimentKind::kExact;
    else if (kind->value == "table1") spec.kind = ExperimentKind::kTable1;
    else if (kind->value == "hub") spec.kind = ExperimentKind::kHub;
    else fail(kind->line, "kind: unknown value '" + kind->value + "'");

    if (const auto* d = get("d")) {
        const std::uint64_t value = parse_u64(d->value, d->line, "d");
        if (value < 1) fail(d->line, "d: must be >= 1");
        if (value > 1u << 16) fail(d->line, "d: implausibly large");
        spec.model.d = static_cast<std::uint32_t>(value);
    } else if (spec.kind == ExperimentKind::kTable1) {
        spec.model.d = 2;  // the two-choice comparison table
    } else {
        fail(0, "missing key 'd'");
    }

    if (const auto* rule = get("rule")) {
        if (rule->value == "max") spec.model.rule = ChoiceRule::kMax;
        else if (rule->value == "min") spec.model.rule = ChoiceRule::kMin;
        else if (rule->value == "none") spec.model.rule = ChoiceRule::kNone;
        else fail(rule->line, "rule: unknown value '" + rule->value + "'");
    }

    if (const auto* attachment = get("attachment")) {
        if (attachment->value == "preferential") spec.model.attachment = Attachment::kPreferential;
        else if (attachment->value == "uniform") spec.model.attachment = Attachment::kUniform;
        else fail(attachment->line, "attachment: unknown value '" + attachment->value + "'");
    }

    const bool needs_steps = spec.kind != ExperimentKind::kXstar;
    if (const auto* steps = get("steps")) {
        spec.n_steps = parse_u64(steps->value, steps->line, "steps");
        if (spec.n_steps < 1) fail(steps->line, "steps: must be >= 1");
    } else if (needs_steps) {
        fail(0, "missing key 'steps'");
    }

    if (spec.kind == ExperimentKind::kExact && spec.n_steps > kExactDistributionCap)
        fail(get("steps")->line, "steps: exact law is capped at " +
                                     std::to_string(kExactDistributionCap));

    const bool stochastic = spec.kind == ExperimentKind::kGrow ||
                            spec.kind == ExperimentKind::kUrn ||
                            spec.kind == ExperimentKind::kTable1 ||
                            spec.kind == ExperimentKind::kHub;
    if (const auto* seeds = get("seeds")) {
        spec.seeds = parse_seeds(seeds->value, seeds->line);
    } else if (stochastic) {
        fail(0, "missing key 'seeds'");
    }

    CheckpointRule checkpoint_rule;  // default geometric:10000,10
    checkpoint_rule.geometric = true;
    if (const auto* checkpoints = get("checkpoints"))
        checkpoint_rule = parse_checkpoints(checkpoints->value, checkpoints->line);

    const bool needs_checkpoints = spec.kind == ExperimentKind::kGrow ||
                                   spec.kind == ExperimentKind::kUrn ||
                                   spec.kind == ExperimentKind::kHub;
    if (needs_checkpoints) {
        spec.checkpoints = checkpoint_rule.expand(spec.n_steps);
        if (spec.checkpoints.empty())
            fail(checkpoint_rule.line,
                 "checkpoints: schedule is empty for steps=" + std::to_string(spec.n_steps) +
                     "; list checkpoints explicitly");
        for (std::size_t i = 0; i < spec.checkpoints.size(); ++i) {
            if (spec.checkpoints[i] < 1 || spec.checkpoints[i] > spec.n_steps)
                fail(checkpoint_rule.line, "checkpoints: values must lie in [1, steps]");
            if (i > 0 && spec.checkpoints[i] <= spec.checkpoints[i - 1])
                fail(checkpoint_rule.line, "checkpoints: must be strictly increasing");
        }
        if (spec.kind == ExperimentKind::kHub && spec.checkpoints.size() < 2)
            fail(checkpoint_rule.line, "checkpoints: hub reports need at least 2 checkpoints");
    }

    if (spec.kind == ExperimentKind::kXstar && spec.model.d <= 2)
        fail(get("d")->line, "d: the interior fixed point exists only for d >= 3");

    if (const auto* out = get("out")) spec.out_dir = out->value;
    return spec;
}

ExperimentSpec parse_spec(std::string_view text) {
    const auto entries = tokenize_spec(text);
    return build_spec(entries);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::string format_double(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

namespace {

RunSummary summarize_growth(const ExperimentSpec& spec, std::uint64_t seed) {
    ModelConfig config = spec.model;
    config.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    TrajectoryRecord record = run_growth(config, spec.n_steps, spec.checkpoints);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    RunSummary summary;
    summary.seed = seed;
    summary.final_max_degree = record.final_stats.max_degree;
    summary.final_max_count = record.final_stats.max_count;
    summary.final_leader = record.final_stats.leader;
    summary.change_count = record.final_stats.change_count;
    summary.last_change_step = record.final_stats.last_change_step;
    summary.snapshots = std::move(record.snapshots);
    summary.wall_seconds = elapsed.count();
    return summary;
}

RunSummary summarize_urn(const ExperimentSpec& spec, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const auto trace = run_urn(UrnState{}, spec.model.d, spec.n_steps, seed, spec.checkpoints);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    RunSummary summary;
    summary.seed = seed;
    for (const auto& point : trace) {
        CheckpointSnapshot snapshot;
        snapshot.n = point.step;
        snapshot.max_degree = static_cast<std::uint32_t>(point.black);
        snapshot.max_count = 1;  // the urn is the L = 1 approximation
        snapshot.scaled_metric = point.black_fraction;
        summary.snapshots.push_back(snapshot);
    }
    if (!summary.snapshots.empty()) {
        summary.final_max_degree = summary.snapshots.back().max_degree;
        summary.final_max_count = 1;
    }
    summary.wall_seconds = elapsed.count();
    return summary;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out.good()) throw std::runtime_error(path.string() + ": write failed");
}

std::filesystem::path prepare_out_dir(const ExperimentSpec& spec) {
    std::filesystem::path dir = spec.out_dir.empty() ? "." : spec.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
    return dir;
}

}  // namespace

std::vector<RunSummary> run_experiment(const ExperimentSpec& spec) {
    spec.model.validate();
    const bool urn = spec.kind == ExperimentKind::kUrn;
    if (!urn && spec.kind != ExperimentKind::kGrow && spec.kind != ExperimentKind::kHub)
        throw SpecError(std::string("run_experiment: kind '") + to_string(spec.kind) +
                        "' is not seed-driven");
    if (spec.seeds.empty()) throw SpecError("run_experiment: empty seed list");

    std::vector<RunSummary> results(spec.seeds.size());
    unsigned thread_count = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    thread_count = std::max(1u, std::min<unsigned>(thread_count, spec.seeds.size()));

    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            const std::size_t index = cursor.fetch_add(1);
            if (index >= spec.seeds.size()) return;
            try {
                results[index] = urn ? summarize_urn(spec, spec.seeds[index])
                                     : summarize_growth(spec, spec.seeds[index]);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

void emit_csv(const std::vector<RunSummary>& summaries, const ExperimentSpec& spec) {
    if (spec.checkpoints.empty())
        throw SpecError("emit_csv: summary output requires at least one checkpoint");
    const auto dir = prepare_out_dir(spec);

    std::string trajectory = "seed,n,M,L,leader,change_count,scaled_metric\n";
    for (const auto& summary : summaries) {
        for (const auto& snapshot : summary.snapshots) {
            trajectory += std::to_string(summary.seed);
            trajectory += ',';
            trajectory += std::to_string(snapshot.n);
            trajectory += ',';
            trajectory += std::to_string(snapshot.max_degree);
            trajectory += ',';
            trajectory += std::to_string(snapshot.max_count);
            trajectory += ',';
            trajectory += std::to_string(snapshot.leader);
            trajectory += ',';
            trajectory += std::to_string(snapshot.change_count);
            trajectory += ',';
            trajectory += format_double(snapshot.scaled_metric);
            trajectory += '\n';
        }
    }
    write_file(dir / "trajectory.csv", trajectory);

    std::string aggregate = "n,median_scaled,min_scaled,max_scaled\n";
    for (std::size_t c = 0; c < spec.checkpoints.size(); ++c) {
        std::vector<double> metrics;
        metrics.reserve(summaries.size());
        for (const auto& summary : summaries) metrics.push_back(summary.snapshots[c].scaled_metric);
        const auto [lo, hi] = std::minmax_element(metrics.begin(), metrics.end());
        aggregate += std::to_string(spec.checkpoints[c]);
        aggregate += ',';
        aggregate += format_double(median(metrics));
        aggregate += ',';
        aggregate += format_double(*lo);
        aggregate += ',';
        aggregate += format_double(*hi);
        aggregate += '\n';
    }
    write_file(dir / "summary.csv", aggregate);
}

void emit_table1(const ExperimentSpec& spec) {
    struct Cell {
        Attachment attachment;
        ChoiceRule rule;
    };
    const Cell cells[6] = {
        {Attachment::kPreferential, ChoiceRule::kMax},
        {Attachment::kPreferential, ChoiceRule::kNone},
        {Attachment::kPreferential, ChoiceRule::kMin},
        {Attachment::kUniform, ChoiceRule::kMax},
        {Attachment::kUniform, ChoiceRule::kNone},
        {Attachment::kUniform, ChoiceRule::kMin},
    };
    const auto n = static_cast<double>(spec.n_steps);
    const std::string predicted[6] = {
        "4n/ln(n) = " + format_double(4.0 * n / std::log(n)),
        "Theta(sqrt(n)); sqrt(n) = " + format_double(std::sqrt(n)),
        "lnln(n)/ln(2) + Theta(1); base = " + format_double(std::log(std::log(n)) / std::log(2.0)),
        "O(ln n)",
        "O(ln n)",
        "O(lnln n)",
    };

    std::string table = "attachment,rule,median_final_M,predicted\n";
    for (int i = 0; i < 6; ++i) {
        ExperimentSpec cell_spec = spec;
        cell_spec.kind = ExperimentKind::kGrow;
        cell_spec.model.attachment = cells[i].attachment;
        cell_spec.model.rule = cells[i].rule;
        cell_spec.checkpoints.clear();  // only the final state matters here
        const auto summaries = run_experiment(cell_spec);
        std::vector<double> finals;
        finals.reserve(summaries.size());
        for (const auto& summary : summaries)
            finals.push_back(static_cast<double>(summary.final_max_degree));
        table += to_string(cells[i].attachment);
        table += ',';
        table += to_string(cells[i].rule);
        table += ',';
        table += format_double(median(finals));
        table += ',';
        table += '"' + predicted[i] + '"';
        table += '\n';
    }
    write_file(prepare_out_dir(spec) / "table1.csv", table);
}

void emit_hub_report(const std::vector<RunSummary>& summaries, const ExperimentSpec& spec) {
    if (spec.checkpoints.size() < 2)
        throw SpecError("emit_hub_report: needs at least 2 checkpoints");
    const auto dir = prepare_out_dir(spec);

    std::string hub = "seed";
    for (const auto checkpoint : spec.checkpoints)
        hub += ",leader_at_" + std::to_string(checkpoint);
    hub += ",last_change_step,change_count\n";
    for (const auto& summary : summaries) {
        hub += std::to_string(summary.seed);
        for (const auto& snapshot : summary.snapshots) hub += ',' + std::to_string(snapshot.leader);
        hub += ',' + std::to_string(summary.last_change_step);
        hub += ',' + std::to_string(summary.change_count);
        hub += '\n';
    }
    write_file(dir / "hub.csv", hub);

    std::string stability = "n,fraction_stable\n";
    for (const auto checkpoint : spec.checkpoints) {
        std::size_t stable = 0;
        for (const auto& summary : summaries)
            if (summary.last_change_step <= checkpoint) ++stable;
        stability += std::to_string(checkpoint) + ',' +
                     format_double(static_cast<double>(stable) /
                                   static_cast<double>(summaries.size())) +
                     '\n';
    }
    write_file(dir / "hub_summary.csv", stability);
}

void emit_xstar(const ExperimentSpec& spec) {
    const FixedPointResult result = solve_x_star(spec.model.d);
    std::string text = "d,x_star,residual,derivative,iterations\n";
    text += std::to_string(result.d) + ',' + format_double(result.x_star) + ',' +
            format_double(result.residual) + ',' + format_double(result.derivative) + ',' +
            std::to_string(result.iterations) + '\n';
    write_file(prepare_out_dir(spec) / "xstar.csv", text);
}

void emit_exact(const ExperimentSpec& spec) {
    const auto law = exact_distribution(static_cast<std::uint32_t>(spec.n_steps), spec.model);
    const auto dir = prepare_out_dir(spec);

    std::string max_law = "M,probability\n";
    for (const auto& [max_degree, probability] : law.max_degree_probabilities)
        max_law += std::to_string(max_degree) + ',' + format_double(probability) + '\n';
    write_file(dir / "exact_max_degree.csv", max_law);

    std::string multisets = "degrees,probability\n";
    for (const auto& [multiset, probability] : law.multiset_probabilities) {
        std::string joined;
        for (const auto degree : multiset) {
            if (!joined.empty()) joined += ' ';
            joined += std::to_string(degree);
        }
        multisets += joined + ',' + format_double(probability) + '\n';
    }
    write_file(dir / "exact_multisets.csv", multisets);
}

std::vector<RunSummary> run_and_emit(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::kGrow: {
            auto summaries = run_experiment(spec);
            emit_csv(summaries, spec);
            return summaries;
        }
        case ExperimentKind::kUrn: {
            auto summaries = run_experiment(spec);
            emit_csv(summaries, spec);
            return summaries;
        }
        case ExperimentKind::kHub: {
            auto summaries = run_experiment(spec);
            emit_csv(summaries, spec);
            emit_hub_report(summaries, spec);
            return summaries;
        }
        case ExperimentKind::kTable1:
            emit_table1(spec);
            return {};
        case ExperimentKind::kXstar:
            emit_xstar(spec);
            return {};
        case ExperimentKind::kExact:
            emit_exact(spec);
            return {};
    }
    return {};
}

}  // namespace choicepa
