#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <choicepa/harness.hpp>

using namespace choicepa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("choicepa_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        lines.push_back(text.substr(pos, eol - pos));
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return lines;
}

}  // namespace

TEST_CASE("parse a full grow spec") {
    const auto spec = parse_spec("kind=grow\nd=3\nsteps=1000000\nseeds=1..20\n");
    CHECK(spec.kind == ExperimentKind::kGrow);
    CHECK(spec.model.d == 3);
    CHECK(spec.model.rule == ChoiceRule::kMax);                  // default
    CHECK(spec.model.attachment == Attachment::kPreferential);   // default
    CHECK(spec.n_steps == 1000000);
    CHECK(spec.seeds.size() == 20);
    CHECK(spec.seeds.front() == 1);
    CHECK(spec.seeds.back() == 20);
    // default checkpoints: geometric:10000,10 clipped to steps
    CHECK(spec.checkpoints == std::vector<std::uint64_t>{10000, 100000, 1000000});
    CHECK(spec.out_dir == ".");
}

TEST_CASE("spec comments, spacing and explicit lists") {
    const auto spec = parse_spec(
        "# comparison run\n"
        "kind = grow\n"
        "d = 2          # two draws\n"
        "rule = min\n"
        "attachment = uniform\n"
        "steps = 5000\n"
        "checkpoints = 100,5000\n"
        "seeds = 7,11,13\n"
        "out = /tmp/somewhere\n");
    CHECK(spec.model.rule == ChoiceRule::kMin);
    CHECK(spec.model.attachment == Attachment::kUniform);
    CHECK(spec.checkpoints == std::vector<std::uint64_t>{100, 5000});
    CHECK(spec.seeds == std::vector<std::uint64_t>{7, 11, 13});
    CHECK(spec.out_dir == "/tmp/somewhere");
}

TEST_CASE("spec errors carry context") {
    auto message_of = [](const std::string& text) {
        try {
            parse_spec(text);
        } catch (const SpecError& error) {
            return std::string(error.what());
        }
        return std::string("no error");
    };
    CHECK(message_of("kind=grow\nd=0\nsteps=10\nseeds=1").find("d") != std::string::npos);
    CHECK(message_of("kind=grow\nbogus\n").find("line 2") != std::string::npos);
    CHECK(message_of("kind=grow\nwhat=1\n").find("unknown key") != std::string::npos);
    CHECK(message_of("kind=grow\nd=2\nd=3\n").find("duplicate") != std::string::npos);
    CHECK(message_of("d=2\nsteps=10\nseeds=1\ncheckpoints=5").find("kind") != std::string::npos);
    CHECK(message_of("kind=grow\nd=2\nseeds=1").find("steps") != std::string::npos);
    CHECK(message_of("kind=grow\nd=2\nsteps=10\ncheckpoints=5").find("seeds") !=
          std::string::npos);
    CHECK(message_of("kind=grow\nd=2\nsteps=10\nseeds=1").find("checkpoints") !=
          std::string::npos);  // default schedule empty below 10^4
    CHECK(message_of("kind=xstar\nd=2").find("d") != std::string::npos);
    CHECK(message_of("kind=exact\nd=2\nsteps=40").find("cap") != std::string::npos);
    CHECK(message_of("kind=hub\nd=3\nsteps=100\nseeds=1..5\ncheckpoints=100") !=
          std::string("no error"));
}

TEST_CASE("run_experiment is deterministic and ordered") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kGrow;
    spec.model = ModelConfig{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    spec.n_steps = 400;
    spec.checkpoints = {100, 400};
    spec.seeds = {5, 1, 9};

    auto first = run_experiment(spec);
    REQUIRE(first.size() == 3);
    CHECK(first[0].seed == 5);
    CHECK(first[1].seed == 1);
    CHECK(first[2].seed == 9);

    spec.threads = 1;
    const auto serial = run_experiment(spec);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(serial[i].final_max_degree == first[i].final_max_degree);
        CHECK(serial[i].change_count == first[i].change_count);
        for (std::size_t c = 0; c < first[i].snapshots.size(); ++c)
            CHECK(serial[i].snapshots[c].scaled_metric == first[i].snapshots[c].scaled_metric);
    }
}

TEST_CASE("trajectory and summary files") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kGrow;
    spec.model = ModelConfig{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    spec.n_steps = 300;
    spec.checkpoints = {100, 300};
    spec.seeds = {1, 2, 3, 4};
    spec.out_dir = fresh_dir("csv").string();

    const auto summaries = run_experiment(spec);
    emit_csv(summaries, spec);

    const auto trajectory = split_lines(slurp(fs::path(spec.out_dir) / "trajectory.csv"));
    REQUIRE(trajectory.size() == 1 + spec.seeds.size() * spec.checkpoints.size());
    CHECK(trajectory[0] == "seed,n,M,L,leader,change_count,scaled_metric");

    // re-parse: every double field re-renders to the emitted text
    for (std::size_t row = 1; row < trajectory.size(); ++row) {
        const auto last_comma = trajectory[row].rfind(',');
        const std::string metric = trajectory[row].substr(last_comma + 1);
        CHECK(format_double(std::strtod(metric.c_str(), nullptr)) == metric);
    }

    const auto summary = split_lines(slurp(fs::path(spec.out_dir) / "summary.csv"));
    REQUIRE(summary.size() == 1 + spec.checkpoints.size());
    CHECK(summary[0] == "n,median_scaled,min_scaled,max_scaled");

    // byte-identical rerun
    ExperimentSpec again = spec;
    again.out_dir = fresh_dir("csv_again").string();
    emit_csv(run_experiment(again), again);
    CHECK(slurp(fs::path(spec.out_dir) / "trajectory.csv") ==
          slurp(fs::path(again.out_dir) / "trajectory.csv"));
    CHECK(slurp(fs::path(spec.out_dir) / "summary.csv") ==
          slurp(fs::path(again.out_dir) / "summary.csv"));
}

TEST_CASE("urn experiments reuse the trajectory format") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kUrn;
    spec.model.d = 3;
    spec.n_steps = 2000;
    spec.checkpoints = {1000, 2000};
    spec.seeds = {4, 8};
    spec.out_dir = fresh_dir("urn").string();

    const auto summaries = run_and_emit(spec);
    REQUIRE(summaries.size() == 2);
    for (const auto& summary : summaries) {
        REQUIRE(summary.snapshots.size() == 2);
        for (const auto& snapshot : summary.snapshots) {
            CHECK(snapshot.scaled_metric ==
                  static_cast<double>(snapshot.max_degree) / static_cast<double>(snapshot.n));
        }
    }
    CHECK(fs::exists(fs::path(spec.out_dir) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(spec.out_dir) / "summary.csv"));
}

TEST_CASE("hub report") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kHub;
    spec.model = ModelConfig{3, ChoiceRule::kMax, Attachment::kPreferential, 0};
    spec.n_steps = 3000;
    spec.checkpoints = {300, 3000};
    spec.seeds = {1, 2, 3, 4, 5};
    spec.out_dir = fresh_dir("hub").string();

    run_and_emit(spec);
    const auto hub = split_lines(slurp(fs::path(spec.out_dir) / "hub.csv"));
    REQUIRE(hub.size() == 1 + spec.seeds.size());
    CHECK(hub[0] == "seed,leader_at_300,leader_at_3000,last_change_step,change_count");

    const auto stability = split_lines(slurp(fs::path(spec.out_dir) / "hub_summary.csv"));
    REQUIRE(stability.size() == 1 + spec.checkpoints.size());
    CHECK(stability[0] == "n,fraction_stable");
    double previous = -1.0;
    for (std::size_t row = 1; row < stability.size(); ++row) {
        const double fraction =
            std::strtod(stability[row].substr(stability[row].find(',') + 1).c_str(), nullptr);
        CHECK(fraction >= previous);
        CHECK(fraction >= 0.0);
        CHECK(fraction <= 1.0);
        previous = fraction;
    }
}

TEST_CASE("xstar and exact emitters") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kXstar;
    spec.model.d = 3;
    spec.out_dir = fresh_dir("xstar").string();
    run_and_emit(spec);
    const auto xstar = slurp(fs::path(spec.out_dir) / "xstar.csv");
    CHECK(xstar.find("0.763932") != std::string::npos);

    ExperimentSpec exact_spec;
    exact_spec.kind = ExperimentKind::kExact;
    exact_spec.model = ModelConfig{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    exact_spec.n_steps = 3;
    exact_spec.out_dir = fresh_dir("exact").string();
    run_and_emit(exact_spec);
    const auto law = split_lines(slurp(fs::path(exact_spec.out_dir) / "exact_max_degree.csv"));
    REQUIRE(law.size() == 3);
    CHECK(law[0] == "M,probability");
    CHECK(law[1] == "2,0.25");
    CHECK(law[2] == "3,0.75");
    CHECK(fs::exists(fs::path(exact_spec.out_dir) / "exact_multisets.csv"));
}

TEST_CASE("table1 grid and qualitative ordering") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kTable1;
    spec.model.d = 2;
    spec.n_steps = 2000;
    spec.seeds = {1, 2, 3, 4, 5};
    spec.out_dir = fresh_dir("table1").string();

    emit_table1(spec);
    const auto table = split_lines(slurp(fs::path(spec.out_dir) / "table1.csv"));
    REQUIRE(table.size() == 7);
    CHECK(table[0] == "attachment,rule,median_final_M,predicted");

    auto median_of = [&table](const std::string& attachment, const std::string& rule) {
        for (const auto& row : table) {
            if (row.rfind(attachment + "," + rule + ",", 0) == 0) {
                const auto start = attachment.size() + rule.size() + 2;
                return std::strtod(row.substr(start).c_str(), nullptr);
            }
        }
        REQUIRE(false);
        return 0.0;
    };
    // growth-order separation is already decisive at n = 2000
    CHECK(median_of("preferential", "min") < median_of("preferential", "none"));
    CHECK(median_of("preferential", "none") < median_of("preferential", "max"));
}

TEST_CASE("uniform attachment with max-choice grows logarithmically") {
    // median M multiplies by ~ln(1e6)/ln(1e3) = 2 between these sizes;
    // pilot with these seeds gave 16 -> 32.
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kGrow;
    spec.model = ModelConfig{2, ChoiceRule::kMax, Attachment::kUniform, 0};
    spec.seeds = {1, 2, 3, 4, 5};

    auto median_final = [&spec](std::uint64_t steps) {
        spec.n_steps = steps;
        std::vector<double> finals;
        for (const auto& summary : run_experiment(spec))
            finals.push_back(static_cast<double>(summary.final_max_degree));
        return median(finals);
    };
    const double small = median_final(1000);
    const double large = median_final(1000000);
    CHECK(large / small <= 2.5);
    CHECK(large > small);
}

TEST_CASE("emit_csv refuses an empty checkpoint schedule") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kGrow;
    spec.n_steps = 50;
    spec.seeds = {1};
    const auto summaries = run_experiment(spec);
    CHECK_THROWS_AS(emit_csv(summaries, spec), SpecError);
}
