#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <choicepa/model.hpp>

using namespace choicepa;

namespace {

// Degree shape (2,1,1): vertex 1 joined to 2 and 3.
TreeState star_211() {
    TreeState state = TreeState::initial();
    state.attach_new_vertex(1);
    return state;
}

}  // namespace

TEST_CASE("initial tree is P_1") {
    const TreeState state = TreeState::initial();
    CHECK(state.edge_count() == 1);
    CHECK(state.vertex_count() == 2);
    CHECK(state.degree(1) == 1);
    CHECK(state.degree(2) == 1);
    CHECK(state.endpoints() == std::vector<VertexId>{1, 2});
    CHECK(state.degree_histogram()[1] == 2);
    CHECK(state.max_degree() == 1);
    state.check_consistency();
}

TEST_CASE("edge list export") {
    TreeState state = TreeState::initial();
    CHECK(export_edge_list(state) == "1\t2\n");

    ModelConfig config{2, ChoiceRule::kMax, Attachment::kPreferential, 99};
    Rng rng(config.seed);
    for (int i = 0; i < 40; ++i) grow_step(state, config, rng);

    const std::string text = export_edge_list(state);
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == state.edge_count());
    // every id within [1, m+1]
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t tab = text.find('\t', pos);
        const std::size_t eol = text.find('\n', tab);
        const auto u = std::stoul(text.substr(pos, tab - pos));
        const auto v = std::stoul(text.substr(tab + 1, eol - tab - 1));
        CHECK(u >= 1);
        CHECK(v >= 1);
        CHECK(u <= state.vertex_count());
        CHECK(v <= state.vertex_count());
        pos = eol + 1;
    }
}

TEST_CASE("preferential candidate sampling follows degrees") {
    const TreeState state = star_211();
    ModelConfig config{1, ChoiceRule::kNone, Attachment::kPreferential, 0};
    Rng rng(12345);
    const int trials = 40000;
    int hub = 0;
    for (int i = 0; i < trials; ++i) hub += sample_candidate(state, config, rng) == 1;
    // P(v1) = deg/2m = 2/4; three-sigma band
    const double freq = static_cast<double>(hub) / trials;
    const double sigma = std::sqrt(0.5 * 0.5 / trials);
    CHECK(std::abs(freq - 0.5) < 3 * sigma);
}

TEST_CASE("uniform candidate sampling ignores degrees") {
    const TreeState state = star_211();
    ModelConfig config{1, ChoiceRule::kNone, Attachment::kUniform, 0};
    Rng rng(6789);
    const int trials = 45000;
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < trials; ++i) ++counts[sample_candidate(state, config, rng)];
    const double third = 1.0 / 3.0;
    const double sigma = std::sqrt(third * (1 - third) / trials);
    for (int v = 1; v <= 3; ++v) {
        const double freq = static_cast<double>(counts[v]) / trials;
        CHECK(std::abs(freq - third) < 3 * sigma);
    }
}

TEST_CASE("selection rules on forced cases") {
    TreeState state = star_211();
    state.attach_new_vertex(1);  // degrees (3,1,1,1)
    ModelConfig max_config{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    ModelConfig min_config{2, ChoiceRule::kMin, Attachment::kPreferential, 0};
    ModelConfig none_config{2, ChoiceRule::kNone, Attachment::kPreferential, 0};
    Rng rng(1);

    CHECK(select_attachment({1, 2}, state, max_config, rng) == 1);
    CHECK(select_attachment({2, 1}, state, max_config, rng) == 1);
    CHECK(select_attachment({1, 2}, state, min_config, rng) == 2);
    CHECK(select_attachment({2, 1}, state, min_config, rng) == 2);
    CHECK(select_attachment({2, 1}, state, none_config, rng) == 2);
    CHECK(select_attachment({3, 1, 2}, state, none_config, rng) == 3);
}

TEST_CASE("tie between two distinct vertices is a fair coin") {
    const TreeState state = star_211();  // vertices 2 and 3 both degree 1
    ModelConfig config{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    Rng rng(777);
    const int trials = 40000;
    int first = 0;
    for (int i = 0; i < trials; ++i) first += select_attachment({2, 3}, state, config, rng) == 2;
    const double freq = static_cast<double>(first) / trials;
    CHECK(std::abs(freq - 0.5) < 3 * std::sqrt(0.25 / trials));
}

TEST_CASE("duplicate draws collapse and consume no tie-break draw") {
    const TreeState state = star_211();
    ModelConfig config{3, ChoiceRule::kMax, Attachment::kPreferential, 0};
    Rng used(42);
    Rng untouched(42);
    CHECK(select_attachment({2, 2, 2}, state, config, used) == 2);
    CHECK(used.next_u64() == untouched.next_u64());

    // distinct tie does consume exactly one draw
    Rng a(42);
    Rng b(42);
    b.below(2);
    select_attachment({2, 3}, state, config, a);
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("grow step from the 3-vertex star picks the hub 3/4 of the time") {
    ModelConfig config{2, ChoiceRule::kMax, Attachment::kPreferential, 0};
    Rng rng(2024);
    const int trials = 20000;
    int hub = 0;
    for (int i = 0; i < trials; ++i) {
        TreeState state = star_211();
        StepOutcome outcome = grow_step(state, config, rng);
        hub += outcome.chosen == 1;
        CHECK(outcome.max_after - outcome.max_before <= 1);
        CHECK((outcome.max_after - outcome.max_before == 1) ==
              (outcome.chosen_degree_before == outcome.max_before));
    }
    const double freq = static_cast<double>(hub) / trials;
    CHECK(std::abs(freq - 0.75) < 3 * std::sqrt(0.75 * 0.25 / trials));
}

TEST_CASE("each step adds one edge, two endpoints, two degree units") {
    ModelConfig config{3, ChoiceRule::kMin, Attachment::kPreferential, 5};
    Rng rng(config.seed);
    TreeState state = TreeState::initial();
    for (int i = 0; i < 200; ++i) {
        const auto edges_before = state.edge_count();
        const auto endpoints_before = state.endpoints().size();
        StepOutcome outcome = grow_step(state, config, rng);
        CHECK(state.edge_count() == edges_before + 1);
        CHECK(state.endpoints().size() == endpoints_before + 2);
        CHECK(outcome.candidates.size() == config.d);
        CHECK(std::find(outcome.candidates.begin(), outcome.candidates.end(), outcome.chosen) !=
              outcome.candidates.end());
        CHECK(outcome.new_vertex == state.vertex_count());
        CHECK(state.degree(outcome.new_vertex) == 1);
    }
    state.check_consistency();
}

TEST_CASE("same seed reproduces the run bit for bit") {
    ModelConfig config{2, ChoiceRule::kMax, Attachment::kPreferential, 31337};
    TreeState a = TreeState::initial();
    TreeState b = TreeState::initial();
    Rng rng_a(config.seed);
    Rng rng_b(config.seed);
    for (int i = 0; i < 500; ++i) {
        grow_step(a, config, rng_a);
        grow_step(b, config, rng_b);
    }
    CHECK(a.endpoints() == b.endpoints());
    CHECK(a.degrees() == b.degrees());
}

TEST_CASE("config validation") {
    ModelConfig config{0, ChoiceRule::kMax, Attachment::kPreferential, 1};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
