#include <choicepa/model.hpp>

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace choicepa {

const char* to_string(ChoiceRule rule) {
    switch (rule) {
        case ChoiceRule::kMax: return "max";
        case ChoiceRule::kMin: return "min";
        case ChoiceRule::kNone: return "none";
    }
    return "?";
}

const char* to_string(Attachment attachment) {
    return attachment == Attachment::kPreferential ? "preferential" : "uniform";
}

void ModelConfig::validate() const {
    if (d < 1) throw std::invalid_argument("ModelConfig: d must be >= 1");
}

TreeState TreeState::initial() {
    TreeState state;
    state.m_ = 1;
    state.max_degree_ = 1;
    state.degrees_ = {0, 1, 1};          // slot 0 unused
    state.endpoints_ = {1, 2};
    state.histogram_ = {0, 2};
    return state;
}

void TreeState::reserve(std::uint64_t n_edges) {
    degrees_.reserve(n_edges + 2);
    endpoints_.reserve(2 * n_edges);
}

VertexId TreeState::attach_new_vertex(VertexId target) {
    const std::uint32_t old_degree = degrees_[target];
    const std::uint32_t new_degree = old_degree + 1;
    degrees_[target] = new_degree;
    --histogram_[old_degree];
    if (new_degree == histogram_.size()) histogram_.push_back(0);
    ++histogram_[new_degree];
    if (new_degree > max_degree_) max_degree_ = new_degree;

    const auto new_vertex = static_cast<VertexId>(degrees_.size());
    degrees_.push_back(1);
    ++histogram_[1];
    endpoints_.push_back(target);
    endpoints_.push_back(new_vertex);
    ++m_;
    return new_vertex;
}

void TreeState::check_consistency() const {
    auto fail = [](const std::string& what) { throw std::logic_error("TreeState: " + what); };
    if (degrees_.size() != m_ + 2) fail("vertex count != m + 1");
    if (endpoints_.size() != 2 * m_) fail("endpoint list length != 2m");

    std::uint64_t degree_sum = 0;
    std::uint32_t true_max = 0;
    for (std::size_t v = 1; v < degrees_.size(); ++v) {
        if (degrees_[v] == 0) fail("zero-degree vertex");
        degree_sum += degrees_[v];
        true_max = std::max(true_max, degrees_[v]);
    }
    if (degree_sum != 2 * m_) fail("handshake violated: sum(deg) != 2m");
    if (true_max != max_degree_) fail("cached max degree stale");

    std::vector<std::uint32_t> multiplicity(degrees_.size(), 0);
    for (VertexId v : endpoints_) {
        if (v == 0 || v >= degrees_.size()) fail("endpoint id out of range");
        ++multiplicity[v];
    }
    for (std::size_t v = 1; v < degrees_.size(); ++v)
        if (multiplicity[v] != degrees_[v]) fail("endpoint multiplicity != degree");

    std::vector<std::uint64_t> recount(static_cast<std::size_t>(true_max) + 1, 0);
    for (std::size_t v = 1; v < degrees_.size(); ++v) ++recount[degrees_[v]];
    if (histogram_.size() < recount.size()) fail("histogram too short");
    for (std::size_t k = 1; k < histogram_.size(); ++k) {
        const std::uint64_t expected = k < recount.size() ? recount[k] : 0;
        if (histogram_[k] != expected) fail("histogram recount mismatch");
    }
}

VertexId sample_candidate(const TreeState& state, const ModelConfig& config, Rng& rng) {
    if (config.attachment == Attachment::kPreferential)
        return state.endpoints()[rng.below(state.endpoints().size())];
    return static_cast<VertexId>(1 + rng.below(state.vertex_count()));
}

namespace {

VertexId pick_among_tied(const std::vector<VertexId>& candidates, std::uint32_t tied_degree,
                         const TreeState& state, Rng& rng) {
    // Distinct tied vertices in first-appearance order; duplicates count once.
    VertexId distinct[2];
    std::vector<VertexId> overflow;
    std::size_t count = 0;
    for (VertexId v : candidates) {
        if (state.degree(v) != tied_degree) continue;
        bool seen = false;
        for (std::size_t i = 0; i < count && !seen; ++i)
            seen = (i < 2 ? distinct[i] : overflow[i - 2]) == v;
        if (seen) continue;
        if (count < 2) distinct[count] = v;
        else overflow.push_back(v);
        ++count;
    }
    if (count == 1) return distinct[0];
    const std::size_t pick = rng.below(count);
    return pick < 2 ? distinct[pick] : overflow[pick - 2];
}

}  // namespace

VertexId select_attachment(const std::vector<VertexId>& candidates, const TreeState& state,
                           const ModelConfig& config, Rng& rng) {
    if (candidates.empty()) throw std::invalid_argument("select_attachment: no candidates");
    if (config.rule == ChoiceRule::kNone || candidates.size() == 1) return candidates.front();

    std::uint32_t extreme = state.degree(candidates[0]);
    bool tie_possible = false;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const std::uint32_t deg = state.degree(candidates[i]);
        const bool better = config.rule == ChoiceRule::kMax ? deg > extreme : deg < extreme;
        if (better) {
            extreme = deg;
            tie_possible = false;
        } else if (deg == extreme) {
            tie_possible = true;
        }
    }
    if (!tie_possible) {
        for (VertexId v : candidates)
            if (state.degree(v) == extreme) return v;
    }
    return pick_among_tied(candidates, extreme, state, rng);
}

void grow_step(TreeState& state, const ModelConfig& config, Rng& rng, StepOutcome& out) {
    out.candidates.resize(config.d);
    for (std::uint32_t i = 0; i < config.d; ++i)
        out.candidates[i] = sample_candidate(state, config, rng);
    const VertexId chosen = select_attachment(out.candidates, state, config, rng);

    out.max_before = state.max_degree();
    out.chosen = chosen;
    out.chosen_degree_before = state.degree(chosen);
    out.new_vertex = state.attach_new_vertex(chosen);
    out.max_after = state.max_degree();
    out.step = state.edge_count();
}

StepOutcome grow_step(TreeState& state, const ModelConfig& config, Rng& rng) {
    StepOutcome out;
    grow_step(state, config, rng, out);
    return out;
}

std::string export_edge_list(const TreeState& state) {
    std::string text;
    const auto& endpoints = state.endpoints();
    for (std::size_t k = 0; k + 1 < endpoints.size(); k += 2) {
        text += std::to_string(endpoints[k]);
        text += '\t';
        text += std::to_string(endpoints[k + 1]);
        text += '\n';
    }
    return text;
}

}  // namespace choicepa
