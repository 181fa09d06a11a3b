#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <choicepa/rng.hpp>

namespace choicepa {

/// Vertex ids are 1-based; 0 is never a valid id. 32 bits halve the memory
/// of the endpoint list at n = 1e7..1e8.
using VertexId = std::uint32_t;

enum class ChoiceRule { kMax, kMin, kNone };
enum class Attachment { kPreferential, kUniform };

/// Only one tie-break is supported: uniform over the distinct tied
/// vertices. Any symmetric rule leaves the degree-sequence law unchanged,
/// so this axis exists to pin the convention down, not to vary it.
enum class TieBreak { kUniformAmongTied };

const char* to_string(ChoiceRule rule);
const char* to_string(Attachment attachment);

/**
 * Immutable description of one model variant: how many candidates are drawn
 * per step, how candidates are sampled, and which candidate wins.
 * rule = kNone attaches to the first candidate, so its law coincides with
 * d = 1 regardless of d.
 */
struct ModelConfig {
    std::uint32_t d = 2;
    ChoiceRule rule = ChoiceRule::kMax;
    Attachment attachment = Attachment::kPreferential;
    std::uint64_t seed = 1;
    TieBreak tie_break = TieBreak::kUniformAmongTied;

    /// Throws std::invalid_argument if d < 1.
    void validate() const;
};

/**
 * The growing tree P_m: m edges, m+1 vertices.
 *
 * Degree-proportional sampling uses the append-only endpoint list: every
 * edge contributes both endpoints, so a uniform index into the list picks a
 * vertex with probability deg(v)/2m in O(1). Nothing is ever removed.
 *
 * Invariants (checked by check_consistency):
 *   sum(degrees) = 2m, |endpoints| = 2m, vertex count = m+1,
 *   multiplicity of v in endpoints = degrees[v],
 *   histogram[k] = #vertices of degree k.
 */
class TreeState {
public:
    /// P_1: one edge between vertices 1 and 2.
    static TreeState initial();

    std::uint64_t edge_count() const { return m_; }
    std::uint64_t vertex_count() const { return m_ + 1; }
    std::uint32_t max_degree() const { return max_degree_; }
    std::uint32_t degree(VertexId v) const { return degrees_[v]; }

    /// Degrees indexed by vertex id; slot 0 is unused.
    const std::vector<std::uint32_t>& degrees() const { return degrees_; }
    /// Edge k (1-based) is (endpoints[2k-2], endpoints[2k-1]).
    const std::vector<VertexId>& endpoints() const { return endpoints_; }
    /// Vertex counts indexed by degree; slot 0 is unused.
    const std::vector<std::uint64_t>& degree_histogram() const { return histogram_; }

    void reserve(std::uint64_t n_edges);

    /// Adds vertex m+2 and the edge (target, m+2). Returns the new id.
    VertexId attach_new_vertex(VertexId target);

    /// Full recount of every invariant; throws std::logic_error on violation.
    void check_consistency() const;

private:
    std::uint64_t m_ = 0;
    std::uint32_t max_degree_ = 0;
    std::vector<std::uint32_t> degrees_;
    std::vector<VertexId> endpoints_;
    std::vector<std::uint64_t> histogram_;
};

/**
 * Record of one growth step: the step index n of the tree P_n it produced,
 * the d candidate draws (repetition allowed), the winning vertex, and the
 * maximum degree before/after.
 */
struct StepOutcome {
    std::uint64_t step = 0;
    std::vector<VertexId> candidates;
    VertexId chosen = 0;
    VertexId new_vertex = 0;
    std::uint32_t chosen_degree_before = 0;
    std::uint32_t max_before = 0;
    std::uint32_t max_after = 0;
};

/// One candidate draw: degree-proportional (uniform endpoint-list index) or
/// uniform over vertices, per config.attachment.
VertexId sample_candidate(const TreeState& state, const ModelConfig& config, Rng& rng);

/**
 * Applies the choice rule to the drawn candidates. Max (min) rule returns a
 * candidate of maximal (minimal) degree; kNone returns the first. Ties
 * between several distinct vertices at the extreme degree are broken
 * uniformly over the distinct tied vertices (duplicate draws of one vertex
 * count once); the tie-break draw is consumed only when >= 2 distinct
 * vertices are tied. Candidate draws always precede the tie-break draw in
 * the random stream.
 */
VertexId select_attachment(const std::vector<VertexId>& candidates, const TreeState& state,
                           const ModelConfig& config, Rng& rng);

/// Draws d candidates, selects the attachment target, and grows the tree by
/// one vertex and one edge. Reuses out's candidate buffer.
void grow_step(TreeState& state, const ModelConfig& config, Rng& rng, StepOutcome& out);

StepOutcome grow_step(TreeState& state, const ModelConfig& config, Rng& rng);

/// One line per edge, "u<TAB>v", ids 1-based, creation order, LF endings.
std::string export_edge_list(const TreeState& state);

}  // namespace choicepa
