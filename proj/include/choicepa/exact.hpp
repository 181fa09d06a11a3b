#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <choicepa/model.hpp>

namespace choicepa {

/**
 * Exact finite-n law of the model, as a distribution over sorted degree
 * multisets of P_n, with the marginal law of the maximum degree alongside.
 * Multisets are stored in descending order; probabilities sum to 1 within
 * 1e-12.
 */
struct ExactDistribution {
    std::uint32_t n_target = 0;
    std::map<std::vector<std::uint32_t>, double> multiset_probabilities;
    std::map<std::uint32_t, double> max_degree_probabilities;
};

inline constexpr std::uint32_t kExactDistributionCap = 12;

/**
 * Dynamic program over sorted degree multisets, feasible because the
 * degree-sequence law is exchangeable over vertex identity. From a multiset
 * with degree classes k (class weight = k*count/2m for preferential
 * sampling, count/(m+1) for uniform), the attachment target has degree k
 * with probability
 *     max rule:  S(<=k)^d - S(<k)^d
 *     min rule:  S(>=k)^d - S(>k)^d
 *     no choice: weight(k)             (d is ignored, as for d = 1)
 * where S are cumulative class weights; the transition replaces one k with
 * k+1 and appends a 1. n_target beyond the cap is rejected (state blowup).
 */
ExactDistribution exact_distribution(std::uint32_t n_target, const ModelConfig& config,
                                     std::uint32_t cap = kExactDistributionCap);

}  // namespace choicepa
