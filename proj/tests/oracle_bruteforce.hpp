#pragma once

// Test-only exhaustive oracle for the model's finite-n law. It recurses
// over labeled degree vectors and computes each step's transition law by
// summing over every candidate draw tuple (with the uniform split over
// distinct tied vertices), straight from the sampling definition. It shares
// no code with the multiset dynamic program or the simulator.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include <choicepa/model.hpp>

namespace choicepa::testing {

struct BruteLaw {
    std::map<std::vector<std::uint32_t>, double> multisets;  // sorted descending
    std::map<std::uint32_t, double> max_degree;
};

inline BruteLaw brute_force_law(std::uint32_t n_target, const ModelConfig& config) {
    using Degrees = std::vector<std::uint32_t>;
    std::map<Degrees, double> states;
    states[{1, 1}] = 1.0;

    const std::uint32_t draws = config.rule == ChoiceRule::kNone ? 1 : config.d;
    for (std::uint32_t m = 1; m < n_target; ++m) {
        std::map<Degrees, double> next;
        for (const auto& [degrees, probability] : states) {
            const std::size_t vertices = degrees.size();
            std::vector<double> weight(vertices);
            double total = 0.0;
            for (std::size_t v = 0; v < vertices; ++v) {
                weight[v] = config.attachment == Attachment::kPreferential
                                ? static_cast<double>(degrees[v])
                                : 1.0;
                total += weight[v];
            }

            std::map<std::size_t, double> target_probability;
            std::vector<std::size_t> tuple(draws, 0);
            while (true) {
                double tuple_probability = probability == 0.0 ? 0.0 : 1.0;
                for (const auto v : tuple) tuple_probability *= weight[v] / total;

                if (config.rule == ChoiceRule::kNone) {
                    target_probability[tuple.front()] += tuple_probability;
                } else {
                    std::uint32_t extreme = degrees[tuple.front()];
                    for (const auto v : tuple) {
                        if (config.rule == ChoiceRule::kMax) extreme = std::max(extreme, degrees[v]);
                        else extreme = std::min(extreme, degrees[v]);
                    }
                    std::vector<std::size_t> tied;
                    for (const auto v : tuple)
                        if (degrees[v] == extreme &&
                            std::find(tied.begin(), tied.end(), v) == tied.end())
                            tied.push_back(v);
                    for (const auto v : tied)
                        target_probability[v] += tuple_probability / static_cast<double>(tied.size());
                }

                // odometer over all vertex tuples
                std::size_t position = 0;
                while (position < draws && ++tuple[position] == vertices) {
                    tuple[position] = 0;
                    ++position;
                }
                if (position == draws) break;
            }

            for (const auto& [target, p] : target_probability) {
                Degrees child = degrees;
                ++child[target];
                child.push_back(1);
                next[child] += probability * p;
            }
        }
        states = std::move(next);
    }

    BruteLaw law;
    for (const auto& [degrees, probability] : states) {
        Degrees sorted = degrees;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        law.multisets[sorted] += probability;
        law.max_degree[sorted.front()] += probability;
    }
    return law;
}

}  // namespace choicepa::testing
