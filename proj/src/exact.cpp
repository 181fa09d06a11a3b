#include <choicepa/exact.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace choicepa {

namespace {

struct DegreeClass {
    std::uint32_t degree = 0;
    std::uint64_t count = 0;
    std::uint64_t weight = 0;  // integer sampling weight of the whole class
};

// Probability that the attachment target falls in class i, given cumulative
// integer weights. The cumulative sums telescope, so the class
// probabilities of one state add up to exactly 1.
double class_probability(const std::vector<DegreeClass>& classes, std::size_t i,
                         std::uint64_t total, const ModelConfig& config) {
    const auto d = static_cast<double>(config.d);
    if (config.rule == ChoiceRule::kNone || config.d == 1)
        return static_cast<double>(classes[i].weight) / static_cast<double>(total);

    std::uint64_t below = 0;  // sum of weights of classes strictly below i
    for (std::size_t j = 0; j < i; ++j) below += classes[j].weight;
    const std::uint64_t through = below + classes[i].weight;

    const auto frac = [total](std::uint64_t w) {
        return static_cast<double>(w) / static_cast<double>(total);
    };
    if (config.rule == ChoiceRule::kMax)
        return std::pow(frac(through), d) - std::pow(frac(below), d);
    // min rule: all draws land at degree >= k, not all strictly above.
    return std::pow(frac(total - below), d) - std::pow(frac(total - through), d);
}

}  // namespace

ExactDistribution exact_distribution(std::uint32_t n_target, const ModelConfig& config,
                                     std::uint32_t cap) {
    config.validate();
    if (n_target < 1) throw std::invalid_argument("exact_distribution: n_target must be >= 1");
    if (n_target > cap)
        throw std::invalid_argument("exact_distribution: n_target " + std::to_string(n_target) +
                                    " exceeds the cap " + std::to_string(cap));

    using Multiset = std::vector<std::uint32_t>;
    std::map<Multiset, double> states;
    states[{1, 1}] = 1.0;

    for (std::uint32_t m = 1; m < n_target; ++m) {
        std::map<Multiset, double> next;
        const std::uint64_t total =
            config.attachment == Attachment::kPreferential ? 2ull * m : m + 1ull;
        for (const auto& [multiset, probability] : states) {
            // Degree classes in ascending degree order.
            std::vector<DegreeClass> classes;
            for (auto it = multiset.rbegin(); it != multiset.rend(); ++it) {
                if (classes.empty() || classes.back().degree != *it)
                    classes.push_back(DegreeClass{*it, 0, 0});
                ++classes.back().count;
            }
            for (auto& cls : classes)
                cls.weight = config.attachment == Attachment::kPreferential
                                 ? std::uint64_t{cls.degree} * cls.count
                                 : cls.count;

            for (std::size_t i = 0; i < classes.size(); ++i) {
                const double p = class_probability(classes, i, total, config);
                Multiset child = multiset;
                auto slot = std::find(child.begin(), child.end(), classes[i].degree);
                ++(*slot);
                child.push_back(1);
                std::sort(child.begin(), child.end(), std::greater<>());
                next[child] += probability * p;
            }
        }
        states = std::move(next);
    }

    ExactDistribution result;
    result.n_target = n_target;
    for (const auto& [multiset, probability] : states) {
        result.max_degree_probabilities[multiset.front()] += probability;
    }
    result.multiset_probabilities = std::move(states);
    return result;
}

}  // namespace choicepa
