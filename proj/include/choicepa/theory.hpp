#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <choicepa/rng.hpp>

namespace choicepa {

/// Probability that the maximum degree increments at step n:
/// 1 - (1 - M*L/2n)^d. Throws if M*L > 2n (handshake) or inputs are < 1.
double attachment_probability(std::uint64_t max_degree, std::uint64_t max_count, std::uint64_t n,
                              std::uint32_t d);

/// Choice intensity f(x) = (1/2) * sum_{i=0}^{d-1} (1 - x/2)^i on [0, 2].
/// Equals (1 - (1 - x/2)^d)/x for x != 0; f(x*) = 1.
double choice_intensity(double x, std::uint32_t d);

/// Fixed-point map q(x) = 1 - (1 - x/2)^d on [0, 2].
double fixed_point_map(double x, std::uint32_t d);

/// Thrown by solve_x_star for d <= 2, where q(x) - x has no root in (0, 2).
class NoInteriorRoot : public std::domain_error {
public:
    explicit NoInteriorRoot(std::uint32_t d)
        : std::domain_error("q(x) - x has no root in (0, 2) for d = " + std::to_string(d)) {}
};

struct FixedPointResult {
    std::uint32_t d = 0;
    double x_star = 0.0;
    double residual = 0.0;    // |q(x*) - x*|
    double derivative = 0.0;  // q'(x*) = (d/2)(1 - x*/2)^(d-1), < 1 at the stable root
    int iterations = 0;
};

/**
 * Unique positive solution of 1 - (1 - x/2)^d = x in (0, 2), by bisection
 * on [tol, 2] (q - x is concave with a single interior sign change there).
 * Requires d >= 3; throws NoInteriorRoot otherwise. Verifies that the root
 * is stable (q'(x*) < 1).
 */
FixedPointResult solve_x_star(std::uint32_t d, double tol = 1e-12);

/// Leading-order prediction for the maximum degree of P_n: 4n/ln(n) for
/// d = 2, x*(d)*n for d >= 3. The d = 1 constant is a nondegenerate random
/// limit, so d <= 1 is rejected.
double predicted_max(std::uint64_t n, std::uint32_t d);

/**
 * Two-color urn mirroring the conditioned maximum-degree dynamics: d balls
 * are sampled with replacement; if any is black, one black and one white
 * ball are added, otherwise two whites. black tracks M_n, black + white
 * tracks 2n.
 */
struct UrnState {
    std::uint64_t black = 1;
    std::uint64_t white = 1;
    std::uint64_t steps = 0;
};

/// 1 - (white/(black+white))^d; computed from the same integer operands as
/// attachment_probability, so the two agree bit for bit when white = 2n-ML.
double urn_increment_probability(const UrnState& urn, std::uint32_t d);

/// Advances the urn one step; returns whether a black ball was added.
bool urn_step(UrnState& urn, std::uint32_t d, Rng& rng);

struct UrnTracePoint {
    std::uint64_t step = 0;
    std::uint64_t black = 0;
    std::uint64_t white = 0;
    double black_fraction = 0.0;  // black / steps
};

/// Iterates the urn for n_steps, recording (step, black/steps) at each
/// checkpoint (strictly increasing, within [1, n_steps]). Deterministic per
/// seed.
std::vector<UrnTracePoint> run_urn(UrnState initial, std::uint32_t d, std::uint64_t n_steps,
                                   std::uint64_t seed, std::span<const std::uint64_t> checkpoints);

/// Same, with powers-of-ten checkpoints (plus the final step).
std::vector<UrnTracePoint> run_urn(UrnState initial, std::uint32_t d, std::uint64_t n_steps,
                                   std::uint64_t seed);

}  // namespace choicepa
