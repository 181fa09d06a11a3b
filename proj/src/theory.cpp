#include <choicepa/theory.hpp>

#include <cmath>

namespace choicepa {

double attachment_probability(std::uint64_t max_degree, std::uint64_t max_count, std::uint64_t n,
                              std::uint32_t d) {
    if (d < 1) throw std::invalid_argument("attachment_probability: d must be >= 1");
    if (max_degree < 1 || max_count < 1 || n < 1)
        throw std::invalid_argument("attachment_probability: M, L, n must be >= 1");
    const std::uint64_t weight = max_degree * max_count;
    const std::uint64_t total = 2 * n;
    if (weight > total)
        throw std::invalid_argument("attachment_probability: M*L > 2n violates the handshake");
    const double miss = static_cast<double>(total - weight) / static_cast<double>(total);
    return 1.0 - std::pow(miss, static_cast<double>(d));
}

double choice_intensity(double x, std::uint32_t d) {
    const double base = 1.0 - x / 2.0;
    double term = 1.0;
    double sum = 0.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        sum += term;
        term *= base;
    }
    return 0.5 * sum;
}

double fixed_point_map(double x, std::uint32_t d) {
    return 1.0 - std::pow(1.0 - x / 2.0, static_cast<double>(d));
}

FixedPointResult solve_x_star(std::uint32_t d, double tol) {
    if (d <= 2) throw NoInteriorRoot(d);
    if (tol <= 0.0) throw std::invalid_argument("solve_x_star: tol must be positive");

    auto g = [d](double x) { return fixed_point_map(x, d) - x; };
    double lo = tol;
    double hi = 2.0;
    // g is concave with g(0) = 0, g'(0) = d/2 - 1 > 0 and g(2) = -1, so it
    // changes sign exactly once in (0, 2).
    int iterations = 0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
        ++iterations;
        if (iterations > 200) break;
    }
    const double x_star = 0.5 * (lo + hi);
    FixedPointResult result;
    result.d = d;
    result.x_star = x_star;
    result.residual = std::abs(g(x_star));
    result.derivative =
        0.5 * d * std::pow(1.0 - x_star / 2.0, static_cast<double>(d) - 1.0);
    result.iterations = iterations;
    if (!(result.derivative < 1.0))
        throw std::logic_error("solve_x_star: root is not stable (q'(x*) >= 1)");
    return result;
}

double predicted_max(std::uint64_t n, std::uint32_t d) {
    if (d <= 1)
        throw std::invalid_argument(
            "predicted_max: unsupported for d <= 1 (the sqrt(n) constant is a random limit)");
    if (n < 3) throw std::invalid_argument("predicted_max: n must be >= 3");
    const auto nd = static_cast<double>(n);
    if (d == 2) return 4.0 * nd / std::log(nd);
    return solve_x_star(d).x_star * nd;
}

double urn_increment_probability(const UrnState& urn, std::uint32_t d) {
    if (d < 1) throw std::invalid_argument("urn_increment_probability: d must be >= 1");
    const std::uint64_t total = urn.black + urn.white;
    if (total < 1) throw std::invalid_argument("urn_increment_probability: empty urn");
    const double all_white = static_cast<double>(urn.white) / static_cast<double>(total);
    return 1.0 - std::pow(all_white, static_cast<double>(d));
}

bool urn_step(UrnState& urn, std::uint32_t d, Rng& rng) {
    const double p = urn_increment_probability(urn, d);
    const bool black_drawn = rng.uniform01() < p;
    if (black_drawn) {
        ++urn.black;
        ++urn.white;
    } else {
        urn.white += 2;
    }
    ++urn.steps;
    return black_drawn;
}

std::vector<UrnTracePoint> run_urn(UrnState initial, std::uint32_t d, std::uint64_t n_steps,
                                   std::uint64_t seed,
                                   std::span<const std::uint64_t> checkpoints) {
    if (n_steps < 1) throw std::invalid_argument("run_urn: n_steps must be >= 1");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > n_steps)
            throw std::invalid_argument("run_urn: checkpoint outside [1, n_steps]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("run_urn: checkpoints must be strictly increasing");
    }
    Rng rng(seed);
    UrnState urn = initial;
    std::vector<UrnTracePoint> trace;
    trace.reserve(checkpoints.size());
    std::size_t next = 0;
    for (std::uint64_t step = 1; step <= n_steps; ++step) {
        urn_step(urn, d, rng);
        if (next < checkpoints.size() && checkpoints[next] == step) {
            trace.push_back(UrnTracePoint{step, urn.black, urn.white,
                                          static_cast<double>(urn.black) /
                                              static_cast<double>(step)});
            ++next;
        }
    }
    return trace;
}

std::vector<UrnTracePoint> run_urn(UrnState initial, std::uint32_t d, std::uint64_t n_steps,
                                   std::uint64_t seed) {
    std::vector<std::uint64_t> checkpoints;
    for (std::uint64_t c = 10; c < n_steps; c *= 10) checkpoints.push_back(c);
    checkpoints.push_back(n_steps);
    return run_urn(initial, d, n_steps, seed, checkpoints);
}

}  // namespace choicepa
