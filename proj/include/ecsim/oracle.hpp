#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecsim/config.hpp"
#include "ecsim/cost.hpp"

namespace ecsim {

// Centralized reference solution of the allocation problem
//
//   min sum_i cost_i(v_i)   s.t.  sum_i v_i = capacity,  0 <= v_i <= 1
//
// per population. Separability reduces it to equalizing marginal costs: each
// coordinate responds to a shared multiplier with
// v_i(lambda) = clamp(cost_i'^{-1}(lambda), 0, 1), and an outer bisection
// finds the lambda whose responses sum to the capacity.

struct SubproblemSolution {
    std::vector<double> alloc;
    double lambda = 0.0;
    double capacity_residual = 0.0;  // |sum(alloc) - capacity| at return
};

struct OracleSolution {
    std::vector<double> x_star;  // solar
    std::vector<double> y_star;  // wind
    std::vector<double> z_star;  // consumers
    double lambda_solar = 0.0;
    double lambda_wind = 0.0;
    double lambda_consumer = 0.0;
    double kkt_residual = 0.0;  // max violation over all KKT conditions
};

namespace waterfill {

inline constexpr int kOuterCap = 200;
inline constexpr int kInnerCap = 100;
inline constexpr double kCapacityTol = 1e-10;      // bisection target on the sum
inline constexpr double kCapacityGuarantee = 1e-8; // contract: never return worse
inline constexpr double kRootTol = 1e-14;          // inner root bracket width

// Root of derivative(v) = lambda in (0,1). Caller guarantees the derivative
// straddles lambda, which makes it strictly increasing on the bracket.
// Newton from the midpoint, falling back to bisection whenever the step
// leaves the bracket.
inline double derivative_root(const CostFunction& cost, double lambda) {
    double lo = 0.0;
    double hi = 1.0;
    double v = 0.5;
    for (int it = 0; it < kInnerCap; ++it) {
        const double q = cost.derivative(v) - lambda;
        if (q > 0.0)
            hi = v;
        else
            lo = v;
        if (hi - lo <= kRootTol) break;
        const double slope = cost.second_derivative(v);
        double next = slope > 0.0 ? v - q / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        v = next;
    }
    return 0.5 * (lo + hi);
}

// Box-clamped response of one coordinate to the multiplier.
inline double box_response(const CostFunction& cost, double lambda) {
    if (lambda <= cost.derivative(0.0)) return 0.0;
    if (lambda >= cost.derivative(1.0)) return 1.0;
    return derivative_root(cost, lambda);
}

inline double fill_responses(std::span<const CostFunction> costs, double lambda,
                             std::vector<double>& alloc) {
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        alloc[i] = box_response(costs[i], lambda);
        sum += alloc[i];
    }
    return sum;
}

} // namespace waterfill

inline SubproblemSolution solve_subproblem(std::span<const CostFunction> costs, double capacity) {
    using namespace waterfill;
    const std::size_t n = costs.size();
    if (n == 0) throw std::invalid_argument("empty cost population");
    if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
    if (capacity > static_cast<double>(n))
        throw std::runtime_error("infeasible subproblem: capacity " + std::to_string(capacity) +
                                 " exceeds population size " + std::to_string(n));

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : costs) {
        lo = std::min(lo, c.derivative(0.0));
        hi = std::max(hi, c.derivative(1.0));
    }

    std::vector<double> alloc(n);
    // At lambda = hi every coordinate saturates at 1, so the bracket always
    // covers the capacity from above; from below the sum at lo is 0.
    double lambda = hi;
    double sum = fill_responses(costs, lambda, alloc);
    if (std::abs(sum - capacity) > kCapacityTol) {
        for (int it = 0; it < kOuterCap && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            lambda = 0.5 * (lo + hi);
            sum = fill_responses(costs, lambda, alloc);
            if (std::abs(sum - capacity) <= kCapacityTol) break;
            if (sum < capacity)
                lo = lambda;
            else
                hi = lambda;
        }
    }

    if (std::abs(sum - capacity) > kCapacityTol) {
        // Flat spot: coordinates whose derivative is constant and equal to
        // lambda contribute a jump in the response sum. Their optimal split is
        // indeterminate, so spread the leftover capacity evenly across them.
        const double width = std::max(hi - lo, 1e-12 * std::max(1.0, std::abs(lambda)));
        std::vector<std::size_t> flat;
        double fixed_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d0 = costs[i].derivative(0.0);
            const double d1 = costs[i].derivative(1.0);
            if (d1 - d0 <= width && std::abs(d0 - lambda) <= width)
                flat.push_back(i);
            else
                fixed_sum += alloc[i];
        }
        if (!flat.empty()) {
            const double share = (capacity - fixed_sum) / static_cast<double>(flat.size());
            if (share >= -kCapacityTol && share <= 1.0 + kCapacityTol) {
                for (std::size_t i : flat) alloc[i] = std::clamp(share, 0.0, 1.0);
                sum = 0.0;
                for (double v : alloc) sum += v;
            }
        }
    }

    const double residual = std::abs(sum - capacity);
    if (residual > kCapacityGuarantee)
        throw std::runtime_error("allocation bisection did not converge: residual " +
                                 std::to_string(residual) + " with bracket [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return {std::move(alloc), lambda, residual};
}

namespace detail {

// Max KKT violation for one population: constraint residual, interior
// stationarity |d(v) - lambda|, and complementarity at the box edges
// (d(0) >= lambda at v = 0, d(1) <= lambda at v = 1).
inline double kkt_population_residual(std::span<const CostFunction> costs,
                                      std::span<const double> alloc, double lambda,
                                      double capacity) {
    double sum = 0.0;
    for (double v : alloc) sum += v;
    double worst = std::abs(sum - capacity);
    for (std::size_t i = 0; i < costs.size(); ++i) {
        const double v = alloc[i];
        if (v <= 0.0)
            worst = std::max(worst, std::max(0.0, lambda - costs[i].derivative(0.0)));
        else if (v >= 1.0)
            worst = std::max(worst, std::max(0.0, costs[i].derivative(1.0) - lambda));
        else
            worst = std::max(worst, std::abs(costs[i].derivative(v) - lambda));
    }
    return worst;
}

} // namespace detail

// Full problem: the coupling constraint pins the consumer side to
// cap_solar + cap_wind, after which the three populations separate.
inline OracleSolution solve_full(const CostPopulation& costs, const CommunityConfig& cfg) {
    if (costs.solar.empty() || costs.wind.empty() || costs.consumer.empty())
        throw std::invalid_argument("all three populations must be nonempty");
    const double cap_consumer = cfg.cap_solar + cfg.cap_wind;
    auto solar = solve_subproblem(costs.solar, cfg.cap_solar);
    auto wind = solve_subproblem(costs.wind, cfg.cap_wind);
    auto consumer = solve_subproblem(costs.consumer, cap_consumer);

    OracleSolution sol;
    sol.lambda_solar = solar.lambda;
    sol.lambda_wind = wind.lambda;
    sol.lambda_consumer = consumer.lambda;
    sol.kkt_residual = std::max(
        {detail::kkt_population_residual(costs.solar, solar.alloc, solar.lambda, cfg.cap_solar),
         detail::kkt_population_residual(costs.wind, wind.alloc, wind.lambda, cfg.cap_wind),
         detail::kkt_population_residual(costs.consumer, consumer.alloc, consumer.lambda,
                                         cap_consumer)});
    sol.x_star = std::move(solar.alloc);
    sol.y_star = std::move(wind.alloc);
    sol.z_star = std::move(consumer.alloc);
    return sol;
}

// Community cost at the optimal allocation.
inline double optimal_cost(const OracleSolution& sol, const CostPopulation& costs) {
    if (sol.x_star.size() != costs.solar.size() || sol.y_star.size() != costs.wind.size() ||
        sol.z_star.size() != costs.consumer.size())
        throw std::invalid_argument("solution does not match the population sizes");
    double sum = 0.0;
    for (std::size_t i = 0; i < sol.x_star.size(); ++i) sum += costs.solar[i].value(sol.x_star[i]);
    for (std::size_t j = 0; j < sol.y_star.size(); ++j) sum += costs.wind[j].value(sol.y_star[j]);
    for (std::size_t u = 0; u < sol.z_star.size(); ++u)
        sum += costs.consumer[u].value(sol.z_star[u]);
    return sum;
}

} // namespace ecsim
