#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ecsim/oracle.hpp"
#include "ecsim/population.hpp"

using namespace ecsim;

namespace {

// Independent check: exhaustive search over the constraint plane
// v3 = capacity - v1 - v2 on a uniform grid. Only usable for n = 3.
double grid_min_objective(const std::vector<CostFunction>& costs, double capacity, double step) {
    REQUIRE(costs.size() == 3);
    double best = std::numeric_limits<double>::infinity();
    const int cells = static_cast<int>(std::round(1.0 / step));
    for (int i = 0; i <= cells; ++i) {
        const double v1 = i * step;
        for (int j = 0; j <= cells; ++j) {
            const double v2 = j * step;
            const double v3 = capacity - v1 - v2;
            if (v3 < -1e-12 || v3 > 1.0 + 1e-12) continue;
            const double v3c = std::clamp(v3, 0.0, 1.0);
            best = std::min(best,
                            costs[0].value(v1) + costs[1].value(v2) + costs[2].value(v3c));
        }
    }
    return best;
}

std::vector<CostFunction> identical_solar(int n, double quad, double quart) {
    return std::vector<CostFunction>(n, CostFunction::solar(quad, quart));
}

} // namespace

TEST_CASE("two-agent allocation matches the closed-form KKT solution") {
    // f1'(v) = 1 + 2v, f2'(v) = 1 + v; equalizing with v1 + v2 = 1 gives
    // v = (1/3, 2/3) at multiplier 5/3.
    std::vector<CostFunction> costs{CostFunction::solar(1.0, 0.0), CostFunction::solar(0.5, 0.0)};
    const auto sol = solve_subproblem(costs, 1.0);
    CHECK(sol.alloc[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(sol.alloc[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(sol.lambda == doctest::Approx(5.0 / 3.0).epsilon(1e-8));
    CHECK(sol.capacity_residual <= 1e-8);
}

TEST_CASE("identical costs split the capacity equally") {
    const auto costs = identical_solar(100, 1.3, 0.8);
    const auto sol = solve_subproblem(costs, 37.0);
    for (double v : sol.alloc) CHECK(std::abs(v - 0.37) <= 1e-9);
}

TEST_CASE("capacity equal to the population saturates every box") {
    const auto costs = identical_solar(8, 2.0, 1.0);
    const auto sol = solve_subproblem(costs, 8.0);
    for (double v : sol.alloc) CHECK(v == doctest::Approx(1.0));
    CHECK(sol.lambda == doctest::Approx(costs[0].derivative(1.0)));
}

TEST_CASE("constant marginal costs get an even split of the leftover") {
    // f(v) = v for all four agents: any feasible point is optimal and the
    // solver settles on the symmetric one.
    const auto costs = identical_solar(4, 0.0, 0.0);
    const auto sol = solve_subproblem(costs, 2.5);
    for (double v : sol.alloc) CHECK(v == doctest::Approx(0.625).epsilon(1e-10));
}

TEST_CASE("infeasible or empty subproblems are rejected") {
    const auto costs = identical_solar(3, 1.0, 1.0);
    CHECK_THROWS_AS(solve_subproblem(costs, 3.5), std::runtime_error);
    CHECK_THROWS_AS(solve_subproblem(costs, 0.0), std::invalid_argument);
    const std::vector<CostFunction> none;
    CHECK_THROWS_AS(solve_subproblem(none, 1.0), std::invalid_argument);
}

TEST_CASE("symmetric community splits match the capacity ratios") {
    CommunityConfig cfg = symmetric_preset();
    const CostPopulation pop = sample_population(cfg);
    const OracleSolution sol = solve_full(pop, cfg);
    for (double v : sol.x_star) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
    for (double v : sol.y_star) CHECK(v == doctest::Approx(0.75).epsilon(1e-9));
    for (double v : sol.z_star) CHECK(v == doctest::Approx(110.0 / 160.0).epsilon(1e-9));
    CHECK(sol.kkt_residual <= 1e-6);
}

TEST_CASE("KKT conditions hold on a randomly sampled community") {
    CommunityConfig cfg = paper_preset();
    cfg.seed = 5150;
    const CostPopulation pop = sample_population(cfg);
    const OracleSolution sol = solve_full(pop, cfg);

    auto sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    };
    CHECK(std::abs(sum(sol.x_star) - cfg.cap_solar) <= 1e-8);
    CHECK(std::abs(sum(sol.y_star) - cfg.cap_wind) <= 1e-8);
    CHECK(std::abs(sum(sol.z_star) - (cfg.cap_solar + cfg.cap_wind)) <= 1e-8);
    CHECK(sol.kkt_residual <= 1e-6);

    // Interior coordinates share the population multiplier.
    for (std::size_t i = 0; i < sol.x_star.size(); ++i) {
        const double v = sol.x_star[i];
        if (v > 0.0 && v < 1.0)
            CHECK(std::abs(pop.solar[i].derivative(v) - sol.lambda_solar) <= 1e-6);
    }
    for (std::size_t j = 0; j < sol.y_star.size(); ++j) {
        const double v = sol.y_star[j];
        if (v > 0.0 && v < 1.0)
            CHECK(std::abs(pop.wind[j].derivative(v) - sol.lambda_wind) <= 1e-6);
        if (v >= 1.0) CHECK(pop.wind[j].derivative(1.0) <= sol.lambda_wind + 1e-9);
    }
}

TEST_CASE("oracle objective matches a brute-force grid search on a tiny instance") {
    CommunityConfig cfg = tiny_preset();
    cfg.seed = 77;
    const CostPopulation pop = sample_population(cfg);
    const OracleSolution sol = solve_full(pop, cfg);
    const double objective = optimal_cost(sol, pop);

    const double grid = grid_min_objective(pop.solar, cfg.cap_solar, 1e-3) +
                        grid_min_objective(pop.wind, cfg.cap_wind, 1e-3) +
                        grid_min_objective(pop.consumer, cfg.cap_solar + cfg.cap_wind, 1e-3);
    CHECK(std::abs(objective - grid) <= 1e-4);
    CHECK(objective <= grid + 1e-9);  // the solver can only do better
}

TEST_CASE("oracle beats the equal-split feasible point") {
    RandomStream rng(0xCAFEULL);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<CostFunction> costs;
        const int n = 6;
        for (int i = 0; i < n; ++i)
            costs.push_back(CostFunction::solar(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
        const double capacity = rng.uniform(0.5, 5.5);
        const auto sol = solve_subproblem(costs, capacity);
        double opt = 0.0, equal = 0.0;
        for (int i = 0; i < n; ++i) {
            opt += costs[i].value(sol.alloc[i]);
            equal += costs[i].value(capacity / n);
        }
        CHECK(opt <= equal + 1e-9);
    }
}

TEST_CASE("the multiplier rises with capacity on interior instances") {
    RandomStream rng(0xD00DULL);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<CostFunction> costs;
        for (int i = 0; i < 10; ++i)
            costs.push_back(CostFunction::solar(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
        const auto tight = solve_subproblem(costs, 3.0);
        const auto loose = solve_subproblem(costs, 6.0);
        CHECK(loose.lambda > tight.lambda);
    }
}

TEST_CASE("scaling every consumer cost leaves the allocation unchanged") {
    CommunityConfig cfg = paper_preset();
    cfg.seed = 31337;
    const CostPopulation pop = sample_population(cfg);
    const double cap = cfg.cap_solar + cfg.cap_wind;
    const auto base = solve_subproblem(pop.consumer, cap);

    const double gamma = 3.7;
    std::vector<CostFunction> scaled;
    for (const auto& c : pop.consumer)
        scaled.push_back(CostFunction::consumer(gamma * c.quad, gamma * c.quart, gamma * c.offset));
    const auto rescaled = solve_subproblem(scaled, cap);
    for (std::size_t u = 0; u < base.alloc.size(); ++u)
        CHECK(std::abs(base.alloc[u] - rescaled.alloc[u]) <= 1e-8);
    CHECK(rescaled.lambda == doctest::Approx(gamma * base.lambda).epsilon(1e-6));
}

TEST_CASE("optimal cost of a linear community has a closed form") {
    // Prosumers with unit marginal cost contribute exactly their capacity;
    // identical strictly convex consumers split evenly.
    CommunityConfig cfg;
    cfg.n_solar = 10;
    cfg.n_wind = 8;
    cfg.n_consumers = 16;
    cfg.cap_solar = 5.0;
    cfg.cap_wind = 6.0;
    CostPopulation pop;
    pop.solar.assign(cfg.n_solar, CostFunction::solar(0.0, 0.0));
    pop.wind.assign(cfg.n_wind, CostFunction::wind(0.0, 0.0));
    pop.consumer.assign(cfg.n_consumers, CostFunction::consumer(0.5, 0.0, 0.2));
    const OracleSolution sol = solve_full(pop, cfg);
    const double z = (cfg.cap_solar + cfg.cap_wind) / cfg.n_consumers;
    const double expected =
        cfg.cap_solar + cfg.cap_wind + cfg.n_consumers * (0.5 * z * z + 0.2);
    CHECK(optimal_cost(sol, pop) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("optimal cost is permutation invariant and matches a direct fold") {
    CommunityConfig cfg = tiny_preset();
    cfg.seed = 4242;
    const CostPopulation pop = sample_population(cfg);
    const OracleSolution sol = solve_full(pop, cfg);
    const double cost = optimal_cost(sol, pop);

    // Independent fold over (cost, value) pairs in shuffled order.
    std::vector<std::pair<const CostFunction*, double>> pairs;
    for (std::size_t i = 0; i < pop.solar.size(); ++i)
        pairs.emplace_back(&pop.solar[i], sol.x_star[i]);
    for (std::size_t j = 0; j < pop.wind.size(); ++j)
        pairs.emplace_back(&pop.wind[j], sol.y_star[j]);
    for (std::size_t u = 0; u < pop.consumer.size(); ++u)
        pairs.emplace_back(&pop.consumer[u], sol.z_star[u]);
    std::reverse(pairs.begin(), pairs.end());
    double direct = 0.0;
    for (const auto& [c, v] : pairs) direct += c->value(v);
    CHECK(cost == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("consumer capacity above the population is infeasible") {
    CommunityConfig cfg = tiny_preset();
    cfg.n_consumers = 2;  // cap_solar + cap_wind = 3 > 2
    CostPopulation pop;
    pop.solar.assign(3, CostFunction::solar(1.0, 1.0));
    pop.wind.assign(3, CostFunction::wind(1.0, 0.0));
    pop.consumer.assign(2, CostFunction::consumer(1.0, 1.0, 0.0));
    CHECK_THROWS_AS(solve_full(pop, cfg), std::runtime_error);
}
