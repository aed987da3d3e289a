#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecsim/population.hpp"

using namespace ecsim;

TEST_CASE("degenerate ranges produce identical agents") {
    CommunityConfig cfg = symmetric_preset();
    const CostPopulation pop = sample_population(cfg);
    for (const auto& c : pop.solar) {
        CHECK(c.quad == doctest::Approx(1.0));
        CHECK(c.quart == doctest::Approx(1.0));
    }
    for (const auto& c : pop.wind) {
        CHECK(c.quad == doctest::Approx(1.0));
        CHECK(c.offset == doctest::Approx(1.0));
    }
    for (const auto& c : pop.consumer) {
        CHECK(c.quad == doctest::Approx(1.0));
        CHECK(c.quart == doctest::Approx(1.0));
        CHECK(c.offset == doctest::Approx(1.0));
    }
}

TEST_CASE("sampling is a pure function of the seed") {
    CommunityConfig cfg = paper_preset();
    cfg.seed = 2024;
    const CostPopulation a = sample_population(cfg);
    const CostPopulation b = sample_population(cfg);
    REQUIRE(a.solar.size() == b.solar.size());
    for (std::size_t i = 0; i < a.solar.size(); ++i) {
        CHECK(a.solar[i].quad == b.solar[i].quad);
        CHECK(a.solar[i].quart == b.solar[i].quart);
    }
    cfg.seed = 2025;
    const CostPopulation c = sample_population(cfg);
    bool any_differs = false;
    for (std::size_t i = 0; i < a.solar.size(); ++i)
        any_differs = any_differs || a.solar[i].quad != c.solar[i].quad;
    CHECK(any_differs);
}

TEST_CASE("sampled coefficients land in their ranges, mean near the midpoint") {
    CommunityConfig cfg = paper_preset();
    cfg.n_solar = 100000;
    cfg.cap_solar = 1.0;
    cfg.seed = 321;
    const CostPopulation pop = sample_population(cfg);
    double sum = 0.0;
    for (const auto& c : pop.solar) {
        CHECK(c.quad >= cfg.ranges.solar.quad.lo);
        CHECK(c.quad <= cfg.ranges.solar.quad.hi);
        sum += c.quad;
    }
    const double mean = sum / cfg.n_solar;
    const double mid = 0.5 * (cfg.ranges.solar.quad.lo + cfg.ranges.solar.quad.hi);
    CHECK(std::abs(mean - mid) <= 0.01);
}

TEST_CASE("a consumer range pair allowing a vanishing derivative is rejected") {
    CommunityConfig cfg = paper_preset();
    cfg.ranges.consumer.quad = {0.0, 2.0};
    cfg.ranges.consumer.quart = {0.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.ranges.consumer.quart = {0.5, 2.0};  // quart bounded away from zero is fine
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("malformed ranges are rejected") {
    CommunityConfig cfg = paper_preset();
    cfg.ranges.wind.quad = {2.0, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.ranges.wind.quad = {-0.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("explicit cost lists bypass sampling") {
    CommunityConfig cfg = tiny_preset();
    CostPopulation costs;
    for (int i = 0; i < 3; ++i) costs.solar.push_back(CostFunction::solar(1.0 + i, 0.5));
    for (int j = 0; j < 3; ++j) costs.wind.push_back(CostFunction::wind(0.7, 0.1 * j));
    for (int u = 0; u < 3; ++u) costs.consumer.push_back(CostFunction::consumer(0.9, 0.4, 0.2));
    cfg.explicit_costs = costs;
    const CostPopulation pop = sample_population(cfg);
    CHECK(pop.solar[2].quad == doctest::Approx(3.0));
    CHECK(pop.wind[1].offset == doctest::Approx(0.1));

    cfg.explicit_costs->solar.pop_back();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("total cost sums every agent") {
    CommunityConfig cfg = tiny_preset();
    CostPopulation costs;
    for (int i = 0; i < 3; ++i) costs.solar.push_back(CostFunction::solar(1.0, 1.0));
    for (int j = 0; j < 3; ++j) costs.wind.push_back(CostFunction::wind(1.0, 0.5));
    for (int u = 0; u < 3; ++u) costs.consumer.push_back(CostFunction::consumer(1.0, 1.0, 0.0));
    const std::vector<double> ones(3, 1.0);
    // 3 * f(1) + 3 * g(1) + 3 * h(1) = 3*3 + 3*2.5 + 3*2
    CHECK(total_cost(costs, ones, ones, ones) == doctest::Approx(3 * 3.0 + 3 * 2.5 + 3 * 2.0));
    const std::vector<double> two(2, 1.0);
    CHECK_THROWS_AS(total_cost(costs, two, ones, ones), std::invalid_argument);
}

TEST_CASE("capacity invariants are enforced") {
    CommunityConfig cfg = paper_preset();
    cfg.cap_solar = 101.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = paper_preset();
    cfg.cap_wind = 80.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = paper_preset();
    cfg.gain_solar = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = paper_preset();
    cfg.theta_init = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
