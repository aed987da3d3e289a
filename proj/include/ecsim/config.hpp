#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecsim/cost.hpp"

namespace ecsim {

// Closed interval a coefficient is drawn from, uniformly.
struct CoefRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct SolarCoefRanges {
    CoefRange quad{0.5, 2.0};
    CoefRange quart{0.5, 2.0};
};

struct WindCoefRanges {
    CoefRange quad{0.5, 2.0};
    CoefRange offset{0.5, 2.0};
};

struct ConsumerCoefRanges {
    CoefRange quad{0.5, 2.0};
    CoefRange quart{0.5, 2.0};
    CoefRange offset{0.0, 1.0};
};

struct CoefRanges {
    SolarCoefRanges solar{};
    WindCoefRanges wind{};
    ConsumerCoefRanges consumer{};
};

// The costs of every agent, index-aligned with the populations.
struct CostPopulation {
    std::vector<CostFunction> solar;
    std::vector<CostFunction> wind;
    std::vector<CostFunction> consumer;
};

struct CommunityConfig {
    int n_solar = 100;
    int n_wind = 80;
    int n_consumers = 160;

    double cap_solar = 50.0;   // target sum of solar activity shares
    double cap_wind = 60.0;    // target sum of wind activity shares

    double gain_solar = 0.1;
    double gain_wind = 0.1;
    double gain_consumer = 0.1;

    double theta_init = 0.35;
    double theta_min = 1e-6;
    double theta_max = 20.0;

    std::int64_t horizon = 20000;
    std::uint64_t seed = 42;
    std::int64_t record_every = 1;

    CoefRanges ranges{};

    // When set, sampling is skipped and these costs are used verbatim. This
    // is how a sampled population is reproduced exactly from a run's metadata.
    std::optional<CostPopulation> explicit_costs{};

    void validate() const;
};

namespace detail {

inline void check_range(const CoefRange& r, const std::string& name) {
    if (!(r.lo <= r.hi))
        throw std::invalid_argument("coefficient range " + name + " has lo > hi");
    if (r.lo < 0.0)
        throw std::invalid_argument("coefficient range " + name + " is negative");
}

} // namespace detail

inline void CommunityConfig::validate() const {
    if (n_solar < 1 || n_wind < 1 || n_consumers < 1)
        throw std::invalid_argument("population sizes must be positive");
    if (!(cap_solar > 0.0) || !(cap_wind > 0.0))
        throw std::invalid_argument("capacities must be positive");
    // Activity shares live in [0,1], so a capacity above the population size
    // makes the allocation constraints infeasible.
    if (cap_solar > static_cast<double>(n_solar))
        throw std::invalid_argument("cap_solar exceeds the solar population size");
    if (cap_wind > static_cast<double>(n_wind))
        throw std::invalid_argument("cap_wind exceeds the wind population size");
    // Zero gains freeze the feedback signals; useful for diagnostics, so the
    // open interval from the model is widened to [0,1) here.
    for (double g : {gain_solar, gain_wind, gain_consumer})
        if (!(g >= 0.0 && g < 1.0))
            throw std::invalid_argument("gains must lie in [0,1)");
    if (!(theta_min > 0.0) || !(theta_min < theta_max))
        throw std::invalid_argument("need 0 < theta_min < theta_max");
    if (!(theta_init >= theta_min && theta_init <= theta_max))
        throw std::invalid_argument("theta_init outside [theta_min, theta_max]");
    if (horizon < 1)
        throw std::invalid_argument("horizon must be positive");
    if (record_every < 1)
        throw std::invalid_argument("record_every must be positive");

    detail::check_range(ranges.solar.quad, "solar.quad");
    detail::check_range(ranges.solar.quart, "solar.quart");
    detail::check_range(ranges.wind.quad, "wind.quad");
    detail::check_range(ranges.wind.offset, "wind.offset");
    detail::check_range(ranges.consumer.quad, "consumer.quad");
    detail::check_range(ranges.consumer.quart, "consumer.quart");
    detail::check_range(ranges.consumer.offset, "consumer.offset");
    if (ranges.consumer.quad.lo <= 0.0 && ranges.consumer.quart.lo <= 0.0)
        throw std::invalid_argument(
            "consumer ranges permit quad = 0 with quart = 0 (vanishing derivative)");

    if (explicit_costs) {
        const auto& c = *explicit_costs;
        if (c.solar.size() != static_cast<std::size_t>(n_solar) ||
            c.wind.size() != static_cast<std::size_t>(n_wind) ||
            c.consumer.size() != static_cast<std::size_t>(n_consumers))
            throw std::invalid_argument("explicit cost lists do not match the population sizes");
    }
}

// The experiment of record: N=100 solar, M=80 wind, U=160 consumers,
// capacities 50/60, theta(0) = 0.350.
inline CommunityConfig paper_preset() {
    return CommunityConfig{};
}

// Three agents per population; smoke-test scale.
inline CommunityConfig tiny_preset() {
    CommunityConfig cfg;
    cfg.n_solar = 3;
    cfg.n_wind = 3;
    cfg.n_consumers = 3;
    cfg.cap_solar = 1.5;
    cfg.cap_wind = 1.5;
    cfg.horizon = 2000;
    return cfg;
}

// Paper-scale populations with degenerate ranges: every agent within a
// population is identical, so optimal allocations are equal splits.
inline CommunityConfig symmetric_preset() {
    CommunityConfig cfg;
    cfg.ranges.solar = {{1.0, 1.0}, {1.0, 1.0}};
    cfg.ranges.wind = {{1.0, 1.0}, {1.0, 1.0}};
    cfg.ranges.consumer = {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    return cfg;
}

} // namespace ecsim
