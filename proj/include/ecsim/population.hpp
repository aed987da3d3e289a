#pragma once

#include <span>

#include "ecsim/config.hpp"
#include "ecsim/rng.hpp"

namespace ecsim {

// Draws the community's cost functions from the configured ranges, i.i.d.
// uniform, on the dedicated population stream. Draw order is fixed: solar
// agents (quad, quart), then wind (quad, offset), then consumer
// (quad, quart, offset).
inline CostPopulation sample_population(const CommunityConfig& cfg) {
    cfg.validate();
    if (cfg.explicit_costs)
        return *cfg.explicit_costs;

    RandomStream stream = derive_stream(cfg.seed, StreamFamily::population);
    CostPopulation pop;
    pop.solar.reserve(cfg.n_solar);
    pop.wind.reserve(cfg.n_wind);
    pop.consumer.reserve(cfg.n_consumers);

    for (int i = 0; i < cfg.n_solar; ++i) {
        const double quad = stream.uniform(cfg.ranges.solar.quad.lo, cfg.ranges.solar.quad.hi);
        const double quart = stream.uniform(cfg.ranges.solar.quart.lo, cfg.ranges.solar.quart.hi);
        pop.solar.push_back(CostFunction::solar(quad, quart));
    }
    for (int j = 0; j < cfg.n_wind; ++j) {
        const double quad = stream.uniform(cfg.ranges.wind.quad.lo, cfg.ranges.wind.quad.hi);
        const double offset = stream.uniform(cfg.ranges.wind.offset.lo, cfg.ranges.wind.offset.hi);
        pop.wind.push_back(CostFunction::wind(quad, offset));
    }
    for (int u = 0; u < cfg.n_consumers; ++u) {
        const double quad = stream.uniform(cfg.ranges.consumer.quad.lo, cfg.ranges.consumer.quad.hi);
        const double quart =
            stream.uniform(cfg.ranges.consumer.quart.lo, cfg.ranges.consumer.quart.hi);
        const double offset =
            stream.uniform(cfg.ranges.consumer.offset.lo, cfg.ranges.consumer.offset.hi);
        pop.consumer.push_back(CostFunction::consumer(quad, quart, offset));
    }
    return pop;
}

// Sum of all agents' costs at the given activity shares.
inline double total_cost(const CostPopulation& costs, std::span<const double> solar,
                         std::span<const double> wind, std::span<const double> consumer) {
    if (solar.size() != costs.solar.size() || wind.size() != costs.wind.size() ||
        consumer.size() != costs.consumer.size())
        throw std::invalid_argument("share vectors do not match the population sizes");
    double sum = 0.0;
    for (std::size_t i = 0; i < solar.size(); ++i) sum += costs.solar[i].value(solar[i]);
    for (std::size_t j = 0; j < wind.size(); ++j) sum += costs.wind[j].value(wind[j]);
    for (std::size_t u = 0; u < consumer.size(); ++u) sum += costs.consumer[u].value(consumer[u]);
    return sum;
}

} // namespace ecsim
