#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecsim/agent.hpp"
#include "ecsim/config.hpp"
#include "ecsim/manager.hpp"
#include "ecsim/population.hpp"

namespace ecsim {

struct StepRecord {
    std::int64_t step = 0;
    FeedbackSignals thetas{};
    int active_solar = 0;
    int active_wind = 0;
    int active_consumers = 0;
    double total_cost = 0.0;  // sum of costs evaluated at the running averages
};

// Order in which agents are evaluated within a step. Results must not depend
// on it (each agent draws from its own stream); the knob exists so tests can
// assert exactly that.
enum class EvalOrder { forward, reverse, shuffled };

struct RunOptions {
    EvalOrder order = EvalOrder::forward;
    bool record_bits = false;  // keep per-agent bit histories (memory-heavy)
    std::uint64_t shuffle_seed = 0x5EEDULL;
};

// Bit histories for the steps 0..K, one row per agent; filled only on request.
struct BitHistory {
    std::vector<std::vector<std::uint8_t>> solar;
    std::vector<std::vector<std::uint8_t>> wind;
    std::vector<std::vector<std::uint8_t>> consumer;
};

struct SimulationResult {
    CommunityConfig config;  // effective config echo
    CostPopulation costs;    // the population the run used
    std::vector<double> final_solar;
    std::vector<double> final_wind;
    std::vector<double> final_consumers;
    std::vector<StepRecord> trace;
    double prob_min = 1.0;  // envelope of every response probability drawn
    double prob_max = 0.0;
    BitHistory bits{};
};

namespace detail {

struct AgentSlot {
    AgentKind kind;
    int index;  // within its population
};

} // namespace detail

// Runs the full simulation. Step 0 is the forced-active initialization (all
// bits 1, averages 1) under the initial signals; each later step k first
// advances the signals from the step k-1 counts, then lets every agent draw
// against that one snapshot, then aggregates.
inline SimulationResult run(const CommunityConfig& cfg, const RunOptions& opts = {}) {
    cfg.validate();

    SimulationResult result;
    result.config = cfg;
    result.costs = sample_population(cfg);
    const CostPopulation& costs = result.costs;

    const int n_solar = cfg.n_solar;
    const int n_wind = cfg.n_wind;
    const int n_consumers = cfg.n_consumers;

    std::vector<AgentState> solar(n_solar), wind(n_wind), consumers(n_consumers);
    std::vector<RandomStream> solar_rng(n_solar), wind_rng(n_wind), consumer_rng(n_consumers);
    for (int i = 0; i < n_solar; ++i)
        solar_rng[i] = derive_stream(cfg.seed, StreamFamily::solar_agent, i);
    for (int j = 0; j < n_wind; ++j)
        wind_rng[j] = derive_stream(cfg.seed, StreamFamily::wind_agent, j);
    for (int u = 0; u < n_consumers; ++u)
        consumer_rng[u] = derive_stream(cfg.seed, StreamFamily::consumer_agent, u);

    if (opts.record_bits) {
        auto init_rows = [&](std::vector<std::vector<std::uint8_t>>& rows, int n) {
            rows.assign(n, {});
            for (auto& row : rows) {
                row.reserve(cfg.horizon + 1);
                row.push_back(1);  // the forced-active step 0
            }
        };
        init_rows(result.bits.solar, n_solar);
        init_rows(result.bits.wind, n_wind);
        init_rows(result.bits.consumer, n_consumers);
    }

    // Evaluation schedule over the flattened agent index space.
    std::vector<detail::AgentSlot> schedule;
    schedule.reserve(n_solar + n_wind + n_consumers);
    for (int i = 0; i < n_solar; ++i) schedule.push_back({AgentKind::solar_prosumer, i});
    for (int j = 0; j < n_wind; ++j) schedule.push_back({AgentKind::wind_prosumer, j});
    for (int u = 0; u < n_consumers; ++u) schedule.push_back({AgentKind::consumer, u});
    if (opts.order == EvalOrder::reverse) {
        std::reverse(schedule.begin(), schedule.end());
    } else if (opts.order == EvalOrder::shuffled) {
        std::mt19937_64 gen(opts.shuffle_seed);
        std::shuffle(schedule.begin(), schedule.end(), gen);
    }

    // Total cost at the current averages, always accumulated in index order
    // so the value is independent of the evaluation schedule.
    std::vector<double> avg_solar(n_solar, 1.0), avg_wind(n_wind, 1.0),
        avg_consumers(n_consumers, 1.0);
    auto refresh_averages = [&] {
        for (int i = 0; i < n_solar; ++i) avg_solar[i] = solar[i].avg;
        for (int j = 0; j < n_wind; ++j) avg_wind[j] = wind[j].avg;
        for (int u = 0; u < n_consumers; ++u) avg_consumers[u] = consumers[u].avg;
    };
    auto cost_at_averages = [&] {
        return total_cost(costs, avg_solar, avg_wind, avg_consumers);
    };

    FeedbackSignals signals{cfg.theta_init, cfg.theta_init, cfg.theta_init};
    int active_solar = n_solar;
    int active_wind = n_wind;
    int active_consumers = n_consumers;

    result.trace.reserve(static_cast<std::size_t>(cfg.horizon / cfg.record_every) + 2);
    result.trace.push_back(
        {0, signals, active_solar, active_wind, active_consumers, cost_at_averages()});

    for (std::int64_t k = 1; k <= cfg.horizon; ++k) {
        // Broadcast snapshot for step k, from the step k-1 counts.
        signals = update_signals(signals, k - 1, active_solar, active_wind, active_consumers, cfg);

        try {
            for (const auto& slot : schedule) {
                AgentState* state = nullptr;
                const CostFunction* cost = nullptr;
                RandomStream* stream = nullptr;
                switch (slot.kind) {
                    case AgentKind::solar_prosumer:
                        state = &solar[slot.index];
                        cost = &costs.solar[slot.index];
                        stream = &solar_rng[slot.index];
                        break;
                    case AgentKind::wind_prosumer:
                        state = &wind[slot.index];
                        cost = &costs.wind[slot.index];
                        stream = &wind_rng[slot.index];
                        break;
                    case AgentKind::consumer:
                        state = &consumers[slot.index];
                        cost = &costs.consumer[slot.index];
                        stream = &consumer_rng[slot.index];
                        break;
                }
                const AgentStepOutcome outcome = agent_step(*state, slot.kind, signals, *cost, *stream);
                *state = outcome.state;
                result.prob_min = std::min(result.prob_min, outcome.probability);
                result.prob_max = std::max(result.prob_max, outcome.probability);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("step " + std::to_string(k) + ": " + e.what());
        }

        active_solar = 0;
        for (const auto& s : solar) active_solar += s.active ? 1 : 0;
        active_wind = 0;
        for (const auto& s : wind) active_wind += s.active ? 1 : 0;
        active_consumers = 0;
        for (const auto& s : consumers) active_consumers += s.active ? 1 : 0;

        if (opts.record_bits) {
            for (int i = 0; i < n_solar; ++i) result.bits.solar[i].push_back(solar[i].active);
            for (int j = 0; j < n_wind; ++j) result.bits.wind[j].push_back(wind[j].active);
            for (int u = 0; u < n_consumers; ++u)
                result.bits.consumer[u].push_back(consumers[u].active);
        }

        if (k % cfg.record_every == 0 || k == cfg.horizon) {
            refresh_averages();
            result.trace.push_back(
                {k, signals, active_solar, active_wind, active_consumers, cost_at_averages()});
        }
    }

    refresh_averages();
    result.final_solar = std::move(avg_solar);
    result.final_wind = std::move(avg_wind);
    result.final_consumers = std::move(avg_consumers);
    return result;
}

} // namespace ecsim
