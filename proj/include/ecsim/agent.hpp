#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "ecsim/cost.hpp"
#include "ecsim/rng.hpp"

namespace ecsim {

enum class AgentKind { solar_prosumer, wind_prosumer, consumer };

// The three broadcast scalars. One immutable snapshot per step is shared by
// all agents; only the engine writes the next value.
struct FeedbackSignals {
    double solar = 0.0;
    double wind = 0.0;
    double consumer = 0.0;

    double select(AgentKind kind) const noexcept {
        switch (kind) {
            case AgentKind::solar_prosumer: return solar;
            case AgentKind::wind_prosumer: return wind;
            case AgentKind::consumer: return consumer;
        }
        return solar;
    }
};

// Per-agent state. Initialization forces one active step, so avg starts at 1
// and stays strictly positive: avg >= 1/steps_seen for every later step.
struct AgentState {
    bool active = true;      // activity bit of the step just completed
    double avg = 1.0;        // running mean of the bit history, in (0,1]
    std::int64_t steps_seen = 1;  // completed steps, i.e. k+1
};

// Count-based update of the running mean: avg*steps_seen is an integer count
// of active steps in exact arithmetic, so the recurrence tracks the direct
// mean of the whole bit history.
inline double update_running_average(double avg, std::int64_t steps_seen, int bit) noexcept {
    return (avg * static_cast<double>(steps_seen) + static_cast<double>(bit)) /
           static_cast<double>(steps_seen + 1);
}

// Activation probability: theta * avg / cost'(avg), clamped to a valid
// Bernoulli parameter. The raw value can exceed 1 when the derivative is
// small (consumer costs at small avg).
inline double response_probability(double avg, double theta, const CostFunction& cost) {
    const double d = cost.derivative(avg);
    if (!(d > 0.0))
        throw std::runtime_error("cost derivative vanished at avg = " + std::to_string(avg));
    return std::clamp(theta * avg / d, 0.0, 1.0);
}

struct AgentStepOutcome {
    AgentState state;
    double probability = 0.0;  // the clamped probability the draw used
};

// One decision step: draw the activity bit from the agent's private stream,
// fold it into the running average.
inline AgentStepOutcome agent_step(const AgentState& state, AgentKind kind,
                                   const FeedbackSignals& signals, const CostFunction& cost,
                                   RandomStream& stream) {
    const double p = response_probability(state.avg, signals.select(kind), cost);
    const bool bit = stream.bernoulli(p);
    return {AgentState{bit, update_running_average(state.avg, state.steps_seen, bit ? 1 : 0),
                       state.steps_seen + 1},
            p};
}

} // namespace ecsim
