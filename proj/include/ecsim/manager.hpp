#pragma once

#include <algorithm>
#include <cstdint>

#include "ecsim/agent.hpp"
#include "ecsim/config.hpp"

namespace ecsim {

// The community manager's side of the protocol: integrate the gap between
// the realized active counts of step k and their targets, with step size
// gain/(k+1), then clamp so the broadcast scalar stays usable as a
// probability scale. A positive floor lets the signal recover through later
// updates instead of dying at zero.

inline double clamp_theta(double theta, const CommunityConfig& cfg) noexcept {
    return std::clamp(theta, cfg.theta_min, cfg.theta_max);
}

inline double update_theta_solar(double theta, std::int64_t k, int active_solar,
                                 const CommunityConfig& cfg) noexcept {
    const double step = cfg.gain_solar / static_cast<double>(k + 1);
    return clamp_theta(theta - step * (static_cast<double>(active_solar) - cfg.cap_solar), cfg);
}

inline double update_theta_wind(double theta, std::int64_t k, int active_wind,
                                const CommunityConfig& cfg) noexcept {
    const double step = cfg.gain_wind / static_cast<double>(k + 1);
    return clamp_theta(theta - step * (static_cast<double>(active_wind) - cfg.cap_wind), cfg);
}

// Consumers chase the realized prosumer activity of the same step, not a
// fixed capacity.
inline double update_theta_consumer(double theta, std::int64_t k, int active_consumers,
                                    int active_solar, int active_wind,
                                    const CommunityConfig& cfg) noexcept {
    const double step = cfg.gain_consumer / static_cast<double>(k + 1);
    const double gap = static_cast<double>(active_consumers) -
                       static_cast<double>(active_solar) - static_cast<double>(active_wind);
    return clamp_theta(theta - step * gap, cfg);
}

// All three signals advanced from the step-k activity counts.
inline FeedbackSignals update_signals(const FeedbackSignals& signals, std::int64_t k,
                                      int active_solar, int active_wind, int active_consumers,
                                      const CommunityConfig& cfg) noexcept {
    return {update_theta_solar(signals.solar, k, active_solar, cfg),
            update_theta_wind(signals.wind, k, active_wind, cfg),
            update_theta_consumer(signals.consumer, k, active_consumers, active_solar,
                                  active_wind, cfg)};
}

} // namespace ecsim
