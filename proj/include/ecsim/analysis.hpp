#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ecsim/cost.hpp"
#include "ecsim/engine.hpp"

namespace ecsim {

inline constexpr double kDefaultGapBinWidth = 0.01;
inline constexpr double kInteriorMargin = 1e-3;

// Histogram of |final_i - star_i|, binned [b*w, (b+1)*w) from zero upward.
struct GapHistogram {
    double bin_width = kDefaultGapBinWidth;
    std::vector<std::int64_t> counts;
};

inline GapHistogram abs_gap_histogram(std::span<const double> final_avg,
                                      std::span<const double> star,
                                      double bin_width = kDefaultGapBinWidth) {
    if (final_avg.size() != star.size())
        throw std::invalid_argument("gap histogram inputs differ in length");
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    GapHistogram hist{bin_width, {}};
    for (std::size_t i = 0; i < final_avg.size(); ++i) {
        const double gap = std::abs(final_avg[i] - star[i]);
        const auto bin = static_cast<std::size_t>(gap / bin_width);
        if (hist.counts.size() <= bin) hist.counts.resize(bin + 1, 0);
        ++hist.counts[bin];
    }
    return hist;
}

inline double mean_abs_gap(std::span<const double> final_avg, std::span<const double> star) {
    if (final_avg.size() != star.size())
        throw std::invalid_argument("gap inputs differ in length");
    if (final_avg.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < final_avg.size(); ++i) sum += std::abs(final_avg[i] - star[i]);
    return sum / static_cast<double>(final_avg.size());
}

// Ratio of the community cost at each recorded step to the optimal cost.
inline std::vector<std::pair<std::int64_t, double>> cost_ratio_series(
    std::span<const StepRecord> trace, double oracle_cost) {
    if (!(oracle_cost > 0.0)) throw std::invalid_argument("oracle cost must be positive");
    std::vector<std::pair<std::int64_t, double>> series;
    series.reserve(trace.size());
    for (const auto& rec : trace) series.emplace_back(rec.step, rec.total_cost / oracle_cost);
    return series;
}

// Spread of the marginal costs at the given shares, over coordinates away
// from the box edges. At the optimum every interior marginal cost equals the
// population's multiplier, so this tends to zero as a run converges.
inline double derivative_dispersion(std::span<const double> shares,
                                    std::span<const CostFunction> costs,
                                    double interior_margin = kInteriorMargin) {
    if (shares.size() != costs.size())
        throw std::invalid_argument("dispersion inputs differ in length");
    std::vector<double> derivs;
    derivs.reserve(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i)
        if (shares[i] > interior_margin && shares[i] < 1.0 - interior_margin)
            derivs.push_back(costs[i].derivative(shares[i]));
    if (derivs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double d : derivs) mean += d;
    mean /= static_cast<double>(derivs.size());
    double var = 0.0;
    for (double d : derivs) var += (d - mean) * (d - mean);
    return std::sqrt(var / static_cast<double>(derivs.size()));
}

} // namespace ecsim
