#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecsim/analysis.hpp"
#include "ecsim/config.hpp"
#include "ecsim/engine.hpp"
#include "ecsim/oracle.hpp"

// File formats of the CLI pipeline. All emitted files are self-describing:
// CSVs carry a header row, JSON metadata echoes the full effective
// configuration (including the sampled coefficients, so a run can be
// reproduced exactly from its own metadata).

namespace ecsim::io {

using ordered_json = nlohmann::ordered_json;

// Numeric CSV cells use 12 significant digits.
inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read file: " + path.string());
    return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

inline void expect_header(std::istream& in, const std::string& expected,
                          const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line) || line != expected)
        throw std::runtime_error(path.string() + ": expected header '" + expected + "'");
}

} // namespace detail

// ---------------------------------------------------------------- config ---

inline ordered_json range_to_json(const CoefRange& r) {
    return ordered_json::array({r.lo, r.hi});
}

inline CoefRange range_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("coefficient range must be a [lo, hi] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline ordered_json config_to_json(const CommunityConfig& cfg) {
    ordered_json j;
    j["populations"] = {{"solar", cfg.n_solar}, {"wind", cfg.n_wind}, {"consumers", cfg.n_consumers}};
    j["capacities"] = {{"solar", cfg.cap_solar}, {"wind", cfg.cap_wind}};
    j["gains"] = {{"solar", cfg.gain_solar}, {"wind", cfg.gain_wind}, {"consumer", cfg.gain_consumer}};
    j["theta"] = {{"init", cfg.theta_init}, {"min", cfg.theta_min}, {"max", cfg.theta_max}};
    j["horizon"] = cfg.horizon;
    j["seed"] = cfg.seed;
    j["record_every"] = cfg.record_every;
    ordered_json coef;
    coef["ranges"] = {
        {"solar", {{"quad", range_to_json(cfg.ranges.solar.quad)},
                   {"quart", range_to_json(cfg.ranges.solar.quart)}}},
        {"wind", {{"quad", range_to_json(cfg.ranges.wind.quad)},
                  {"offset", range_to_json(cfg.ranges.wind.offset)}}},
        {"consumer", {{"quad", range_to_json(cfg.ranges.consumer.quad)},
                      {"quart", range_to_json(cfg.ranges.consumer.quart)},
                      {"offset", range_to_json(cfg.ranges.consumer.offset)}}}};
    if (cfg.explicit_costs) {
        const auto& costs = *cfg.explicit_costs;
        ordered_json ex;
        ex["solar"] = ordered_json::array();
        for (const auto& c : costs.solar)
            ex["solar"].push_back({{"quad", c.quad}, {"quart", c.quart}});
        ex["wind"] = ordered_json::array();
        for (const auto& c : costs.wind)
            ex["wind"].push_back({{"quad", c.quad}, {"offset", c.offset}});
        ex["consumer"] = ordered_json::array();
        for (const auto& c : costs.consumer)
            ex["consumer"].push_back({{"quad", c.quad}, {"quart", c.quart}, {"offset", c.offset}});
        coef["explicit"] = std::move(ex);
    }
    j["coefficients"] = std::move(coef);
    return j;
}

inline CommunityConfig config_from_json(const ordered_json& j) {
    CommunityConfig cfg;
    const auto& pops = j.at("populations");
    cfg.n_solar = pops.at("solar").get<int>();
    cfg.n_wind = pops.at("wind").get<int>();
    cfg.n_consumers = pops.at("consumers").get<int>();
    const auto& caps = j.at("capacities");
    cfg.cap_solar = caps.at("solar").get<double>();
    cfg.cap_wind = caps.at("wind").get<double>();
    const auto& gains = j.at("gains");
    cfg.gain_solar = gains.at("solar").get<double>();
    cfg.gain_wind = gains.at("wind").get<double>();
    cfg.gain_consumer = gains.at("consumer").get<double>();
    const auto& theta = j.at("theta");
    cfg.theta_init = theta.at("init").get<double>();
    cfg.theta_min = theta.at("min").get<double>();
    cfg.theta_max = theta.at("max").get<double>();
    cfg.horizon = j.at("horizon").get<std::int64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.record_every = j.at("record_every").get<std::int64_t>();
    const auto& coef = j.at("coefficients");
    if (coef.contains("ranges")) {
        const auto& r = coef.at("ranges");
        cfg.ranges.solar.quad = range_from_json(r.at("solar").at("quad"));
        cfg.ranges.solar.quart = range_from_json(r.at("solar").at("quart"));
        cfg.ranges.wind.quad = range_from_json(r.at("wind").at("quad"));
        cfg.ranges.wind.offset = range_from_json(r.at("wind").at("offset"));
        cfg.ranges.consumer.quad = range_from_json(r.at("consumer").at("quad"));
        cfg.ranges.consumer.quart = range_from_json(r.at("consumer").at("quart"));
        cfg.ranges.consumer.offset = range_from_json(r.at("consumer").at("offset"));
    }
    if (coef.contains("explicit")) {
        const auto& ex = coef.at("explicit");
        CostPopulation costs;
        for (const auto& c : ex.at("solar"))
            costs.solar.push_back(
                CostFunction::solar(c.at("quad").get<double>(), c.at("quart").get<double>()));
        for (const auto& c : ex.at("wind"))
            costs.wind.push_back(
                CostFunction::wind(c.at("quad").get<double>(), c.at("offset").get<double>()));
        for (const auto& c : ex.at("consumer"))
            costs.consumer.push_back(CostFunction::consumer(c.at("quad").get<double>(),
                                                            c.at("quart").get<double>(),
                                                            c.at("offset").get<double>()));
        cfg.explicit_costs = std::move(costs);
    }
    cfg.validate();
    return cfg;
}

inline void save_config(const std::filesystem::path& path, const CommunityConfig& cfg) {
    auto out = detail::open_out(path);
    out << config_to_json(cfg).dump(2) << '\n';
}

inline CommunityConfig load_config(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

// ----------------------------------------------------------------- trace ---

inline constexpr const char* kTraceHeader =
    "step,thetaSolar,thetaWind,thetaConsumer,activeSolar,activeWind,activeConsumers,totalCost";

inline void write_trace_csv(const std::filesystem::path& path,
                            std::span<const StepRecord> trace) {
    auto out = detail::open_out(path);
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << r.step << ',' << fmt12(r.thetas.solar) << ',' << fmt12(r.thetas.wind) << ','
            << fmt12(r.thetas.consumer) << ',' << r.active_solar << ',' << r.active_wind << ','
            << r.active_consumers << ',' << fmt12(r.total_cost) << '\n';
    }
}

inline std::vector<StepRecord> read_trace_csv(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    detail::expect_header(in, kTraceHeader, path);
    std::vector<StepRecord> trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 8) throw std::runtime_error(path.string() + ": malformed trace row");
        StepRecord r;
        r.step = std::stoll(cells[0]);
        r.thetas = {std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])};
        r.active_solar = std::stoi(cells[4]);
        r.active_wind = std::stoi(cells[5]);
        r.active_consumers = std::stoi(cells[6]);
        r.total_cost = std::stod(cells[7]);
        trace.push_back(r);
    }
    return trace;
}

// ------------------------------------------------------- per-agent tables ---

struct AgentTable {
    std::vector<double> solar;
    std::vector<double> wind;
    std::vector<double> consumer;
};

namespace detail {

inline void write_agent_table(const std::filesystem::path& path, const std::string& header,
                              const AgentTable& table) {
    auto out = open_out(path);
    out << header << '\n';
    auto dump = [&](const char* kind, const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out << kind << ',' << i << ',' << fmt12(values[i]) << '\n';
    };
    dump("solar", table.solar);
    dump("wind", table.wind);
    dump("consumer", table.consumer);
}

inline AgentTable read_agent_table(const std::filesystem::path& path, const std::string& header) {
    auto in = open_in(path);
    expect_header(in, header, path);
    AgentTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) throw std::runtime_error(path.string() + ": malformed row");
        const double v = std::stod(cells[2]);
        if (cells[0] == "solar")
            table.solar.push_back(v);
        else if (cells[0] == "wind")
            table.wind.push_back(v);
        else if (cells[0] == "consumer")
            table.consumer.push_back(v);
        else
            throw std::runtime_error(path.string() + ": unknown population '" + cells[0] + "'");
    }
    return table;
}

} // namespace detail

inline constexpr const char* kAveragesHeader = "kind,index,average";
inline constexpr const char* kSolutionHeader = "kind,index,optimal";

inline void write_final_averages_csv(const std::filesystem::path& path,
                                     const SimulationResult& result) {
    detail::write_agent_table(path, kAveragesHeader,
                              {result.final_solar, result.final_wind, result.final_consumers});
}

inline AgentTable read_final_averages_csv(const std::filesystem::path& path) {
    return detail::read_agent_table(path, kAveragesHeader);
}

inline void write_solution_csv(const std::filesystem::path& path, const OracleSolution& sol) {
    detail::write_agent_table(path, kSolutionHeader, {sol.x_star, sol.y_star, sol.z_star});
}

inline AgentTable read_solution_csv(const std::filesystem::path& path) {
    return detail::read_agent_table(path, kSolutionHeader);
}

// ------------------------------------------------------------- meta files ---

// Effective config (with the sampled coefficients inlined) plus run summary.
inline void write_run_meta(const std::filesystem::path& path, const SimulationResult& result) {
    CommunityConfig echoed = result.config;
    echoed.explicit_costs = result.costs;
    ordered_json j;
    j["config"] = config_to_json(echoed);
    const StepRecord& last = result.trace.back();
    j["run"] = {{"steps", result.config.horizon},
                {"records", result.trace.size()},
                {"prob_min", result.prob_min},
                {"prob_max", result.prob_max},
                {"final_step", last.step},
                {"final_thetas",
                 {{"solar", last.thetas.solar},
                  {"wind", last.thetas.wind},
                  {"consumer", last.thetas.consumer}}},
                {"final_active",
                 {{"solar", last.active_solar},
                  {"wind", last.active_wind},
                  {"consumers", last.active_consumers}}},
                {"final_total_cost", last.total_cost}};
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

inline CommunityConfig read_run_meta_config(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    ordered_json j;
    try {
        in >> j;
        return config_from_json(j.at("config"));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

inline void write_solve_meta(const std::filesystem::path& path, const OracleSolution& sol,
                             const CommunityConfig& cfg, double optimal) {
    ordered_json j;
    j["populations"] = {{"solar", cfg.n_solar}, {"wind", cfg.n_wind}, {"consumers", cfg.n_consumers}};
    j["capacities"] = {{"solar", cfg.cap_solar},
                       {"wind", cfg.cap_wind},
                       {"consumer", cfg.cap_solar + cfg.cap_wind}};
    j["lambda"] = {{"solar", sol.lambda_solar},
                   {"wind", sol.lambda_wind},
                   {"consumer", sol.lambda_consumer}};
    j["kkt_residual"] = sol.kkt_residual;
    j["optimal_cost"] = optimal;
    j["seed"] = cfg.seed;
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

// ------------------------------------------------------- compare outputs ---

inline void write_compare_csv(const std::filesystem::path& path, const AgentTable& averages,
                              const AgentTable& optima) {
    auto out = detail::open_out(path);
    out << "kind,index,average,optimal,absGap\n";
    auto dump = [&](const char* kind, const std::vector<double>& avg,
                    const std::vector<double>& star) {
        for (std::size_t i = 0; i < avg.size(); ++i)
            out << kind << ',' << i << ',' << fmt12(avg[i]) << ',' << fmt12(star[i]) << ','
                << fmt12(std::abs(avg[i] - star[i])) << '\n';
    };
    dump("solar", averages.solar, optima.solar);
    dump("wind", averages.wind, optima.wind);
    dump("consumer", averages.consumer, optima.consumer);
}

inline void write_histograms_csv(const std::filesystem::path& path, const GapHistogram& solar,
                                 const GapHistogram& wind, const GapHistogram& consumer) {
    auto out = detail::open_out(path);
    out << "population,binLow,binHigh,count\n";
    auto dump = [&](const char* kind, const GapHistogram& h) {
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            out << kind << ',' << fmt12(b * h.bin_width) << ',' << fmt12((b + 1) * h.bin_width)
                << ',' << h.counts[b] << '\n';
    };
    dump("solar", solar);
    dump("wind", wind);
    dump("consumer", consumer);
}

inline void write_cost_ratio_csv(const std::filesystem::path& path,
                                 std::span<const std::pair<std::int64_t, double>> series) {
    auto out = detail::open_out(path);
    out << "step,ratio\n";
    for (const auto& [step, ratio] : series) out << step << ',' << fmt12(ratio) << '\n';
}

struct CompareMetrics {
    double mean_gap_solar = 0.0, mean_gap_wind = 0.0, mean_gap_consumer = 0.0;
    double final_cost_ratio = 0.0;
    double dispersion_solar = 0.0, dispersion_wind = 0.0, dispersion_consumer = 0.0;
};

inline void write_metrics(const std::filesystem::path& path, const CompareMetrics& m) {
    ordered_json j;
    j["meanAbsGap"] = {{"solar", m.mean_gap_solar},
                       {"wind", m.mean_gap_wind},
                       {"consumer", m.mean_gap_consumer}};
    j["finalCostRatio"] = m.final_cost_ratio;
    j["derivativeDispersion"] = {{"solar", m.dispersion_solar},
                                 {"wind", m.dispersion_wind},
                                 {"consumer", m.dispersion_consumer}};
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace ecsim::io
