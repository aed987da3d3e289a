// Command-line front end: simulate | solve | compare | gen-config.
//
// simulate    run the community simulation, write trace + final averages
// solve       solve the allocation problem centrally for the same population
// compare     per-agent gaps, histograms, cost-ratio series, summary metrics
// gen-config  emit a ready-to-run configuration file

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecsim/ecsim.hpp"

namespace fs = std::filesystem;

namespace {

void apply_overrides(ecsim::CommunityConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::int64_t>& steps,
                     const std::optional<std::int64_t>& record_every,
                     const std::optional<double>& gain_solar,
                     const std::optional<double>& gain_wind,
                     const std::optional<double>& gain_consumer) {
    if (seed) cfg.seed = *seed;
    if (steps) cfg.horizon = *steps;
    if (record_every) cfg.record_every = *record_every;
    if (gain_solar) cfg.gain_solar = *gain_solar;
    if (gain_wind) cfg.gain_wind = *gain_wind;
    if (gain_consumer) cfg.gain_consumer = *gain_consumer;
    cfg.validate();
}

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir,
                 const std::optional<std::uint64_t>& seed, const std::optional<std::int64_t>& steps,
                 const std::optional<std::int64_t>& record_every,
                 const std::optional<double>& gain_solar, const std::optional<double>& gain_wind,
                 const std::optional<double>& gain_consumer) {
    ecsim::CommunityConfig cfg = ecsim::io::load_config(config_path);
    apply_overrides(cfg, seed, steps, record_every, gain_solar, gain_wind, gain_consumer);
    const ecsim::SimulationResult result = ecsim::run(cfg);
    fs::create_directories(out_dir);
    ecsim::io::write_trace_csv(out_dir / "trace.csv", result.trace);
    ecsim::io::write_final_averages_csv(out_dir / "final_averages.csv", result);
    ecsim::io::write_run_meta(out_dir / "run_meta.json", result);
    return 0;
}

int cmd_solve(const fs::path& config_path, const fs::path& out_dir) {
    ecsim::CommunityConfig cfg = ecsim::io::load_config(config_path);
    const ecsim::CostPopulation costs = ecsim::sample_population(cfg);
    const ecsim::OracleSolution sol = ecsim::solve_full(costs, cfg);
    const double optimal = ecsim::optimal_cost(sol, costs);
    fs::create_directories(out_dir);
    ecsim::io::write_solution_csv(out_dir / "solution.csv", sol);
    ecsim::io::write_solve_meta(out_dir / "solve_meta.json", sol, cfg, optimal);
    return 0;
}

int cmd_compare(const fs::path& run_dir, const fs::path& solve_dir, const fs::path& out_dir,
                double bin_width) {
    const ecsim::CommunityConfig cfg =
        ecsim::io::read_run_meta_config(run_dir / "run_meta.json");
    const ecsim::io::AgentTable averages =
        ecsim::io::read_final_averages_csv(run_dir / "final_averages.csv");
    const auto trace = ecsim::io::read_trace_csv(run_dir / "trace.csv");
    const ecsim::io::AgentTable optima = ecsim::io::read_solution_csv(solve_dir / "solution.csv");

    auto sizes_match = [](const ecsim::io::AgentTable& t, const ecsim::CommunityConfig& c) {
        return t.solar.size() == static_cast<std::size_t>(c.n_solar) &&
               t.wind.size() == static_cast<std::size_t>(c.n_wind) &&
               t.consumer.size() == static_cast<std::size_t>(c.n_consumers);
    };
    if (!sizes_match(averages, cfg) || !sizes_match(optima, cfg))
        throw std::runtime_error("population mismatch between run and solve outputs");
    if (trace.empty()) throw std::runtime_error("run trace is empty");
    if (!cfg.explicit_costs)
        throw std::runtime_error("run metadata lacks the sampled cost coefficients");
    const ecsim::CostPopulation& costs = *cfg.explicit_costs;

    ecsim::OracleSolution sol;
    sol.x_star = optima.solar;
    sol.y_star = optima.wind;
    sol.z_star = optima.consumer;
    const double oracle_cost = ecsim::optimal_cost(sol, costs);

    fs::create_directories(out_dir);
    ecsim::io::write_compare_csv(out_dir / "compare.csv", averages, optima);
    ecsim::io::write_histograms_csv(
        out_dir / "histograms.csv",
        ecsim::abs_gap_histogram(averages.solar, optima.solar, bin_width),
        ecsim::abs_gap_histogram(averages.wind, optima.wind, bin_width),
        ecsim::abs_gap_histogram(averages.consumer, optima.consumer, bin_width));
    const auto series = ecsim::cost_ratio_series(trace, oracle_cost);
    ecsim::io::write_cost_ratio_csv(out_dir / "cost_ratio.csv", series);

    ecsim::io::CompareMetrics metrics;
    metrics.mean_gap_solar = ecsim::mean_abs_gap(averages.solar, optima.solar);
    metrics.mean_gap_wind = ecsim::mean_abs_gap(averages.wind, optima.wind);
    metrics.mean_gap_consumer = ecsim::mean_abs_gap(averages.consumer, optima.consumer);
    metrics.final_cost_ratio = series.back().second;
    metrics.dispersion_solar = ecsim::derivative_dispersion(averages.solar, costs.solar);
    metrics.dispersion_wind = ecsim::derivative_dispersion(averages.wind, costs.wind);
    metrics.dispersion_consumer = ecsim::derivative_dispersion(averages.consumer, costs.consumer);
    ecsim::io::write_metrics(out_dir / "metrics.json", metrics);
    return 0;
}

int cmd_gen_config(const std::string& preset, const fs::path& out_path) {
    ecsim::CommunityConfig cfg;
    if (preset == "paper")
        cfg = ecsim::paper_preset();
    else if (preset == "tiny")
        cfg = ecsim::tiny_preset();
    else if (preset == "symmetric")
        cfg = ecsim::symmetric_preset();
    else
        throw std::runtime_error("unknown preset '" + preset +
                                 "' (available: paper, tiny, symmetric)");
    cfg.validate();
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    ecsim::io::save_config(out_path, cfg);
    return 0;
}

int fail(const std::string& command, const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"command", command}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy community duty-cycle simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, run_dir, solve_dir, preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> steps, record_every;
    std::optional<double> gain_solar, gain_wind, gain_consumer;
    double bin_width = ecsim::kDefaultGapBinWidth;

    auto* simulate = app.add_subcommand("simulate", "run the stochastic simulation");
    simulate->add_option("--config", config_path, "configuration file")->required();
    simulate->add_option("--out", out_path, "output directory")->required();
    simulate->add_option("--seed", seed, "override the master seed");
    simulate->add_option("--steps", steps, "override the horizon");
    simulate->add_option("--record-every", record_every, "override the trace thinning");
    simulate->add_option("--gain-solar", gain_solar, "override the solar gain");
    simulate->add_option("--gain-wind", gain_wind, "override the wind gain");
    simulate->add_option("--gain-consumer", gain_consumer, "override the consumer gain");

    auto* solve = app.add_subcommand("solve", "solve the allocation problem centrally");
    solve->add_option("--config", config_path, "configuration file")->required();
    solve->add_option("--out", out_path, "output directory")->required();

    auto* compare = app.add_subcommand("compare", "compare a run against a central solution");
    compare->add_option("run_dir", run_dir, "directory written by simulate")->required();
    compare->add_option("solve_dir", solve_dir, "directory written by solve")->required();
    compare->add_option("--out", out_path, "output directory")->required();
    compare->add_option("--bin-width", bin_width, "gap histogram bin width");

    auto* gen = app.add_subcommand("gen-config", "write a preset configuration file");
    gen->add_option("preset", preset, "one of: paper, tiny, symmetric")->required();
    gen->add_option("--out", out_path, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(config_path, out_path, seed, steps, record_every, gain_solar,
                                gain_wind, gain_consumer);
        if (solve->parsed()) return cmd_solve(config_path, out_path);
        if (compare->parsed()) return cmd_compare(run_dir, solve_dir, out_path, bin_width);
        if (gen->parsed()) return cmd_gen_config(preset, out_path);
    } catch (const std::exception& e) {
        return fail(app.get_subcommands().front()->get_name(), e);
    }
    return 0;
}
