// SPDX-License-Identifier: Apache-2.0
// dfrc: experiment driver. Exit codes: 0 ok, 2 config error, 3 every sweep
// point infeasible, 4 solver failure.
#include "dfrc/errors.hpp"
#include "dfrc/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace {

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kSolver = 4 };

bool all_infeasible(const dfrc::ResultTable& t) {
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.text(i, "scenario").empty()) continue;
        const auto& cols = t.columns();
        if (std::find(cols.begin(), cols.end(), "feasible_trials") != cols.end()) {
            if (t.text(i, "mode") == "gain") continue;
            any = true;
            if (t.number(i, "feasible_trials") > 0) return false;
            continue;
        }
        if (std::find(cols.begin(), cols.end(), "series") != cols.end() && t.text(i, "series") != "optimized")
            continue;
        any = true;
        if (t.text(i, "status") != "infeasible") return false;
    }
    return any;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beamforming experiments for a dual-function radar-communication transmitter"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    std::optional<std::uint64_t> seed;
    int workers = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "output file; defaults to output_path from the config, else stdout");
        sub->add_option("--seed", seed, "overrides the channel and simulation seeds");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", workers, "parallel Monte Carlo trials")->check(CLI::PositiveNumber);
    };
    std::function<dfrc::ResultTable(const dfrc::ScenarioConfig&)> run;
    auto* tradeoff = app.add_subcommand("tradeoff", "radar SINR versus the user SINR target");
    auto* pattern = app.add_subcommand("beampattern", "transmit and joint beampatterns");
    auto* conv = app.add_subcommand("convergence", "radar SINR per outer iteration");
    auto* mc = app.add_subcommand("mc-sweep", "Rayleigh Monte Carlo averages");
    for (auto* s : {tradeoff, pattern, conv, mc}) add_common(s);
    tradeoff->callback([&] { run = dfrc::run_tradeoff; });
    pattern->callback([&] { run = dfrc::run_beampattern; });
    conv->callback([&] { run = dfrc::run_convergence; });
    mc->callback([&] { run = [&](const dfrc::ScenarioConfig& c) { return dfrc::run_mc_sweep(c, {workers}); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    dfrc::ScenarioConfig cfg;
    try {
        cfg = dfrc::load_config(config_path);
        if (seed) {
            cfg.channels.seed = *seed;
            cfg.sim.seed = *seed;
        }
    } catch (const dfrc::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }

    std::optional<dfrc::ResultTable> table;
    try {
        table = run(cfg);
    } catch (const dfrc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const dfrc::Error& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolver;
    }

    if (out_path.empty()) out_path = cfg.output_path;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "cannot write " << out_path << '\n';
            return kConfig;
        }
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    if (format == "json") table->write_json(os);
    else table->write_csv(os);

    return all_infeasible(*table) ? kInfeasible : kOk;
}
