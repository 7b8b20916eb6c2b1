// photon-memory-sim: scenario-driven driver for the cavity photon-storage
// simulations. See README.md for the config format and output schemas.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pms/runner.hpp"

namespace {

const char* kPlotStub = R"(#!/usr/bin/env python3
# Minimal plotting stub for photon-memory-sim CSV outputs.
import sys
import matplotlib.pyplot as plt
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else "out/record.csv"
df = pd.read_csv(path)
x = df.columns[0]
for col in df.columns[1:]:
    if df[col].dtype.kind in "fc":
        plt.plot(df[x], df[col], label=col)
plt.xlabel(x)
plt.legend()
plt.tight_layout()
plt.show()
)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-photon storage in a cavity-coupled three-level atom"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 1;
    bool print_cfg = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (flat key=value with [sections])");
        cmd->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
        cmd->add_option("--out", out_dir, "output directory (default: PMS_OUT or ./out)");
        cmd->add_flag("--print-config", print_cfg, "print the fully resolved config and exit");
    };

    CLI::App* sim = app.add_subcommand("simulate", "single storage run, record + pulse CSV");
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over gamma|kappa|Tc|kappa_loss|Delta");
    CLI::App* opt = app.add_subcommand("optimize", "piecewise-pulse optimization (lossless) + lossy evaluation");
    CLI::App* tcmin = app.add_subcommand("tcmin", "minimum storable coherence time vs g");
    CLI::App* chain = app.add_subcommand("retrieve-chain", "store/retrieve through a chain of identical nodes");
    CLI::App* stub = app.add_subcommand("plot-stub", "write a generic plotting script to stdout");
    for (CLI::App* c : {sim, sweep, opt, tcmin, chain}) add_common(c);

    CLI11_PARSE(app, argc, argv);

    if (stub->parsed()) {
        std::cout << kPlotStub;
        return 0;
    }

    pms::ScenarioConfig cfg;
    try {
        if (!config_path.empty()) cfg = pms::parse_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (jobs > 1) cfg.jobs = jobs;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pms::kConfigError;
    }

    if (print_cfg) {
        pms::print_config(std::cout, cfg);
        return 0;
    }

    pms::Scenario scenario = pms::Scenario::Simulate;
    if (sweep->parsed()) scenario = pms::Scenario::Sweep;
    else if (opt->parsed()) scenario = pms::Scenario::Optimize;
    else if (tcmin->parsed()) scenario = pms::Scenario::TcMin;
    else if (chain->parsed()) scenario = pms::Scenario::RetrieveChain;

    try {
        return pms::run_scenario(scenario, cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pms::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pms::kNumericError;
    }
}
