#include "pms/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "pms/csv.hpp"
#include "pms/density.hpp"
#include "pms/io_model.hpp"

namespace pms {

namespace fs = std::filesystem;

namespace {

struct RunOutput {
    SimulationRecord rec;
    double eta = NAN, p_r = NAN, p_s = NAN, p_loss = NAN;
    bool ok = false;
    std::string error;
};

ControlPulse build_pulse(const ScenarioConfig& cfg, const SystemParams& p,
                         const PhotonEnvelope& env, PulseKind kind) {
    ControlPulse pulse;
    switch (kind) {
        case PulseKind::F:
            pulse = omega_F(p, env, omega_F_default_c1(p, env, cfg.rho0));
            break;
        case PulseKind::D: pulse = omega_D(p, env, cfg.rho0); break;
        case PulseKind::G: pulse = omega_G(p, env, p.delta_1); break;
        case PulseKind::X: pulse = omega_X(p, env, p.delta_1); break;
        case PulseKind::File: pulse = read_pulse_csv(cfg.pulse_file); break;
        case PulseKind::Opt:
            throw std::invalid_argument("pulse=opt is only valid for the optimize scenario");
    }
    if (cfg.cap_mhz > 0) pulse = pulse.with_cap(mhz_to_angular(cfg.cap_mhz));
    return pulse;
}

RunOutput run_one(const SystemParams& p, const ScenarioConfig& cfg, PulseKind kind) {
    RunOutput out;
    try {
        SechEnvelope env(cfg.tc_us, 0.0, cfg.window_tc);
        ControlPulse pulse = build_pulse(cfg, p, env, kind);
        PropagateOptions po;
        po.tol = cfg.tol;
        auto envp = env.clone();
        po.input_cum_norm = [envp](double t) { return envp->cumulative_norm(t); };
        const QuantumState s0 = initial_photon_state(env, p);
        out.rec = propagate(s0, p, pulse, uniform_grid(p.t_start, p.t_end, cfg.points), po);
        const int last = out.rec.size() - 1;
        out.eta = out.rec.eta[last];
        out.p_r = out.rec.p_r[last];
        out.p_s = out.rec.p_s[last];
        out.p_loss = out.rec.p_loss[last];
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

fs::path resolve_out_dir(const ScenarioConfig& cfg) {
    std::string dir = cfg.out_dir;
    if (dir == "out") {
        if (const char* env = std::getenv("PMS_OUT"); env && *env) dir = env;
    }
    fs::create_directories(dir);
    return dir;
}

}  // namespace

int run_simulate(const ScenarioConfig& cfg) {
    const fs::path dir = resolve_out_dir(cfg);
    SystemParams p = cfg.params();
    const RunOutput out = run_one(p, cfg, cfg.pulse);
    if (!out.ok) {
        std::cerr << "simulate failed: " << out.error << "\n";
        return kNumericError;
    }
    write_record_csv((dir / "record.csv").string(), out.rec);
    {
        SechEnvelope env(cfg.tc_us, 0.0, cfg.window_tc);
        ControlPulse pulse = build_pulse(cfg, p, env, cfg.pulse);
        write_pulse_csv((dir / "pulse.csv").string(), pulse,
                        uniform_grid(p.t_start, p.t_end, cfg.points));
    }
    std::ofstream sum(dir / "summary.txt");
    sum << "scenario = simulate\npulse = " << to_string(cfg.pulse) << "\n"
        << "eta_t2 = " << format_g12(out.eta) << "\n"
        << "p_r = " << format_g12(out.p_r) << "\n"
        << "p_s = " << format_g12(out.p_s) << "\n"
        << "p_loss = " << format_g12(out.p_loss) << "\n";
    if (p.gamma > 0 && p.kappa > 0) {
        const EfficiencyBounds b = efficiency_bounds(p);
        sum << "cooperativity = " << format_g12(b.C) << "\n"
            << "eta_max = " << format_g12(b.eta_max) << "\n"
            << "eta_prime_max = " << format_g12(b.eta_prime_max) << "\n";
    }
    std::cout << "eta(t2) = " << out.eta << "  (files in " << dir.string() << ")\n";
    return kOk;
}

int run_sweep(const ScenarioConfig& cfg) {
    const fs::path dir = resolve_out_dir(cfg);
    const std::string& var = cfg.sweep_variable;
    if (var != "gamma" && var != "kappa" && var != "Tc" && var != "kappa_loss" && var != "Delta") {
        std::cerr << "sweep variable must be gamma|kappa|Tc|kappa_loss|Delta, got " << var << "\n";
        return kConfigError;
    }
    struct Row {
        double x;
        PulseKind kind;
        RunOutput out;
    };
    std::vector<Row> rows;
    for (int i = 0; i < cfg.sweep_points; ++i) {
        const double x = cfg.sweep_points == 1
                             ? cfg.sweep_from
                             : cfg.sweep_from +
                                   (cfg.sweep_to - cfg.sweep_from) * i / (cfg.sweep_points - 1);
        for (PulseKind k : cfg.sweep_pulses) rows.push_back({x, k, {}});
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) {
            ScenarioConfig c = cfg;
            if (var == "gamma") c.gamma_mhz = rows[i].x;
            else if (var == "kappa") c.kappa_mhz = rows[i].x;
            else if (var == "Tc") c.tc_us = rows[i].x;
            else if (var == "kappa_loss") c.kappa_loss_mhz = rows[i].x;
            else c.delta_mhz = rows[i].x;
            rows[i].out = run_one(c.params(), c, rows[i].kind);
        }
    };
    std::vector<std::thread> pool;
    const int jobs = std::max(1, cfg.jobs);
    for (int j = 0; j < jobs - 1; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ofstream f(dir / "sweep.csv");
    f << "x,pulse,eta,p_r,p_s,p_loss\n";
    int failures = 0;
    for (const Row& r : rows) {
        f << format_g12(r.x) << ',' << to_string(r.kind) << ',' << format_g12(r.out.eta) << ','
          << format_g12(r.out.p_r) << ',' << format_g12(r.out.p_s) << ','
          << format_g12(r.out.p_loss) << '\n';
        if (!r.out.ok) {
            ++failures;
            std::cerr << "sweep point x=" << r.x << " pulse=" << to_string(r.kind)
                      << " failed: " << r.out.error << "\n";
        }
    }
    std::cout << "sweep: " << rows.size() - failures << "/" << rows.size() << " points ok -> "
              << (dir / "sweep.csv").string() << "\n";
    if (failures == static_cast<int>(rows.size())) return kNumericError;
    return failures ? kPartialSweep : kOk;
}

int run_optimize(const ScenarioConfig& cfg) {
    const fs::path dir = resolve_out_dir(cfg);
    SystemParams lossless = cfg.params();
    lossless.gamma = 0.0;
    lossless.kappa_loss = 0.0;
    SechEnvelope env(cfg.tc_us, 0.0, cfg.window_tc);

    GrapeOptions go;
    go.max_iters = cfg.max_iters;
    go.bound = mhz_to_angular(cfg.bound_mhz);
    go.grad_tol = cfg.grad_tol;
    go.real_controls = (cfg.delta_mhz == 0.0);
    OptimizationReport rep;
    try {
        rep = optimize_storage(lossless, env, cfg.slices, go);
    } catch (const std::exception& e) {
        std::cerr << "optimize failed: " << e.what() << "\n";
        return kNumericError;
    }

    write_pulse_csv((dir / "pulse_opt.csv").string(), rep.pulse.as_control_pulse(),
                    uniform_grid(lossless.t_start, lossless.t_end, cfg.points));
    std::ofstream sum(dir / "summary.txt");
    sum << "scenario = optimize\n"
        << "eta_lossless = " << format_g12(rep.eta) << "\n"
        << "iterations = " << rep.iterations << "\n"
        << "termination = " << rep.termination << "\n";

    if (cfg.evaluate_lossy) {
        SystemParams lossy = cfg.params();
        SimulationRecord rec;
        const double eta_lossy = evaluate_with_losses(rep.pulse, lossy, env, &rec);
        write_record_csv((dir / "record_lossy.csv").string(), rec);
        sum << "eta_lossy = " << format_g12(eta_lossy) << "\n";
        if (lossy.gamma > 0)
            sum << "eta_prime_max = " << format_g12(eta_prime_max(lossy)) << "\n";
    }
    std::cout << "optimized eta (lossless) = " << rep.eta << " after " << rep.iterations
              << " iterations\n";
    return kOk;
}

int run_tcmin(const ScenarioConfig& cfg) {
    const fs::path dir = resolve_out_dir(cfg);
    std::vector<double> gs;
    const double from = cfg.g_from_mhz, to = cfg.g_to_mhz;
    if (!(from > 0) || !(to > from)) {
        std::cerr << "tcmin needs 0 < g_from_mhz < g_to_mhz\n";
        return kConfigError;
    }
    const double step = std::pow(10.0, 1.0 / cfg.g_per_decade);
    for (double g = from; g <= to * (1 + 1e-9); g *= step) gs.push_back(mhz_to_angular(g));

    TcMinOptions to_;
    to_.eta_target = cfg.eta_target;
    to_.n_slices = cfg.slices;
    to_.grape.max_iters = cfg.max_iters;
    to_.grape.bound = mhz_to_angular(cfg.bound_mhz);
    to_.jobs = cfg.jobs;
    to_.verbose = 1;
    SystemParams base = cfg.params();

    std::vector<TcMinResult> res;
    try {
        res = min_coherence_time(gs, base, to_);
    } catch (const std::exception& e) {
        std::cerr << "tcmin failed: " << e.what() << "\n";
        return kNumericError;
    }

    std::ofstream f(dir / "tcmin.csv");
    f << "g,tc_min,eta_achieved,iters\n";
    int unreached = 0;
    for (const TcMinResult& r : res) {
        f << format_g12(r.g) << ',' << format_g12(r.tc_min) << ',' << format_g12(r.eta_achieved)
          << ',' << r.iters << '\n';
        if (!r.reached) ++unreached;
    }
    std::cout << "tcmin: " << res.size() - unreached << "/" << res.size() << " points reached -> "
              << (dir / "tcmin.csv").string() << "\n";
    return unreached ? kPartialSweep : kOk;
}

int run_retrieve_chain(const ScenarioConfig& cfg) {
    const fs::path dir = resolve_out_dir(cfg);
    SystemParams p = cfg.params();
    SechEnvelope env(cfg.tc_us, 0.0, cfg.window_tc);
    NodeChainResult chain;
    try {
        chain = node_chain(p, env, cfg.n_nodes, p.delta_1);
    } catch (const std::exception& e) {
        std::cerr << "retrieve-chain failed: " << e.what() << "\n";
        return kNumericError;
    }
    std::ofstream f(dir / "chain.csv");
    f << "node,eta_storage,eta_retrieval\n";
    for (size_t i = 0; i < chain.storage_eta.size(); ++i) {
        f << i + 1 << ',' << format_g12(chain.storage_eta[i]) << ','
          << (i < chain.retrieval_eta.size() ? format_g12(chain.retrieval_eta[i]) : "nan")
          << '\n';
    }
    for (size_t i = 0; i < chain.envelopes.size(); ++i)
        write_envelope_csv((dir / ("envelope_node" + std::to_string(i + 1) + ".csv")).string(),
                           chain.envelopes[i]);
    std::cout << "chain of " << cfg.n_nodes << " nodes -> " << (dir / "chain.csv").string()
              << "\n";
    return kOk;
}

int run_scenario(Scenario s, const ScenarioConfig& cfg) {
    switch (s) {
        case Scenario::Simulate: return run_simulate(cfg);
        case Scenario::Sweep: return run_sweep(cfg);
        case Scenario::Optimize: return run_optimize(cfg);
        case Scenario::TcMin: return run_tcmin(cfg);
        case Scenario::RetrieveChain: return run_retrieve_chain(cfg);
    }
    return kConfigError;
}

}  // namespace pms
