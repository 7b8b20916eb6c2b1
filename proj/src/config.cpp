#include "pms/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "pms/modes.hpp"

namespace pms {

std::string to_string(PulseKind k) {
    switch (k) {
        case PulseKind::F: return "F";
        case PulseKind::D: return "D";
        case PulseKind::G: return "G";
        case PulseKind::X: return "X";
        case PulseKind::Opt: return "opt";
        case PulseKind::File: return "file";
    }
    return "?";
}

PulseKind pulse_kind_from_string(const std::string& s) {
    if (s == "F" || s == "f") return PulseKind::F;
    if (s == "D" || s == "d") return PulseKind::D;
    if (s == "G" || s == "g") return PulseKind::G;
    if (s == "X" || s == "x") return PulseKind::X;
    if (s == "opt") return PulseKind::Opt;
    if (s == "file") return PulseKind::File;
    throw std::invalid_argument("unknown pulse selector '" + s + "' (want F|D|G|X|opt|file)");
}

SystemParams ScenarioConfig::params() const {
    SystemParams p = SystemParams::from_mhz(g_mhz, kappa_mhz, gamma_mhz, kappa_loss_mhz);
    p.delta_1 = mhz_to_angular(delta_mhz);
    p.delta_2 = mhz_to_angular(delta2_mhz);
    p.n_modes = n_modes;
    const ScenarioGeometry geo = default_scenario_geometry(tc_us, p.kappa, window_tc);
    p.line_length = auto_geometry() ? geo.line_length : length_us;
    p.t_start = geo.t_start;
    p.t_end = geo.t_end;
    return p;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Binder {
    std::map<std::string, std::function<void(const std::string&)>> setters;

    void num(const std::string& key, double* dst) {
        setters[key] = [dst, key](const std::string& v) {
            size_t pos = 0;
            *dst = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("bad number for " + key + ": " + v);
        };
    }
    void integer(const std::string& key, int* dst) {
        setters[key] = [dst, key](const std::string& v) {
            size_t pos = 0;
            *dst = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
        };
    }
    void text(const std::string& key, std::string* dst) {
        setters[key] = [dst](const std::string& v) { *dst = v; };
    }
    void flag(const std::string& key, bool* dst) {
        setters[key] = [dst, key](const std::string& v) {
            if (v == "true" || v == "1") *dst = true;
            else if (v == "false" || v == "0") *dst = false;
            else throw std::invalid_argument("bad flag for " + key + ": " + v);
        };
    }
};

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    Binder b;
    b.num("params.g_mhz", &cfg.g_mhz);
    b.num("params.kappa_mhz", &cfg.kappa_mhz);
    b.num("params.gamma_mhz", &cfg.gamma_mhz);
    b.num("params.kappa_loss_mhz", &cfg.kappa_loss_mhz);
    b.num("params.delta_mhz", &cfg.delta_mhz);
    b.num("params.delta2_mhz", &cfg.delta2_mhz);
    b.num("params.tc_us", &cfg.tc_us);
    b.text("pulse.file", &cfg.pulse_file);
    b.num("pulse.cap_mhz", &cfg.cap_mhz);
    b.num("pulse.rho0", &cfg.rho0);
    b.integer("geometry.n_modes", &cfg.n_modes);
    b.num("geometry.length_us", &cfg.length_us);
    b.num("geometry.window_tc", &cfg.window_tc);
    b.text("output.dir", &cfg.out_dir);
    b.integer("output.points", &cfg.points);
    b.num("numerics.tol", &cfg.tol);
    b.text("sweep.variable", &cfg.sweep_variable);
    b.num("sweep.from", &cfg.sweep_from);
    b.num("sweep.to", &cfg.sweep_to);
    b.integer("sweep.points", &cfg.sweep_points);
    b.integer("optimize.slices", &cfg.slices);
    b.integer("optimize.max_iters", &cfg.max_iters);
    b.num("optimize.bound_mhz", &cfg.bound_mhz);
    b.num("optimize.grad_tol", &cfg.grad_tol);
    b.flag("optimize.evaluate_lossy", &cfg.evaluate_lossy);
    b.num("tcmin.eta_target", &cfg.eta_target);
    b.num("tcmin.g_from_mhz", &cfg.g_from_mhz);
    b.num("tcmin.g_to_mhz", &cfg.g_to_mhz);
    b.integer("tcmin.g_per_decade", &cfg.g_per_decade);
    b.integer("chain.n_nodes", &cfg.n_nodes);
    b.integer("run.jobs", &cfg.jobs);

    std::string section, line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        if (full == "pulse.type") {
            cfg.pulse = pulse_kind_from_string(val);
            continue;
        }
        if (full == "sweep.pulses") {
            cfg.sweep_pulses.clear();
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ','))
                cfg.sweep_pulses.push_back(pulse_kind_from_string(trim(tok)));
            if (cfg.sweep_pulses.empty())
                throw std::invalid_argument("sweep.pulses must name at least one pulse");
            continue;
        }
        const auto it = b.setters.find(full);
        if (it == b.setters.end())
            throw std::invalid_argument("unknown config key '" + full + "' (line " +
                                        std::to_string(lineno) + ")");
        it->second(val);
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    return parse_config(f);
}

void print_config(std::ostream& os, const ScenarioConfig& cfg) {
    os << "[params]\n"
       << "g_mhz = " << cfg.g_mhz << "\n"
       << "kappa_mhz = " << cfg.kappa_mhz << "\n"
       << "gamma_mhz = " << cfg.gamma_mhz << "\n"
       << "kappa_loss_mhz = " << cfg.kappa_loss_mhz << "\n"
       << "delta_mhz = " << cfg.delta_mhz << "\n"
       << "delta2_mhz = " << cfg.delta2_mhz << "\n"
       << "tc_us = " << cfg.tc_us << "\n\n";
    os << "[pulse]\n"
       << "type = " << to_string(cfg.pulse) << "\n";
    if (!cfg.pulse_file.empty()) os << "file = " << cfg.pulse_file << "\n";
    os << "cap_mhz = " << cfg.cap_mhz << "\n"
       << "rho0 = " << cfg.rho0 << "\n\n";
    os << "[geometry]\n"
       << "n_modes = " << cfg.n_modes << "\n"
       << "length_us = " << (cfg.auto_geometry() ? cfg.params().line_length : cfg.length_us)
       << "\n"
       << "window_tc = " << cfg.window_tc << "\n\n";
    os << "[output]\n"
       << "dir = " << cfg.out_dir << "\n"
       << "points = " << cfg.points << "\n\n";
    os << "[numerics]\n"
       << "tol = " << cfg.tol << "\n\n";
    os << "[sweep]\n"
       << "variable = " << cfg.sweep_variable << "\n"
       << "from = " << cfg.sweep_from << "\n"
       << "to = " << cfg.sweep_to << "\n"
       << "points = " << cfg.sweep_points << "\n"
       << "pulses = ";
    for (size_t i = 0; i < cfg.sweep_pulses.size(); ++i)
        os << (i ? "," : "") << to_string(cfg.sweep_pulses[i]);
    os << "\n\n";
    os << "[optimize]\n"
       << "slices = " << cfg.slices << "\n"
       << "max_iters = " << cfg.max_iters << "\n"
       << "bound_mhz = " << cfg.bound_mhz << "\n"
       << "grad_tol = " << cfg.grad_tol << "\n"
       << "evaluate_lossy = " << (cfg.evaluate_lossy ? "true" : "false") << "\n\n";
    os << "[tcmin]\n"
       << "eta_target = " << cfg.eta_target << "\n"
       << "g_from_mhz = " << cfg.g_from_mhz << "\n"
       << "g_to_mhz = " << cfg.g_to_mhz << "\n"
       << "g_per_decade = " << cfg.g_per_decade << "\n\n";
    os << "[chain]\n"
       << "n_nodes = " << cfg.n_nodes << "\n\n";
    os << "[run]\n"
       << "jobs = " << cfg.jobs << "\n";
}

}  // namespace pms
