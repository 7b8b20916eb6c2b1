#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pms/system_params.hpp"

namespace pms {

enum class Scenario { Simulate, Sweep, Optimize, RetrieveChain, TcMin };

enum class PulseKind { F, D, G, X, Opt, File };

std::string to_string(PulseKind k);
PulseKind pulse_kind_from_string(const std::string& s);

/// Flat key=value configuration with [sections]. Every field defaults to the
/// reference setup (sech photon, Tc = 0.5 us, 211 modes, L = max(12 Tc, 15/kappa),
/// window +-6 Tc). Unknown keys are hard errors.
struct ScenarioConfig {
    // [params]  (rates in "x 2pi MHz" units)
    double g_mhz = 4.9;
    double kappa_mhz = 2.42;
    double gamma_mhz = 3.03;
    double kappa_loss_mhz = 0.0;
    double delta_mhz = 0.0;        // one-photon detuning
    double delta2_mhz = 0.0;       // two-photon detuning
    double tc_us = 0.5;

    // [pulse]
    PulseKind pulse = PulseKind::X;
    std::string pulse_file;
    double cap_mhz = 0.0;          // 0 = no cap
    double rho0 = 1e-4;            // omega_D / omega_F regularizers

    // [geometry]
    int n_modes = 211;
    double length_us = 0.0;        // 0 = auto: max(12 c Tc, 15 c / kappa)
    double window_tc = 6.0;

    // [output]
    std::string out_dir = "out";
    int points = 2000;

    // [numerics]
    double tol = 1e-8;

    // [sweep]
    std::string sweep_variable = "kappa_loss";  // gamma|kappa|Tc|kappa_loss|Delta
    double sweep_from = 0.0;
    double sweep_to = 1.21;
    int sweep_points = 11;
    std::vector<PulseKind> sweep_pulses = {PulseKind::F, PulseKind::D, PulseKind::G,
                                           PulseKind::X};

    // [optimize]
    int slices = 256;
    int max_iters = 500;
    double bound_mhz = 100.0;
    double grad_tol = 1e-8;
    bool evaluate_lossy = true;

    // [tcmin]
    double eta_target = 2.0 / 3.0;
    double g_from_mhz = 0.242;
    double g_to_mhz = 24.2;
    int g_per_decade = 8;

    // [chain]
    int n_nodes = 5;

    int jobs = 1;

    SystemParams params() const;
    double coherence_time() const { return tc_us; }
    bool auto_geometry() const { return length_us <= 0.0; }
};

/// Parses the flat key=value format. Lines: `key = value`, `[section]`,
/// blank, or `#`/`;` comments. Unknown keys or malformed values throw.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Emits the fully resolved configuration in the same format.
void print_config(std::ostream& os, const ScenarioConfig& cfg);

}  // namespace pms
