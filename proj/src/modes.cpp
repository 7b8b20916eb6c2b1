#include "pms/modes.hpp"

#include <cmath>
#include <iostream>

namespace pms {

VectorXr mode_grid(const SystemParams& p) {
    require(p.n_modes % 2 == 1, "n_modes must be odd");
    const int half = (p.n_modes - 1) / 2;
    VectorXr d(p.n_modes);
    for (int i = 0; i < p.n_modes; ++i)
        d[i] = (i - half) * M_PI / p.line_length;
    return d;
}

double mode_coupling(const SystemParams& p) {
    require(p.kappa >= 0 && p.line_length > 0, "mode_coupling needs kappa >= 0, L > 0");
    return std::sqrt(p.kappa / p.line_length);
}

VectorXc photon_mode_amplitudes(const PhotonEnvelope& env, const SystemParams& p,
                                double* raw_norm) {
    const VectorXr dets = mode_grid(p);
    VectorXc Ek(p.n_modes);
    const double pref = std::sqrt(1.0 / (2.0 * p.line_length));
    for (int i = 0; i < p.n_modes; ++i)
        Ek[i] = pref * env.spectral_amplitude(dets[i]);
    const double n2 = Ek.squaredNorm();
    if (raw_norm) *raw_norm = n2;
    if (n2 < 0.999)
        std::cerr << "pms: warning: mode projection captured only " << n2
                  << " of the photon (mode truncation or line too short)\n";
    require(n2 > 0, "photon_mode_amplitudes: zero projection");
    return Ek / std::sqrt(n2);
}

ScenarioGeometry default_scenario_geometry(double Tc, double kappa, double window_tc) {
    require(Tc > 0 && kappa > 0, "default_scenario_geometry needs Tc, kappa > 0");
    ScenarioGeometry geo;
    geo.line_length = std::max(12.0 * Tc, 15.0 / kappa);
    geo.t_start = -window_tc * Tc;
    geo.t_end = window_tc * Tc;
    return geo;
}

}  // namespace pms
