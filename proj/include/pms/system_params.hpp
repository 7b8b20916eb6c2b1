#pragma once

#include "pms/common.hpp"

namespace pms {

/// Physical rates, detunings and discretization constants for one simulation.
///
/// All rates are amplitude decay rates / couplings stored as angular
/// frequencies in rad/us. Lengths are light-travel times in us (c = 1).
/// Populations decay at twice the amplitude rates.
struct SystemParams {
    double g = 0.0;           // atom-cavity vacuum Rabi frequency
    double kappa = 0.0;       // cavity decay into the transmission line
    double kappa_loss = 0.0;  // parasitic cavity loss
    double gamma = 0.0;       // excited-state decay
    double delta_1 = 0.0;     // one-photon detuning (cavity vs |g>-|e>)
    double delta_2 = 0.0;     // two-photon detuning on |r>
    int n_modes = 211;        // odd number of line modes
    double line_length = 6.0; // L, us
    double t_start = -3.0;
    double t_end = 3.0;

    /// Rates quoted as "x * 2pi MHz", converted on construction.
    static SystemParams from_mhz(double g_mhz, double kappa_mhz, double gamma_mhz,
                                 double kappa_loss_mhz = 0.0) {
        SystemParams p;
        p.g = mhz_to_angular(g_mhz);
        p.kappa = mhz_to_angular(kappa_mhz);
        p.gamma = mhz_to_angular(gamma_mhz);
        p.kappa_loss = mhz_to_angular(kappa_loss_mhz);
        return p;
    }

    void validate() const {
        require(g >= 0 && kappa >= 0 && gamma >= 0, "rates g, kappa, gamma must be >= 0");
        require(kappa_loss >= 0, "kappa_loss must be >= 0");
        require(n_modes >= 3 && n_modes % 2 == 1, "n_modes must be odd and >= 3");
        require(line_length > 0, "line_length must be > 0");
        require(t_start < 0 && 0 < t_end, "simulation window must satisfy t_start < 0 < t_end");
    }
};

/// (g, kappa, gamma) = (4.9, 2.42, 3.03) x 2pi MHz.
inline SystemParams reference_cavity_params(double kappa_loss_mhz = 0.0) {
    return SystemParams::from_mhz(4.9, 2.42, 3.03, kappa_loss_mhz);
}

}  // namespace pms
