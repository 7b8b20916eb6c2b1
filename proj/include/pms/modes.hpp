#pragma once

#include "pms/envelope.hpp"
#include "pms/system_params.hpp"

namespace pms {

/// Mode detunings w_n - w_c = n pi c / L, ascending, n = -(N-1)/2 .. (N-1)/2.
VectorXr mode_grid(const SystemParams& p);

/// Flat mode-cavity coupling lambda = sqrt(kappa c / L) (c = 1), from
/// kappa = L |lambda|^2 / c.
double mode_coupling(const SystemParams& p);

/// Reference (t = 0) mode amplitudes E_k = sqrt(c/2L) int e^{i(kc-wc)t} E(t) dt
/// on the mode grid, renormalized so sum |E_k|^2 = 1 exactly. Warns on stderr
/// if the raw projection captured less than 0.999 of the photon.
/// If raw_norm is non-null it receives the pre-normalization sum.
VectorXc photon_mode_amplitudes(const PhotonEnvelope& env, const SystemParams& p,
                                double* raw_norm = nullptr);

struct ScenarioGeometry {
    double line_length;
    double t_start;
    double t_end;
};

/// L = max(12 c Tc, 15 c / kappa); window +-window_tc * Tc (default 6,
/// 15 for non-adiabatic runs).
ScenarioGeometry default_scenario_geometry(double Tc, double kappa, double window_tc = 6.0);

}  // namespace pms
