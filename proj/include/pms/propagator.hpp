#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pms/basis.hpp"
#include "pms/hamiltonian.hpp"
#include "pms/pulse.hpp"

namespace pms {

/// Amplitudes over {modes, cavity photon, excited atom, target atom} plus the
/// two real sink accumulators. Total probability sums to 1.
struct QuantumState {
    VectorXc amps;          // length N+3
    double p_spont = 0.0;
    double p_cavloss = 0.0;
    double t = 0.0;

    double coherent_norm() const { return amps.squaredNorm(); }
    double total() const { return coherent_norm() + p_spont + p_cavloss; }
};

/// Input photon in the line (backward-propagated to t_start), cavity empty,
/// atom in |g>.
QuantumState initial_photon_state(const PhotonEnvelope& env, const SystemParams& p);

/// One cavity photon, empty line, atom in |g> (decay benchmarks).
QuantumState initial_cavity_state(const SystemParams& p, double t0 = 0.0);

/// Atom in |r>, everything else empty (retrieval runs).
QuantumState initial_target_state(const SystemParams& p, double t0 = 0.0);

/// Time series of all observables for one run. eta is NaN where the input
/// norm denominator has not yet risen above zero.
struct SimulationRecord {
    VectorXr times;
    VectorXr eta, p_r, p_s, p_loss, rho_rr, rho_ee, rho_aa;
    VectorXc omega_trace;
    VectorXc cavity_amp;   // c(t), kept for output-field reconstruction
    QuantumState final_state;

    int size() const { return static_cast<int>(times.size()); }
};

struct PropagateOptions {
    double tol = 1e-8;
    /// Cumulative-input-norm function for the eta column; omit for NaN.
    std::function<double(double)> input_cum_norm;
    /// Time-dependent two-photon detuning override (gauge-transformed runs).
    std::function<double(double)> delta2_fn;
    /// Times where the drive is non-smooth; integration restarts there.
    std::vector<double> breakpoints;
};

/// Integrates dpsi/dt = -i (H(t) - i gamma |e><e| - i kappa_loss a^dag a) psi
/// with sink accumulators dPs = 2 gamma |e|^2, dPloss = 2 kappa_loss |c|^2,
/// sampling observables on t_grid. Aborts if the probability bookkeeping
/// drifts beyond 10 * tol.
SimulationRecord propagate(const QuantumState& state0, const SystemParams& p,
                           const ControlPulse& omega, const VectorXr& t_grid,
                           const PropagateOptions& opts = {});

inline SimulationRecord propagate(const QuantumState& state0, const SystemParams& p,
                                  const ControlPulse& omega, const VectorXr& t_grid, double tol) {
    PropagateOptions o;
    o.tol = tol;
    return propagate(state0, p, omega, t_grid, o);
}

VectorXr uniform_grid(double t0, double t1, int n);

/// eta(t) = rho_rr(t) / int_{t1}^{t} |E_in|^2; recomputes the column in place.
VectorXr efficiency(SimulationRecord& rec, const PhotonEnvelope& env);

/// Photon distribution in space, Eq. of the sine-mode expansion on [-L, 0].
/// mode_offset is the sine quantum number of the central mode (>> N/2 so all
/// quantum numbers stay positive); defaults to n_modes.
VectorXr spatial_distribution(const QuantumState& state, const SystemParams& p,
                              const VectorXr& x_grid, int mode_offset = -1);

/// Outgoing field at the mirror from the input-output relation
/// E_out(t) = i sqrt(2 kappa) c(t) - E_in(t); pass env = nullptr for retrieval
/// runs (no input).
SampledEnvelope output_envelope(const SimulationRecord& rec, const SystemParams& p,
                                const PhotonEnvelope* env = nullptr);

}  // namespace pms
