#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>

#include "pms/envelope.hpp"
#include "pms/system_params.hpp"

namespace pms {

/// Complex Rabi frequency Omega(t) in rad/us. Immutable value type; evaluation
/// is reentrant. An optional amplitude cap clips the modulus and records every
/// clip (count + first clipped time), never silently.
class ControlPulse {
public:
    ControlPulse() : ControlPulse([](double) { return Complex(0.0); }, 0.0, 1.0) {}
    ControlPulse(std::function<Complex(double)> fn, double t_start, double t_end);

    static ControlPulse from_samples(double t_start, double t_end, VectorXc samples);

    Complex operator()(double t) const;

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }

    ControlPulse with_cap(double cap) const;
    std::optional<double> cap() const { return cap_; }
    long clip_count() const { return clip_ ? clip_->count.load() : 0; }
    double first_clip_time() const { return clip_ ? clip_->first_time.load() : 0.0; }

private:
    struct ClipLog {
        std::atomic<long> count{0};
        std::atomic<double> first_time{0.0};
        std::atomic<bool> announced{false};
    };

    std::function<Complex(double)> fn_;
    double t_start_, t_end_;
    std::optional<double> cap_;
    std::shared_ptr<ClipLog> clip_;
};

/// gamma (1 + C') = gamma + g^2 / (kappa + kappa_loss): linewidth of the
/// cavity-dressed excited state. Finite for gamma = 0, which the lossless
/// optimal-control runs rely on. Pass include_parasitic = false for the
/// ideal-resonator variant gamma (1 + C).
double dressed_linewidth(const SystemParams& p, bool include_parasitic = true);

/// C = g^2 / (kappa gamma). Throws for kappa = 0 or gamma = 0.
double cooperativity(const SystemParams& p);

/// C' = g^2 / (gamma (kappa + kappa_loss)).
double modified_cooperativity(const SystemParams& p);

double eta_max(double C);

/// [kappa/(kappa+kappa_loss)] C'/(1+C')
double eta_prime_max(const SystemParams& p);

struct EfficiencyBounds {
    double C;
    double C_prime;
    double eta_max;
    double eta_prime_max;
    double G;  // kappa / (kappa + kappa_loss)
};

EfficiencyBounds efficiency_bounds(const SystemParams& p);

// --- analytic storage pulses -----------------------------------------------

/// Dark-state impedance-matching pulse (adiabatic cavity, Delta = 0 regime):
/// Omega(t) = g E(t) / sqrt(c1 + 2 kappa int|E|^2 - |E(t)|^2).
/// Throws naming the earliest t where the radicand is <= 0.
ControlPulse omega_F(const SystemParams& p, const PhotonEnvelope& env, double c1);

/// Default regularizer c1 = 2 kappa rho0 - |Ftil(t1)|^2 with
/// Ftil = (Edot - kappa E)/g, the scaled mirror residual.
double omega_F_default_c1(const SystemParams& p, const PhotonEnvelope& env, double rho0 = 1e-4);

/// Exact impedance matching without adiabatic approximation:
///   Omega(t) = [g E + Ftil' + gamma Ftil] /
///              sqrt(2 kappa rho0 + 2 kappa int|E|^2 - |E|^2 - D),
///   D(t) = 2 gamma int|Ftil|^2 + |Ftil(t)|^2,  Ftil = (Edot - kappa E)/g.
/// rho0 models a small initial |r> population and regularizes t -> t1.
ControlPulse omega_D(const SystemParams& p, const PhotonEnvelope& env, double rho0 = 1e-4);

/// Maximal-efficiency adiabatic pulse for an ideal resonator, generic Delta.
ControlPulse omega_G(const SystemParams& p, const PhotonEnvelope& env, double Delta);

/// Same with kappa -> kappa + kappa_loss (modified cooperativity):
/// partially compensates parasitic losses.
ControlPulse omega_X(const SystemParams& p, const PhotonEnvelope& env, double Delta);

/// Retrieval pulse emitting the target output envelope; eta_norm is the norm
/// of env_out (defaults to its norm over the window).
ControlPulse omega_X_retr(const SystemParams& p, const PhotonEnvelope& env_out, double Delta,
                          double eta_norm = -1.0);

/// Omega*(T - t); with T = t_start + t_end the domain maps onto itself.
ControlPulse time_reverse(const ControlPulse& pulse, double T);

// --- gauge mapping ----------------------------------------------------------

struct PhaseDetuningPulse {
    ControlPulse magnitude;                 // |Omega(t)|, real
    std::function<double(double)> delta2;   // equivalent two-photon detuning
};

/// Maps a complex pulse Omega = |Omega| e^{i chi} onto the gauge-equivalent
/// pair (|Omega|, delta2(t) = -chi_dot(t)): propagation with either gives
/// identical populations. The phase derivative is taken by 4th-order finite
/// differences on a fine grid; a warning is printed if the sampled phase has
/// jumps too large to difference reliably.
PhaseDetuningPulse phase_to_detuning(const ControlPulse& pulse, int n_grid = 8001);

}  // namespace pms
