#pragma once

#include <string>
#include <vector>

#include "pms/propagator.hpp"

namespace pms {

/// Piecewise-constant complex control: M slices over [t_start, t_end],
/// |slice| <= bound.
struct PiecewisePulse {
    VectorXc slices;
    double t_start = 0.0;
    double t_end = 1.0;
    double bound = 100.0 * two_pi;

    int size() const { return static_cast<int>(slices.size()); }
    double dt() const { return (t_end - t_start) / size(); }

    Complex value(double t) const {
        if (t < t_start || t >= t_end) return 0.0;
        const int i = std::min(static_cast<int>((t - t_start) / dt()), size() - 1);
        return slices[i];
    }

    ControlPulse as_control_pulse() const;
    std::vector<double> slice_edges() const;
};

struct GrapeOptions {
    int max_iters = 500;
    double grad_tol = 1e-8;      // stop when ||grad||_2 drops below this
    double bound = 100.0 * two_pi;
    bool real_controls = true;   // valid at Delta = 0 (phase is gauge)
    int lbfgs_memory = 10;
    double armijo_c = 1e-4;
    int verbose = 0;
    /// Warm start; resampled onto the slice grid if the length differs.
    /// Empty: the loss-compensating adiabatic pulse (flat fallback).
    VectorXc initial_slices;
};

struct OptimizationReport {
    PiecewisePulse pulse;
    std::vector<double> eta_history;   // nondecreasing under the monotone search
    std::vector<double> grad_norms;
    std::string termination;           // "converged" | "max_iterations" | "stalled"
    int iterations = 0;
    double eta = 0.0;
};

/// Maximizes J = |<psi_T| U(t2,t1) |psi_0>|^2 over slice amplitudes for the
/// lossless system (gamma = kappa_loss = 0 required). Slice propagators are
/// exact matrix exponentials (truncated Taylor on the arrowhead matvec);
/// gradients come from the standard adjoint scheme with exact Frechet
/// derivatives, so they match finite differences to solver precision.
OptimizationReport optimize_storage(const SystemParams& p, const PhotonEnvelope& env,
                                    int n_slices, const GrapeOptions& opts = {});

/// J for a given pulse on the lossless system (no gradient); used by tests.
double storage_overlap(const SystemParams& p, const PhotonEnvelope& env,
                       const PiecewisePulse& pulse);

/// Full lossy propagation of a piecewise pulse; returns eta(t2) and, if rec
/// is non-null, the whole record.
double evaluate_with_losses(const PiecewisePulse& pulse, const SystemParams& p,
                            const PhotonEnvelope& env, SimulationRecord* rec = nullptr);

struct TcMinOptions {
    double eta_target = 2.0 / 3.0;
    int n_slices = 256;
    double window_tc = 15.0;
    int max_probes = 24;
    double rel_resolution = 0.06;  // stop bisection at this relative Tc width
    GrapeOptions grape;
    int jobs = 1;
    int verbose = 0;
};

struct TcMinResult {
    double g = 0.0;
    double tc_min = 0.0;
    double eta_achieved = 0.0;
    int iters = 0;        // GRAPE iterations spent at the reported point
    bool reached = false; // false if the target was unreachable in the scan range
};

/// Smallest photon coherence time reaching eta >= eta_target with an
/// optimized pulse, per g value (lossless optimization point by point).
std::vector<TcMinResult> min_coherence_time(const std::vector<double>& g_values,
                                            const SystemParams& base, const TcMinOptions& opts);

}  // namespace pms
