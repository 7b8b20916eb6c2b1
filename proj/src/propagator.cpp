#include "pms/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pms/ode.hpp"

namespace pms {

QuantumState initial_photon_state(const PhotonEnvelope& env, const SystemParams& p) {
    const VectorXc Ek = photon_mode_amplitudes(env, p);
    const VectorXr dets = mode_grid(p);
    QuantumState s;
    s.amps = VectorXc::Zero(coherent_dimension(p.n_modes));
    for (int i = 0; i < p.n_modes; ++i)
        s.amps[i] = Ek[i] * std::exp(-I * dets[i] * p.t_start);
    s.t = p.t_start;
    return s;
}

QuantumState initial_cavity_state(const SystemParams& p, double t0) {
    QuantumState s;
    s.amps = VectorXc::Zero(coherent_dimension(p.n_modes));
    s.amps[p.n_modes] = 1.0;
    s.t = t0;
    return s;
}

QuantumState initial_target_state(const SystemParams& p, double t0) {
    QuantumState s;
    s.amps = VectorXc::Zero(coherent_dimension(p.n_modes));
    s.amps[p.n_modes + 2] = 1.0;
    s.t = t0;
    return s;
}

VectorXr uniform_grid(double t0, double t1, int n) {
    VectorXr g(n);
    for (int i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * i / (n - 1);
    return g;
}

SimulationRecord propagate(const QuantumState& state0, const SystemParams& p,
                           const ControlPulse& omega, const VectorXr& t_grid,
                           const PropagateOptions& opts) {
    p.validate();
    const int n_out = static_cast<int>(t_grid.size());
    require(n_out >= 2, "output grid needs at least two points");
    for (int i = 1; i < n_out; ++i)
        require(t_grid[i] > t_grid[i - 1], "output grid must be strictly increasing");
    require(state0.amps.size() == coherent_dimension(p.n_modes),
            "state dimension does not match n_modes");

    const ArrowheadHamiltonian H = build_hamiltonian(p);
    const int N = p.n_modes;
    const int dim = N + 3;
    const double gamma = p.gamma, kloss = p.kappa_loss;
    const bool has_d2 = static_cast<bool>(opts.delta2_fn);

    // state layout: [N+3 amplitudes | P_s | P_loss] packed complex
    VectorXc y(dim + 2);
    y.head(dim) = state0.amps;
    y[dim] = state0.p_spont;
    y[dim + 1] = state0.p_cavloss;

    auto rhs = [&](double t, const VectorXc& v, VectorXc& dv) {
        const double d2 = has_d2 ? opts.delta2_fn(t) : p.delta_2;
        H.apply(omega(t), d2, v, dv);
        // dv currently holds H psi (on the first dim entries)
        const Complex c = v[N], e = v[N + 1];
        for (int i = 0; i < dim; ++i) dv[i] *= -I;
        dv[N] -= kloss * c;
        dv[N + 1] -= gamma * e;
        dv[dim] = 2.0 * gamma * std::norm(e);
        dv[dim + 1] = 2.0 * kloss * std::norm(c);
    };

    DormandPrince<VectorXc, decltype(rhs)> stepper(rhs, opts.tol);

    SimulationRecord rec;
    rec.times = t_grid;
    rec.eta.setConstant(n_out, std::numeric_limits<double>::quiet_NaN());
    rec.p_r.resize(n_out);
    rec.p_s.resize(n_out);
    rec.p_loss.resize(n_out);
    rec.rho_rr.resize(n_out);
    rec.rho_ee.resize(n_out);
    rec.rho_aa.resize(n_out);
    rec.omega_trace.resize(n_out);
    rec.cavity_amp.resize(n_out);

    const double total0 = state0.total();
    auto breakpoints = opts.breakpoints;
    std::sort(breakpoints.begin(), breakpoints.end());

    auto sample = [&](int k) {
        rec.p_r[k] = y.head(N).squaredNorm();
        rec.rho_aa[k] = std::norm(y[N]);
        rec.rho_ee[k] = std::norm(y[N + 1]);
        rec.rho_rr[k] = std::norm(y[N + 2]);
        rec.p_s[k] = y[dim].real();
        rec.p_loss[k] = y[dim + 1].real();
        rec.omega_trace[k] = omega(t_grid[k]);
        rec.cavity_amp[k] = y[N];
        if (opts.input_cum_norm) {
            const double den = opts.input_cum_norm(t_grid[k]);
            if (den > 0) rec.eta[k] = rec.rho_rr[k] / den;
        }
        const double closure =
            rec.p_r[k] + rec.rho_aa[k] + rec.rho_ee[k] + rec.rho_rr[k] + rec.p_s[k] + rec.p_loss[k];
        if (std::abs(closure - total0) > 10.0 * opts.tol + 1e-12)
            fail("propagate: probability bookkeeping drifted to " + std::to_string(closure) +
                 " at t = " + std::to_string(t_grid[k]));
    };

    require(std::abs(state0.t - t_grid[0]) < 1e-12, "state time must match the grid start");
    sample(0);
    for (int k = 1; k < n_out; ++k) {
        double t = t_grid[k - 1];
        const double t_next = t_grid[k];
        for (double b : breakpoints) {
            if (b > t + 1e-15 && b < t_next - 1e-15) {
                stepper.integrate_to(t, b, y);
                t = b;
                stepper.reset_step();
            }
        }
        stepper.integrate_to(t, t_next, y);
        sample(k);
    }

    rec.final_state.amps = y.head(dim);
    rec.final_state.p_spont = y[dim].real();
    rec.final_state.p_cavloss = y[dim + 1].real();
    rec.final_state.t = t_grid[n_out - 1];
    return rec;
}

VectorXr efficiency(SimulationRecord& rec, const PhotonEnvelope& env) {
    for (int k = 0; k < rec.size(); ++k) {
        const double den = env.cumulative_norm(rec.times[k]);
        rec.eta[k] =
            den > 0 ? rec.rho_rr[k] / den : std::numeric_limits<double>::quiet_NaN();
    }
    return rec.eta;
}

VectorXr spatial_distribution(const QuantumState& state, const SystemParams& p,
                              const VectorXr& x_grid, int mode_offset) {
    const int N = p.n_modes;
    if (mode_offset < 0) mode_offset = N;
    require(mode_offset > (N - 1) / 2, "mode_offset must keep all quantum numbers positive");
    const double L = p.line_length;
    VectorXr P(x_grid.size());
    for (Eigen::Index j = 0; j < x_grid.size(); ++j) {
        const double x = x_grid[j];
        require(x >= -L && x <= 0.0, "x outside the transmission line [-L, 0]");
        Complex s = 0.0;
        for (int i = 0; i < N; ++i) {
            const int q = mode_offset + i - (N - 1) / 2;
            s += state.amps[i] * std::sin(q * M_PI * x / L);
        }
        P[j] = 2.0 / L * std::norm(s);
    }
    return P;
}

SampledEnvelope output_envelope(const SimulationRecord& rec, const SystemParams& p,
                                const PhotonEnvelope* env) {
    const int n = rec.size();
    VectorXc out(n);
    const double s2k = std::sqrt(2.0 * p.kappa);
    for (int k = 0; k < n; ++k) {
        out[k] = I * s2k * rec.cavity_amp[k];
        if (env) out[k] -= env->value(rec.times[k]);
    }
    return SampledEnvelope(rec.times[0], rec.times[n - 1], std::move(out));
}

}  // namespace pms
