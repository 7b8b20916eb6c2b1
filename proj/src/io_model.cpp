#include "pms/io_model.hpp"

#include <cmath>
#include <iostream>

#include "pms/ode.hpp"
#include "pms/propagator.hpp"

namespace pms {

namespace {

using State3 = Eigen::Vector3cd;
using Rhs3 = std::function<void(double, const State3&, State3&)>;

IoTrajectory integrate3(const Rhs3& rhs, const State3& y0, const VectorXr& t_grid, double tol) {
    const int n = static_cast<int>(t_grid.size());
    IoTrajectory tr;
    tr.times = t_grid;
    tr.c.resize(n);
    tr.e.resize(n);
    tr.r.resize(n);
    tr.e_out = VectorXc::Zero(n);

    DormandPrince<State3, Rhs3> stepper(rhs, tol);
    State3 y = y0;
    auto rec = [&](int k) { tr.c[k] = y[0]; tr.e[k] = y[1]; tr.r[k] = y[2]; };
    rec(0);
    for (int k = 1; k < n; ++k) {
        stepper.integrate_to(t_grid[k - 1], t_grid[k], y);
        rec(k);
    }
    return tr;
}

double trapz_norm(const VectorXc& v, const VectorXr& t) {
    double s = 0.0;
    for (int i = 1; i < t.size(); ++i)
        s += 0.5 * (std::norm(v[i]) + std::norm(v[i - 1])) * (t[i] - t[i - 1]);
    return s;
}

// gamma C' = g^2/(kappa+kappa_loss) and gamma C = g^2/kappa stay finite at
// gamma = 0; every rate below is built from these combinations.
struct EliminatedRates {
    double G;         // kappa/(kappa+kappa_loss)
    double gamma_cp;  // gamma C'
    double dressed;   // gamma (1 + C')  ==  gamma (1 + G C)
    double out_pref;  // G sqrt(2 gamma C)

    explicit EliminatedRates(const SystemParams& p) {
        require(p.kappa > 0, "eliminated model needs kappa > 0");
        if (p.kappa_loss > p.kappa)
            std::cerr << "pms: warning: kappa_loss > kappa is outside the validated regime "
                         "of the eliminated input-output model\n";
        G = p.kappa / (p.kappa + p.kappa_loss);
        gamma_cp = p.g * p.g / (p.kappa + p.kappa_loss);
        dressed = p.gamma + gamma_cp;
        out_pref = G * p.g * std::sqrt(2.0 / p.kappa);
    }
};

}  // namespace

IoTrajectory storage_ode(const SystemParams& p, const PhotonEnvelope& env,
                         const ControlPulse& omega, const VectorXr& t_grid, double tol) {
    const double g = p.g, kap = p.kappa, kl = p.kappa_loss, gam = p.gamma, D = p.delta_1;
    const double s2k = std::sqrt(2.0 * kap);
    Rhs3 rhs = [&env, &omega, g, kap, kl, gam, D, s2k](double t, const State3& y, State3& dy) {
        const Complex om = omega(t);
        dy[0] = -I * g * y[1] - I * s2k * env.value(t) - (kap + kl) * y[0];
        dy[1] = (I * D - gam) * y[1] - I * g * y[0] - I * om * y[2];
        dy[2] = -I * std::conj(om) * y[1];
    };
    IoTrajectory tr = integrate3(rhs, State3::Zero(), t_grid, tol);
    const int n = static_cast<int>(t_grid.size());
    for (int k = 0; k < n; ++k)
        tr.e_out[k] = I * s2k * tr.c[k] - env.value(t_grid[k]);
    tr.efficiency = std::norm(tr.r[n - 1]);
    tr.residual_r = tr.efficiency;
    return tr;
}

IoTrajectory retrieval_ode(const SystemParams& p, const ControlPulse& omega,
                           const VectorXr& t_grid, double tol) {
    const EliminatedRates er(p);
    const double D = p.delta_1;
    Rhs3 rhs = [&omega, er, D](double t, const State3& y, State3& dy) {
        const Complex om = omega(t);
        dy[0] = 0.0;
        dy[1] = (I * D - er.dressed) * y[1] - I * om * y[2];
        dy[2] = -I * std::conj(om) * y[1];
    };
    State3 y0 = State3::Zero();
    y0[2] = 1.0;
    IoTrajectory tr = integrate3(rhs, y0, t_grid, tol);
    const int n = static_cast<int>(t_grid.size());
    for (int k = 0; k < n; ++k) tr.e_out[k] = er.out_pref * tr.e[k];
    tr.efficiency = trapz_norm(tr.e_out, t_grid);
    tr.residual_r = std::norm(tr.r[n - 1]);
    tr.emptied = tr.residual_r < 1e-4;
    return tr;
}

IoTrajectory eliminated_storage_ode(const SystemParams& p, const PhotonEnvelope& env,
                                    const ControlPulse& omega, const VectorXr& t_grid,
                                    double tol) {
    const EliminatedRates er(p);
    const double D = p.delta_1;
    Rhs3 rhs = [&env, &omega, er, D](double t, const State3& y, State3& dy) {
        const Complex om = omega(t);
        dy[0] = 0.0;
        dy[1] = (I * D - er.dressed) * y[1] - I * om * y[2] - er.out_pref * env.value(t);
        dy[2] = -I * std::conj(om) * y[1];
    };
    IoTrajectory tr = integrate3(rhs, State3::Zero(), t_grid, tol);
    const int n = static_cast<int>(t_grid.size());
    const double refl = (p.kappa - p.kappa_loss) / (p.kappa + p.kappa_loss);
    for (int k = 0; k < n; ++k)
        tr.e_out[k] = er.out_pref * tr.e[k] + refl * env.value(t_grid[k]);
    tr.efficiency = std::norm(tr.r[n - 1]);
    tr.residual_r = tr.efficiency;
    return tr;
}

VectorXc analytic_output(const SystemParams& p, const ControlPulse& omega,
                         const VectorXr& t_grid) {
    const EliminatedRates er(p);
    const Complex pole = I * p.delta_1 - er.dressed;
    const double pref = std::sqrt(2.0 * er.G * er.gamma_cp);  // sqrt(2 gamma G C')

    const int n = static_cast<int>(t_grid.size());
    VectorXc out(n);
    double acc = 0.0;  // running int |Omega|^2
    double prev = std::norm(omega(t_grid[0]));
    out[0] = I * pref * omega(t_grid[0]) / pole;
    for (int k = 1; k < n; ++k) {
        const double cur = std::norm(omega(t_grid[k]));
        acc += 0.5 * (cur + prev) * (t_grid[k] - t_grid[k - 1]);
        prev = cur;
        out[k] = I * pref * omega(t_grid[k]) / pole * std::exp(acc / pole);
    }
    return out;
}

NodeChainResult node_chain(const SystemParams& p, const PhotonEnvelope& env0, int n_nodes,
                           double Delta) {
    require(n_nodes >= 2, "node_chain needs at least 2 nodes");
    const double eta_bound = eta_prime_max(p);
    const double t1 = env0.t_start(), t2 = env0.t_end();
    const double Tw = t2 - t1;
    const VectorXr grid = uniform_grid(0.0, Tw, 4001);

    NodeChainResult out;

    // Incoming photon at node 1, shifted onto the hop window [0, Tw].
    VectorXc first(grid.size());
    for (int i = 0; i < first.size(); ++i) first[i] = env0.value(t1 + grid[i]);
    SampledEnvelope received = SampledEnvelope(0.0, Tw, first).normalized();
    out.envelopes.push_back(received);

    {
        ControlPulse om = omega_X(p, received, Delta);
        IoTrajectory st = storage_ode(p, received, om, grid);
        out.storage_eta.push_back(st.efficiency / received.norm_squared());
    }

    for (int hop = 1; hop < n_nodes; ++hop) {
        // Emit the time-reverse of what this node received, with norm eta'_max.
        SampledEnvelope emission_target = received.time_reversed();
        SampledEnvelope env_out(0.0, Tw, std::sqrt(eta_bound) * emission_target.samples());
        ControlPulse om_r = omega_X_retr(p, env_out, Delta, eta_bound);
        IoTrajectory ret = retrieval_ode(p, om_r, grid);
        out.retrieval_eta.push_back(ret.efficiency);

        // The matched storage pulse at the next node is the time-reversed
        // retrieval pulse; it stores the conjugate-reversed emitted envelope.
        SampledEnvelope emitted(0.0, Tw, ret.e_out);
        received = emitted.normalized().time_reversed();
        out.envelopes.push_back(received);

        ControlPulse om_s = time_reverse(om_r, Tw);
        IoTrajectory st = storage_ode(p, received, om_s, grid);
        out.storage_eta.push_back(st.efficiency / received.norm_squared());
    }
    return out;
}

}  // namespace pms
