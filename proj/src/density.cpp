#include "pms/density.hpp"

#include <cmath>
#include <limits>

#include "pms/ode.hpp"

namespace pms {

MatrixXc density_from_state(const QuantumState& s, const SystemParams& p) {
    const int dim = basis_dimension(p.n_modes);
    const int nc = coherent_dimension(p.n_modes);
    MatrixXc rho = MatrixXc::Zero(dim, dim);
    rho.topLeftCorner(nc, nc) = s.amps * s.amps.adjoint();
    rho(nc, nc) = s.p_spont;
    rho(nc + 1, nc + 1) = s.p_cavloss;
    return rho;
}

SimulationRecord propagate_density_reference(const MatrixXc& rho0, const SystemParams& p,
                                             const ControlPulse& omega, const VectorXr& t_grid,
                                             double tol) {
    p.validate();
    require(p.n_modes <= 61, "density reference is guarded to N <= 61");
    const int N = p.n_modes;
    const int dim = basis_dimension(N);  // N+5
    require(rho0.rows() == dim && rho0.cols() == dim, "rho0 dimension mismatch");
    require((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() < 1e-10, "rho0 must be Hermitian");
    require(std::abs(rho0.trace().real() - 1.0) < 1e-8, "rho0 must have unit trace");

    const ArrowheadHamiltonian Hb = build_hamiltonian(p);
    const int ic = N, ie = N + 1, ir = N + 2, is = N + 3, il = N + 4;
    const double gamma = p.gamma, kloss = p.kappa_loss;

    MatrixXc H = MatrixXc::Zero(dim, dim);
    H.topLeftCorner(N + 3, N + 3) = Hb.dense(Complex(0.0));

    auto rhs = [&](double t, const MatrixXc& rho, MatrixXc& drho) {
        const Complex om = omega(t);
        H(ie, ir) = om;
        H(ir, ie) = std::conj(om);
        drho = -I * (H * rho - rho * H);
        // L_gamma: sigma = |xi_e><e|, rate gamma (amplitude)
        drho(is, is) += 2.0 * gamma * rho(ie, ie);
        drho.row(ie) -= gamma * rho.row(ie);
        drho.col(ie) -= gamma * rho.col(ie);
        // L_kloss: sigma = |g,0,vac><g,1_c,vac|
        drho(il, il) += 2.0 * kloss * rho(ic, ic);
        drho.row(ic) -= kloss * rho.row(ic);
        drho.col(ic) -= kloss * rho.col(ic);
    };

    DormandPrince<MatrixXc, decltype(rhs)> stepper(rhs, tol);

    const int n_out = static_cast<int>(t_grid.size());
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

    MatrixXc rho = rho0;
    auto sample = [&](int k) {
        rec.p_r[k] = rho.diagonal().head(N).real().sum();
        rec.rho_aa[k] = rho(ic, ic).real();
        rec.rho_ee[k] = rho(ie, ie).real();
        rec.rho_rr[k] = rho(ir, ir).real();
        rec.p_s[k] = rho(is, is).real();
        rec.p_loss[k] = rho(il, il).real();
        rec.omega_trace[k] = omega(t_grid[k]);
        rec.cavity_amp[k] = 0.0;  // amplitude is not defined for mixed states
    };

    sample(0);
    for (int k = 1; k < n_out; ++k) {
        stepper.integrate_to(t_grid[k - 1], t_grid[k], rho);
        sample(k);
    }

    rec.final_state.amps = VectorXc::Zero(N + 3);
    rec.final_state.p_spont = rho(is, is).real();
    rec.final_state.p_cavloss = rho(il, il).real();
    rec.final_state.t = t_grid[n_out - 1];
    return rec;
}

}  // namespace pms
