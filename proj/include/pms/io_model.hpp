#pragma once

#include <vector>

#include "pms/envelope.hpp"
#include "pms/pulse.hpp"
#include "pms/system_params.hpp"

namespace pms {

/// Low-dimensional input-output amplitude model; the independent oracle for
/// the full-mode propagator.
struct IoTrajectory {
    VectorXr times;
    VectorXc c, e, r;     // cavity / excited / target amplitudes
    VectorXc e_out;       // output field samples
    double efficiency = 0.0;   // |r(t2)|^2 for storage, int |E_out|^2 for retrieval
    double residual_r = 0.0;   // |r(t_end)|^2 (retrieval: emptiness check)
    bool emptied = true;       // retrieval: residual below the 1e-4 threshold

    double occupancy(int k) const {
        return std::norm(c[k]) + std::norm(e[k]) + std::norm(r[k]);
    }
};

/// Storage Markov ODEs:
///   c' = -i g e - i sqrt(2 kappa) E_in - (kappa + kappa_loss) c
///   e' = (i Delta - gamma) e - i g c - i Omega r
///   r' = -i Omega* e
IoTrajectory storage_ode(const SystemParams& p, const PhotonEnvelope& env,
                         const ControlPulse& omega, const VectorXr& t_grid, double tol = 1e-10);

/// Cavity-eliminated retrieval from r(t_0) = 1, E_in = 0:
///   e' = (i Delta - gamma (1 + G C)) e - i Omega r,  r' = -i Omega* e,
///   E_out = G sqrt(2 gamma C) e,   G = kappa / (kappa + kappa_loss).
IoTrajectory retrieval_ode(const SystemParams& p, const ControlPulse& omega,
                           const VectorXr& t_grid, double tol = 1e-10);

/// Cavity-eliminated storage (same equations driven by E_in); companion of
/// retrieval_ode with exact time-reversal symmetry.
IoTrajectory eliminated_storage_ode(const SystemParams& p, const PhotonEnvelope& env,
                                    const ControlPulse& omega, const VectorXr& t_grid,
                                    double tol = 1e-10);

/// Closed-form output field after adiabatically eliminating the excited state:
///   E_out(t) = i sqrt(2 gamma G C') Omega(t)/(i Delta - gamma(1+C'))
///              exp( int_{t0}^{t} |Omega|^2 / (i Delta - gamma(1+C')) dt' ).
VectorXc analytic_output(const SystemParams& p, const ControlPulse& omega,
                         const VectorXr& t_grid);

struct NodeChainResult {
    std::vector<double> storage_eta;    // per-node storage efficiency (n_nodes entries)
    std::vector<double> retrieval_eta;  // per-hop retrieval norm (n_nodes - 1 entries)
    std::vector<SampledEnvelope> envelopes;  // envelope arriving at each node
};

/// Storage of env0 into node 1, then alternating retrieval / storage through
/// identical nodes. Retrieval pulses are rebuilt from the realized incoming
/// envelope at every node, so hop-to-hop variation measures shape stability.
NodeChainResult node_chain(const SystemParams& p, const PhotonEnvelope& env0, int n_nodes,
                           double Delta = 0.0);

}  // namespace pms
