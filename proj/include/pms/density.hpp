#pragma once

#include "pms/propagator.hpp"

namespace pms {

/// Full Lindblad master-equation propagation on the (N+5)-dimensional
/// single-excitation space (coherent part + spontaneous and cavity-loss
/// sinks). Reference-scale oracle for propagate(); guarded to N <= 61.
///
/// rho0 must be Hermitian, positive, unit trace. Observables are extracted
/// exactly as in propagate(); the sink populations come from the sink
/// diagonal entries instead of integrated fluxes.
SimulationRecord propagate_density_reference(const MatrixXc& rho0, const SystemParams& p,
                                             const ControlPulse& omega, const VectorXr& t_grid,
                                             double tol = 1e-9);

/// rho = |psi><psi| embedded in the N+5 space (sinks from the accumulators).
MatrixXc density_from_state(const QuantumState& s, const SystemParams& p);

}  // namespace pms
