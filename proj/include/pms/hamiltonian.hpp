#pragma once

#include "pms/modes.hpp"
#include "pms/system_params.hpp"

namespace pms {

/// Single-excitation Hamiltonian on the N+3 coherent subspace, in the frame
/// rotating at the cavity frequency:
///
///   H = sum_n (w_n - w_c) |1_n><1_n| + lambda sum_n (|1_c><1_n| + h.c.)
///       - Delta |e><e| + delta2 |r><r| + g (|e><1_c| + h.c.)
///       + Omega |e><r| + Omega* |r><e|
///
/// All mode-cavity couplings sit in one column/row (arrowhead sparsity), so a
/// matrix-vector product costs O(N).
struct ArrowheadHamiltonian {
    VectorXr mode_detunings;  // length N
    double lambda = 0.0;
    double g = 0.0;
    double delta_1 = 0.0;
    double delta_2 = 0.0;

    int n_modes() const { return static_cast<int>(mode_detunings.size()); }
    int dim() const { return n_modes() + 3; }

    /// out = H(omega, delta2_now) psi. psi/out must have size dim().
    void apply(Complex omega, double delta2_now, const VectorXc& psi, VectorXc& out) const {
        const int N = n_modes();
        const Complex c = psi[N], e = psi[N + 1], r = psi[N + 2];
        Complex mode_sum = 0.0;
        for (int i = 0; i < N; ++i) {
            out[i] = mode_detunings[i] * psi[i] + lambda * c;
            mode_sum += psi[i];
        }
        out[N] = lambda * mode_sum + g * e;
        out[N + 1] = -delta_1 * e + g * c + omega * r;
        out[N + 2] = delta2_now * r + std::conj(omega) * e;
    }

    void apply(Complex omega, const VectorXc& psi, VectorXc& out) const {
        apply(omega, delta_2, psi, out);
    }

    MatrixXc dense(Complex omega, double delta2_now) const {
        const int N = n_modes();
        MatrixXc H = MatrixXc::Zero(dim(), dim());
        for (int i = 0; i < N; ++i) {
            H(i, i) = mode_detunings[i];
            H(i, N) = lambda;
            H(N, i) = lambda;
        }
        H(N, N + 1) = g;
        H(N + 1, N) = g;
        H(N + 1, N + 1) = -delta_1;
        H(N + 2, N + 2) = delta2_now;
        H(N + 1, N + 2) = omega;
        H(N + 2, N + 1) = std::conj(omega);
        return H;
    }

    MatrixXc dense(Complex omega) const { return dense(omega, delta_2); }
};

inline ArrowheadHamiltonian build_hamiltonian(const SystemParams& p) {
    p.validate();
    ArrowheadHamiltonian h;
    h.mode_detunings = mode_grid(p);
    h.lambda = mode_coupling(p);
    h.g = p.g;
    h.delta_1 = p.delta_1;
    h.delta_2 = p.delta_2;
    return h;
}

}  // namespace pms
