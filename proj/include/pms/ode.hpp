#pragma once

#include <algorithm>
#include <cmath>

#include "pms/common.hpp"

namespace pms {

/// Adaptive Dormand-Prince 5(4) embedded Runge-Kutta pair with FSAL.
/// State is any Eigen vector/matrix of complex or real scalars;
/// Rhs has signature void(double t, const State& y, State& dydt).
///
/// integrate_to advances y from t0 to t1 exactly. The mixed abs/rel error
/// estimate uses atol = rtol = tol. Throws on step-size underflow with the
/// offending time in the message.
template <class State, class Rhs>
class DormandPrince {
public:
    explicit DormandPrince(Rhs rhs, double tol = 1e-8) : rhs_(std::move(rhs)), tol_(tol) {}

    void integrate_to(double t0, double t1, State& y) {
        if (t1 <= t0) return;
        if (!have_h_) {
            h_ = (t1 - t0) / 100.0;
            have_h_ = true;
        }
        State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, ytmp = y, y5 = y;
        rhs_(t0, y, k1);
        double t = t0;
        const double hmin = std::max((t1 - t0) * 1e-14, 1e-300);
        while (t < t1) {
            double h = std::min(h_, t1 - t);
            bool accepted = false;
            while (!accepted) {
                if (h < hmin)
                    fail("ode: step-size underflow at t = " + std::to_string(t) +
                         " (stiff drive or discontinuity)");
                ytmp = y + h * (a21 * k1);
                rhs_(t + c2 * h, ytmp, k2);
                ytmp = y + h * (a31 * k1 + a32 * k2);
                rhs_(t + c3 * h, ytmp, k3);
                ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
                rhs_(t + c4 * h, ytmp, k4);
                ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
                rhs_(t + c5 * h, ytmp, k5);
                ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
                rhs_(t + h, ytmp, k6);
                y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
                rhs_(t + h, y5, k7);

                // embedded 4th order error estimate
                ytmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
                const double err = error_ratio(ytmp, y, y5);
                if (err <= 1.0) {
                    t += h;
                    y.swap(y5);
                    k1.swap(k7);  // FSAL
                    const double grow = err > 1e-12 ? 0.9 * std::pow(err, -0.2) : 5.0;
                    h_ = h * std::clamp(grow, 0.2, 5.0);
                    accepted = true;
                } else {
                    h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                }
            }
        }
    }

    double last_step() const { return h_; }
    void reset_step() { have_h_ = false; }

private:
    double error_ratio(const State& e, const State& y0, const State& y1) const {
        // RMS of |e_i| / (atol + rtol * max(|y0_i|, |y1_i|))
        double acc = 0.0;
        const auto* pe = e.data();
        const auto* p0 = y0.data();
        const auto* p1 = y1.data();
        const auto n = e.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = tol_ + tol_ * std::max(std::abs(p0[i]), std::abs(p1[i]));
            const double q = std::abs(pe[i]) / sc;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(n));
    }

    Rhs rhs_;
    double tol_;
    double h_ = 0.0;
    bool have_h_ = false;

    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

template <class State, class Rhs>
DormandPrince<State, Rhs> make_integrator(Rhs rhs, double tol, const State&) {
    return DormandPrince<State, Rhs>(std::move(rhs), tol);
}

}  // namespace pms
