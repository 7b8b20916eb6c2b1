#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pms {

using Real = double;
using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using VectorXr = Eigen::VectorXd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr double two_pi = 6.28318530717958647692528676655900577;

/// Converts a rate quoted as "x * 2pi MHz" to rad/us.
inline double mhz_to_angular(double f_mhz) { return two_pi * f_mhz; }
inline double angular_to_mhz(double w) { return w / two_pi; }

inline const Complex I{0.0, 1.0};

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace pms
