#include "pms/envelope.hpp"

#include <cmath>

namespace pms {

namespace {
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

Complex PhotonEnvelope::derivative(double t) const {
    // 4th-order central differences; h tied to the window scale
    const double h = (t_end_ - t_start_) * 1e-5;
    return (-value(t + 2 * h) + 8.0 * value(t + h) - 8.0 * value(t - h) + value(t - 2 * h)) /
           (12.0 * h);
}

Complex PhotonEnvelope::second_derivative(double t) const {
    const double h = (t_end_ - t_start_) * 2e-5;
    return (derivative(t + h) - derivative(t - h)) / (2.0 * h);
}

double PhotonEnvelope::cumulative_norm(double t) const {
    if (t <= t_start_) return 0.0;
    t = std::min(t, t_end_);
    return simpson([this](double s) { return std::norm(value(s)); }, t_start_, t, 2048);
}

Complex PhotonEnvelope::spectral_amplitude(double omega) const {
    // trapezoid fine enough to resolve the e^{i w t} oscillation
    const double span = t_end_ - t_start_;
    int n = std::max(4096, static_cast<int>(std::ceil(std::abs(omega) * span * 8.0)));
    const double h = span / n;
    Complex acc = 0.5 * (std::exp(I * omega * t_start_) * value(t_start_) +
                         std::exp(I * omega * t_end_) * value(t_end_));
    for (int i = 1; i < n; ++i) {
        const double t = t_start_ + i * h;
        acc += std::exp(I * omega * t) * value(t);
    }
    return acc * h;
}

// ---------------------------------------------------------------------------

double SechEnvelope::characteristic_from_coherence(double Tc) {
    return 4.0 * kSqrt3 * Tc / kPi;
}

SechEnvelope::SechEnvelope(double Tc, double t0, double window_tc)
    : PhotonEnvelope(t0 - window_tc * Tc, t0 + window_tc * Tc),
      T_(characteristic_from_coherence(Tc)),
      Tc_(Tc),
      t0_(t0) {
    require(Tc > 0, "coherence time must be positive");
}

Complex SechEnvelope::value(double t) const {
    return 1.0 / (std::sqrt(T_) * std::cosh(2.0 * (t - t0_) / T_));
}

Complex SechEnvelope::derivative(double t) const {
    const double u = 2.0 * (t - t0_) / T_;
    return -(2.0 / T_) * std::tanh(u) * value(t);
}

Complex SechEnvelope::second_derivative(double t) const {
    const double u = 2.0 * (t - t0_) / T_;
    const double s = 1.0 / std::cosh(u);
    return (4.0 / (T_ * T_)) * (1.0 - 2.0 * s * s) * value(t);
}

double SechEnvelope::cumulative_norm(double t) const {
    if (t <= t_start_) return 0.0;
    t = std::min(t, t_end_);
    return 0.5 * (std::tanh(2.0 * (t - t0_) / T_) - std::tanh(2.0 * (t_start_ - t0_) / T_));
}

double SechEnvelope::arrived_norm(double t) const {
    return 0.5 * (1.0 + std::tanh(2.0 * (std::min(t, t_end_) - t0_) / T_));
}

Complex SechEnvelope::spectral_amplitude(double omega) const {
    // FT of sech over the whole axis; the tails outside +-6 Tc carry < 1e-5
    const double arg = kPi * omega * T_ / 4.0;
    return (kPi * std::sqrt(T_) / 2.0) / std::cosh(arg) * std::exp(I * omega * t0_);
}

// ---------------------------------------------------------------------------

SampledEnvelope::SampledEnvelope(double t_start, double t_end, VectorXc samples)
    : PhotonEnvelope(t_start, t_end), samples_(std::move(samples)) {
    const int n = static_cast<int>(samples_.size());
    require(n >= 8, "sampled envelope needs at least 8 points");
    dt_ = (t_end - t_start) / (n - 1);

    deriv_.resize(n);
    for (int i = 0; i < n; ++i) {
        auto at = [&](int j) { return samples_[std::clamp(j, 0, n - 1)]; };
        if (i >= 2 && i <= n - 3) {
            deriv_[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * dt_);
        } else {
            const int j = std::clamp(i, 1, n - 2);
            deriv_[i] = (at(j + 1) - at(j - 1)) / (2.0 * dt_);
        }
    }

    cum_.resize(n);
    cum_[0] = 0.0;
    for (int i = 1; i < n; ++i)
        cum_[i] = cum_[i - 1] + 0.5 * (std::norm(samples_[i]) + std::norm(samples_[i - 1])) * dt_;
}

namespace {
// Catmull-Rom cubic through uniform samples.
Complex cubic_at(const VectorXc& y, double dt, double t0, double t) {
    const int n = static_cast<int>(y.size());
    const double u = (t - t0) / dt;
    if (u <= 0.0 || u >= n - 1) {
        if (u < -0.5 || u > n - 0.5) return 0.0;  // outside support
        return y[std::clamp(static_cast<int>(std::lround(u)), 0, n - 1)];
    }
    const int i = std::min(static_cast<int>(u), n - 2);
    const double x = u - i;
    const Complex ym = y[std::max(i - 1, 0)];
    const Complex y0 = y[i];
    const Complex y1 = y[i + 1];
    const Complex yp = y[std::min(i + 2, n - 1)];
    const Complex a = 2.0 * y0;
    const Complex b = y1 - ym;
    const Complex c = 2.0 * ym - 5.0 * y0 + 4.0 * y1 - yp;
    const Complex d = -ym + 3.0 * y0 - 3.0 * y1 + yp;
    return 0.5 * (a + b * x + c * x * x + d * x * x * x);
}
}  // namespace

Complex SampledEnvelope::value(double t) const { return cubic_at(samples_, dt_, t_start_, t); }

Complex SampledEnvelope::derivative(double t) const { return cubic_at(deriv_, dt_, t_start_, t); }

double SampledEnvelope::cumulative_norm(double t) const {
    const int n = static_cast<int>(samples_.size());
    if (t <= t_start_) return 0.0;
    if (t >= t_end_) return cum_[n - 1];
    const double u = (t - t_start_) / dt_;
    const int i = std::min(static_cast<int>(u), n - 2);
    const double x = u - i;
    const double slope = 0.5 * (std::norm(samples_[i]) + std::norm(samples_[i + 1])) * dt_;
    return cum_[i] + slope * x;
}

SampledEnvelope SampledEnvelope::normalized() const {
    const double n2 = norm_squared();
    require(n2 > 0, "cannot normalize a zero envelope");
    return SampledEnvelope(t_start_, t_end_, samples_ / std::sqrt(n2));
}

SampledEnvelope SampledEnvelope::time_reversed() const {
    return SampledEnvelope(t_start_, t_end_, samples_.reverse().conjugate());
}

// ---------------------------------------------------------------------------

double coherence_time(const PhotonEnvelope& env) {
    const double a = env.t_start(), b = env.t_end();
    auto w = [&](double t) { return std::norm(env.value(t)); };
    const double n0 = simpson(w, a, b, 8192);
    require(n0 > 0, "coherence_time of a zero-norm envelope");
    const double m1 = simpson([&](double t) { return t * w(t); }, a, b, 8192) / n0;
    const double m2 = simpson([&](double t) { return t * t * w(t); }, a, b, 8192) / n0;
    return std::sqrt(std::max(m2 - m1 * m1, 0.0));
}

}  // namespace pms
