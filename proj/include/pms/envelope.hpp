#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pms/common.hpp"

namespace pms {

/// Time-domain complex amplitude of a photon wavepacket at the mirror plane,
/// in units of us^(-1/2). Implementations are immutable after construction.
class PhotonEnvelope {
public:
    PhotonEnvelope(double t_start, double t_end) : t_start_(t_start), t_end_(t_end) {
        require(t_start < t_end, "envelope window must be non-empty");
    }
    virtual ~PhotonEnvelope() = default;

    virtual Complex value(double t) const = 0;
    virtual Complex derivative(double t) const;
    virtual Complex second_derivative(double t) const;

    /// Value copy with shared ownership; lets pulses outlive their envelope.
    virtual std::shared_ptr<const PhotonEnvelope> clone() const = 0;

    /// int_{t_start}^{t} |E|^2 dt'
    virtual double cumulative_norm(double t) const;

    /// Photon norm arrived at the mirror by time t, including any tail that
    /// precedes the window (analytic rules integrate from -infinity). This is
    /// the integral entering the control-pulse formulas; it keeps them finite
    /// at the window edge. Defaults to cumulative_norm for sampled envelopes.
    virtual double arrived_norm(double t) const { return cumulative_norm(t); }

    /// int e^{i w t} E(t) dt over the support window.
    virtual Complex spectral_amplitude(double omega) const;

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double norm_squared() const { return cumulative_norm(t_end_); }

protected:
    double t_start_, t_end_;
};

/// E(t) = sqrt(1/T) sech(2 (t - t0) / T). Coherence time Tc = pi T / (4 sqrt(3)).
class SechEnvelope final : public PhotonEnvelope {
public:
    /// Window defaults to +-6 Tc around the peak.
    explicit SechEnvelope(double Tc, double t0 = 0.0, double window_tc = 6.0);

    Complex value(double t) const override;
    Complex derivative(double t) const override;
    Complex second_derivative(double t) const override;
    double cumulative_norm(double t) const override;
    double arrived_norm(double t) const override;
    Complex spectral_amplitude(double omega) const override;
    std::shared_ptr<const PhotonEnvelope> clone() const override {
        return std::make_shared<SechEnvelope>(*this);
    }

    double characteristic_time() const { return T_; }
    double coherence_time() const { return Tc_; }
    double peak_time() const { return t0_; }

    static double characteristic_from_coherence(double Tc);

private:
    double T_, Tc_, t0_;
};

/// Uniformly sampled envelope with cubic interpolation; used for retrieved
/// or measured wavepackets. Derivatives are 4th-order central differences
/// evaluated on the grid and interpolated.
class SampledEnvelope final : public PhotonEnvelope {
public:
    SampledEnvelope(double t_start, double t_end, VectorXc samples);

    Complex value(double t) const override;
    Complex derivative(double t) const override;
    double cumulative_norm(double t) const override;
    std::shared_ptr<const PhotonEnvelope> clone() const override {
        return std::make_shared<SampledEnvelope>(*this);
    }

    const VectorXc& samples() const { return samples_; }
    double dt() const { return dt_; }

    /// Copy scaled so that the norm over the window is exactly 1.
    SampledEnvelope normalized() const;

    /// E*(T - t) mapped onto [t_start, t_start + (t_end - t_start)].
    SampledEnvelope time_reversed() const;

private:
    VectorXc samples_, deriv_;   // grid values and FD derivative
    VectorXr cum_;               // prefix of |E|^2
    double dt_;
};

/// Thin adapter for analytic rules given as callables (tests, ad-hoc shapes).
class FunctionEnvelope final : public PhotonEnvelope {
public:
    FunctionEnvelope(std::function<Complex(double)> fn, double t_start, double t_end)
        : PhotonEnvelope(t_start, t_end), fn_(std::move(fn)) {}
    Complex value(double t) const override { return fn_(t); }
    std::shared_ptr<const PhotonEnvelope> clone() const override {
        return std::make_shared<FunctionEnvelope>(*this);
    }

private:
    std::function<Complex(double)> fn_;
};

/// Standard deviation of the temporal intensity profile,
/// sqrt(<t^2> - <t>^2) with moments weighted by |E|^2 / int |E|^2.
double coherence_time(const PhotonEnvelope& env);

/// Composite-Simpson quadrature of f over [a, b] with n panels (n even).
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096);

}  // namespace pms
