#include "pms/pulse.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

namespace pms {

namespace {
constexpr double kCumFloor = 1e-12;  // floor inside logs and square roots

std::string format_time(double t) {
    std::ostringstream os;
    os.precision(6);
    os << t;
    return os.str();
}
}  // namespace

ControlPulse::ControlPulse(std::function<Complex(double)> fn, double t_start, double t_end)
    : fn_(std::move(fn)), t_start_(t_start), t_end_(t_end) {
    require(t_start < t_end, "pulse domain must be non-empty");
}

ControlPulse ControlPulse::from_samples(double t_start, double t_end, VectorXc samples) {
    auto env = std::make_shared<SampledEnvelope>(t_start, t_end, std::move(samples));
    return ControlPulse([env](double t) { return env->value(t); }, t_start, t_end);
}

Complex ControlPulse::operator()(double t) const {
    Complex v = fn_(t);
    if (cap_) {
        const double a = std::abs(v);
        if (a > *cap_) {
            if (clip_->count.fetch_add(1) == 0) {
                clip_->first_time.store(t);
                if (!clip_->announced.exchange(true))
                    std::cerr << "pms: pulse amplitude " << a << " clipped to " << *cap_
                              << " rad/us at t = " << t << "\n";
            }
            v *= *cap_ / a;
        }
    }
    return v;
}

ControlPulse ControlPulse::with_cap(double cap) const {
    require(cap > 0, "pulse cap must be positive");
    ControlPulse p = *this;
    p.cap_ = cap;
    p.clip_ = std::make_shared<ClipLog>();
    return p;
}

// ---------------------------------------------------------------------------

double dressed_linewidth(const SystemParams& p, bool include_parasitic) {
    const double k = p.kappa + (include_parasitic ? p.kappa_loss : 0.0);
    require(k > 0, "dressed_linewidth needs kappa > 0");
    return p.gamma + p.g * p.g / k;
}

double cooperativity(const SystemParams& p) {
    require(p.kappa > 0 && p.gamma > 0, "cooperativity needs kappa > 0 and gamma > 0");
    return p.g * p.g / (p.kappa * p.gamma);
}

double modified_cooperativity(const SystemParams& p) {
    require(p.kappa + p.kappa_loss > 0 && p.gamma > 0,
            "modified cooperativity needs kappa + kappa_loss > 0 and gamma > 0");
    return p.g * p.g / (p.gamma * (p.kappa + p.kappa_loss));
}

double eta_max(double C) {
    require(C >= 0, "cooperativity must be >= 0");
    return C / (1.0 + C);
}

double eta_prime_max(const SystemParams& p) {
    const double Cp = modified_cooperativity(p);
    return p.kappa / (p.kappa + p.kappa_loss) * Cp / (1.0 + Cp);
}

EfficiencyBounds efficiency_bounds(const SystemParams& p) {
    EfficiencyBounds b;
    b.C = cooperativity(p);
    b.C_prime = modified_cooperativity(p);
    b.eta_max = eta_max(b.C);
    b.eta_prime_max = eta_prime_max(p);
    b.G = p.kappa / (p.kappa + p.kappa_loss);
    return b;
}

// --- analytic pulses --------------------------------------------------------

namespace {

/// Shared form of the maximal-efficiency adiabatic pulses. gC is the dressed
/// linewidth gamma(1+C) (or gamma(1+C') with parasitic losses). The phase sign
/// is fixed by requiring gauge equivalence with the AC-Stark-compensating
/// two-photon detuning in the Hamiltonian convention used here.
ControlPulse adiabatic_pulse(std::shared_ptr<const PhotonEnvelope> env, double gC,
                             double Delta) {
    require(gC > 0, "adiabatic pulse needs gamma(1+C) > 0");
    const double mag0 = std::sqrt(gC * gC + Delta * Delta) / std::sqrt(2.0 * gC);
    auto fn = [env, gC, Delta, mag0](double t) -> Complex {
        const double cum = std::max(env->arrived_norm(t), kCumFloor);
        const Complex amp = mag0 * env->value(t) / std::sqrt(cum);
        if (Delta == 0.0) return amp;
        const double chi = Delta / (2.0 * gC) * std::log(cum);
        return amp * std::exp(I * chi);
    };
    return ControlPulse(std::move(fn), env->t_start(), env->t_end());
}

struct ScaledResidual {
    // Ftil = (Edot - kappa E)/g and helpers on a dense grid of the window.
    VectorXr ts;
    VectorXc F;
    VectorXr int_F2;  // prefix int |Ftil|^2

    ScaledResidual(const PhotonEnvelope& env, double g, double kappa, int n = 8001) {
        ts.resize(n);
        F.resize(n);
        int_F2.resize(n);
        const double a = env.t_start(), b = env.t_end();
        for (int i = 0; i < n; ++i) {
            ts[i] = a + (b - a) * i / (n - 1);
            F[i] = (env.derivative(ts[i]) - kappa * env.value(ts[i])) / g;
        }
        int_F2[0] = 0.0;
        for (int i = 1; i < n; ++i)
            int_F2[i] = int_F2[i - 1] +
                        0.5 * (std::norm(F[i]) + std::norm(F[i - 1])) * (ts[i] - ts[i - 1]);
    }

    double int_to(double t) const {
        const int n = static_cast<int>(ts.size());
        if (t <= ts[0]) return 0.0;
        if (t >= ts[n - 1]) return int_F2[n - 1];
        const double u = (t - ts[0]) / (ts[1] - ts[0]);
        const int i = std::min(static_cast<int>(u), n - 2);
        return int_F2[i] + (int_F2[i + 1] - int_F2[i]) * (u - i);
    }
};

void scan_radicand(const std::function<double(double)>& rad, double a, double b,
                   const char* which, const char* hint) {
    const int n = 4001;
    for (int i = 0; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        if (rad(t) <= 0.0)
            fail(std::string(which) + ": radicand <= 0 at t = " + format_time(t) + " (" + hint +
                 ")");
    }
}

}  // namespace

double omega_F_default_c1(const SystemParams& p, const PhotonEnvelope& env, double rho0) {
    require(rho0 > 0, "rho0 must be positive");
    const double t1 = env.t_start();
    const Complex Ft1 = (env.derivative(t1) - p.kappa * env.value(t1)) / p.g;
    return 2.0 * p.kappa * rho0 - std::norm(Ft1);
}

ControlPulse omega_F(const SystemParams& p, const PhotonEnvelope& env, double c1) {
    require(c1 > 0, "omega_F needs c1 > 0");
    if (p.delta_1 != 0.0)
        std::cerr << "pms: warning: omega_F assumes Delta = 0 (got " << p.delta_1 << " rad/us)\n";
    auto envp = env.clone();
    const double g = p.g, kappa = p.kappa;

    auto rad = [envp, c1, kappa](double t) {
        return c1 + 2.0 * kappa * envp->arrived_norm(t) - std::norm(envp->value(t));
    };
    scan_radicand(rad, env.t_start(), env.t_end(), "omega_F", "c1 too small for this envelope");
    return ControlPulse(
        [envp, g, rad](double t) -> Complex { return g * envp->value(t) / std::sqrt(rad(t)); },
        env.t_start(), env.t_end());
}

ControlPulse omega_D(const SystemParams& p, const PhotonEnvelope& env, double rho0) {
    require(rho0 > 0, "rho0 must be positive");
    auto envp = env.clone();
    const double g = p.g, kappa = p.kappa, gamma = p.gamma;
    auto res = std::make_shared<ScaledResidual>(*envp, g, kappa);

    auto radicand = [envp, res, g, kappa, gamma, rho0](double t) {
        const Complex Ft = (envp->derivative(t) - kappa * envp->value(t)) / g;
        const double D = 2.0 * gamma * res->int_to(t) + std::norm(Ft);
        return 2.0 * kappa * rho0 + 2.0 * kappa * envp->arrived_norm(t) -
               std::norm(envp->value(t)) - D;
    };
    scan_radicand(radicand, env.t_start(), env.t_end(), "omega_D",
                  "rho0 too small or regime too non-adiabatic");

    auto fn = [envp, g, kappa, gamma, radicand](double t) -> Complex {
        const Complex E = envp->value(t);
        const Complex Ft = (envp->derivative(t) - kappa * E) / g;
        const Complex Ft_dot = (envp->second_derivative(t) - kappa * envp->derivative(t)) / g;
        return (g * E + Ft_dot + gamma * Ft) / std::sqrt(radicand(t));
    };
    return ControlPulse(std::move(fn), env.t_start(), env.t_end());
}

ControlPulse omega_G(const SystemParams& p, const PhotonEnvelope& env, double Delta) {
    return adiabatic_pulse(env.clone(), dressed_linewidth(p, false), Delta);
}

ControlPulse omega_X(const SystemParams& p, const PhotonEnvelope& env, double Delta) {
    return adiabatic_pulse(env.clone(), dressed_linewidth(p, true), Delta);
}

ControlPulse omega_X_retr(const SystemParams& p, const PhotonEnvelope& env_out, double Delta,
                          double eta_norm) {
    auto envp = env_out.clone();
    const double gC = dressed_linewidth(p, true);
    const double total = envp->norm_squared();
    if (eta_norm <= 0) eta_norm = total;
    const double mag0 = std::sqrt(gC * gC + Delta * Delta) / std::sqrt(2.0 * gC);
    auto fn = [envp, gC, Delta, mag0, total, eta_norm](double t) -> Complex {
        const double rem = std::max(total - envp->cumulative_norm(t), kCumFloor);
        const Complex amp = mag0 * envp->value(t) / std::sqrt(rem);
        if (Delta == 0.0) return amp;
        const double chi = -Delta / (2.0 * gC) * std::log(std::max(rem / eta_norm, kCumFloor));
        return amp * std::exp(I * chi);
    };
    return ControlPulse(std::move(fn), env_out.t_start(), env_out.t_end());
}

ControlPulse time_reverse(const ControlPulse& pulse, double T) {
    ControlPulse src = pulse;  // value copy keeps tables alive
    return ControlPulse([src, T](double t) { return std::conj(src(T - t)); }, T - pulse.t_end(),
                        T - pulse.t_start());
}

// ---------------------------------------------------------------------------

PhaseDetuningPulse phase_to_detuning(const ControlPulse& pulse, int n_grid) {
    require(n_grid >= 64, "phase grid too coarse");
    const double a = pulse.t_start(), b = pulse.t_end();
    const double h = (b - a) / (n_grid - 1);
    VectorXr chi(n_grid), mag(n_grid);
    double peak = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const Complex v = pulse(a + i * h);
        mag[i] = std::abs(v);
        chi[i] = std::arg(v);
        peak = std::max(peak, mag[i]);
    }
    // unwrap, skipping samples with negligible amplitude
    bool rough = false;
    for (int i = 1; i < n_grid; ++i) {
        double d = chi[i] - chi[i - 1];
        while (d > M_PI) d -= two_pi;
        while (d < -M_PI) d += two_pi;
        if (std::abs(d) > M_PI / 2 && mag[i] > 1e-9 * peak) rough = true;
        chi[i] = chi[i - 1] + (mag[i] > 1e-12 * peak ? d : 0.0);
    }
    if (rough)
        std::cerr << "pms: warning: pulse phase changes fast on the sampling grid; "
                     "finite-difference detuning may be inaccurate\n";

    auto chid = std::make_shared<VectorXr>(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        auto at = [&](int j) { return chi[std::clamp(j, 0, n_grid - 1)]; };
        if (i >= 2 && i <= n_grid - 3)
            (*chid)[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
        else {
            const int j = std::clamp(i, 1, n_grid - 2);
            (*chid)[i] = (at(j + 1) - at(j - 1)) / (2 * h);
        }
        if (mag[i] < 1e-12 * peak) (*chid)[i] = 0.0;
    }

    PhaseDetuningPulse out;
    ControlPulse src = pulse;
    out.magnitude =
        ControlPulse([src](double t) -> Complex { return std::abs(src(t)); }, a, b);
    out.delta2 = [chid, a, h, n_grid](double t) {
        const double u = (t - a) / h;
        if (u <= 0) return (*chid)[0] * -1.0;
        if (u >= n_grid - 1) return (*chid)[n_grid - 1] * -1.0;
        const int i = static_cast<int>(u);
        const double x = u - i;
        return -((*chid)[i] * (1 - x) + (*chid)[i + 1] * x);
    };
    return out;
}

}  // namespace pms
