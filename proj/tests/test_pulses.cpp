#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pms/pulse.hpp"

using namespace pms;

namespace {
const double kTc = 0.5;
SystemParams paper_params(double kloss_mhz = 0.0) {
    SystemParams p = reference_cavity_params(kloss_mhz);
    p.n_modes = 211;
    p.line_length = 6.0;
    p.t_start = -6 * kTc;
    p.t_end = 6 * kTc;
    return p;
}

// Envelope family E = A e^{kappa t} + B e^{-gamma t}: the scaled residual
// Ftil = (Edot - kappa E)/g decays exactly at rate gamma, which is the regime
// where the impedance-matching pulse collapses onto the dark-state one.
class TwoExpEnvelope final : public PhotonEnvelope {
public:
    TwoExpEnvelope(double A, double B, double kappa, double gamma, double t0, double t1)
        : PhotonEnvelope(t0, t1), A_(A), B_(B), k_(kappa), g_(gamma) {}
    Complex value(double t) const override {
        return A_ * std::exp(k_ * t) + B_ * std::exp(-g_ * t);
    }
    Complex derivative(double t) const override {
        return A_ * k_ * std::exp(k_ * t) - B_ * g_ * std::exp(-g_ * t);
    }
    Complex second_derivative(double t) const override {
        return A_ * k_ * k_ * std::exp(k_ * t) + B_ * g_ * g_ * std::exp(-g_ * t);
    }
    std::shared_ptr<const PhotonEnvelope> clone() const override {
        return std::make_shared<TwoExpEnvelope>(*this);
    }

private:
    double A_, B_, k_, g_;
};
}  // namespace

TEST_CASE("cooperativity and efficiency bounds") {
    SystemParams p = paper_params();
    CHECK(cooperativity(p) == doctest::Approx(3.27).epsilon(0.01 / 3.27));
    CHECK(eta_max(cooperativity(p)) == doctest::Approx(0.766).epsilon(0.005 / 0.766));

    SystemParams pl = paper_params(0.33);
    CHECK(eta_prime_max(pl) == doctest::Approx(0.653).epsilon(0.001 / 0.653));
    CHECK(eta_prime_max(paper_params()) ==
          doctest::Approx(eta_max(cooperativity(p))).epsilon(1e-14));

    SystemParams g0 = p;
    g0.g = 0.0;
    CHECK(cooperativity(g0) == 0.0);
    SystemParams g2 = p;
    g2.g *= 2.0;
    CHECK(cooperativity(g2) == doctest::Approx(4.0 * cooperativity(p)).epsilon(1e-14));

    SystemParams bad = p;
    bad.kappa = 0.0;
    CHECK_THROWS(cooperativity(bad));
    bad = p;
    bad.gamma = 0.0;
    CHECK_THROWS(cooperativity(bad));

    // monotone decrease of the bound in kappa_loss
    double prev = 1.0;
    for (double klr = 0.0; klr <= 0.51; klr += 0.05) {
        SystemParams q = paper_params();
        q.kappa_loss = klr * q.kappa;
        const double b = eta_prime_max(q);
        CHECK(b < prev + 1e-15);
        prev = b;
    }

    const EfficiencyBounds b = efficiency_bounds(pl);
    CHECK(b.G == doctest::Approx(2.42 / 2.75).epsilon(1e-12));
    CHECK(0.0 <= b.eta_prime_max);
    CHECK(b.eta_prime_max <= b.eta_max);
    CHECK(b.eta_max < 1.0);
}

TEST_CASE("omega_F") {
    SystemParams p = paper_params();
    SechEnvelope env(kTc);

    SUBCASE("default c1 follows the reduction condition") {
        const double rho0 = 1e-4;
        const Complex Ft1 =
            (env.derivative(env.t_start()) - p.kappa * env.value(env.t_start())) / p.g;
        const double expect = 2.0 * p.kappa * rho0 - std::norm(Ft1);
        CHECK(omega_F_default_c1(p, env, rho0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(omega_F_default_c1(p, env, rho0) == doctest::Approx(3.04e-3).epsilon(2e-3));
    }
    SUBCASE("tail follows the envelope") {
        ControlPulse f = omega_F(p, env, omega_F_default_c1(p, env));
        // radicand -> c1 + 2 kappa at the right edge: Omega ~ g E(t2)/sqrt(2 kappa)
        const double t2 = env.t_end();
        const double expect = p.g * std::abs(env.value(t2)) /
                              std::sqrt(omega_F_default_c1(p, env) + 2 * p.kappa);
        CHECK(std::abs(f(t2)) == doctest::Approx(expect).epsilon(1e-3));
        CHECK(std::abs(f(t2)) < 1e-2 * std::abs(f(0.0)));
    }
    SUBCASE("radicand failure names the earliest failing time") {
        // kappa Tc << 1 violates the dark-state following condition: the
        // radicand dips negative mid-pulse and the earliest t is reported
        SystemParams slow = p;
        slow.kappa = mhz_to_angular(0.05);
        try {
            omega_F(slow, env, omega_F_default_c1(slow, env));
            FAIL("expected a radicand error");
        } catch (const std::runtime_error& e) {
            const std::string msg = e.what();
            CHECK(msg.find("radicand") != std::string::npos);
            CHECK(msg.find("t = -") != std::string::npos);  // fails before the peak
        }
        CHECK_THROWS(omega_F(p, env, -1.0));
        CHECK_THROWS(omega_F(p, env, 0.0));
    }
}

TEST_CASE("omega_D reduces to omega_F when the residual decays at rate gamma") {
    SystemParams p = paper_params();
    const double rho0 = 1e-4;

    SUBCASE("gamma = 0, rising exponential (Ftil = 0)") {
        SystemParams p0 = p;
        p0.gamma = 0.0;
        const double a = -2.0, b = 0.0;
        const double A = std::sqrt(2 * p.kappa / (1.0 - std::exp(2 * p.kappa * a)));
        TwoExpEnvelope env(A, 0.0, p.kappa, 0.0, a, b);
        CHECK(env.cumulative_norm(b) == doctest::Approx(1.0).epsilon(1e-8));

        ControlPulse d = omega_D(p0, env, rho0);
        ControlPulse f = omega_F(p0, env, omega_F_default_c1(p0, env, rho0));
        double max_diff = 0.0, max_f = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = a + (b - a) * i / 1000.0;
            max_diff = std::max(max_diff, std::abs(d(t) - f(t)));
            max_f = std::max(max_f, std::abs(f(t)));
        }
        CHECK(max_diff < 1e-6 * max_f);
    }
    SUBCASE("gamma > 0, two-exponential envelope") {
        // E = A e^{kappa(t-b)} + B e^{-gamma(t-a)}: the residual decays at
        // rate gamma and |Ftil(t1)| stays inside the c1 > 0 budget
        const double a = -1.5, b = 0.0;
        const double A0 = std::exp(-p.kappa * b), B0 = 0.02 * std::exp(p.gamma * a);
        TwoExpEnvelope raw(A0, B0, p.kappa, p.gamma, a, b);
        const double n2 = raw.cumulative_norm(b);
        TwoExpEnvelope env(A0 / std::sqrt(n2), B0 / std::sqrt(n2), p.kappa, p.gamma, a, b);

        ControlPulse d = omega_D(p, env, rho0);
        ControlPulse f = omega_F(p, env, omega_F_default_c1(p, env, rho0));
        double max_diff = 0.0, max_f = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double t = a + (b - a) * i / 1000.0;
            max_diff = std::max(max_diff, std::abs(d(t) - f(t)));
            max_f = std::max(max_f, std::abs(f(t)));
        }
        CHECK(max_diff < 1e-6 * max_f);
    }
    SUBCASE("non-adiabatic regime fails loudly") {
        SechEnvelope sharp(0.01);
        CHECK_THROWS_WITH_AS(omega_D(p, sharp, 1e-7), doctest::Contains("radicand"),
                             std::runtime_error);
    }
}

TEST_CASE("omega_G") {
    SystemParams p = paper_params();
    SechEnvelope env(kTc);

    SUBCASE("peak value at t = 0") {
        ControlPulse g = omega_G(p, env, 0.0);
        // half of the photon norm has arrived at the peak: sqrt(gamma(1+C)/T)
        CHECK(std::abs(g(0.0)) == doctest::Approx(8.59).epsilon(2e-3));
        CHECK(angular_to_mhz(std::abs(g(0.0))) == doctest::Approx(1.37).epsilon(3e-3));
    }
    SUBCASE("real at Delta = 0") {
        ControlPulse g = omega_G(p, env, 0.0);
        for (double t : {-2.0, -0.5, 0.0, 1.0, 2.5}) CHECK(g(t).imag() == 0.0);
    }
    SUBCASE("translation covariance") {
        const double shift = 1.7;
        SechEnvelope env2(kTc, shift);
        ControlPulse g1 = omega_G(p, env, 0.0);
        ControlPulse g2 = omega_G(p, env2, 0.0);
        for (double t : {-2.0, -0.3, 0.8}) CHECK(std::abs(g1(t) - g2(t + shift)) < 1e-12);
    }
}

TEST_CASE("omega_X") {
    SechEnvelope env(kTc);
    SUBCASE("kappa_loss = 0 reduces to omega_G pointwise") {
        SystemParams p = paper_params();
        ControlPulse g = omega_G(p, env, 1.5 * p.gamma);
        ControlPulse x = omega_X(p, env, 1.5 * p.gamma);
        for (double t : {-2.9, -1.0, 0.0, 0.5, 2.0}) CHECK(std::abs(g(t) - x(t)) < 1e-12);
    }
    SUBCASE("no clipping at a 50 x 2pi MHz cap") {
        SystemParams pl = paper_params(0.33);
        const double cap = mhz_to_angular(50.0);
        for (ControlPulse pulse : {omega_G(pl, env, 0.0), omega_X(pl, env, 0.0)}) {
            ControlPulse capped = pulse.with_cap(cap);
            for (int i = 0; i <= 20000; ++i) {
                const double t = -3.0 + 6.0 * i / 20000.0;
                (void)capped(t);
            }
            CHECK(capped.clip_count() == 0);
        }
    }
    SUBCASE("clipping is recorded, never silent") {
        SystemParams pl = paper_params(0.33);
        ControlPulse capped = omega_X(pl, env, 0.0).with_cap(5.0);
        for (int i = 0; i <= 100; ++i) (void)capped(-3.0 + 6.0 * i / 100.0);
        CHECK(capped.clip_count() > 0);
        for (int i = 0; i <= 100; ++i)
            CHECK(std::abs(capped(-3.0 + 6.0 * i / 100.0)) <= 5.0 + 1e-12);
    }
}

TEST_CASE("time reversal") {
    SystemParams p = paper_params(0.33);
    const double Tw = 12 * kTc;
    SechEnvelope env(kTc, Tw / 2);  // symmetric envelope on [0, Tw]

    SUBCASE("involution") {
        ControlPulse x = omega_X(p, env, 2.0 * p.gamma);
        ControlPulse xx = time_reverse(time_reverse(x, Tw), Tw);
        for (double t : {0.4, 1.7, 3.0, 4.9}) CHECK(std::abs(x(t) - xx(t)) < 1e-12);
    }
    SUBCASE("time-reversed retrieval pulse is the storage pulse") {
        const double eta = eta_prime_max(p);
        const double Delta = 1.3 * p.gamma;
        // target output: sqrt(eta) x the (symmetric) input envelope
        const int n = 4001;
        VectorXc v(n);
        for (int i = 0; i < n; ++i) v[i] = std::sqrt(eta) * env.value(Tw * i / (n - 1.0));
        SampledEnvelope env_out(0.0, Tw, v);

        ControlPulse retr = omega_X_retr(p, env_out, Delta, eta);
        ControlPulse stored = time_reverse(retr, Tw);
        ControlPulse x = omega_X(p, env, Delta);
        for (double t : {1.2, 2.0, 3.0, 3.7, 4.6}) {
            CHECK(std::abs(stored(t) - x(t)) < 2e-4 * std::abs(x(t)) + 1e-9);
        }
    }
}

TEST_CASE("phase to detuning") {
    SystemParams p = paper_params();
    SechEnvelope env(kTc);

    SUBCASE("real pulse maps to zero detuning") {
        ControlPulse g = omega_G(p, env, 0.0);
        PhaseDetuningPulse pd = phase_to_detuning(g);
        for (double t : {-2.0, 0.0, 1.5}) {
            CHECK(std::abs(pd.delta2(t)) < 1e-10);
            CHECK(std::abs(pd.magnitude(t) - std::abs(g(t))) < 1e-12);
        }
    }
    SUBCASE("adiabatic pulse at finite detuning: AC-Stark compensation") {
        const double Delta = 2.0 * p.gamma;
        const double gC = dressed_linewidth(p, false);
        ControlPulse g = omega_G(p, env, Delta);
        PhaseDetuningPulse pd = phase_to_detuning(g, 20001);
        for (double t : {-1.5, -0.5, 0.0, 0.7, 1.4}) {
            const double expect = -Delta * std::norm(g(t)) / (Delta * Delta + gC * gC);
            CHECK(pd.delta2(t) == doctest::Approx(expect).epsilon(1e-4));
        }
    }
}
