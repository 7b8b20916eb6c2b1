#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pms/basis.hpp"
#include "pms/envelope.hpp"
#include "pms/modes.hpp"
#include "pms/propagator.hpp"

using namespace pms;

namespace {
const double kTc = 0.5;
const double kT = 4.0 * std::sqrt(3.0) * kTc / M_PI;  // 1.10266
SystemParams paper_params(double kloss_mhz = 0.0) {
    SystemParams p = reference_cavity_params(kloss_mhz);
    p.n_modes = 211;
    p.line_length = 6.0;
    p.t_start = -6 * kTc;
    p.t_end = 6 * kTc;
    return p;
}
}  // namespace

TEST_CASE("sech envelope closed forms") {
    SechEnvelope env(kTc);
    CHECK(env.characteristic_time() == doctest::Approx(1.1027).epsilon(1e-4));
    CHECK(env.value(0.0).real() == doctest::Approx(1.0 / std::sqrt(kT)).epsilon(1e-12));
    CHECK(env.value(0.0).real() == doctest::Approx(0.9523).epsilon(1e-3));

    // norm over +-6 Tc: eps = 1 - tanh(sqrt(3) pi) = 3.75e-5
    const double n2 = env.norm_squared();
    CHECK(n2 < 1.0);
    CHECK(1.0 - n2 < 1e-4);
    CHECK(1.0 - n2 == doctest::Approx(1.0 - std::tanh(std::sqrt(3.0) * M_PI)).epsilon(1e-6));

    CHECK_THROWS(SechEnvelope(0.0));
    CHECK_THROWS(SechEnvelope(-1.0));

    // analytic derivative vs finite differences
    for (double t : {-1.0, -0.3, 0.2, 0.9}) {
        const double h = 1e-6;
        const Complex fd = (env.value(t + h) - env.value(t - h)) / (2 * h);
        CHECK(std::abs(env.derivative(t) - fd) < 1e-6);
    }

    // spectral amplitude: closed form against direct quadrature on a window
    // wide enough that the amplitude tails are negligible
    SechEnvelope wide(kTc, 0.0, 18.0);
    FunctionEnvelope raw([&](double t) { return wide.value(t); }, wide.t_start(), wide.t_end());
    for (double w : {0.0, 3.0, 11.0}) {
        CHECK(std::abs(wide.spectral_amplitude(w) - raw.spectral_amplitude(w)) < 1e-6);
    }
}

TEST_CASE("coherence time") {
    SUBCASE("sech: Tc = pi T / (4 sqrt 3)") {
        SechEnvelope env(kTc);
        CHECK(coherence_time(env) == doctest::Approx(0.5).epsilon(2e-3));
    }
    SUBCASE("time shift leaves Tc invariant") {
        SechEnvelope env(kTc, 2.7);
        CHECK(coherence_time(env) == doctest::Approx(0.5).epsilon(2e-3));
    }
    SUBCASE("rectangular width W: W / sqrt(12)") {
        const double W = 1.0;
        FunctionEnvelope rect([](double) { return Complex(1.0); }, 0.0, W);
        CHECK(coherence_time(rect) == doctest::Approx(W / std::sqrt(12.0)).epsilon(1e-9));
    }
    SUBCASE("zero-norm envelope rejected") {
        FunctionEnvelope zero([](double) { return Complex(0.0); }, 0.0, 1.0);
        CHECK_THROWS(coherence_time(zero));
    }
}

TEST_CASE("mode grid") {
    SystemParams p = paper_params();
    const VectorXr d = mode_grid(p);
    CHECK(d.size() == 211);
    CHECK(d[105] == 0.0);  // center mode resonant
    CHECK(d[106] - d[105] == doctest::Approx(M_PI / 6.0).epsilon(1e-12));
    CHECK(d[106] - d[105] == doctest::Approx(0.5236).epsilon(1e-3));
    for (int i = 0; i < 211; ++i) CHECK(d[i] == doctest::Approx(-d[210 - i]).epsilon(1e-14));
}

TEST_CASE("mode coupling") {
    SystemParams p = paper_params();
    CHECK(mode_coupling(p) == doctest::Approx(1.592).epsilon(1e-3));
    SystemParams p0 = p;
    p0.kappa = 0.0;
    CHECK(mode_coupling(p0) == 0.0);
    SystemParams p2 = p;
    p2.line_length = 12.0;
    const double l1 = mode_coupling(p), l2 = mode_coupling(p2);
    CHECK(l2 * l2 == doctest::Approx(l1 * l1 / 2.0).epsilon(1e-12));
}

TEST_CASE("photon mode amplitudes") {
    SystemParams p = paper_params();
    SechEnvelope env(kTc);
    double raw = 0.0;
    const VectorXc Ek = photon_mode_amplitudes(env, p, &raw);
    CHECK(raw == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(Ek.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));

    // real symmetric envelope: spectrum symmetric and peaked at the center
    int imax = 0;
    Ek.cwiseAbs().maxCoeff(&imax);
    CHECK(imax == 105);
    for (int i = 0; i < 211; ++i)
        CHECK(std::abs(Ek[i]) == doctest::Approx(std::abs(Ek[210 - i])).epsilon(1e-10));
}

TEST_CASE("free propagation reconstructs the envelope (N-convergence)") {
    // Free line (g = lambda = 0): modes only pick up phases. The spatial
    // density from the sine expansion must match the analytic incoming +
    // mirror-image interference pattern, better with growing N.
    SechEnvelope env(kTc);
    const double t = -3 * kTc;  // packet mid-flight, peak 1.5 us from mirror
    double prev_err = 1e9;
    for (int N : {51, 101, 211}) {
        SystemParams p = paper_params();
        p.n_modes = N;
        const VectorXr dets = mode_grid(p);
        const VectorXc Ek = photon_mode_amplitudes(env, p);
        QuantumState s;
        s.amps = VectorXc::Zero(N + 3);
        for (int i = 0; i < N; ++i) s.amps[i] = Ek[i] * std::exp(-I * dets[i] * t);

        const int offset = 2 * N;
        const double kc = offset * M_PI / p.line_length;
        const VectorXr x = uniform_grid(-p.line_length, 0.0, 8001);
        const VectorXr P = spatial_distribution(s, p, x, offset);

        double num = 0.0, den = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double a = std::abs(env.value(t - x[j]));
            const double b = std::abs(env.value(t + x[j]));
            const double pred = a * a + b * b - 2.0 * std::cos(2 * kc * x[j]) * a * b;
            num += (P[j] - pred) * (P[j] - pred);
            den += pred * pred;
        }
        const double err = std::sqrt(num / den);
        CHECK(err < 1e-3);
        CHECK(err <= prev_err * 1.0001);
        prev_err = err;
    }
}

TEST_CASE("default scenario geometry") {
    SUBCASE("12 c Tc branch") {
        const auto geo = default_scenario_geometry(0.5, mhz_to_angular(2.42));
        CHECK(geo.line_length == doctest::Approx(6.0).epsilon(1e-12));
        CHECK(geo.t_start == doctest::Approx(-3.0));
        CHECK(geo.t_end == doctest::Approx(3.0));
    }
    SUBCASE("15 c / kappa branch") {
        const double kappa = mhz_to_angular(2.42);
        const auto geo = default_scenario_geometry(0.009, kappa);
        CHECK(geo.line_length == doctest::Approx(15.0 / kappa).epsilon(1e-12));
        CHECK(geo.line_length == doctest::Approx(0.9866).epsilon(1e-3));
    }
}

TEST_CASE("basis index bijection") {
    for (int N : {3, 11, 211}) {
        CHECK(basis_dimension(N) == N + 5);
        for (int idx = 0; idx < basis_dimension(N); ++idx) {
            const BasisIndex b = BasisIndex::from_index(idx, N);
            CHECK(b.to_index(N) == idx);
        }
        CHECK(BasisIndex::line_mode(0).to_index(N) == (N - 1) / 2);
        CHECK(BasisIndex::cavity_photon().to_index(N) == N);
        CHECK_THROWS(BasisIndex::line_mode((N - 1) / 2 + 1).to_index(N));
        CHECK_THROWS(BasisIndex::from_index(N + 5, N));
    }
}

TEST_CASE("system params") {
    const SystemParams p = SystemParams::from_mhz(4.9, 2.42, 3.03, 0.33);
    CHECK(p.g == doctest::Approx(4.9 * two_pi).epsilon(1e-15));
    CHECK(p.kappa == doctest::Approx(2.42 * two_pi).epsilon(1e-15));
    CHECK(p.gamma == doctest::Approx(3.03 * two_pi).epsilon(1e-15));
    CHECK(p.kappa_loss == doctest::Approx(0.33 * two_pi).epsilon(1e-15));

    SystemParams bad = p;
    bad.n_modes = 10;
    CHECK_THROWS(bad.validate());
    bad = p;
    bad.line_length = -1;
    CHECK_THROWS(bad.validate());
    bad = p;
    bad.t_start = 0.5;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("sampled envelope") {
    SechEnvelope ref(kTc);
    const int n = 2401;
    VectorXc v(n);
    const double a = ref.t_start(), b = ref.t_end();
    for (int i = 0; i < n; ++i) v[i] = ref.value(a + (b - a) * i / (n - 1));
    SampledEnvelope env(a, b, v);

    SUBCASE("cubic interpolation and FD derivative track the rule") {
        for (double t : {-1.234, -0.21, 0.0, 0.777, 2.1}) {
            CHECK(std::abs(env.value(t) - ref.value(t)) < 1e-8);
            CHECK(std::abs(env.derivative(t) - ref.derivative(t)) < 1e-6);
        }
        CHECK(env.cumulative_norm(0.3) == doctest::Approx(ref.cumulative_norm(0.3)).epsilon(1e-5));
    }
    SUBCASE("normalization and time reversal") {
        SampledEnvelope unit = env.normalized();
        CHECK(unit.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
        SampledEnvelope rev = env.time_reversed();
        CHECK(std::abs(rev.value(a + 0.4) - std::conj(env.value(b - 0.4))) < 1e-9);
        CHECK(env.norm_squared() == doctest::Approx(rev.norm_squared()).epsilon(1e-12));
    }
    SUBCASE("outside the window the envelope vanishes") {
        CHECK(env.value(b + 1.0) == Complex(0.0));
        CHECK(env.value(a - 1.0) == Complex(0.0));
    }
}
