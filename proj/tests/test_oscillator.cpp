#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "dce/oscillator.hpp"

using namespace dce;

namespace {

// Independent junction-matching oracle for an instantaneous frequency jump:
// continuity of eps and eps' at t_jump, solved by hand.
struct JumpOracle {
    std::complex<double> rho_minus;
    std::complex<double> rho_plus;
};

JumpOracle jump_oracle(double wi, double wf, double tj) {
    const std::complex<double> i_unit(0.0, 1.0);
    const std::complex<double> u =
        std::exp(-i_unit * wi * tj) / std::sqrt(wi);
    const std::complex<double> du = -i_unit * wi * u;
    // rho_minus e^{-i wf tj} = (sqrt(wf) u + i du / sqrt(wf)) / 2
    // rho_plus  e^{+i wf tj} = (sqrt(wf) u - i du / sqrt(wf)) / 2
    const std::complex<double> rm =
        0.5 * (std::sqrt(wf) * u + i_unit * du / std::sqrt(wf)) *
        std::exp(i_unit * wf * tj);
    const std::complex<double> rp =
        0.5 * (std::sqrt(wf) * u - i_unit * du / std::sqrt(wf)) *
        std::exp(-i_unit * wf * tj);
    return {rm, rp};
}

}  // namespace

TEST_CASE("constant profile is stationary") {
    const auto profile = FrequencyProfile::constant(1.0);
    const auto traj = integrate_classical(profile, 0.0, 10.0, 1e-10);
    const auto n = traj.times.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        CHECK(std::abs(traj.epsilon[k]) == doctest::Approx(1.0).epsilon(1e-8));
    }
    const std::complex<double> expected = std::polar(1.0, -10.0);
    CHECK(std::abs(traj.epsilon[n - 1] - expected) < 1e-8);

    const auto pair = extract_bogoliubov(traj, 1.0);
    CHECK(std::abs(pair.rho_minus - std::complex<double>(1.0, 0.0)) < 1e-8);
    CHECK(std::abs(pair.rho_plus) < 1e-8);
    CHECK(photon_number(pair) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("sudden jump matches the junction oracle") {
    const auto oracle = jump_oracle(1.0, 2.0, 5.0);
    CHECK(std::abs(oracle.rho_minus) ==
          doctest::Approx(3.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(std::abs(oracle.rho_plus) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));

    const auto profile = FrequencyProfile::sudden_jump(1.0, 2.0, 5.0);
    const auto traj = integrate_classical(profile, 0.0, 40.0, 1e-10);

    // eps and eps' are continuous across the jump.
    Eigen::Index kj = 0;
    while (traj.times[kj] < 5.0) ++kj;
    CHECK(std::abs(traj.epsilon[kj] - traj.epsilon[kj - 1]) < 0.1);
    CHECK(traj.max_wronskian_drift() < 1e-12);

    const auto pair = extract_bogoliubov(traj, 2.0);
    CHECK(std::abs(pair.rho_minus - oracle.rho_minus) < 1e-9);
    CHECK(std::abs(pair.rho_plus - oracle.rho_plus) < 1e-9);
    CHECK(pair.reflection() == doctest::Approx(1.0 / 9.0).epsilon(1e-9));
    CHECK(std::abs(pair.normalization_defect()) < 1e-12);
}

TEST_CASE("sudden jump photon numbers follow N = G R / T") {
    const auto pair = sudden_jump_pair(1.0, 2.0, 5.0);
    CHECK(photon_number(pair) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(photon_number(pair, ThermalState::from_g(3.0)) ==
          doctest::Approx(0.375).epsilon(1e-12));
    // N = (wf - wi)^2 / (4 wi wf) for the jump.
    CHECK(photon_number(pair) ==
          doctest::Approx((2.0 - 1.0) * (2.0 - 1.0) / (4.0 * 1.0 * 2.0)));
}

TEST_CASE("harmonic modulation conserves the Wronskian") {
    const auto profile = FrequencyProfile::harmonic(1.0, 0.01);
    const auto traj = integrate_classical(profile, 0.0, 100.0, 1e-9);
    CHECK(traj.max_wronskian_drift() < 1e-8);
}

TEST_CASE("wronskian drift stays within 10x tolerance") {
    for (double tol : {1e-6, 1e-9, 1e-11}) {
        const auto profile = FrequencyProfile::smooth_ramp(1.0, 2.0, 20.0, 2.0);
        const auto traj = integrate_classical(profile, 0.0, 60.0, tol);
        CHECK(traj.max_wronskian_drift() < 10.0 * tol);
    }
}

TEST_CASE("smooth ramp respects the Fresnel bound and the adiabatic limit") {
    // Moderately fast ramp: R below the sudden-jump value.
    const auto fast = FrequencyProfile::smooth_ramp(1.0, 2.0, 30.0, 0.05);
    const auto pair_fast = bogoliubov_for_profile(fast, 0.0, 80.0, 1e-10);
    CHECK(pair_fast.reflection() <= fresnel_bound(1.0, 2.0) + 1e-8);
    CHECK(pair_fast.reflection() > 0.0);

    // Slow ramp: width * min(omega) = 50 -> R <= 1e-3.
    const auto slow = FrequencyProfile::smooth_ramp(1.0, 2.0, 500.0, 50.0);
    const auto pair_slow = bogoliubov_for_profile(slow, 0.0, 1100.0, 1e-10);
    CHECK(pair_slow.reflection() <= 1e-3);

    // Width -> larger suppresses R monotonically (spot check).
    const auto mid = FrequencyProfile::smooth_ramp(1.0, 2.0, 100.0, 4.0);
    const auto pair_mid = bogoliubov_for_profile(mid, 0.0, 250.0, 1e-10);
    CHECK(pair_mid.reflection() < pair_fast.reflection());
}

TEST_CASE("fresnel bound values") {
    CHECK(fresnel_bound(1.0, 1.0) == 0.0);
    CHECK(fresnel_bound(1.0, 2.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(fresnel_bound(1.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(fresnel_bound(2.0, 1.0) == fresnel_bound(1.0, 2.0));
    CHECK_THROWS_AS(fresnel_bound(0.0, 1.0), NonPositiveFrequency);
    CHECK_THROWS_AS(fresnel_bound(1.0, -2.0), NonPositiveFrequency);
}

TEST_CASE("randomized monotone profiles obey the Fresnel bound") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double wi = 0.5 + 1.5 * u01(rng);
        const double wf = 0.5 + 1.5 * u01(rng);
        const int kind = trial % 3;
        double r = 0.0;
        if (kind == 0) {
            const double width = 0.05 + 2.0 * u01(rng);
            const auto p = FrequencyProfile::smooth_ramp(wi, wf, 30.0, width);
            r = bogoliubov_for_profile(p, 0.0, 30.0 + 60.0 / wf, 1e-9)
                    .reflection();
        } else if (kind == 1) {
            const auto p = FrequencyProfile::sudden_jump(wi, wf, 10.0);
            r = bogoliubov_for_profile(p, 0.0, 10.0 + 40.0 / wf, 1e-9)
                    .reflection();
        } else {
            // Random monotone table over [0, 20], then clamped-constant.
            const int knots = 5 + static_cast<int>(u01(rng) * 6);
            Eigen::ArrayXd ts(knots), ws(knots);
            double acc = wi;
            for (int i = 0; i < knots; ++i) {
                ts[i] = 20.0 * i / (knots - 1);
                ws[i] = acc;
                acc += (wf - wi) * u01(rng) / knots * 2.0;
            }
            ws[knots - 1] = wf;
            // Enforce monotonicity toward wf.
            for (int i = 1; i < knots; ++i) {
                if (wf >= wi)
                    ws[i] = std::max(ws[i], ws[i - 1]);
                else
                    ws[i] = std::min(ws[i], ws[i - 1]);
            }
            const auto p = FrequencyProfile::tabulated(ts, ws);
            r = bogoliubov_for_profile(p, -5.0, 20.0 + 50.0 / wf, 1e-9)
                    .reflection();
        }
        CHECK(r <= fresnel_bound(wi, wf) + 1e-4);
    }
}

TEST_CASE("photon number from pair and from raw tail agree") {
    const auto profile = FrequencyProfile::smooth_ramp(1.0, 2.5, 25.0, 1.5);
    const auto traj = integrate_classical(profile, 0.0, 70.0, 1e-11);
    const auto pair = extract_bogoliubov(traj, 2.5);
    const double n_pair = photon_number(pair);
    const double n_raw = photon_number_from_tail(traj, 2.5);
    CHECK(n_raw ==
          doctest::Approx(n_pair).epsilon(1e-6));
}

TEST_CASE("extraction is invariant under the fit-window choice") {
    const auto profile = FrequencyProfile::smooth_ramp(1.0, 2.0, 25.0, 1.0);
    const auto traj = integrate_classical(profile, 0.0, 90.0, 1e-11);
    const auto base = extract_bogoliubov(traj, 2.0);
    for (double periods : {3.0, 5.0, 10.0}) {
        const auto pair =
            extract_bogoliubov(traj, 2.0, periods * 2.0 * M_PI / 2.0);
        CHECK(std::abs(pair.rho_minus - base.rho_minus) < 1e-8);
        CHECK(std::abs(pair.rho_plus - base.rho_plus) < 1e-8);
    }
}

TEST_CASE("photon number is linear in the thermal factor") {
    std::mt19937_64 rng(44044);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pair = sudden_jump_pair(0.5 + 2.0 * u01(rng),
                                           0.5 + 2.0 * u01(rng), u01(rng));
        const double g = 1.0 + 5.0 * u01(rng);
        CHECK(photon_number(pair, ThermalState::from_g(g)) ==
              doctest::Approx(g * photon_number(pair)).epsilon(1e-12));
    }
}

TEST_CASE("thermal factor") {
    CHECK(ThermalState().g() == 1.0);
    CHECK(ThermalState::from_temperature(0.0, 1e10).g() == 1.0);
    const double g1 = ThermalState::from_temperature(1.0, 1e10).g();
    const double g2 = ThermalState::from_temperature(2.0, 1e10).g();
    CHECK(g1 >= 1.0);
    CHECK(g2 >= g1);  // monotone nondecreasing in temperature
    // High-temperature limit: G ~ 2 kB T / (hbar omega).
    const double g_hot = ThermalState::from_temperature(300.0, 1e10).g();
    CHECK(g_hot ==
          doctest::Approx(2.0 * 1.380649e-23 * 300.0 /
                          (1.054571817e-34 * 1e10))
              .epsilon(1e-3));
    CHECK_THROWS_AS(ThermalState::from_g(0.5), InvalidInput);
}

TEST_CASE("error paths") {
    const auto profile = FrequencyProfile::constant(1.0);
    CHECK_THROWS_AS(integrate_classical(profile, 0.0, 10.0, 1e-2), InvalidInput);
    CHECK_THROWS_AS(integrate_classical(profile, 0.0, 10.0, 1e-15), InvalidInput);
    CHECK_THROWS_AS(integrate_classical(profile, 10.0, 0.0, 1e-9), InvalidInput);

    // omega(t) <= 0 rejected at construction.
    CHECK_THROWS_AS(FrequencyProfile::constant(-1.0), NonPositiveFrequency);
    CHECK_THROWS_AS(FrequencyProfile::harmonic(1.0, 0.6), InvalidInput);
    Eigen::ArrayXd ts(3), ws(3);
    ts << 0.0, 1.0, 0.5;
    ws << 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(FrequencyProfile::tabulated(ts, ws), InvalidInput);

    // Fit window covering the ramp itself is not stationary.
    const auto ramp = FrequencyProfile::smooth_ramp(1.0, 2.0, 30.0, 1.0);
    const auto traj = integrate_classical(ramp, 0.0, 33.0, 1e-9);
    CHECK_THROWS_AS(extract_bogoliubov(traj, 2.0, 20.0), WindowNotStationary);
}

TEST_CASE("tabulated queries clamp to endpoints") {
    Eigen::ArrayXd ts(4), ws(4);
    ts << 0.0, 1.0, 2.0, 3.0;
    ws << 1.0, 1.2, 1.7, 2.0;
    const auto p = FrequencyProfile::tabulated(ts, ws);
    CHECK(p(-5.0) == 1.0);
    CHECK(p(9.0) == 2.0);
    CHECK(p(1.0) == doctest::Approx(1.2));
    // Monotone data stays monotone under interpolation.
    double prev = 0.0;
    for (double t = 0.0; t <= 3.0; t += 0.01) {
        const double w = p(t);
        CHECK(w >= prev - 1e-12);
        prev = w;
    }
}
