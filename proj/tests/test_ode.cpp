#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "dce/ode.hpp"
#include "dce/quadrature.hpp"

using dce::OdeOptions;

TEST_CASE("dopri5 reproduces the harmonic oscillator") {
    auto rhs = [](double, const Eigen::Vector2d& y) {
        return Eigen::Vector2d(y[1], -y[0]);
    };
    Eigen::Vector2d y0(1.0, 0.0);
    OdeOptions opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-13;
    const Eigen::Vector2d yf = dce::integrate_to(rhs, 0.0, 10.0, y0, opt);
    CHECK(yf[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
    CHECK(yf[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-9));
}

TEST_CASE("dopri5 hits requested output times exactly") {
    auto rhs = [](double t, const Eigen::Vector2d& y) {
        (void)t;
        return Eigen::Vector2d(y[1], -y[0]);
    };
    Eigen::Vector2d y0(0.0, 1.0);
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.5, 7.0, 10.0};
    std::vector<double> seen;
    dce::integrate_dopri5(rhs, 0.0, 10.0, y0, grid,
                          [&](double t, const Eigen::Vector2d& y) {
                              seen.push_back(t);
                              CHECK(y[0] ==
                                    doctest::Approx(std::sin(t)).epsilon(1e-8));
                          });
    REQUIRE(seen.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(seen[i] == grid[i]);
}

TEST_CASE("dopri5 works on complex states") {
    using State = Eigen::Vector2cd;
    const std::complex<double> i_unit(0.0, 1.0);
    auto rhs = [&](double, const State& y) {
        State dy;
        dy[0] = -i_unit * y[0];
        dy[1] = 2.0 * i_unit * y[1];
        return dy;
    };
    State y0;
    y0 << 1.0, 0.5;
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    const State yf = dce::integrate_to(rhs, 0.0, 3.0, y0, opt);
    CHECK(std::abs(yf[0] - std::exp(-3.0 * i_unit)) < 1e-10);
    CHECK(std::abs(yf[1] - 0.5 * std::exp(6.0 * i_unit)) < 1e-10);
}

TEST_CASE("dopri5 tolerance controls the error") {
    auto rhs = [](double t, const Eigen::Matrix<double, 1, 1>& y) {
        Eigen::Matrix<double, 1, 1> dy;
        dy[0] = std::cos(t) * y[0];
        return dy;
    };
    Eigen::Matrix<double, 1, 1> y0;
    y0[0] = 1.0;
    for (double tol : {1e-6, 1e-9, 1e-12}) {
        OdeOptions opt;
        opt.rel_tol = tol;
        opt.abs_tol = tol;
        const auto yf = dce::integrate_to(rhs, 0.0, 5.0, y0, opt);
        const double exact = std::exp(std::sin(5.0));
        CHECK(std::abs(yf[0] - exact) / exact < 100 * tol);
    }
}

TEST_CASE("adaptive simpson integrates smooth and oscillatory functions") {
    const double s =
        dce::adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                              std::numbers::pi, 1e-12);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-10));

    const std::complex<double> i_unit(0.0, 1.0);
    const auto osc = dce::adaptive_simpson(
        [&](double x) { return std::exp(-i_unit * 10.0 * x); }, 0.0, 1.0, 1e-12);
    const std::complex<double> exact =
        (1.0 - std::exp(-10.0 * i_unit)) / (10.0 * i_unit);
    CHECK(std::abs(osc - exact) < 1e-10);
}

TEST_CASE("composite simpson converges on a sharp exponential") {
    const double v = dce::composite_simpson(
        [](double x) { return std::exp(-20.0 * x); }, 0.0, 1.0, 2000);
    CHECK(v == doctest::Approx((1.0 - std::exp(-20.0)) / 20.0).epsilon(1e-10));
}
