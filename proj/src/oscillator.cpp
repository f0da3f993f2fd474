#include "dce/oscillator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "dce/constants.hpp"
#include "dce/errors.hpp"
#include "dce/ode.hpp"

namespace dce {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exact stationary solution at frequency w from the standard initial data.
Complex stationary_eps(double w, double t) {
    return std::polar(1.0 / std::sqrt(w), -w * t);
}

double max_profile_frequency(const FrequencyProfile& profile, double a,
                             double b) {
    double w = 0.0;
    const int probes = 512;
    for (int i = 0; i <= probes; ++i) {
        w = std::max(w, profile(a + (b - a) * i / probes));
    }
    return w;
}

Eigen::ArrayXd uniform_grid(double a, double b, Eigen::Index n) {
    Eigen::ArrayXd t(n);
    for (Eigen::Index i = 0; i < n; ++i)
        t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    t[n - 1] = b;
    return t;
}

ComplexTrajectory sample_sudden_jump(const SuddenJump& jump, double t_start,
                                     double t_end, double tol,
                                     const Eigen::ArrayXd& times) {
    const BogoliubovPair pair =
        sudden_jump_pair(jump.omega_i, jump.omega_f, jump.t_jump);
    const double wi = jump.omega_i;
    const double wf = jump.omega_f;
    ComplexTrajectory traj;
    traj.times = times;
    traj.epsilon.resize(times.size());
    traj.epsilon_dot.resize(times.size());
    traj.omega_initial = wi;
    traj.tolerance = tol;
    const Complex i_unit(0.0, 1.0);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t < jump.t_jump) {
            traj.epsilon[k] = stationary_eps(wi, t);
            traj.epsilon_dot[k] = -i_unit * wi * traj.epsilon[k];
        } else {
            const Complex em = std::polar(1.0, -wf * t);
            const Complex ep = std::polar(1.0, +wf * t);
            traj.epsilon[k] =
                (pair.rho_minus * em + pair.rho_plus * ep) / std::sqrt(wf);
            traj.epsilon_dot[k] = i_unit * std::sqrt(wf) *
                                  (-pair.rho_minus * em + pair.rho_plus * ep);
        }
    }
    (void)t_start;
    (void)t_end;
    return traj;
}

}  // namespace

double ComplexTrajectory::max_wronskian_drift() const {
    double drift = 0.0;
    for (Eigen::Index k = 0; k < times.size(); ++k)
        drift = std::max(drift, std::abs(wronskian(k) - 1.0));
    return drift;
}

ThermalState ThermalState::from_temperature(double theta_kelvin,
                                            double omega_i) {
    if (theta_kelvin < 0.0)
        throw InvalidInput("ThermalState: temperature must be >= 0");
    if (!(omega_i > 0.0))
        throw NonPositiveFrequency("ThermalState: omega_i must be > 0");
    ThermalState s;
    s.theta_ = theta_kelvin;
    s.omega_i_ = omega_i;
    if (theta_kelvin == 0.0) {
        s.g_ = 1.0;
        return s;
    }
    const double x = constants::hbar * omega_i /
                     (2.0 * constants::k_boltzmann * theta_kelvin);
    // coth(x), stable for both large and small arguments.
    s.g_ = x > 20.0 ? 1.0 : (x < 1e-8 ? 1.0 / x + x / 3.0 : 1.0 / std::tanh(x));
    return s;
}

ThermalState ThermalState::from_g(double g) {
    if (!(g >= 1.0)) throw InvalidInput("ThermalState: G must be >= 1");
    ThermalState s;
    s.g_ = g;
    return s;
}

ComplexTrajectory integrate_classical(const FrequencyProfile& profile,
                                      double t_start, double t_end, double tol,
                                      const IntegrateOptions& opt) {
    if (!(t_end > t_start))
        throw InvalidInput("integrate_classical: t_end must exceed t_start");
    if (!(tol > 1e-14 && tol < 1e-3))
        throw InvalidInput("integrate_classical: tol must lie in (1e-14, 1e-3)");

    const double w_max = max_profile_frequency(profile, t_start, t_end);
    const double periods = (t_end - t_start) * w_max / kTwoPi;
    const Eigen::Index n = std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(std::ceil(periods * opt.samples_per_period)) + 1,
        opt.min_samples, opt.max_samples);
    const Eigen::ArrayXd times = uniform_grid(t_start, t_end, n);

    // An instantaneous jump inside the interval is matched exactly rather
    // than stepped across.
    if (const auto* jump = std::get_if<SuddenJump>(&profile.variant())) {
        if (jump->t_jump > t_start && jump->t_jump < t_end)
            return sample_sudden_jump(*jump, t_start, t_end, tol, times);
    }

    const double w_i = profile(t_start);
    Eigen::Vector2cd y0;
    y0[0] = stationary_eps(w_i, t_start);
    y0[1] = Complex(0.0, -1.0) * w_i * y0[0];

    ComplexTrajectory traj;
    traj.times = times;
    traj.epsilon.resize(n);
    traj.epsilon_dot.resize(n);
    traj.omega_initial = w_i;
    traj.tolerance = tol;

    auto rhs = [&](double t, const Eigen::Vector2cd& y) {
        const double w = profile(t);
        Eigen::Vector2cd dy;
        dy[0] = y[1];
        dy[1] = -(w * w) * y[0];
        return dy;
    };

    OdeOptions ode;
    ode.rel_tol = tol / 50.0;
    ode.abs_tol = tol / 50.0;
    ode.max_step = kTwoPi / w_max;  // never skip over an oscillation

    Eigen::Index k = 0;
    integrate_dopri5(rhs, t_start, t_end, y0,
                     std::span<const double>(times.data(),
                                             static_cast<std::size_t>(n)),
                     [&](double, const Eigen::Vector2cd& y) {
                         traj.epsilon[k] = y[0];
                         traj.epsilon_dot[k] = y[1];
                         ++k;
                     },
                     ode);
    if (k != n)
        throw ToleranceNotMet("integrate_classical: integrator did not reach t_end");
    return traj;
}

BogoliubovPair extract_bogoliubov(const ComplexTrajectory& traj, double omega_f,
                                  double fit_window) {
    if (!(omega_f > 0.0))
        throw NonPositiveFrequency("extract_bogoliubov: omega_f must be > 0");
    if (traj.times.size() < 4)
        throw IllConditionedFit("extract_bogoliubov: trajectory too short");
    if (fit_window <= 0.0) fit_window = 5.0 * kTwoPi / omega_f;

    const double t_last = traj.times[traj.times.size() - 1];
    const double t_from = t_last - fit_window;
    Eigen::Index first = 0;
    while (first < traj.times.size() && traj.times[first] < t_from) ++first;
    const Eigen::Index m = traj.times.size() - first;
    if (m < 8)
        throw IllConditionedFit(
            "extract_bogoliubov: fewer than 8 samples in the fit window");

    const double sw = std::sqrt(omega_f);
    const Complex i_unit(0.0, 1.0);

    // Per-sample estimates: at each sample (eps, eps') determines the pair
    // exactly; their spread across the window measures stationarity.
    Eigen::ArrayXcd rm(m), rp(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double t = traj.times[first + j];
        const Complex e = traj.epsilon[first + j];
        const Complex de = traj.epsilon_dot[first + j];
        rm[j] = 0.5 * std::polar(1.0, +omega_f * t) * (sw * e + i_unit * de / sw);
        rp[j] = 0.5 * std::polar(1.0, -omega_f * t) * (sw * e - i_unit * de / sw);
    }
    const Complex rm_mean = rm.mean();
    const Complex rp_mean = rp.mean();
    const double scale = std::max(1.0, std::abs(rm_mean));
    double drift = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        drift = std::max(drift, std::abs(rm[j] - rm_mean));
        drift = std::max(drift, std::abs(rp[j] - rp_mean));
    }
    const double stationarity_tol =
        std::max(1e-6, 1e3 * std::max(traj.tolerance, 1e-12)) * scale;
    if (drift > stationarity_tol)
        throw WindowNotStationary(
            "extract_bogoliubov: Bogoliubov estimates drift across the fit "
            "window (drift " +
            std::to_string(drift) + ")");

    // Weighted least squares on both eps and eps'/omega_f rows.
    Eigen::MatrixXcd a(2 * m, 2);
    Eigen::VectorXcd b(2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double t = traj.times[first + j];
        const Complex em = std::polar(1.0, -omega_f * t);
        const Complex ep = std::polar(1.0, +omega_f * t);
        a(2 * j, 0) = em / sw;
        a(2 * j, 1) = ep / sw;
        b(2 * j) = traj.epsilon[first + j];
        a(2 * j + 1, 0) = -i_unit * em / sw;
        a(2 * j + 1, 1) = +i_unit * ep / sw;
        b(2 * j + 1) = traj.epsilon_dot[first + j] / omega_f;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!std::isfinite(cond) || cond > 1e8)
        throw IllConditionedFit("extract_bogoliubov: condition number " +
                                std::to_string(cond));
    const Eigen::Vector2cd x = svd.solve(b);

    BogoliubovPair pair;
    pair.rho_minus = x[0];
    pair.rho_plus = x[1];
    pair.fit_residual =
        (a * x - b).norm() / std::max(b.norm(), 1e-300);
    return pair;
}

double photon_number(const BogoliubovPair& pair, const ThermalState& thermal) {
    return thermal.g() * pair.reflection() / pair.transmission();
}

double photon_number_from_tail(const ComplexTrajectory& traj, double omega_f,
                               const ThermalState& thermal, double window) {
    if (!(omega_f > 0.0))
        throw NonPositiveFrequency("photon_number_from_tail: omega_f must be > 0");
    if (window <= 0.0) window = 5.0 * kTwoPi / omega_f;
    const double t_last = traj.times[traj.times.size() - 1];
    double acc = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < t_last - window) continue;
        const double e2 = std::norm(traj.epsilon[k]);
        const double de2 = std::norm(traj.epsilon_dot[k]);
        acc += (de2 + omega_f * omega_f * e2) / (4.0 * omega_f) - 0.5;
        ++count;
    }
    if (count == 0)
        throw InvalidInput("photon_number_from_tail: empty averaging window");
    return thermal.g() * acc / static_cast<double>(count);
}

double fresnel_bound(double omega_i, double omega_f) {
    if (!(omega_i > 0.0) || !(omega_f > 0.0))
        throw NonPositiveFrequency("fresnel_bound: frequencies must be > 0");
    const double d = omega_i - omega_f;
    const double s = omega_i + omega_f;
    return (d * d) / (s * s);
}

BogoliubovPair sudden_jump_pair(double omega_i, double omega_f, double t_jump) {
    if (!(omega_i > 0.0) || !(omega_f > 0.0))
        throw NonPositiveFrequency("sudden_jump_pair: frequencies must be > 0");
    const double denom = 2.0 * std::sqrt(omega_i * omega_f);
    BogoliubovPair pair;
    pair.rho_minus =
        (omega_f + omega_i) / denom * std::polar(1.0, (omega_f - omega_i) * t_jump);
    pair.rho_plus =
        (omega_f - omega_i) / denom * std::polar(1.0, -(omega_f + omega_i) * t_jump);
    return pair;
}

BogoliubovPair bogoliubov_for_profile(const FrequencyProfile& profile,
                                      double t_start, double t_end,
                                      double tol) {
    const ComplexTrajectory traj =
        integrate_classical(profile, t_start, t_end, tol);
    return extract_bogoliubov(traj, profile(t_end));
}

}  // namespace dce
