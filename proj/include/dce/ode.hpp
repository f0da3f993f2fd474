#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dce/errors.hpp"

namespace dce {

/// Options for the adaptive Dormand-Prince 5(4) integrator.
struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;   // 0 = choose automatically
    double max_step = 0.0;       // 0 = no cap
    std::size_t max_steps = 50'000'000;
};

/// Integrates y' = f(t, y) with the embedded Dormand-Prince 5(4) pair,
/// invoking `observe(t, y)` at every requested output time (steps are
/// clipped so outputs land exactly on the grid). `State` must behave like
/// an Eigen vector/matrix of doubles or complex doubles.
///
/// Throws ToleranceNotMet on step-size underflow or step-count exhaustion.
template <typename State, typename Rhs, typename Observer>
void integrate_dopri5(Rhs&& f, double t0, double t1, const State& y0,
                      std::span<const double> output_times, Observer&& observe,
                      const OdeOptions& opt = {}) {
    // Butcher tableau (Dormand & Prince 1980).
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // 5th-order minus embedded 4th-order weights (error estimator).
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
    static constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
    static constexpr double e4 = 125.0 / 192 - 393.0 / 640;
    static constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
    static constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
    static constexpr double e7 = -1.0 / 40;

    if (!(t1 > t0)) throw InvalidInput("integrate_dopri5: t1 must exceed t0");

    const double span = t1 - t0;
    double h = opt.initial_step > 0 ? opt.initial_step : span / 100.0;
    if (opt.max_step > 0) h = std::min(h, opt.max_step);

    State y = y0;
    double t = t0;
    State k1 = f(t, y);  // FSAL: reused across accepted steps

    std::size_t next_out = 0;
    while (next_out < output_times.size() && output_times[next_out] <= t0) {
        observe(output_times[next_out], y);
        ++next_out;
    }

    auto err_norm = [&](const State& err, const State& ya, const State& yb) {
        double acc = 0.0;
        const auto* ea = err.data();
        const auto* pa = ya.data();
        const auto* pb = yb.data();
        const auto n = static_cast<std::size_t>(err.size());
        for (std::size_t i = 0; i < n; ++i) {
            const double sc =
                opt.abs_tol +
                opt.rel_tol * std::max(std::abs(pa[i]), std::abs(pb[i]));
            const double r = std::abs(ea[i]) / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(n));
    };

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) break;
        bool hit_output = false;
        double h_try = std::min(h, t1 - t);
        if (next_out < output_times.size() &&
            t + h_try >= output_times[next_out]) {
            h_try = output_times[next_out] - t;
            hit_output = true;
        }
        if (!(h_try > 0)) {  // output time equals current t
            if (hit_output) {
                observe(output_times[next_out], y);
                ++next_out;
                continue;
            }
            break;
        }

        const State k2 = f(t + c2 * h_try, (y + h_try * (a21 * k1)).eval());
        const State k3 =
            f(t + c3 * h_try, (y + h_try * (a31 * k1 + a32 * k2)).eval());
        const State k4 = f(t + c4 * h_try,
                           (y + h_try * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const State k5 =
            f(t + c5 * h_try,
              (y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const State k6 =
            f(t + h_try, (y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5))
                             .eval());
        const State ynew =
            y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = f(t + h_try, ynew);
        const State err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                                   e6 * k6 + e7 * k7);

        const double en = err_norm(err, y, ynew);
        if (en <= 1.0) {
            t += h_try;
            y = ynew;
            k1 = k7;
            if (hit_output) {
                observe(t, y);
                ++next_out;
                // Emit duplicates of the same output time, if any.
                while (next_out < output_times.size() &&
                       output_times[next_out] <= t) {
                    observe(output_times[next_out], y);
                    ++next_out;
                }
            }
        }
        const double safety =
            0.9 * std::pow(en > 0 ? 1.0 / en : 1e8, 0.2);
        h = h_try * std::clamp(safety, 0.2, 5.0);
        if (opt.max_step > 0) h = std::min(h, opt.max_step);
        if (!(h > std::abs(t) * 1e-15 + 1e-300)) {
            throw ToleranceNotMet("integrate_dopri5: step size underflow at t=" +
                                  std::to_string(t));
        }
        if (step + 1 == opt.max_steps) {
            throw ToleranceNotMet(
                "integrate_dopri5: step budget exhausted before t_end");
        }
    }
}

/// Convenience wrapper returning only the final state.
template <typename State, typename Rhs>
State integrate_to(Rhs&& f, double t0, double t1, const State& y0,
                   const OdeOptions& opt = {}) {
    State result = y0;
    const double times[] = {t1};
    integrate_dopri5(
        f, t0, t1, y0, times,
        [&](double, const State& y) { result = y; }, opt);
    return result;
}

}  // namespace dce
