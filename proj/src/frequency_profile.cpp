#include "dce/frequency_profile.hpp"

#include <algorithm>
#include <string>

#include "dce/interpolation.hpp"

namespace dce {

FrequencyProfile::FrequencyProfile(ProfileVariant v) : v_(std::move(v)) {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantFrequency>) {
                if (!(p.omega > 0))
                    throw NonPositiveFrequency("constant profile: omega <= 0");
            } else if constexpr (std::is_same_v<T, SuddenJump>) {
                if (!(p.omega_i > 0) || !(p.omega_f > 0))
                    throw NonPositiveFrequency("sudden jump: frequencies must be > 0");
            } else if constexpr (std::is_same_v<T, HarmonicModulation>) {
                if (!(p.omega0 > 0))
                    throw NonPositiveFrequency("harmonic modulation: omega0 <= 0");
                if (!(std::abs(2.0 * p.kappa) < 1.0))
                    throw InvalidInput(
                        "harmonic modulation: |2 kappa| must be < 1 so omega(t) stays positive");
                if (p.omega_mod && !(*p.omega_mod > 0))
                    throw InvalidInput("harmonic modulation: omega_mod <= 0");
            } else if constexpr (std::is_same_v<T, SmoothRamp>) {
                if (!(p.omega_i > 0) || !(p.omega_f > 0))
                    throw NonPositiveFrequency("smooth ramp: frequencies must be > 0");
                if (!(p.width > 0))
                    throw InvalidInput("smooth ramp: width must be > 0");
            } else if constexpr (std::is_same_v<T, TabulatedFrequency>) {
                if (p.times.size() < 2)
                    throw InvalidInput("tabulated profile: need at least 2 samples");
                if (p.times.size() != p.values.size())
                    throw InvalidInput("tabulated profile: times/values size mismatch");
                for (Eigen::Index i = 0; i + 1 < p.times.size(); ++i) {
                    if (!(p.times[i + 1] > p.times[i]))
                        throw InvalidInput(
                            "tabulated profile: times must be strictly increasing");
                }
                if ((p.values <= 0.0).any())
                    throw NonPositiveFrequency(
                        "tabulated profile: all values must be > 0");
            }
        },
        v_);
    if (const auto* tab = std::get_if<TabulatedFrequency>(&v_)) {
        tangents_ = pchip_tangents(tab->times, tab->values);
    }
}

FrequencyProfile FrequencyProfile::tabulated(Eigen::ArrayXd times,
                                             Eigen::ArrayXd values) {
    return FrequencyProfile(
        TabulatedFrequency{std::move(times), std::move(values)});
}

double FrequencyProfile::value_unchecked(double t) const {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantFrequency>) {
                return p.omega;
            } else if constexpr (std::is_same_v<T, SuddenJump>) {
                return t < p.t_jump ? p.omega_i : p.omega_f;
            } else if constexpr (std::is_same_v<T, HarmonicModulation>) {
                return p.omega0 *
                       (1.0 + 2.0 * p.kappa *
                                  std::cos(p.modulation_frequency() * t + p.phase));
            } else if constexpr (std::is_same_v<T, SmoothRamp>) {
                return 0.5 * (p.omega_i + p.omega_f) +
                       0.5 * (p.omega_f - p.omega_i) *
                           std::tanh((t - p.t_center) / p.width);
            } else {
                return pchip_eval(p.times, p.values, tangents_, t);
            }
        },
        v_);
}

double FrequencyProfile::operator()(double t) const {
    const double w = value_unchecked(t);
    if (!(w > 0.0))
        throw NonPositiveFrequency("omega(t) <= 0 at t=" + std::to_string(t));
    return w;
}

bool FrequencyProfile::is_stationary_on(double a, double b,
                                        double rel_tol) const {
    const int probes = 64;
    const double w0 = value_unchecked(a);
    for (int i = 1; i <= probes; ++i) {
        const double t = a + (b - a) * i / probes;
        if (std::abs(value_unchecked(t) - w0) > rel_tol * std::abs(w0))
            return false;
    }
    return true;
}

}  // namespace dce
