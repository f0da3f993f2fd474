#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "dce/errors.hpp"

namespace dce {

/// omega(t) = omega (time independent).
struct ConstantFrequency {
    double omega;  // rad/s
};

/// omega(t) steps instantaneously from omega_i to omega_f at t_jump.
struct SuddenJump {
    double omega_i;  // rad/s
    double omega_f;  // rad/s
    double t_jump;   // s
};

/// omega(t) = omega0 * (1 + 2 kappa cos(omega_mod t + phase)).
/// omega_mod defaults to 2 omega0 (principal parametric resonance).
struct HarmonicModulation {
    double omega0;                    // rad/s
    double kappa;                     // dimensionless depth, |2 kappa| < 1
    std::optional<double> omega_mod;  // rad/s, default 2*omega0
    double phase = 0.0;               // rad

    double modulation_frequency() const {
        return omega_mod ? *omega_mod : 2.0 * omega0;
    }
};

/// Monotone tanh ramp:
/// omega(t) = (omega_i+omega_f)/2 + (omega_f-omega_i)/2 * tanh((t-t_center)/width).
struct SmoothRamp {
    double omega_i;   // rad/s
    double omega_f;   // rad/s
    double t_center;  // s
    double width;     // s
};

/// Tabulated omega(t) with monotone-cubic (Fritsch-Carlson) interpolation.
/// Queries outside the table clamp to the endpoint values.
struct TabulatedFrequency {
    Eigen::ArrayXd times;   // strictly increasing, s
    Eigen::ArrayXd values;  // rad/s
};

using ProfileVariant = std::variant<ConstantFrequency, SuddenJump,
                                    HarmonicModulation, SmoothRamp,
                                    TabulatedFrequency>;

/// Time-dependent mode frequency omega(t) > 0.
class FrequencyProfile {
public:
    explicit FrequencyProfile(ProfileVariant v);

    static FrequencyProfile constant(double omega) {
        return FrequencyProfile(ConstantFrequency{omega});
    }
    static FrequencyProfile sudden_jump(double omega_i, double omega_f,
                                        double t_jump) {
        return FrequencyProfile(SuddenJump{omega_i, omega_f, t_jump});
    }
    static FrequencyProfile harmonic(double omega0, double kappa,
                                     std::optional<double> omega_mod = {},
                                     double phase = 0.0) {
        return FrequencyProfile(
            HarmonicModulation{omega0, kappa, omega_mod, phase});
    }
    static FrequencyProfile smooth_ramp(double omega_i, double omega_f,
                                        double t_center, double width) {
        return FrequencyProfile(SmoothRamp{omega_i, omega_f, t_center, width});
    }
    static FrequencyProfile tabulated(Eigen::ArrayXd times,
                                      Eigen::ArrayXd values);

    /// omega(t); throws NonPositiveFrequency if the value is <= 0.
    double operator()(double t) const;

    /// omega(t) without the positivity check (validation helper).
    double value_unchecked(double t) const;

    const ProfileVariant& variant() const { return v_; }

    /// Initial/final frequencies as seen by clamped evaluation.
    double omega_initial(double t_start) const { return (*this)(t_start); }
    double omega_final(double t_end) const { return (*this)(t_end); }

    /// True when the profile is constant (within rel_tol) over [a, b],
    /// probed on a dense grid.
    bool is_stationary_on(double a, double b, double rel_tol = 1e-9) const;

private:
    ProfileVariant v_;
    // Fritsch-Carlson tangents, precomputed for the tabulated variant.
    Eigen::ArrayXd tangents_;
};

}  // namespace dce
