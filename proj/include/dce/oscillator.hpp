#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>

#include "dce/frequency_profile.hpp"

namespace dce {

using Complex = std::complex<double>;

/// Sampled solution of eps'' + omega^2(t) eps = 0 started from
/// eps = omega_i^{-1/2} exp(-i omega_i t), eps' = -i omega_i eps.
/// The Wronskian Im(eps * conj(eps')) equals 1 for the exact solution.
struct ComplexTrajectory {
    Eigen::ArrayXd times;
    Eigen::ArrayXcd epsilon;      // units (rad/s)^{-1/2}
    Eigen::ArrayXcd epsilon_dot;  // units (rad/s)^{+1/2}
    double omega_initial = 0.0;
    double tolerance = 0.0;  // rel tol the trajectory was integrated at

    /// Im(eps conj(eps')) at sample k.
    double wronskian(Eigen::Index k) const {
        return std::imag(epsilon[k] * std::conj(epsilon_dot[k]));
    }
    /// max_k |wronskian - 1| over all samples.
    double max_wronskian_drift() const;
};

/// Coefficients of the asymptotic decomposition
/// eps(t) = omega_f^{-1/2} [rho_minus e^{-i omega_f t} + rho_plus e^{+i omega_f t}],
/// normalized as |rho_minus|^2 - |rho_plus|^2 = 1.
struct BogoliubovPair {
    Complex rho_minus{1.0, 0.0};
    Complex rho_plus{0.0, 0.0};
    double fit_residual = 0.0;  // RMS of the weighted least-squares residual

    double normalization_defect() const {
        return std::norm(rho_minus) - std::norm(rho_plus) - 1.0;
    }
    /// Effective energy reflection coefficient R = |rho_plus/rho_minus|^2.
    double reflection() const { return std::norm(rho_plus) / std::norm(rho_minus); }
    /// T = 1 - R = |rho_minus|^{-2}.
    double transmission() const { return 1.0 / std::norm(rho_minus); }
};

/// Thermal amplification factor G = coth(hbar omega_i / (2 k_B Theta)),
/// with G = 1 for the vacuum (Theta = 0).
class ThermalState {
public:
    /// Vacuum initial state, G = 1.
    ThermalState() = default;

    /// From a physical temperature in kelvin and reference frequency in rad/s.
    static ThermalState from_temperature(double theta_kelvin, double omega_i);

    /// Directly from a precomputed G >= 1 (natural-unit workflows).
    static ThermalState from_g(double g);

    double g() const { return g_; }
    double temperature() const { return theta_; }
    double reference_omega() const { return omega_i_; }

private:
    double g_ = 1.0;
    double theta_ = 0.0;
    double omega_i_ = 0.0;
};

struct IntegrateOptions {
    double samples_per_period = 32.0;  // of the highest frequency seen
    Eigen::Index min_samples = 256;
    Eigen::Index max_samples = 4'000'000;
};

/// Integrates the classical mode equation over [t_start, t_end] for an
/// arbitrary profile. SuddenJump profiles are handled by exact junction
/// matching (continuity of eps, eps') instead of stepping across the
/// discontinuity. tol must lie in (1e-14, 1e-3).
ComplexTrajectory integrate_classical(const FrequencyProfile& profile,
                                      double t_start, double t_end, double tol,
                                      const IntegrateOptions& opt = {});

/// Projects the trajectory tail onto e^{-i omega_f t}, e^{+i omega_f t} by
/// weighted least squares over the final `fit_window` seconds (default: five
/// periods 2 pi/omega_f). Throws WindowNotStationary when the per-sample
/// Bogoliubov estimates drift across the window, IllConditionedFit when the
/// window undersamples the exponentials.
BogoliubovPair extract_bogoliubov(const ComplexTrajectory& traj, double omega_f,
                                  double fit_window = 0.0);

/// Mean quanta count N = G R / T for the transformed mode.
double photon_number(const BogoliubovPair& pair,
                     const ThermalState& thermal = {});

/// Same quantity from raw tail samples:
/// N = G [ (|eps'|^2 + omega_f^2 |eps|^2) / (4 omega_f) - 1/2 ],
/// averaged over the samples in the final `window` seconds.
double photon_number_from_tail(const ComplexTrajectory& traj, double omega_f,
                               const ThermalState& thermal = {},
                               double window = 0.0);

/// Reflection bound for monotone profiles: (omega_i - omega_f)^2 / (omega_i + omega_f)^2.
double fresnel_bound(double omega_i, double omega_f);

/// Closed-form Bogoliubov pair for an instantaneous jump omega_i -> omega_f
/// at t_jump (junction matching of eps and eps').
BogoliubovPair sudden_jump_pair(double omega_i, double omega_f, double t_jump);

/// Convenience: integrate a profile and extract the pair from its tail.
BogoliubovPair bogoliubov_for_profile(const FrequencyProfile& profile,
                                      double t_start, double t_end, double tol);

}  // namespace dce
