#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dce/oscillator.hpp"

namespace dce {

/// Parameters of a resonantly modulated single mode:
/// omega(t) = omega0 [1 + 2 kappa cos(2 omega0 t)], cavity quality factor Q
/// (infinity allowed), initial thermal factor G >= 1.
struct ResonantDriveSpec {
    double omega0 = 1.0;  // rad/s
    double kappa = 0.0;   // dimensionless, >= 0
    double q_factor = std::numeric_limits<double>::infinity();
    double g_thermal = 1.0;

    void validate() const;
    /// Soft precondition notes (e.g. kappa beyond the small-depth regime).
    std::vector<std::string> warnings() const;
};

enum class GrowthRegime { lossless, above_threshold, at_threshold, below_threshold };

const char* to_string(GrowthRegime r);

/// Photon count under damping, with regime metadata. Below threshold the
/// model provides no closed form: photons is NaN and `bounded` is set.
struct GrowthReport {
    double photons = 0.0;
    GrowthRegime regime = GrowthRegime::lossless;
    double zeta = 1.0;          // 1 - 1/(2 Q kappa) for finite Q
    double validity_time = 0.0; // 1/(omega0 kappa^2): linear theory horizon
    bool asymptotic_valid = false;  // 2 omega0 kappa zeta t > 1
    bool linear_theory_valid = true;   // omega0 kappa^2 t < 1
    bool bounded = false;       // below threshold: no exponential growth
};

/// Lossless resonant growth N = G sinh^2(omega0 kappa t).
double lossless_photon_number(const ResonantDriveSpec& spec, double t);

/// Damped-cavity asymptotics N = (4 zeta)^{-1} exp(2 omega0 kappa zeta t)
/// with zeta = 1 - 1/(2 Q kappa); requires finite Q. The exponential regime
/// exists only above the threshold 2 Q kappa > 1.
GrowthReport dissipative_photon_number(const ResonantDriveSpec& spec, double t);

/// Integrates the modulated-mode equation numerically and returns
/// |N_numeric - G sinh^2(omega0 kappa t)| / max(1, G sinh^2(...)).
/// Lossless comparison only (Q must be infinite); omega0 kappa t <= 5.
double crosscheck_numeric(const ResonantDriveSpec& spec, double t, double tol);

/// The naive saturation guess sinh^2(2 Q kappa). Exposed for comparison
/// plots only; not a prediction of the damped model.
double naive_saturation_estimate(const ResonantDriveSpec& spec);

}  // namespace dce
