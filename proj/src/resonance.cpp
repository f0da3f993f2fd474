#include "dce/resonance.hpp"

#include <cmath>

#include "dce/errors.hpp"

namespace dce {

void ResonantDriveSpec::validate() const {
    if (!(omega0 > 0.0))
        throw NonPositiveFrequency("ResonantDriveSpec: omega0 must be > 0");
    if (kappa < 0.0) throw InvalidInput("ResonantDriveSpec: kappa must be >= 0");
    if (!(q_factor > 0.0)) throw InvalidInput("ResonantDriveSpec: Q must be > 0");
    if (!(g_thermal >= 1.0)) throw InvalidInput("ResonantDriveSpec: G must be >= 1");
}

std::vector<std::string> ResonantDriveSpec::warnings() const {
    std::vector<std::string> w;
    if (kappa > 0.1)
        w.push_back("kappa = " + std::to_string(kappa) +
                    " is outside the small-modulation regime (kappa << 1)");
    return w;
}

const char* to_string(GrowthRegime r) {
    switch (r) {
        case GrowthRegime::lossless: return "lossless";
        case GrowthRegime::above_threshold: return "above_threshold";
        case GrowthRegime::at_threshold: return "at_threshold";
        case GrowthRegime::below_threshold: return "below_threshold";
    }
    return "unknown";
}

double lossless_photon_number(const ResonantDriveSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw InvalidInput("lossless_photon_number: t must be >= 0");
    const double s = std::sinh(spec.omega0 * spec.kappa * t);
    return spec.g_thermal * s * s;
}

GrowthReport dissipative_photon_number(const ResonantDriveSpec& spec,
                                       double t) {
    spec.validate();
    if (!std::isfinite(spec.q_factor))
        throw InvalidInput("dissipative_photon_number: Q must be finite");
    if (t < 0.0) throw InvalidInput("dissipative_photon_number: t must be >= 0");

    GrowthReport rep;
    const double two_q_kappa = 2.0 * spec.q_factor * spec.kappa;
    rep.validity_time = spec.kappa > 0.0
                            ? 1.0 / (spec.omega0 * spec.kappa * spec.kappa)
                            : std::numeric_limits<double>::infinity();
    rep.linear_theory_valid = t < rep.validity_time;

    if (two_q_kappa < 1.0) {
        rep.regime = GrowthRegime::below_threshold;
        rep.zeta = 1.0 - 1.0 / two_q_kappa;  // negative: no growth
        rep.photons = std::numeric_limits<double>::quiet_NaN();
        rep.bounded = true;
        return rep;
    }
    rep.zeta = 1.0 - 1.0 / two_q_kappa;
    if (two_q_kappa == 1.0) {
        rep.regime = GrowthRegime::at_threshold;
        rep.photons = std::numeric_limits<double>::quiet_NaN();
        rep.bounded = true;
        return rep;
    }
    rep.regime = GrowthRegime::above_threshold;
    const double exponent = 2.0 * spec.omega0 * spec.kappa * rep.zeta * t;
    rep.asymptotic_valid = exponent > 1.0;
    rep.photons = std::exp(exponent) / (4.0 * rep.zeta);
    return rep;
}

double crosscheck_numeric(const ResonantDriveSpec& spec, double t, double tol) {
    spec.validate();
    if (std::isfinite(spec.q_factor))
        throw InvalidInput("crosscheck_numeric: lossless comparison requires Q = infinity");
    if (spec.omega0 * spec.kappa * t > 5.0)
        throw InvalidInput("crosscheck_numeric: omega0 kappa t must be <= 5");
    if (spec.kappa == 0.0) return 0.0;

    const auto profile = FrequencyProfile::harmonic(spec.omega0, spec.kappa);
    const auto traj = integrate_classical(profile, 0.0, t, tol);
    const ThermalState thermal = ThermalState::from_g(spec.g_thermal);
    // Instantaneous quanta relative to the unmodulated carrier omega0,
    // evaluated at the final sample.
    ComplexTrajectory tail;
    tail.times = traj.times.tail(1);
    tail.epsilon = traj.epsilon.tail(1);
    tail.epsilon_dot = traj.epsilon_dot.tail(1);
    tail.tolerance = traj.tolerance;
    const double n_numeric =
        photon_number_from_tail(tail, spec.omega0, thermal, 1.0);
    const double n_analytic = lossless_photon_number(spec, t);
    return std::abs(n_numeric - n_analytic) / std::max(1.0, n_analytic);
}

double naive_saturation_estimate(const ResonantDriveSpec& spec) {
    spec.validate();
    if (!std::isfinite(spec.q_factor))
        return std::numeric_limits<double>::infinity();
    const double s = std::sinh(2.0 * spec.q_factor * spec.kappa);
    return s * s;
}

}  // namespace dce
