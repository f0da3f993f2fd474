#pragma once

#include <complex>
#include <optional>

#include "dce/errors.hpp"

namespace dce {

/// Photo-excited mirror: carrier level A(t) = A0 exp(-t/T_r) drives the
/// complex instantaneous frequency shift
///   chi(t)  = chi_m A^2 / (A^2 + 1)        (real shift, rad/s)
///   gamma(t)= |chi_m| A / (A^2 + 1)        (damping, rad/s)
struct MirrorResponse {
    double chi_m = 0.0;  // maximal frequency shift, rad/s (sign carried)
    double t_r = 1.0;    // recombination time, s
    double a0 = 0.0;     // initial excitation, dimensionless

    void validate() const;
    double excitation(double t) const;  // A(t)
    double chi(double t) const;
    double gamma(double t) const;
    /// Time at which gamma peaks (A = 1): T_r ln A0, for A0 > 1.
    double gamma_peak_time() const;
};

/// Pulse sequence: period T defaults to the half-period pi/omega0 scaled by
/// (1 + detuning). Thermal factors for the field mode and the cavity walls.
struct PulseTrain {
    int n_pulses = 1;
    double omega0 = 1.0;       // rad/s
    double detuning = 0.0;     // relative offset of T from pi/omega0
    std::optional<double> period;  // s; overrides the default when set
    double g_field = 1.0;
    double g_walls = 1.0;

    void validate() const;
    double effective_period() const;
};

/// Per-period gain and loss integrals.
struct GainLossPair {
    double nu = 0.0;      // |integral of chi e^{-2 i omega0 t}| over one period
    double lambda = 0.0;  // integral of gamma over one period
    double net() const { return nu - lambda; }
};

/// nu and Lambda by adaptive quadrature over one period [0, T]. Lambda is
/// cross-checked against |chi_m| T_r [arctan(A0) - arctan(A0 e^{-T/T_r})]
/// and the call fails if the quadrature disagrees beyond `tol`.
GainLossPair gain_loss(const MirrorResponse& mirror, const PulseTrain& train,
                       double tol = 1e-10);

/// Closed form for Lambda = integral of gamma over [0, T].
double lambda_closed_form(const MirrorResponse& mirror, double period);

/// Smallest integer multiple of the half-period pi/omega0 after which the
/// excitation has decayed below `residual_excitation`. Integer multiples
/// keep the pulse train in phase with the 2 omega0 carrier; the pulsed
/// model assumes carriers recombine between pulses.
double resonant_period(const MirrorResponse& mirror, double omega0,
                       double residual_excitation = 0.01);

/// Upper envelope of nu over the recombination-edge phase: the pulse energy
/// is rescaled within one phase period of the 2 omega0 carrier and the
/// largest |integral| is returned. Lambda is evaluated at the nominal A0.
GainLossPair gain_loss_optimal_phase(const MirrorResponse& mirror,
                                     const PulseTrain& train,
                                     double tol = 1e-10);

enum class MirrorRegime { growing, damped };

struct MirrorGrowth {
    double photons = 0.0;
    MirrorRegime regime = MirrorRegime::growing;
    double prefactor = 0.0;
    double exponent = 0.0;  // 2 n (nu - Lambda)
};

/// Photon count after n pulses:
///   N_n = [G_f (nu - Lambda) + G_w Lambda] / (4 (nu - Lambda)) e^{2 n (nu - Lambda)}.
/// Throws DegenerateBalance when nu == Lambda within tolerance.
MirrorGrowth photon_growth(const PulseTrain& train, const GainLossPair& pair,
                           double balance_tol = 1e-12);

/// Large-A0 approximations:
///   Lambda ~ pi |chi_m| T_r / 2
///   nu     ~ (|chi_m| / (2 omega0)) |1 - pi omega0 T_r e^{-2 i omega0 T_r ln A0} / sinh(pi omega0 T_r)|
/// Intended for A0 >= 100 and omega0 T_r <= 0.3.
GainLossPair approx_large_excitation(const MirrorResponse& mirror,
                                     const PulseTrain& train);

/// Bisection for the critical omega0 T_r where the phase-optimal net gain
/// changes sign. Scans T_r in [t_r_low, t_r_high].
double recombination_threshold_scan(double chi_m_over_omega0, double a0,
                                    double omega0, double t_r_low,
                                    double t_r_high, double tol = 1e-10);

struct CriticalEnergyReport {
    double critical_a0 = 0.0;
    double lambda_scaling_exponent = 0.0;  // expected 1 as A0 -> 0
    double nu_scaling_exponent = 0.0;      // expected 2 as A0 -> 0
};

/// Smallest A0 with positive net gain, plus the small-A0 scaling exponents
/// of Lambda (linear) and nu (quadratic) fitted over A0 in [0.01, 0.1].
CriticalEnergyReport critical_energy_behavior(double chi_m, double t_r,
                                              const PulseTrain& train,
                                              double a0_low = 0.01,
                                              double a0_high = 1e3,
                                              double tol = 1e-10);

/// Drude medium in CGS-Gaussian units: sigma0 in s^-1.
struct DrudeMedium {
    double epsilon_a = 1.0;  // bound-charge contribution
    double sigma0 = 0.0;     // static conductivity, s^-1
    double tau = 0.0;        // relaxation time, s

    void validate() const;
};

/// epsilon(omega) = epsilon_a + 4 pi i sigma0 / [omega (1 - i omega tau)].
std::complex<double> drude_epsilon(const DrudeMedium& medium, double omega);

/// Critical mobility b*(omega) = |e| / (m_eff omega), SI (m^2 V^-1 s^-1).
double mobility_criterion(double m_eff_kg, double omega);

}  // namespace dce
