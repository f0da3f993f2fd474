#include "dce/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dce/constants.hpp"
#include "dce/quadrature.hpp"

namespace dce {

namespace {
constexpr double kPi = std::numbers::pi;

std::complex<double> nu_integral(const MirrorResponse& mirror, double omega0,
                                 double period, double tol) {
    const std::complex<double> i_unit(0.0, 1.0);
    return adaptive_simpson(
        [&](double t) {
            return mirror.chi(t) * std::exp(-2.0 * i_unit * omega0 * t);
        },
        0.0, period, tol);
}
}  // namespace

void MirrorResponse::validate() const {
    if (!(t_r > 0.0)) throw InvalidInput("MirrorResponse: T_r must be > 0");
    if (a0 < 0.0) throw InvalidInput("MirrorResponse: A0 must be >= 0");
}

double MirrorResponse::excitation(double t) const {
    return a0 * std::exp(-t / t_r);
}

double MirrorResponse::chi(double t) const {
    const double a = excitation(t);
    const double a2 = a * a;
    return chi_m * a2 / (a2 + 1.0);
}

double MirrorResponse::gamma(double t) const {
    const double a = excitation(t);
    return std::abs(chi_m) * a / (a * a + 1.0);
}

double MirrorResponse::gamma_peak_time() const {
    if (!(a0 > 1.0))
        throw InvalidInput("gamma_peak_time: requires A0 > 1 (A crosses 1)");
    return t_r * std::log(a0);
}

void PulseTrain::validate() const {
    if (n_pulses < 1) throw InvalidInput("PulseTrain: n_pulses must be >= 1");
    if (!(omega0 > 0.0)) throw NonPositiveFrequency("PulseTrain: omega0 must be > 0");
    if (period && !(*period > 0.0))
        throw InvalidInput("PulseTrain: period must be > 0");
    if (!period && detuning <= -1.0)
        throw InvalidInput("PulseTrain: detuning must exceed -1");
}

double PulseTrain::effective_period() const {
    return period ? *period : kPi / omega0 * (1.0 + detuning);
}

double lambda_closed_form(const MirrorResponse& mirror, double period) {
    return std::abs(mirror.chi_m) * mirror.t_r *
           (std::atan(mirror.a0) -
            std::atan(mirror.a0 * std::exp(-period / mirror.t_r)));
}

double resonant_period(const MirrorResponse& mirror, double omega0,
                       double residual_excitation) {
    if (!(omega0 > 0.0))
        throw NonPositiveFrequency("resonant_period: omega0 must be > 0");
    const double half = kPi / omega0;
    int k = 1;
    while (mirror.a0 * std::exp(-k * half / mirror.t_r) > residual_excitation &&
           k < 1024)
        ++k;
    return k * half;
}

GainLossPair gain_loss(const MirrorResponse& mirror, const PulseTrain& train,
                       double tol) {
    mirror.validate();
    train.validate();
    const double period = train.effective_period();
    if (mirror.a0 == 0.0) return {0.0, 0.0};

    const double scale = std::max(std::abs(mirror.chi_m) * period, 1e-30);
    const double abs_tol = tol * scale;

    GainLossPair pair;
    pair.nu = std::abs(nu_integral(mirror, train.omega0, period, abs_tol));
    pair.lambda = adaptive_simpson(
        [&](double t) { return mirror.gamma(t); }, 0.0, period, abs_tol);

    const double closed = lambda_closed_form(mirror, period);
    if (std::abs(pair.lambda - closed) > std::max(10.0 * abs_tol, tol * closed))
        throw QuadratureFailure(
            "gain_loss: Lambda quadrature disagrees with the closed form");
    return pair;
}

GainLossPair gain_loss_optimal_phase(const MirrorResponse& mirror,
                                     const PulseTrain& train, double tol) {
    mirror.validate();
    train.validate();
    const double period = train.effective_period();
    if (mirror.a0 == 0.0) return {0.0, 0.0};
    const double scale = std::max(std::abs(mirror.chi_m) * period, 1e-30);
    const double abs_tol = tol * scale;

    // The recombination edge sits at t* = T_r ln A0; rescaling the pulse
    // energy by exp(psi / (2 omega0 T_r)) moves the edge phase by psi.
    // One phase turn of the 2 omega0 carrier is scanned and the pair with
    // the largest net gain is returned (Lambda follows the rescaled A0).
    auto pair_at = [&](double psi) {
        MirrorResponse shifted = mirror;
        shifted.a0 =
            mirror.a0 * std::exp(psi / (2.0 * train.omega0 * mirror.t_r));
        GainLossPair p;
        p.nu = std::abs(nu_integral(shifted, train.omega0, period, abs_tol));
        p.lambda = lambda_closed_form(shifted, period);
        return p;
    };

    const int coarse = 32;
    GainLossPair best = pair_at(-kPi);
    double best_psi = -kPi;
    for (int k = 1; k < coarse; ++k) {
        const double psi = -kPi + 2.0 * kPi * k / coarse;
        const GainLossPair p = pair_at(psi);
        if (p.net() > best.net()) {
            best = p;
            best_psi = psi;
        }
    }
    // Golden-section refinement around the best coarse sample.
    double lo = best_psi - 2.0 * kPi / coarse;
    double hi = best_psi + 2.0 * kPi / coarse;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    GainLossPair p1 = pair_at(x1), p2 = pair_at(x2);
    for (int it = 0; it < 40; ++it) {
        if (p1.net() < p2.net()) {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + gr * (hi - lo);
            p2 = pair_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - gr * (hi - lo);
            p1 = pair_at(x1);
        }
    }
    if (p1.net() > best.net()) best = p1;
    if (p2.net() > best.net()) best = p2;
    return best;
}

MirrorGrowth photon_growth(const PulseTrain& train, const GainLossPair& pair,
                           double balance_tol) {
    train.validate();
    if (pair.lambda < 0.0 || pair.nu < 0.0)
        throw InvalidInput("photon_growth: nu and Lambda must be >= 0");
    const double net = pair.net();
    const double scale = std::max(pair.nu, pair.lambda);
    if (std::abs(net) <= balance_tol * std::max(scale, 1.0))
        throw DegenerateBalance(
            "photon_growth: nu equals Lambda within tolerance; the growth "
            "formula is singular");

    MirrorGrowth g;
    g.prefactor =
        (train.g_field * net + train.g_walls * pair.lambda) / (4.0 * net);
    g.exponent = 2.0 * train.n_pulses * net;
    g.photons = g.prefactor * std::exp(g.exponent);
    g.regime = net > 0.0 ? MirrorRegime::growing : MirrorRegime::damped;
    return g;
}

GainLossPair approx_large_excitation(const MirrorResponse& mirror,
                                     const PulseTrain& train) {
    mirror.validate();
    train.validate();
    if (mirror.a0 < 10.0)
        throw InvalidInput(
            "approx_large_excitation: requires A0 >= 10 (intended A0 >= 100)");
    const double theta = train.omega0 * mirror.t_r;
    GainLossPair pair;
    pair.lambda = kPi * std::abs(mirror.chi_m) * mirror.t_r / 2.0;
    const std::complex<double> i_unit(0.0, 1.0);
    const std::complex<double> edge =
        kPi * theta *
        std::exp(-2.0 * i_unit * theta * std::log(mirror.a0)) /
        std::sinh(kPi * theta);
    pair.nu = std::abs(mirror.chi_m) / (2.0 * train.omega0) *
              std::abs(1.0 - edge);
    return pair;
}

double recombination_threshold_scan(double chi_m_over_omega0, double a0,
                                    double omega0, double t_r_low,
                                    double t_r_high, double tol) {
    if (!(omega0 > 0.0))
        throw NonPositiveFrequency("recombination_threshold_scan: omega0 <= 0");
    if (!(a0 >= 100.0))
        throw InvalidInput("recombination_threshold_scan: requires A0 >= 100");
    if (!(t_r_high > t_r_low) || !(t_r_low > 0.0))
        throw InvalidInput("recombination_threshold_scan: bad T_r range");

    auto net_at = [&](double t_r) {
        MirrorResponse mirror{chi_m_over_omega0 * omega0, t_r, a0};
        // The period must cover recombination even after the phase scan
        // inflates A0 by up to exp(pi / (2 omega0 T_r)).
        MirrorResponse inflated = mirror;
        inflated.a0 = a0 * std::exp(kPi / (2.0 * omega0 * t_r));
        PulseTrain train;
        train.omega0 = omega0;
        train.period = resonant_period(inflated, omega0);
        return gain_loss_optimal_phase(mirror, train, tol).net();
    };

    double lo = t_r_low, hi = t_r_high;
    double f_lo = net_at(lo), f_hi = net_at(hi);
    if (f_lo * f_hi > 0.0)
        throw NoSignChange(
            "recombination_threshold_scan: net gain does not change sign on "
            "the given range");
    for (int it = 0; it < 60 && (hi - lo) > 1e-6 * t_r_high; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = net_at(mid);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi) * omega0;  // critical omega0 T_r
}

CriticalEnergyReport critical_energy_behavior(double chi_m, double t_r,
                                              const PulseTrain& train,
                                              double a0_low, double a0_high,
                                              double tol) {
    train.validate();
    if (!(a0_low > 0.0) || !(a0_high > a0_low))
        throw InvalidInput("critical_energy_behavior: bad A0 range");

    auto net_at = [&](double a0) {
        MirrorResponse mirror{chi_m, t_r, a0};
        return gain_loss(mirror, train, tol).net();
    };

    CriticalEnergyReport rep;

    // Log-log regression of Lambda and nu over A0 in [0.01, 0.1].
    {
        const int pts = 9;
        double sx = 0, sy_l = 0, sy_n = 0, sxx = 0, sxy_l = 0, sxy_n = 0;
        for (int i = 0; i < pts; ++i) {
            const double a0 =
                0.01 * std::pow(10.0, static_cast<double>(i) / (pts - 1));
            MirrorResponse mirror{chi_m, t_r, a0};
            const auto pair = gain_loss(mirror, train, tol);
            const double x = std::log(a0);
            sx += x;
            sxx += x * x;
            sy_l += std::log(pair.lambda);
            sy_n += std::log(pair.nu);
            sxy_l += x * std::log(pair.lambda);
            sxy_n += x * std::log(pair.nu);
        }
        const double denom = pts * sxx - sx * sx;
        rep.lambda_scaling_exponent = (pts * sxy_l - sx * sy_l) / denom;
        rep.nu_scaling_exponent = (pts * sxy_n - sx * sy_n) / denom;
    }

    // Coarse log scan for the first bracket with a sign change, then bisect.
    const int grid = 120;
    double prev_a0 = a0_low;
    double prev_net = net_at(a0_low);
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (int i = 1; i <= grid; ++i) {
        const double a0 =
            a0_low * std::pow(a0_high / a0_low, static_cast<double>(i) / grid);
        const double net = net_at(a0);
        if (prev_net <= 0.0 && net > 0.0) {
            lo = prev_a0;
            hi = a0;
            found = true;
            break;
        }
        prev_a0 = a0;
        prev_net = net;
    }
    if (!found)
        throw NoSignChange(
            "critical_energy_behavior: net gain never turns positive on the "
            "given range");
    for (int it = 0; it < 80 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (net_at(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    rep.critical_a0 = std::sqrt(lo * hi);
    return rep;
}

void DrudeMedium::validate() const {
    if (sigma0 < 0.0) throw InvalidInput("DrudeMedium: sigma0 must be >= 0");
    if (tau < 0.0) throw InvalidInput("DrudeMedium: tau must be >= 0");
}

std::complex<double> drude_epsilon(const DrudeMedium& medium, double omega) {
    medium.validate();
    if (!(omega > 0.0))
        throw NonPositiveFrequency("drude_epsilon: omega must be > 0");
    const std::complex<double> i_unit(0.0, 1.0);
    return medium.epsilon_a +
           4.0 * kPi * i_unit * medium.sigma0 /
               (omega * (1.0 - i_unit * omega * medium.tau));
}

double mobility_criterion(double m_eff_kg, double omega) {
    if (!(omega > 0.0))
        throw NonPositiveFrequency("mobility_criterion: omega must be > 0");
    if (!(m_eff_kg > 0.0))
        throw InvalidInput("mobility_criterion: effective mass must be > 0");
    return constants::elementary_charge / (m_eff_kg * omega);
}

}  // namespace dce
