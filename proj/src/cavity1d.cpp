#include "dce/cavity1d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "dce/interpolation.hpp"
#include "dce/ode.hpp"

namespace dce {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void CavityGeometry1D::validate() const {
    if (!(length > 0.0)) throw InvalidInput("CavityGeometry1D: length must be > 0");
    if (!(wave_speed > 0.0))
        throw InvalidInput("CavityGeometry1D: wave speed must be > 0");
    if (n_modes < 1) throw InvalidInput("CavityGeometry1D: n_modes must be >= 1");
}

double CavityGeometry1D::omega(int n) const {
    return wave_speed * kPi * n / length;
}

Eigen::ArrayXd CavityGeometry1D::omegas() const {
    Eigen::ArrayXd w(n_modes);
    for (int n = 1; n <= n_modes; ++n) w[n - 1] = omega(n);
    return w;
}

BoundaryTrajectory::BoundaryTrajectory(SinusoidalBoundary b) : v_(b) {
    if (!(std::abs(b.amplitude) < 1.0))
        throw InvalidInput("BoundaryTrajectory: |amplitude| must be < 1");
    if (b.omega_drive && !(*b.omega_drive > 0.0))
        throw InvalidInput("BoundaryTrajectory: omega_drive must be > 0");
}

BoundaryTrajectory::BoundaryTrajectory(TabulatedBoundary b) : v_(std::move(b)) {
    const auto& tab = std::get<TabulatedBoundary>(v_);
    if (tab.times.size() < 2 || tab.times.size() != tab.lengths.size())
        throw InvalidInput("BoundaryTrajectory: bad table");
    if ((tab.lengths <= 0.0).any())
        throw InvalidInput("BoundaryTrajectory: L(t) must stay > 0");
    tangents_ = pchip_tangents(tab.times, tab.lengths);
}

double BoundaryTrajectory::relative_length(double t, double omega1) const {
    if (const auto* s = std::get_if<SinusoidalBoundary>(&v_)) {
        const double wd = s->omega_drive ? *s->omega_drive : 2.0 * omega1;
        return 1.0 + s->amplitude * std::sin(wd * t);
    }
    const auto& tab = std::get<TabulatedBoundary>(v_);
    return pchip_eval(tab.times, tab.lengths, tangents_, t);
}

double BoundaryTrajectory::log_derivative(double t, double omega1) const {
    if (const auto* s = std::get_if<SinusoidalBoundary>(&v_)) {
        const double wd = s->omega_drive ? *s->omega_drive : 2.0 * omega1;
        const double l = 1.0 + s->amplitude * std::sin(wd * t);
        return s->amplitude * wd * std::cos(wd * t) / l;
    }
    const auto& tab = std::get<TabulatedBoundary>(v_);
    const double l = pchip_eval(tab.times, tab.lengths, tangents_, t);
    return pchip_derivative(tab.times, tab.lengths, tangents_, t) / l;
}

bool BoundaryTrajectory::is_sinusoidal() const {
    return std::holds_alternative<SinusoidalBoundary>(v_);
}

double BoundaryTrajectory::drive_omega(double omega1) const {
    const auto* s = std::get_if<SinusoidalBoundary>(&v_);
    if (!s) throw InvalidInput("drive_omega: trajectory is not sinusoidal");
    return s->omega_drive ? *s->omega_drive : 2.0 * omega1;
}

double BoundaryTrajectory::kappa() const {
    const auto* s = std::get_if<SinusoidalBoundary>(&v_);
    if (!s) throw InvalidInput("kappa: trajectory is not sinusoidal");
    return s->amplitude / 2.0;
}

std::vector<std::string> BoundaryTrajectory::warnings() const {
    std::vector<std::string> w;
    if (const auto* s = std::get_if<SinusoidalBoundary>(&v_)) {
        if (std::abs(s->amplitude) >= 0.1)
            w.push_back("boundary amplitude " + std::to_string(s->amplitude) +
                        " is beyond the small-modulation regime");
    }
    return w;
}

CouplingMatrix CouplingMatrix::from_raw(const Eigen::MatrixXd& raw) {
    if (raw.rows() != raw.cols())
        throw InvalidInput("CouplingMatrix: matrix must be square");
    CouplingMatrix m;
    const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
    m.symmetric_residual_ = sym.cwiseAbs().maxCoeff();
    m.upper_ = Eigen::MatrixXd::Zero(raw.rows(), raw.cols());
    const Eigen::MatrixXd anti = 0.5 * (raw - raw.transpose());
    for (Eigen::Index a = 0; a < raw.rows(); ++a)
        for (Eigen::Index b = a + 1; b < raw.cols(); ++b)
            m.upper_(a, b) = anti(a, b);
    return m;
}

double CouplingMatrix::entry(int alpha, int beta) const {
    const int a = alpha - 1, b = beta - 1;
    if (a < 0 || b < 0 || a >= size() || b >= size())
        throw InvalidInput("CouplingMatrix::entry: index out of range");
    if (a == b) return 0.0;
    return a < b ? upper_(a, b) : -upper_(b, a);
}

Eigen::MatrixXd CouplingMatrix::dense() const {
    return upper_ - upper_.transpose();
}

CouplingMatrix coupling_matrix_1d(const CavityGeometry1D& geometry,
                                  int resolution) {
    geometry.validate();
    if (geometry.n_modes < 2)
        throw InvalidInput("coupling_matrix_1d: n_modes must be >= 2");
    if (resolution < 1) throw InvalidInput("coupling_matrix_1d: resolution >= 1");

    const int n = geometry.n_modes;
    const double len = geometry.length;
    const double h = 1e-6 * len;  // central-difference step in L

    auto mode = [](int k, double x, double l) {
        return std::sqrt(2.0 / l) * std::sin(k * kPi * x / l);
    };

    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, n);
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            if (a == b) continue;
            const int points =
                std::max(512, 24 * (a + b)) * resolution;
            // Simpson rule over [0, L].
            const int m = points % 2 == 0 ? points : points + 1;
            const double dx = len / m;
            double acc = 0.0;
            for (int i = 0; i <= m; ++i) {
                const double x = i * dx;
                const double dfa =
                    (mode(a, x, len + h) - mode(a, x, len - h)) / (2.0 * h);
                const double f = dfa * mode(b, x, len);
                const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                acc += w * f;
            }
            raw(a - 1, b - 1) = len * acc * dx / 3.0;
        }
    }
    if (!raw.allFinite())
        throw QuadratureFailure("coupling_matrix_1d: non-finite quadrature result");
    return CouplingMatrix::from_raw(raw);
}

namespace {

// Time-dependent linear system for the fundamental matrix of the truncated
// (q, p) dynamics:
//   dQ = lambda M Q + P
//   dP = -diag(omega^2(t)) Q + lambda M P
struct ModeOde {
    const Eigen::MatrixXd* coupling;
    std::function<Eigen::ArrayXd(double)> omega_sq;
    std::function<double(double)> lambda;
    int n;

    Eigen::MatrixXd operator()(double t, const Eigen::MatrixXd& phi) const {
        const double lam = lambda(t);
        const Eigen::ArrayXd w2 = omega_sq(t);
        const auto q = phi.topRows(n);
        const auto p = phi.bottomRows(n);
        Eigen::MatrixXd d(2 * n, 2 * n);
        if (coupling) {
            d.topRows(n) = lam * (*coupling * q) + p;
            d.bottomRows(n) =
                (-w2).matrix().asDiagonal() * q + lam * (*coupling * p);
        } else {
            d.topRows(n) = p;
            d.bottomRows(n) = (-w2).matrix().asDiagonal() * q;
        }
        return d;
    }
};

// Photon numbers per mode from the fundamental matrix, counted against the
// reference frequencies. B_{ab} = [sqrt(wa/wb) Qq - sqrt(wb/wa) Pp
//                                 + i(sqrt(wa wb) Qp + Pq / sqrt(wa wb))]/2.
Eigen::ArrayXd mode_numbers_from_phi(const Eigen::MatrixXd& phi,
                                     const Eigen::ArrayXd& omega_ref) {
    const int n = static_cast<int>(omega_ref.size());
    const Eigen::ArrayXd sq = omega_ref.sqrt();
    const Eigen::VectorXd d = sq.matrix();
    const Eigen::VectorXd dinv = sq.inverse().matrix();
    const auto qq = phi.topLeftCorner(n, n);
    const auto qp = phi.topRightCorner(n, n);
    const auto pq = phi.bottomLeftCorner(n, n);
    const auto pp = phi.bottomRightCorner(n, n);
    const Eigen::MatrixXd re = d.asDiagonal() * qq * dinv.asDiagonal() -
                               dinv.asDiagonal() * pp * d.asDiagonal();
    const Eigen::MatrixXd im = d.asDiagonal() * qp * d.asDiagonal() +
                               dinv.asDiagonal() * pq * dinv.asDiagonal();
    return 0.25 * (re.array().square().rowwise().sum() +
                   im.array().square().rowwise().sum());
}

double det_defect_of(const Eigen::MatrixXd& phi) {
    return std::abs(phi.partialPivLu().determinant() - 1.0);
}

PhotonRecord assemble_record(const Eigen::ArrayXd& times,
                             const std::vector<Eigen::MatrixXd>& phis,
                             const Eigen::ArrayXd& omega_ref,
                             const EvolveOptions& opt) {
    const int n = static_cast<int>(omega_ref.size());
    const int s = static_cast<int>(times.size());
    PhotonRecord rec;
    rec.times = times;
    rec.mode_numbers.resize(n, s);
    rec.totals.resize(s);
    rec.energy.resize(s);
    rec.det_defect = Eigen::ArrayXd::Zero(s);
    const double w1 = omega_ref[0];
    const int top_start = std::max(0, n - std::max(1, n / 10));
    for (int k = 0; k < s; ++k) {
        const Eigen::ArrayXd nn = mode_numbers_from_phi(phis[k], omega_ref);
        rec.mode_numbers.col(k) = nn.matrix();
        rec.totals[k] = nn.sum();
        rec.energy[k] = (nn * omega_ref / w1).sum();
        if (opt.compute_determinant) rec.det_defect[k] = det_defect_of(phis[k]);
        if (rec.totals[k] > 1e-6) {
            const double top_share =
                nn.tail(n - top_start).sum() / rec.totals[k];
            if (top_share > 0.01) rec.truncation_flagged = true;
            const double highest_share = nn[n - 1] / rec.totals[k];
            if (n > 1 && highest_share > opt.truncation_error_share)
                throw TruncationInsufficient(
                    "evolve_modes: highest mode holds " +
                    std::to_string(100.0 * highest_share) +
                    "% of the photons; increase n_modes");
        }
    }
    return rec;
}

std::vector<double> default_sample_times(double t_end, double period,
                                         int max_samples) {
    // Period-aligned grid plus the exact endpoint.
    std::vector<double> out;
    const long n_periods = static_cast<long>(std::floor(t_end / period + 1e-9));
    const long stride = std::max(1L, n_periods / std::max(1, max_samples - 2));
    out.push_back(0.0);
    for (long k = stride; k <= n_periods; k += stride)
        out.push_back(static_cast<double>(k) * period);
    if (out.back() < t_end - 1e-9 * period) out.push_back(t_end);
    return out;
}

OdeOptions mode_ode_options(double tol, double omega_max) {
    OdeOptions o;
    o.rel_tol = tol / 50.0;
    o.abs_tol = tol / 50.0;
    o.max_step = kTwoPi / omega_max;
    return o;
}

}  // namespace

PhotonRecord evolve_modes(const CavityGeometry1D& geometry,
                          const BoundaryTrajectory& trajectory,
                          const CouplingMatrix& coupling, double t_end,
                          double tol, const EvolveOptions& opt) {
    geometry.validate();
    if (!(t_end > 0.0)) throw InvalidInput("evolve_modes: t_end must be > 0");
    if (!(tol > 1e-14 && tol < 1e-3))
        throw InvalidInput("evolve_modes: tol must lie in (1e-14, 1e-3)");
    const int n = geometry.n_modes;
    if (coupling.size() != 0 && coupling.size() != n)
        throw InvalidInput("evolve_modes: coupling size does not match n_modes");

    const Eigen::ArrayXd omega_ref = geometry.omegas();
    const double omega1 = omega_ref[0];
    const Eigen::MatrixXd m_dense =
        coupling.size() == n ? coupling.dense() : Eigen::MatrixXd::Zero(n, n);
    const bool has_coupling = coupling.size() == n && n > 1;

    ModeOde ode;
    ode.coupling = has_coupling ? &m_dense : nullptr;
    ode.n = n;
    // omega_n(t) = omega_n^0 L0 / L(t); the coupling strength is Ldot/L.
    ode.omega_sq = [&, omega_ref](double t) {
        const double rel = trajectory.relative_length(t, omega1);
        return (omega_ref / rel).square().eval();
    };
    ode.lambda = [&](double t) { return trajectory.log_derivative(t, omega1); };

    const double omega_max = omega_ref[n - 1] * 1.2;
    const OdeOptions ode_opt = mode_ode_options(tol, omega_max);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2 * n, 2 * n);

    std::vector<double> samples = opt.sample_times;
    std::vector<Eigen::MatrixXd> phis;

    if (trajectory.is_sinusoidal()) {
        const double period = kTwoPi / trajectory.drive_omega(omega1);
        if (samples.empty())
            samples = default_sample_times(t_end, period, opt.max_samples);
        std::sort(samples.begin(), samples.end());

        // One-period transfer matrix; samples assembled from its powers.
        const Eigen::MatrixXd m_period =
            integrate_to(ode, 0.0, period, identity, ode_opt);
        Eigen::MatrixXd power = identity;  // m_period^j
        long power_index = 0;
        phis.reserve(samples.size());
        for (double t : samples) {
            const long j = static_cast<long>(std::floor(t / period + 1e-9));
            const double delta = t - static_cast<double>(j) * period;
            while (power_index < j) {
                power = m_period * power;
                ++power_index;
            }
            if (delta < 1e-9 * period) {
                phis.push_back(power);
            } else {
                const Eigen::MatrixXd partial =
                    integrate_to(ode, 0.0, delta, identity, ode_opt);
                phis.push_back(partial * power);
            }
        }
    } else {
        if (samples.empty()) {
            const int count = std::max(2, opt.max_samples);
            samples.resize(count);
            for (int i = 0; i < count; ++i)
                samples[i] = t_end * static_cast<double>(i) / (count - 1);
        }
        std::sort(samples.begin(), samples.end());
        phis.reserve(samples.size());
        integrate_dopri5(ode, 0.0, t_end, identity,
                         std::span<const double>(samples.data(), samples.size()),
                         [&](double, const Eigen::MatrixXd& y) {
                             phis.push_back(y);
                         },
                         ode_opt);
        if (phis.size() != samples.size())
            throw ToleranceNotMet("evolve_modes: integration fell short of t_end");
    }

    const Eigen::ArrayXd times =
        Eigen::Map<const Eigen::ArrayXd>(samples.data(),
                                         static_cast<Eigen::Index>(samples.size()));
    return assemble_record(times, phis, omega_ref, opt);
}

PhotonRecord evolve_modes_averaged(const CavityGeometry1D& geometry,
                                   double kappa, double t_end, int n_samples) {
    geometry.validate();
    if (!(t_end > 0.0)) throw InvalidInput("evolve_modes_averaged: t_end must be > 0");
    if (!(kappa >= 0.0 && kappa < 0.5))
        throw InvalidInput("evolve_modes_averaged: kappa must be in [0, 0.5)");
    const int n = geometry.n_modes;
    const Eigen::ArrayXd omega_ref = geometry.omegas();
    const double r = kappa * omega_ref[0];

    // Resonantly averaged coefficient system (real): the Bogoliubov blocks
    // (A, B) of the slow amplitudes obey
    //   dA/dt = r (K A - S B),  dB/dt = r (K B - S A),
    // with K the banded n <-> n+-2 ladder and S the n = 1 squeeze source.
    Eigen::ArrayXd up(n), down(n);  // K_{m,m+2}, -K_{m,m-2} magnitudes
    for (int mode = 1; mode <= n; ++mode) {
        up[mode - 1] =
            mode + 2 <= n ? std::sqrt(double(mode) * (mode + 2)) : 0.0;
        down[mode - 1] =
            mode - 2 >= 1 ? std::sqrt(double(mode) * (mode - 2)) : 0.0;
    }

    auto apply_k = [&](const auto& block, Eigen::Ref<Eigen::MatrixXd> out) {
        out.setZero();
        if (n > 2) {
            out.topRows(n - 2) +=
                up.head(n - 2).matrix().asDiagonal() * block.bottomRows(n - 2);
            out.bottomRows(n - 2) -=
                down.tail(n - 2).matrix().asDiagonal() * block.topRows(n - 2);
        }
    };

    auto rhs = [&](double, const Eigen::MatrixXd& y) {
        const auto a = y.topRows(n);
        const auto b = y.bottomRows(n);
        Eigen::MatrixXd d(2 * n, n);
        apply_k(a, d.topRows(n));
        apply_k(b, d.bottomRows(n));
        d.row(0) -= b.row(0);
        d.row(n) -= a.row(0);
        d *= r;
        return d;
    };

    Eigen::MatrixXd y0 = Eigen::MatrixXd::Zero(2 * n, n);
    y0.topRows(n) = Eigen::MatrixXd::Identity(n, n);

    std::vector<double> samples(std::max(2, n_samples));
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = t_end * static_cast<double>(i) / (samples.size() - 1);

    // The averaged model itself carries O(kappa) error; moderate tolerances
    // suffice and keep large truncations fast.
    OdeOptions opt;
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-11;
    if (r > 0.0) opt.max_step = 0.1 / r;

    PhotonRecord rec;
    rec.times = Eigen::Map<const Eigen::ArrayXd>(samples.data(),
                                                 static_cast<Eigen::Index>(samples.size()));
    rec.mode_numbers.resize(n, samples.size());
    rec.totals.resize(samples.size());
    rec.energy.resize(samples.size());
    rec.det_defect = Eigen::ArrayXd::Zero(samples.size());

    Eigen::Index col = 0;
    integrate_dopri5(rhs, 0.0, t_end, y0,
                     std::span<const double>(samples.data(), samples.size()),
                     [&](double, const Eigen::MatrixXd& y) {
                         const Eigen::ArrayXd nn =
                             y.bottomRows(n).array().square().rowwise().sum();
                         rec.mode_numbers.col(col) = nn.matrix();
                         rec.totals[col] = nn.sum();
                         rec.energy[col] = (nn * omega_ref / omega_ref[0]).sum();
                         ++col;
                     },
                     opt);
    return rec;
}

ParitySplit even_mode_suppression(const PhotonRecord& record) {
    if (record.n_samples() == 0)
        throw InvalidInput("even_mode_suppression: empty record");
    ParitySplit split;
    const auto last = record.mode_numbers.col(record.n_samples() - 1);
    for (int i = 0; i < record.n_modes(); ++i) {
        const int mode = i + 1;
        if (mode % 2 == 1)
            split.odd_total += last[i];
        else
            split.even_total += last[i];
    }
    return split;
}

namespace {

double log_linear_rate(const Eigen::ArrayXd& times, const Eigen::ArrayXd& values) {
    // Fit ln(values) = a + rate * t over the final third of the samples.
    const Eigen::Index s = times.size();
    const Eigen::Index first = (2 * s) / 3;
    const Eigen::Index m = s - first;
    if (m < 6)
        throw FitWindowTooShort("log_linear_rate: need at least 6 samples in "
                                "the final third");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (Eigen::Index i = first; i < s; ++i) {
        if (!(values[i] > 1e-290))
            throw FitWindowTooShort("log_linear_rate: photon numbers too small "
                                    "for a log fit");
        const double x = times[i];
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / denom;
}

}  // namespace

TwoModeGrowth two_mode_coupled_growth(double omega0, double kappa,
                                      double coupling_strength, double t_end,
                                      double tol) {
    if (!(omega0 > 0.0))
        throw NonPositiveFrequency("two_mode_coupled_growth: omega0 must be > 0");
    if (!(kappa > 0.0 && kappa < 0.1))
        throw InvalidInput("two_mode_coupled_growth: kappa must be in (0, 0.1)");
    if (!(t_end * omega0 * kappa >= 2.0))
        throw FitWindowTooShort(
            "two_mode_coupled_growth: need omega0 kappa t_end >= 2 for an "
            "asymptotic fit");

    // Pair in difference resonance with the drive: omega_b - omega_a = 2 omega0,
    // with mode a itself parametrically resonant.
    const double amplitude = 2.0 * kappa;
    const BoundaryTrajectory drive =
        BoundaryTrajectory::sinusoidal(amplitude, 2.0 * omega0);

    // Frequencies (omega0, 3 omega0) with the supplied coupling entry.
    const Eigen::ArrayXd omega_ref =
        (Eigen::ArrayXd(2) << omega0, 3.0 * omega0).finished();

    auto run = [&](double m_ab) {
        Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(2, 2);
        raw(0, 1) = m_ab;
        raw(1, 0) = -m_ab;
        const CouplingMatrix coupling = CouplingMatrix::from_raw(raw);

        ModeOde ode;
        const Eigen::MatrixXd m_dense = coupling.dense();
        ode.coupling = m_ab != 0.0 ? &m_dense : nullptr;
        ode.n = 2;
        ode.omega_sq = [&, omega_ref](double t) {
            const double rel = drive.relative_length(t, omega0);
            return (omega_ref / rel).square().eval();
        };
        ode.lambda = [&](double t) { return drive.log_derivative(t, omega0); };

        const double period = kPi / omega0;
        const OdeOptions ode_opt = mode_ode_options(tol, 3.0 * omega0 * 1.2);
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(4, 4);
        const Eigen::MatrixXd m_period =
            integrate_to(ode, 0.0, period, identity, ode_opt);

        const std::vector<double> samples =
            default_sample_times(t_end, period, 257);
        Eigen::ArrayXd times(static_cast<Eigen::Index>(samples.size()));
        Eigen::ArrayXd n_a(times.size()), n_b(times.size()), n_tot(times.size());
        Eigen::MatrixXd power = identity;
        long power_index = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const long j =
                static_cast<long>(std::floor(samples[i] / period + 1e-9));
            const double delta = samples[i] - static_cast<double>(j) * period;
            while (power_index < j) {
                power = m_period * power;
                ++power_index;
            }
            Eigen::MatrixXd phi = power;
            if (delta >= 1e-9 * period)
                phi = integrate_to(ode, 0.0, delta, identity, ode_opt) * power;
            const Eigen::ArrayXd nn = mode_numbers_from_phi(phi, omega_ref);
            times[static_cast<Eigen::Index>(i)] = samples[i];
            n_a[static_cast<Eigen::Index>(i)] = nn[0];
            n_b[static_cast<Eigen::Index>(i)] = nn[1];
            n_tot[static_cast<Eigen::Index>(i)] = nn.sum();
        }
        struct Run {
            Eigen::ArrayXd times, n_a, n_b, n_tot;
        };
        return Run{times, n_a, n_b, n_tot};
    };

    const auto uncoupled = run(0.0);
    const auto coupled = run(coupling_strength);

    TwoModeGrowth g;
    g.rate_uncoupled = log_linear_rate(uncoupled.times, uncoupled.n_a);
    g.rate_coupled = log_linear_rate(coupled.times, coupled.n_tot);
    if (coupling_strength != 0.0) {
        g.rate_mode_a = log_linear_rate(coupled.times, coupled.n_a);
        g.rate_mode_b = log_linear_rate(coupled.times, coupled.n_b);
    } else {
        g.rate_mode_a = g.rate_uncoupled;
        g.rate_mode_b = 0.0;
    }
    return g;
}

}  // namespace dce
