#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dce/errors.hpp"

namespace dce {

/// Ideal 1D cavity with Dirichlet mode functions F_n(x; L) = sqrt(2/L) sin(n pi x / L)
/// and the equidistant spectrum omega_n = c pi n / L.
struct CavityGeometry1D {
    double length = 1.0;      // L
    double wave_speed = 1.0;  // c
    int n_modes = 64;

    void validate() const;
    double omega(int n) const;  // n = 1..n_modes
    Eigen::ArrayXd omegas() const;
};

/// L(t) = L0 [1 + a sin(omega_drive t)]; omega_drive defaults to 2 omega_1.
/// The equivalent frequency-modulation depth is kappa = a / 2.
struct SinusoidalBoundary {
    double amplitude = 0.0;                 // a
    std::optional<double> omega_drive;      // rad/s
};

/// Arbitrary tabulated boundary length (monotone-cubic interpolated).
struct TabulatedBoundary {
    Eigen::ArrayXd times;
    Eigen::ArrayXd lengths;
};

class BoundaryTrajectory {
public:
    explicit BoundaryTrajectory(SinusoidalBoundary b);
    explicit BoundaryTrajectory(TabulatedBoundary b);

    static BoundaryTrajectory sinusoidal(double amplitude,
                                         std::optional<double> omega_drive = {}) {
        return BoundaryTrajectory(SinusoidalBoundary{amplitude, omega_drive});
    }

    /// Relative length L(t)/L0 and its logarithmic derivative Ldot/L.
    double relative_length(double t, double omega1) const;
    double log_derivative(double t, double omega1) const;

    bool is_sinusoidal() const;
    double drive_omega(double omega1) const;  // resolved drive frequency
    double kappa() const;                     // a/2 for the sinusoidal drive
    std::vector<std::string> warnings() const;

private:
    std::variant<SinusoidalBoundary, TabulatedBoundary> v_;
    Eigen::ArrayXd tangents_;  // pchip tangents for the tabulated variant
};

/// Antisymmetric intermode coupling, stored as the strict upper triangle.
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    /// Antisymmetrizes `raw`; the symmetric residual is kept as a diagnostic.
    static CouplingMatrix from_raw(const Eigen::MatrixXd& raw);

    int size() const { return static_cast<int>(upper_.rows()); }
    /// m_{alpha beta} with 1-based indices; sign handled internally.
    double entry(int alpha, int beta) const;
    Eigen::MatrixXd dense() const;
    double symmetric_residual() const { return symmetric_residual_; }

private:
    Eigen::MatrixXd upper_;  // strictly upper entries, zero elsewhere
    double symmetric_residual_ = 0.0;
};

/// m_{alpha beta} = L * integral of (dF_alpha/dL) F_beta dx for the 1D
/// Dirichlet modes, by fixed-grid Simpson quadrature with central finite
/// differences in L. `resolution` scales the number of quadrature points.
CouplingMatrix coupling_matrix_1d(const CavityGeometry1D& geometry,
                                  int resolution = 1);

/// Per-mode photon numbers, totals and energy at sampled times.
struct PhotonRecord {
    Eigen::ArrayXd times;
    Eigen::MatrixXd mode_numbers;  // n_modes x n_samples
    Eigen::ArrayXd totals;         // N_tot(t) = column sums
    Eigen::ArrayXd energy;         // E(t) in units of hbar omega_1
    Eigen::ArrayXd det_defect;     // |det(Phi) - 1| per sample
    bool truncation_flagged = false;  // top 10% of modes held > 1% of N_tot

    int n_modes() const { return static_cast<int>(mode_numbers.rows()); }
    int n_samples() const { return static_cast<int>(times.size()); }
};

struct EvolveOptions {
    int max_samples = 129;              // period-aligned by default
    std::vector<double> sample_times;   // explicit grid overrides the default
    bool compute_determinant = true;
    /// Hard error when the highest mode holds more than this share of N_tot.
    double truncation_error_share = 0.05;
};

/// Evolves the truncated mode system generated by the boundary motion from
/// identity initial data and returns the photon record (initial vacuum,
/// photons counted against the static-cavity frequencies). Periodic drives
/// use a one-period transfer matrix and its powers; tabulated drives are
/// integrated directly.
PhotonRecord evolve_modes(const CavityGeometry1D& geometry,
                          const BoundaryTrajectory& trajectory,
                          const CouplingMatrix& coupling, double t_end,
                          double tol, const EvolveOptions& opt = {});

/// Fast path: the resonantly averaged (slowly varying) system for the
/// sinusoidal drive at 2 omega_1. Valid for kappa << 1.
PhotonRecord evolve_modes_averaged(const CavityGeometry1D& geometry,
                                   double kappa, double t_end,
                                   int n_samples = 65);

struct ParitySplit {
    double odd_total = 0.0;
    double even_total = 0.0;
    double odd_share() const {
        const double tot = odd_total + even_total;
        return tot > 0.0 ? odd_total / tot : 0.0;
    }
};

/// Photon totals at the final sample split by mode parity.
ParitySplit even_mode_suppression(const PhotonRecord& record);

struct TwoModeGrowth {
    double rate_uncoupled = 0.0;  // d ln N / dt of the lone resonant mode
    double rate_coupled = 0.0;    // same for the coupled pair total
    double rate_mode_a = 0.0;
    double rate_mode_b = 0.0;
};

/// Resonantly coupled pair (omega_a = omega0, omega_b = 3 omega0, both under
/// the 2 omega0 boundary drive) evolved with and without the coupling
/// m_ab = coupling_strength. Growth exponents are log-linear fits over the
/// final third of the run.
TwoModeGrowth two_mode_coupled_growth(double omega0, double kappa,
                                      double coupling_strength, double t_end,
                                      double tol = 1e-10);

}  // namespace dce
