#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dce/errors.hpp"

namespace dce {

/// Asymptotic number distribution of resonantly generated photons,
/// f(m) = (2 pi N m)^{-1/2} exp(-m / (2N)), valid for N >> 1, m >> 1.
double f_dce(double mean, double m);

/// Asymptotic thermal distribution f(m) = N^{-1} exp(-m / N), N >> 1.
double f_thermal(double mean, double m);

enum class DistributionKind { dce_asymptotic, thermal_asymptotic, squeezed_exact };

class PhotonDistribution;

/// Deterministic inverse-CDF sampler over the truncated support. Each
/// sampler owns its generator state; do not share across threads.
class PhotonSampler {
public:
    double operator()();

private:
    friend class PhotonDistribution;
    PhotonSampler(const PhotonDistribution* dist, std::uint64_t seed);

    const PhotonDistribution* dist_;
    std::uint64_t state_;
};

/// Photon-number distribution with a probability accessor, truncated
/// normalization/mean, and seeded sampling. The two asymptotic kinds are
/// continuous densities truncated at m = 50 N; the squeezed kind is the
/// exact discrete distribution (odd probabilities are zero) truncated
/// adaptively until the tail is below 1e-13.
class PhotonDistribution {
public:
    static PhotonDistribution dce(double mean);
    static PhotonDistribution thermal(double mean);
    /// Exact single-mode squeezed-vacuum distribution with the given mean.
    static PhotonDistribution squeezed(double mean);

    DistributionKind kind() const { return kind_; }
    double mean() const { return mean_; }

    /// Density (asymptotic kinds) or point mass at round(m) (squeezed).
    double probability(double m) const;

    /// Point mass of the squeezed distribution at integer m.
    double pmf(long m) const;

    /// Integral (or sum) of the probability over the truncated support.
    double truncated_normalization() const;

    /// First moment over the truncated support, normalized.
    double truncated_mean() const;

    /// Upper end of the truncated support.
    double truncation() const { return truncation_; }

    /// The sampler borrows this distribution, which must outlive it.
    PhotonSampler sampler(std::uint64_t seed) const {
        return PhotonSampler(this, seed);
    }

    std::vector<std::string> warnings() const;

private:
    friend class PhotonSampler;
    PhotonDistribution() = default;

    double cdf(double m) const;         // normalized over the truncation
    double inverse_cdf(double u) const; // u in [0, 1)

    DistributionKind kind_ = DistributionKind::dce_asymptotic;
    double mean_ = 0.0;
    double truncation_ = 0.0;
    // squeezed_exact tables
    Eigen::ArrayXd pmf_even_;  // P(2k), k = 0..K
    Eigen::ArrayXd cum_even_;
    // inverse-CDF cache for the continuous kinds (transformed coordinate)
    Eigen::ArrayXd grid_;
    Eigen::ArrayXd cum_grid_;
};

/// Exact squeezed-vacuum oracle with mean N (see PhotonDistribution::squeezed).
PhotonDistribution squeezed_oracle(double mean);

}  // namespace dce
