#include "dce/photon_statistics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dce {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Eigen::Index kGridSize = 8192;

// splitmix64: small, seedable, stable across platforms.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

double f_dce(double mean, double m) {
    if (!(mean > 0.0)) throw InvalidInput("f_dce: mean must be > 0");
    if (m < 0.0) throw InvalidInput("f_dce: m must be >= 0");
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return std::exp(-m / (2.0 * mean)) / std::sqrt(kTwoPi * mean * m);
}

double f_thermal(double mean, double m) {
    if (!(mean > 0.0)) throw InvalidInput("f_thermal: mean must be > 0");
    if (m < 0.0) throw InvalidInput("f_thermal: m must be >= 0");
    return std::exp(-m / mean) / mean;
}

PhotonDistribution PhotonDistribution::dce(double mean) {
    if (!(mean > 0.0)) throw InvalidInput("PhotonDistribution: mean must be > 0");
    PhotonDistribution d;
    d.kind_ = DistributionKind::dce_asymptotic;
    d.mean_ = mean;
    d.truncation_ = 50.0 * mean;
    // CDF in u = sqrt(m / (2N)): F(u) = erf(u) / erf(5). The substitution
    // absorbs the m^{-1/2} singularity exactly.
    d.grid_.resize(kGridSize);
    d.cum_grid_.resize(kGridSize);
    const double norm = std::erf(5.0);
    for (Eigen::Index i = 0; i < kGridSize; ++i) {
        const double u = 5.0 * static_cast<double>(i) / (kGridSize - 1);
        d.grid_[i] = u;
        d.cum_grid_[i] = std::erf(u) / norm;
    }
    return d;
}

PhotonDistribution PhotonDistribution::thermal(double mean) {
    if (!(mean > 0.0)) throw InvalidInput("PhotonDistribution: mean must be > 0");
    PhotonDistribution d;
    d.kind_ = DistributionKind::thermal_asymptotic;
    d.mean_ = mean;
    d.truncation_ = 50.0 * mean;
    // CDF in v = m / N over [0, 50].
    d.grid_.resize(kGridSize);
    d.cum_grid_.resize(kGridSize);
    const double norm = 1.0 - std::exp(-50.0);
    for (Eigen::Index i = 0; i < kGridSize; ++i) {
        const double v = 50.0 * static_cast<double>(i) / (kGridSize - 1);
        d.grid_[i] = v;
        d.cum_grid_[i] = (1.0 - std::exp(-v)) / norm;
    }
    return d;
}

PhotonDistribution PhotonDistribution::squeezed(double mean) {
    if (!(mean > 0.0)) throw InvalidInput("PhotonDistribution: mean must be > 0");
    PhotonDistribution d;
    d.kind_ = DistributionKind::squeezed_exact;
    d.mean_ = mean;
    // P(2k) = C(2k, k) 4^{-k} tanh^{2k}(r) / cosh(r), sinh^2(r) = N.
    const double tanh2 = mean / (mean + 1.0);
    const double inv_cosh = 1.0 / std::sqrt(mean + 1.0);
    std::vector<double> pmf;
    std::vector<double> cum;
    double p = inv_cosh;
    double acc = 0.0;
    // Geometric tail bound: sum_{j>k} P(2j) <= P(2k) tanh2/(1-tanh2) (N+1)-ish.
    const double tail_stop = 1e-16 / (mean + 1.0);
    for (long k = 0;; ++k) {
        pmf.push_back(p);
        acc += p;
        cum.push_back(acc);
        if (p < tail_stop && k > 4) break;
        if (k > 100'000'000)
            throw ToleranceNotMet("squeezed distribution: truncation runaway");
        p *= tanh2 * (2.0 * k + 1.0) / (2.0 * k + 2.0);
    }
    d.pmf_even_ = Eigen::Map<const Eigen::ArrayXd>(pmf.data(),
                                                   static_cast<Eigen::Index>(pmf.size()));
    d.cum_even_ = Eigen::Map<const Eigen::ArrayXd>(cum.data(),
                                                   static_cast<Eigen::Index>(cum.size()));
    d.truncation_ = 2.0 * static_cast<double>(pmf.size() - 1);
    return d;
}

double PhotonDistribution::probability(double m) const {
    switch (kind_) {
        case DistributionKind::dce_asymptotic: return f_dce(mean_, m);
        case DistributionKind::thermal_asymptotic: return f_thermal(mean_, m);
        case DistributionKind::squeezed_exact:
            return pmf(static_cast<long>(std::llround(m)));
    }
    return 0.0;
}

double PhotonDistribution::pmf(long m) const {
    if (kind_ != DistributionKind::squeezed_exact)
        throw InvalidInput("pmf: defined for the squeezed_exact kind only");
    if (m < 0) throw InvalidInput("pmf: m must be >= 0");
    if (m % 2 != 0) return 0.0;
    const long k = m / 2;
    if (k >= pmf_even_.size()) return 0.0;
    return pmf_even_[k];
}

double PhotonDistribution::truncated_normalization() const {
    switch (kind_) {
        case DistributionKind::dce_asymptotic:
            // integral of f over [0, 50N] = erf(5)
            return std::erf(5.0);
        case DistributionKind::thermal_asymptotic:
            return 1.0 - std::exp(-50.0);
        case DistributionKind::squeezed_exact:
            return cum_even_[cum_even_.size() - 1];
    }
    return 0.0;
}

double PhotonDistribution::truncated_mean() const {
    switch (kind_) {
        case DistributionKind::dce_asymptotic: {
            // integral of m f dm over [0, 50N], via m = 2 N u^2:
            // (4N/sqrt(pi)) [sqrt(pi)/4 erf(u) - (u/2) e^{-u^2}]_0^5
            const double u = 5.0;
            const double first_moment =
                mean_ * std::erf(u) -
                (4.0 * mean_ / std::sqrt(std::numbers::pi)) * 0.5 * u *
                    std::exp(-u * u);
            return first_moment / truncated_normalization();
        }
        case DistributionKind::thermal_asymptotic: {
            // integral of (m/N) e^{-m/N} dm / N over [0, 50N]
            const double first_moment =
                mean_ * (1.0 - std::exp(-50.0) * 51.0);
            return first_moment / truncated_normalization();
        }
        case DistributionKind::squeezed_exact: {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < pmf_even_.size(); ++k)
                acc += 2.0 * static_cast<double>(k) * pmf_even_[k];
            return acc / truncated_normalization();
        }
    }
    return 0.0;
}

double PhotonDistribution::cdf(double m) const {
    switch (kind_) {
        case DistributionKind::dce_asymptotic:
            return std::erf(std::sqrt(m / (2.0 * mean_))) / std::erf(5.0);
        case DistributionKind::thermal_asymptotic:
            return (1.0 - std::exp(-m / mean_)) / (1.0 - std::exp(-50.0));
        case DistributionKind::squeezed_exact: {
            const long k = static_cast<long>(std::floor(m / 2.0));
            if (k < 0) return 0.0;
            if (k >= cum_even_.size()) return 1.0;
            return cum_even_[k] / cum_even_[cum_even_.size() - 1];
        }
    }
    return 0.0;
}

double PhotonDistribution::inverse_cdf(double u) const {
    if (kind_ == DistributionKind::squeezed_exact) {
        const double target = u * cum_even_[cum_even_.size() - 1];
        Eigen::Index lo = 0, hi = cum_even_.size() - 1;
        while (lo < hi) {
            const Eigen::Index mid = (lo + hi) / 2;
            if (cum_even_[mid] < target)
                lo = mid + 1;
            else
                hi = mid;
        }
        return 2.0 * static_cast<double>(lo);
    }
    // Continuous kinds: binary search on the cached cumulative grid with
    // linear interpolation within the bracket.
    Eigen::Index lo = 0, hi = cum_grid_.size() - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        if (cum_grid_[mid] <= u)
            lo = mid;
        else
            hi = mid;
    }
    const double c0 = cum_grid_[lo], c1 = cum_grid_[hi];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    const double x = grid_[lo] + frac * (grid_[hi] - grid_[lo]);
    if (kind_ == DistributionKind::dce_asymptotic) return 2.0 * mean_ * x * x;
    return mean_ * x;
}

std::vector<std::string> PhotonDistribution::warnings() const {
    std::vector<std::string> w;
    if (kind_ != DistributionKind::squeezed_exact && mean_ < 10.0)
        w.push_back("asymptotic distribution used below its validity range "
                    "(mean < 10)");
    return w;
}

PhotonSampler::PhotonSampler(const PhotonDistribution* dist, std::uint64_t seed)
    : dist_(dist), state_(seed) {
    // Decorrelate trivially related seeds.
    for (int i = 0; i < 4; ++i) splitmix64(state_);
}

double PhotonSampler::operator()() {
    return dist_->inverse_cdf(uniform01(state_));
}

PhotonDistribution squeezed_oracle(double mean) {
    return PhotonDistribution::squeezed(mean);
}

}  // namespace dce
