#include "dce/interpolation.hpp"

#include <cmath>

namespace dce {

Eigen::ArrayXd pchip_tangents(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
    const Eigen::Index n = x.size();
    if (n < 2) throw InvalidInput("pchip: need at least 2 samples");
    if (x.size() != y.size()) throw InvalidInput("pchip: size mismatch");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(x[i + 1] > x[i]))
            throw InvalidInput("pchip: abscissae must be strictly increasing");

    Eigen::ArrayXd m(n);
    Eigen::ArrayXd h(n - 1), d(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        d[i] = (y[i + 1] - y[i]) / h[i];
    }
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto clip_end = [&](Eigen::Index i, double delta) {
        if (delta == 0.0 || m[i] / delta < 0.0)
            m[i] = 0.0;
        else if (std::abs(m[i]) > 3.0 * std::abs(delta))
            m[i] = 3.0 * delta;
    };
    clip_end(0, d[0]);
    clip_end(n - 1, d[n - 2]);
    return m;
}

namespace {
Eigen::Index bracket(const Eigen::ArrayXd& x, double t) {
    Eigen::Index lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        if (x[mid] <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}
}  // namespace

double pchip_eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                  const Eigen::ArrayXd& tangents, double t) {
    const Eigen::Index n = x.size();
    if (t <= x[0]) return y[0];
    if (t >= x[n - 1]) return y[n - 1];
    const Eigen::Index lo = bracket(x, t);
    const double h = x[lo + 1] - x[lo];
    const double s = (t - x[lo]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y[lo] + h10 * h * tangents[lo] + h01 * y[lo + 1] +
           h11 * h * tangents[lo + 1];
}

double pchip_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                        const Eigen::ArrayXd& tangents, double t) {
    const Eigen::Index n = x.size();
    if (t <= x[0] || t >= x[n - 1]) return 0.0;
    const Eigen::Index lo = bracket(x, t);
    const double h = x[lo + 1] - x[lo];
    const double s = (t - x[lo]) / h;
    const double dh00 = 6 * s * s - 6 * s;
    const double dh10 = 3 * s * s - 4 * s + 1;
    const double dh01 = -6 * s * s + 6 * s;
    const double dh11 = 3 * s * s - 2 * s;
    return (dh00 * y[lo] + dh01 * y[lo + 1]) / h + dh10 * tangents[lo] +
           dh11 * tangents[lo + 1];
}

}  // namespace dce
