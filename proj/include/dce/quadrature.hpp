#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "dce/errors.hpp"

namespace dce {

namespace detail {

template <typename F, typename V>
V adaptive_simpson_rec(const F& f, double a, double b, V fa, V fm, V fb,
                       V whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const V flm = f(lm);
    const V frm = f(rm);
    const V left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const V right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const V refined = left + right;
    if (std::abs(refined - whole) <= 15.0 * tol || (b - a) < 1e-14 * std::abs(b)) {
        return refined + (refined - whole) / 15.0;
    }
    if (depth <= 0) {
        throw QuadratureFailure("adaptive_simpson: recursion depth exhausted");
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                                depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                                depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a scalar (double or complex<double>)
/// integrand over [a, b] to absolute tolerance `tol`.
template <typename F>
auto adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48)
    -> decltype(f(a)) {
    using V = decltype(f(a));
    if (!(b > a)) {
        if (b == a) return V{};
        throw InvalidInput("adaptive_simpson: b must be >= a");
    }
    const V fa = f(a);
    const V fm = f(0.5 * (a + b));
    const V fb = f(b);
    const V whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                        max_depth);
}

/// Composite Simpson rule on a fixed grid with `n` intervals (rounded up to
/// even). Used where the resolution requirement is known a priori.
template <typename F>
auto composite_simpson(F&& f, double a, double b, int n) -> decltype(f(a)) {
    using V = decltype(f(a));
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    V acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        const double x = a + h * i;
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
    }
    return acc * (h / 3.0);
}

}  // namespace dce
