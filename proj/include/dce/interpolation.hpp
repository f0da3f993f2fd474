#pragma once

#include <Eigen/Core>

#include "dce/errors.hpp"

namespace dce {

/// Fritsch-Carlson tangents for a shape-preserving (monotone) cubic Hermite
/// interpolant through (x, y). x must be strictly increasing.
Eigen::ArrayXd pchip_tangents(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

/// Evaluates the Hermite interpolant; queries outside [x_first, x_last]
/// clamp to the endpoint values.
double pchip_eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                  const Eigen::ArrayXd& tangents, double t);

/// Derivative of the interpolant (zero outside the table).
double pchip_derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                        const Eigen::ArrayXd& tangents, double t);

}  // namespace dce
