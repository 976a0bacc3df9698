#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace tausim {

/// Real-valued function of a flat phase-space point.
using ScalarFn = std::function<double(std::span<const double>)>;

/// Central-difference step for coordinate value x: relative step h with an
/// absolute floor of 1e-6, balancing truncation against rounding for
/// unit-scale observables.
inline double fd_step(double x, double h) {
    double s = h * std::abs(x);
    return s > 1e-6 ? s : 1e-6;
}

/// d f / d point[i] by central differences.
double central_diff(const ScalarFn& f, std::span<const double> point, std::size_t i, double h);

/// Full central-difference gradient.
std::vector<double> fd_gradient(const ScalarFn& f, std::span<const double> point, double h);

}  // namespace tausim
