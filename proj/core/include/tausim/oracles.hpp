#pragma once

#include <utility>
#include <vector>

#include "tausim/hybrid.hpp"
#include "tausim/model.hpp"

namespace tausim {

struct OtildeSample {
    double t = 0.0;
    double s = 0.0;       // internal time s = tau(t) = sin(w t)/w
    double otilde = 0.0;  // X1 P2 - X2 P1
};

/// Coupling expectation recorded along a hybrid run, together with the
/// internal-time grid it induces. History is kept along actual external
/// time; the multivalued inversion t(s) is never performed.
struct OtildeHistory {
    std::vector<OtildeSample> samples;
    double omega = 1.0;
};

/// Tabulates Otilde(t) = X1 P2 - X2 P1 and s = sin(w t)/w along a recorded
/// run, keeping every stride-th sample.
OtildeHistory otilde_history(const std::vector<HybridState>& run, double omega, int stride = 1);

/// Retarded-solution reconstruction of the classical coordinates:
///   x(t) = x1 cos(W tau(t) + phi)
///          - (lambda/W) int ds sin(W (tau(t) - s)) Otilde(s)
///   p(t) = -x1 W sin(W tau(t) + phi)
///          - lambda     int ds cos(W (tau(t) - s)) Otilde(s)
/// The integral runs over the recorded s-grid (trapezoid rule on the
/// non-uniform, sign-changing increments ds = cos(w t) dt), truncated at the
/// run start with Otilde taken as zero before it; the homogeneous constants
/// (x1, phi) absorb the initial conditions. Throws numerical_error when t is
/// not covered by the history.
double green_x(double t, const ModelParams& params, const OtildeHistory& hist);
double green_p(double t, const ModelParams& params, const OtildeHistory& hist);

/// Homogeneous constants from the state at t = 0 (where tau = tau0):
///   x1 = hypot(x0, p0 / W),  phi = atan2(-p0 / W, x0) - W tau0.
std::pair<double, double> fit_homogeneous(double x0, double p0, double Omega, double tau0 = 0.0);

/// B(t) = lambda x1 cos(w t) cos(W sin(w t)/w): the small-coupling effective
/// field seen by the q-bit.
double effective_B(double t, const ModelParams& params);

struct EigenShift {
    double expanded_plus = 0.0;
    double expanded_minus = 0.0;
    double exact_plus = 0.0;
    double exact_minus = 0.0;
};

/// Lowest-order eigenvalue shift +-E0 (1 + B^2 / 2 E0^2) next to the exact
/// eigenvalues of the 2x2 matrix -E0 s3 + B s2. Rejects E0 = 0.
EigenShift eigenvalue_shift(double E0, double B);

}  // namespace tausim
