#include "tausim/oracles.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "tausim/errors.hpp"

namespace tausim {

OtildeHistory otilde_history(const std::vector<HybridState>& run, double omega, int stride) {
    if (stride < 1) throw std::invalid_argument("otilde_history: stride must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("otilde_history: omega must be > 0");

    OtildeHistory hist;
    hist.omega = omega;
    hist.samples.reserve(run.size() / static_cast<std::size_t>(stride) + 1);
    for (std::size_t k = 0; k < run.size(); k += static_cast<std::size_t>(stride)) {
        const auto& s = run[k];
        hist.samples.push_back(
            {s.t, std::sin(omega * s.t) / omega, s.X1 * s.P2 - s.X2 * s.P1});
    }
    return hist;
}

namespace {

// Trapezoid of f(s) Otilde(s) ds along the recorded path up to external time
// t; f depends on the query through tau(t). The s-increments change sign as
// the machine reverses, which is exactly what makes the reconstruction match
// the forward integration.
template <typename F>
double path_integral(const OtildeHistory& hist, double t, const F& f) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < hist.samples.size(); ++k) {
        const auto& a = hist.samples[k];
        const auto& b = hist.samples[k + 1];
        if (b.t > t + 1e-12) break;
        acc += 0.5 * (f(a.s) * a.otilde + f(b.s) * b.otilde) * (b.s - a.s);
    }
    return acc;
}

void check_coverage(const OtildeHistory& hist, double t) {
    if (hist.samples.size() < 2) {
        throw numerical_error("green: history has fewer than two samples", t);
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(hist.samples.back().t));
    if (t < hist.samples.front().t - slack || t > hist.samples.back().t + slack) {
        throw numerical_error("green: insufficient history coverage", t);
    }
}

}  // namespace

double green_x(double t, const ModelParams& params, const OtildeHistory& hist) {
    check_coverage(hist, t);
    const double tau_t = std::sin(params.omega * t) / params.omega;
    const double hom = params.x1 * std::cos(params.Omega * tau_t + params.phi);
    const double integral = path_integral(
        hist, t, [&](double s) { return std::sin(params.Omega * (tau_t - s)); });
    return hom - params.lambda / params.Omega * integral;
}

double green_p(double t, const ModelParams& params, const OtildeHistory& hist) {
    check_coverage(hist, t);
    const double tau_t = std::sin(params.omega * t) / params.omega;
    const double hom = -params.x1 * params.Omega * std::sin(params.Omega * tau_t + params.phi);
    const double integral = path_integral(
        hist, t, [&](double s) { return std::cos(params.Omega * (tau_t - s)); });
    return hom - params.lambda * integral;
}

std::pair<double, double> fit_homogeneous(double x0, double p0, double Omega, double tau0) {
    const double x1 = std::hypot(x0, p0 / Omega);
    const double phi = std::atan2(-p0 / Omega, x0) - Omega * tau0;
    return {x1, phi};
}

double effective_B(double t, const ModelParams& params) {
    return params.lambda * params.x1 * std::cos(params.omega * t) *
           std::cos(params.Omega / params.omega * std::sin(params.omega * t));
}

EigenShift eigenvalue_shift(double E0, double B) {
    if (E0 == 0.0) throw std::invalid_argument("eigenvalue_shift: E0 must be nonzero");

    EigenShift shift;
    const double expanded = E0 * (1.0 + B * B / (2.0 * E0 * E0));
    shift.expanded_plus = expanded;
    shift.expanded_minus = -expanded;

    // Exact eigenvalues of the Hermitian matrix [[-E0, -iB], [iB, E0]]:
    // mean +- sqrt((a - d)^2/4 + |b|^2).
    const std::complex<double> off{0.0, -B};
    const double a = -E0;
    const double d = E0;
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(off));
    shift.exact_plus = mean + disc;
    shift.exact_minus = mean - disc;
    return shift;
}

}  // namespace tausim
