#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tausim/model.hpp"

namespace tausim {

struct LapseSample {
    double t = 0.0;
    double tau = 0.0;
    double P = 0.0;
    double rate = 0.0;  // dtau/dt, stored as the P value of the sample
};

/// Internal-time history tau(t) with its momentum, used as the "lapse"
/// driving the (x, p) subsystem. Dense samples on a uniform t grid; driver
/// lookups between samples interpolate linearly. When the solution is known
/// in closed form (the whole potential family admits one), lookups bypass
/// the samples and evaluate the formula, so driven integrations pick up no
/// interpolation error.
class LapseSolution {
public:
    LapseSolution(std::vector<LapseSample> samples, double dt);

    struct ClosedForm {
        PotentialSpec Vtau;
        double tau0 = 0.0;
        double P0 = 0.0;
    };
    LapseSolution(std::vector<LapseSample> samples, double dt, ClosedForm cf);

    double dt() const { return dt_; }
    double t_begin() const { return samples_.front().t; }
    double t_end() const { return samples_.back().t; }
    std::size_t size() const { return samples_.size(); }
    std::span<const LapseSample> samples() const { return samples_; }
    bool is_closed_form() const { return closed_form_.has_value(); }

    /// tau(t); throws numerical_error when t lies outside the covered span.
    double tau_at(double t) const;
    /// dtau/dt at t.
    double rate_at(double t) const;

private:
    void check_span(double t) const;

    std::vector<LapseSample> samples_;
    double dt_;
    std::optional<ClosedForm> closed_form_;
};

/// Fourth-order integration of tau' = P, P' = -Vtau'(tau)/2 on a fixed grid
/// t = k dt, k = 0..steps. For Vtau = w^2 tau^2 and (tau0, P0) = (0, taubar w)
/// this converges to taubar sin(w t).
LapseSolution integrate_internal_time(double tau0, double P0, const PotentialSpec& Vtau,
                                      double dt, int steps);

/// Exact solution of the same equations, available for the whole potential
/// family (free/constant: affine; linear: quadratic; harmonic: sinusoid
/// about the shifted equilibrium). Sampled on the same grid as the numeric
/// path, with exact evaluation anywhere in the span.
LapseSolution closed_form_lapse(double tau0, double P0, const PotentialSpec& Vtau,
                                double dt, int steps);

struct XPSample {
    double t = 0.0;
    double x = 0.0;
    double p = 0.0;
};

/// Integrates x' = rate(t) p, p' = -rate(t) V'(x) over the lapse span (or
/// the first `steps` intervals of it), stepping with the lapse grid spacing.
/// Conserves p^2/2 + V(x) along the flow. Throws numerical_error when the
/// requested span exceeds lapse coverage.
std::vector<XPSample> integrate_xp_with_lapse(double x0, double p0, const PotentialSpec& V,
                                              const LapseSolution& lapse, int steps = -1);

/// Solves the internal-frame form d^2x/dtau^2 = -V'(x) once over the tau
/// range the lapse visits, then composes with tau(t). Because x depends on
/// tau only, a reversing lapse retraces the same curve structurally. Returns
/// (t, x) at the lapse sample times.
std::vector<std::pair<double, double>> integrate_internal_frame(double x0, double v0,
                                                                const PotentialSpec& V,
                                                                const LapseSolution& lapse);

/// H_c(x, p; t) = rate(t) [p^2/2 + V(x)].
double effective_hamiltonian_value(double x, double p, double t, const PotentialSpec& V,
                                   const LapseSolution& lapse);

/// Setup for the discrete-vs-continuum refinement study: one initial state,
/// the two potentials, and the external time at which errors are measured.
struct ConvergenceScenario {
    double x0 = 0.0;
    double tau0 = 0.0;
    double p0 = 1.0;
    double P0 = 1.0;
    PotentialSpec V;
    PotentialSpec Vtau;
    double t_final = 1.0;
};

struct ConvergenceResult {
    std::vector<double> resolutions;  // the l values, descending
    std::vector<double> errors;       // max-norm state error at t_final
    std::vector<double> orders;       // log2(errors[i] / errors[i+1])
    double observed_order = 0.0;      // mean of `orders`
    bool exact = false;               // all errors below 1e-12
};

/// Runs the discrete engine at each resolution (seeds: the initial state
/// plus one bootstrap step) against a fine continuum reference at t_final.
/// Requires at least three resolutions, each halving the previous one, and
/// t_final divisible by every l. Throws numerical_error when errors do not
/// decrease monotonically.
ConvergenceResult convergence_study(const ConvergenceScenario& scenario,
                                    std::span<const double> resolutions);

}  // namespace tausim
