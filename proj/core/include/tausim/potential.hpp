#pragma once

namespace tausim {

/// Closed family of one-dimensional potentials with exact gradients. Keeping
/// the family closed (instead of accepting arbitrary callables) means every
/// gradient used by the engines and the conservation tests is an exact closed
/// form, never a numerical derivative.
enum class PotentialKind { zero, constant, linear, harmonic };

/// V(q) = c0 + c1 q + c2 q^2, with terms active per `kind`:
///   zero:      0
///   constant:  c0
///   linear:    c0 + c1 q
///   harmonic:  c0 + c1 q + c2 q^2   (c2 > 0)
///
/// Note the two quadratic conventions in use: the (x, p) sector written as
/// p^2/2 + V(x) realizes an oscillator of angular frequency W with
/// c2 = W^2/2, while the internal-time equation P' = -V'(tau)/2 gives
/// angular frequency w with c2 = w^2.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    static PotentialSpec zero() { return {}; }
    static PotentialSpec constant(double c0);
    static PotentialSpec linear(double c1, double c0 = 0.0);
    static PotentialSpec harmonic(double c2, double c1 = 0.0, double c0 = 0.0);
};

double eval_potential(const PotentialSpec& spec, double q);
double eval_potential_gradient(const PotentialSpec& spec, double q);

const char* to_string(PotentialKind kind);

}  // namespace tausim
