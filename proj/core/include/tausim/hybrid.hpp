#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "tausim/bracket.hpp"
#include "tausim/model.hpp"

namespace tausim {

/// The oscillator-like classical machine coupled to a q-bit:
///   H = zeta/2 cos(w t) (p^2 + W^2 x^2)
///     + E0/2 sum_i (-1)^i (P_i^2 + X_i^2)
///     + lambda x cos(w t) <O>
/// with the coupling observable O Hermitian (default sigma2/2, for which
/// <O> = X1 P2 - X2 P1 exactly). The classical sector is written directly in
/// the (p^2 + W^2 x^2) normalization; the generic lapse engine keeps the
/// p^2/2 + V(x) convention instead.
struct HybridModel {
    ModelParams params;
    ObservableMatrix O = ObservableMatrix::sigma2_half();
};

/// <O> = sum_ij O_ij (X_i - i P_i)(X_j + i P_j), a real number. No leading
/// 1/2: identity gives 2C, sigma2/2 gives X1 P2 - X2 P1; the relative factor
/// against the hbar-carrying expansion is absorbed into lambda.
double qbit_expectation(const ObservableMatrix& O, const HybridState& s);

/// Analytic partials of <O>: (d/dX1, d/dX2, d/dP1, d/dP2). With q = X + iP,
/// d<O>/dX_k = 2 Re (O q)_k and d<O>/dP_k = 2 Im (O q)_k.
std::array<double, 4> qbit_expectation_gradient(const ObservableMatrix& O, const HybridState& s);

/// C = (X1^2 + X2^2 + P1^2 + P2^2) / 2; equals 1 on physical states.
double constraint_C(const HybridState& s);

struct HybridDeriv {
    double dx = 0.0;
    double dp = 0.0;
    double dX1 = 0.0;
    double dX2 = 0.0;
    double dP1 = 0.0;
    double dP2 = 0.0;
};

/// Hamilton equations of the hybrid model at the state's own time:
///   x' = zeta p cos(w t)
///   p' = -(zeta W^2 x + lambda <O>) cos(w t)
///   X_i' = (-1)^i E0 P_i + lambda x cos(w t) d<O>/dP_i
///   P_i' = -(-1)^i E0 X_i - lambda x cos(w t) d<O>/dX_i
HybridDeriv hybrid_rhs(const HybridState& s, const HybridModel& model);

/// Fixed-step fourth-order integration recording every step. The constraint
/// C = 1 is required of the initial state and monitored along the run (no
/// renormalization is ever applied; drift is a diagnostic of integrator
/// quality). Exceeding c_tol raises numerical_error. Pass c_tol = infinity
/// to integrate off the constraint surface (finite-difference flow maps).
std::vector<HybridState> integrate_hybrid(const HybridState& s0, const HybridModel& model,
                                          double dt, long steps, double c_tol = 1e-6);

/// H_Sigma at the state's own time.
double hybrid_hamiltonian_total(const HybridState& s, const HybridModel& model);

// Flat layout over the hybrid phase space (t excluded; it is an explicit
// parameter, and bracket-based checks freeze it): [x, p, X1, X2, P1, P2].
std::array<double, 6> pack_hybrid(const HybridState& s);
HybridState unpack_hybrid(std::span<const double> flat, double t);
CanonicalLayout hybrid_layout();

/// {A, B}_CL + {A, B}_QM over the flat hybrid point, finite differences of
/// step h via the shared kernel.
double generalized_bracket(const ScalarFn& A, const ScalarFn& B, std::span<const double> point,
                           double h);

/// Max over coordinates of |rhs - {coordinate, H_Sigma}| at the state, with
/// t frozen inside the bracket. The right-hand side is injectable so test
/// fixtures can demonstrate that a wrong sign is detected.
double flow_bracket_residual(
    const HybridState& s, const HybridModel& model, double h,
    const std::function<HybridDeriv(const HybridState&, const HybridModel&)>& rhs = hybrid_rhs);

/// One fourth-order step of the two-component Schroedinger form
///   i d/dt (X1 + iP1, X2 + iP2) = (-E0 s3 + lambda x(t) cos(w t) s2) psi,
/// with x(t) supplied by the driver. The classical slot of the result is
/// refreshed from the driver; p is carried through unchanged. Exists for the
/// equivalence check against integrate_hybrid, which encodes the same
/// dynamics in Hamiltonian form.
HybridState schrodinger_step(const HybridState& s, const std::function<double(double)>& x_of_t,
                             const HybridModel& model, double dt);

/// Cubic-Hermite x(t) interpolant over a recorded run, using the exact slope
/// x' = zeta p cos(w t) at each node. Interpolation error is O(dt^4), so a
/// Schroedinger re-integration driven by it matches the recorded q-bit
/// coordinates to well below integrator accuracy.
std::function<double(double)> hermite_x_driver(const std::vector<HybridState>& run,
                                               double omega, double zeta = 1.0);

}  // namespace tausim
