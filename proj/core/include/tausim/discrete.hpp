#pragma once

#include <span>
#include <vector>

#include "tausim/bracket.hpp"
#include "tausim/model.hpp"

namespace tausim {

/// Solution of the three-term recurrence: states with strictly consecutive
/// indices, at least the two seeds.
struct DiscreteTrajectory {
    std::vector<DiscreteState> states;
    ModelParams params;
    PotentialSpec V;
    PotentialSpec Vtau;
};

/// Advances the recurrence one step: given states n-1 and n, returns state
/// n+1. Solve order is tau, x, p, then P; every update is explicit because
/// K_n depends on (tau, P) only:
///   tau_{n+1} = tau_{n-1} + 2 l P_n
///   x_{n+1}   = x_{n-1} + (tau_{n+1} - tau_{n-1}) p_n
///   p_{n+1}   = p_{n-1} - (tau_{n+1} - tau_{n-1}) V'(x_n)
///   P_{n+1}   = P_{n-1} + E_{n+1} - E_n - l Vtau'(tau_n)
/// where E_{n+1} uses the freshly computed (x_{n+1}, p_{n+1}).
DiscreteState step_forward(const DiscreteState& prev, const DiscreteState& curr,
                           const PotentialSpec& V, const PotentialSpec& Vtau, double l);

/// Algebraic inverse of step_forward: given states n+1 and n, returns state
/// n-1. step_backward(step_forward(a, b), b) == a in exact arithmetic.
DiscreteState step_backward(const DiscreteState& next, const DiscreteState& curr,
                            const PotentialSpec& V, const PotentialSpec& Vtau, double l);

/// Second seed from a single state: one fourth-order continuum step of
/// length l applied to (x, tau, p, P). The recurrence itself needs two seed
/// states; this bootstrap keeps discrete and continuum runs comparable.
/// Callers may instead supply both seeds explicitly to run_discrete.
DiscreteState bootstrap_state1(const DiscreteState& state0, const PotentialSpec& V,
                               const PotentialSpec& Vtau, double l);

/// N forward steps from the two seeds; the result has N + 2 states.
/// Throws numerical_error if any intermediate value is non-finite.
DiscreteTrajectory run_discrete(const DiscreteState& s0, const DiscreteState& s1, int N,
                                const PotentialSpec& V, const PotentialSpec& Vtau, double l);

/// A = sum_{n>0} [(p_n + p_{n-1}) dx_n + (P_n + P_{n-1}) dtau_n - H_n].
double discrete_action(const DiscreteTrajectory& traj);

/// Max |dA/d coordinate| over all interior coordinates (endpoints fixed),
/// by central differences of step eps. Vanishes to O(eps^2) on solutions of
/// the equations of motion; order 1 on generic non-solutions.
double action_stationarity_check(const DiscreteTrajectory& traj, double eps);

// Flat layout of a state sequence: [x, tau, p, P] per state, consecutive.
inline std::size_t ix_x(std::size_t n) { return 4 * n; }
inline std::size_t ix_tau(std::size_t n) { return 4 * n + 1; }
inline std::size_t ix_p(std::size_t n) { return 4 * n + 2; }
inline std::size_t ix_P(std::size_t n) { return 4 * n + 3; }

std::vector<double> flatten(std::span<const DiscreteState> states);

/// Canonical pairs (x_n, p_n) and (tau_n, P_n) for each of n_states states.
CanonicalLayout discrete_layout(std::size_t n_states);

/// Poisson bracket over the discrete phase space spanned by the given
/// states, evaluated by the shared finite-difference kernel.
double discrete_poisson_bracket(const ScalarFn& f, const ScalarFn& g,
                                std::span<const DiscreteState> states, double h);

}  // namespace tausim
