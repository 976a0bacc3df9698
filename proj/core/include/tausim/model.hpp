#pragma once

#include <array>
#include <complex>

#include "tausim/potential.hpp"

namespace tausim {

/// One event of the discrete dynamics: positions (x, tau) and conjugate
/// momenta (p, P) at step index n. `tau` is the internal (dynamical) time
/// and `P` its conjugate momentum; external time is t = n l.
struct DiscreteState {
    int n = 0;
    double x = 0.0;
    double tau = 0.0;
    double p = 0.0;
    double P = 0.0;
};

/// Classical pair (x, p) plus q-bit coordinates in the oscillator
/// representation, at external time t. Physical states satisfy
/// constraint_C(s) == 1 (wave-function normalization).
struct HybridState {
    double t = 0.0;
    double x = 0.0;
    double p = 0.0;
    double X1 = 0.0;
    double X2 = 0.0;
    double P1 = 0.0;
    double P2 = 0.0;
};

/// Hermitian 2x2 matrix of a q-bit observable in the energy eigenbasis.
/// Hermiticity is checked at construction, so every reachable instance is a
/// valid observable.
class ObservableMatrix {
public:
    using complex = std::complex<double>;

    ObservableMatrix(complex o11, complex o12, complex o21, complex o22);

    complex operator()(int i, int j) const { return m_[static_cast<std::size_t>(2 * i + j)]; }

    static ObservableMatrix identity();
    static ObservableMatrix sigma2();
    static ObservableMatrix sigma3();
    /// Default coupling observable of the hybrid model.
    static ObservableMatrix sigma2_half();

private:
    std::array<complex, 4> m_;
};

/// Physical constants and integration controls shared across the engines.
/// zeta stays at 1 (it can be absorbed by rescaling time, E0 and lambda);
/// it is carried so configs can state it explicitly.
struct ModelParams {
    double l = 1e-2;      // fundamental step (time units)
    double omega = 1.0;   // time-machine (lapse) frequency
    double Omega = 5.0;   // proper oscillator frequency
    double E0 = 1.0;      // q-bit energy scale
    double lambda = 0.0;  // hybrid coupling
    double zeta = 1.0;    // classical amplitude
    double taubar = 1.0;  // internal-time amplitude
    double phi = 0.0;     // homogeneous-solution phase
    double x1 = 1.0;      // homogeneous-solution amplitude
    double dt = 1e-3;     // continuum integrator step
};

/// E_n = (p_n^2 + p_{n-1}^2)/2 + V(x_n) + V(x_{n-1}).
double energy_E_n(double p_n, double p_prev, double x_n, double x_prev, const PotentialSpec& V);

/// K_n = l [P^2 + Vtau(tau)]. Depends on (tau, P) only; in particular it is
/// independent of x and p, which keeps every update of the stepper explicit.
double kappa_K_n(double P, double tau, double l, const PotentialSpec& Vtau);

/// H_n = (tau_n - tau_{n-1}) E_n + K_n for consecutive states.
double hamiltonian_H_n(const DiscreteState& curr, const DiscreteState& prev,
                       const PotentialSpec& V, const PotentialSpec& Vtau, double l);

}  // namespace tausim
