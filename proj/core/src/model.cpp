#include "tausim/model.hpp"

#include <cmath>
#include <stdexcept>

namespace tausim {

namespace {

bool hermitian(const std::array<std::complex<double>, 4>& m) {
    const double tol = 1e-12;
    return std::abs(m[0].imag()) <= tol && std::abs(m[3].imag()) <= tol &&
           std::abs(m[1] - std::conj(m[2])) <= tol;
}

}  // namespace

ObservableMatrix::ObservableMatrix(complex o11, complex o12, complex o21, complex o22)
    : m_{o11, o12, o21, o22} {
    if (!hermitian(m_)) {
        throw std::invalid_argument("ObservableMatrix: matrix is not Hermitian");
    }
}

ObservableMatrix ObservableMatrix::identity() {
    return {1.0, 0.0, 0.0, 1.0};
}

ObservableMatrix ObservableMatrix::sigma2() {
    using namespace std::complex_literals;
    return {0.0, -1.0i, 1.0i, 0.0};
}

ObservableMatrix ObservableMatrix::sigma3() {
    return {1.0, 0.0, 0.0, -1.0};
}

ObservableMatrix ObservableMatrix::sigma2_half() {
    using namespace std::complex_literals;
    return {0.0, -0.5i, 0.5i, 0.0};
}

double energy_E_n(double p_n, double p_prev, double x_n, double x_prev, const PotentialSpec& V) {
    return 0.5 * (p_n * p_n + p_prev * p_prev) + eval_potential(V, x_n) + eval_potential(V, x_prev);
}

double kappa_K_n(double P, double tau, double l, const PotentialSpec& Vtau) {
    return l * (P * P + eval_potential(Vtau, tau));
}

double hamiltonian_H_n(const DiscreteState& curr, const DiscreteState& prev,
                       const PotentialSpec& V, const PotentialSpec& Vtau, double l) {
    if (curr.n != prev.n + 1) {
        throw std::invalid_argument("hamiltonian_H_n: states must have consecutive indices");
    }
    const double dtau = curr.tau - prev.tau;
    return dtau * energy_E_n(curr.p, prev.p, curr.x, prev.x, V) + kappa_K_n(curr.P, curr.tau, l, Vtau);
}

}  // namespace tausim
