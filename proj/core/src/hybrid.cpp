#include "tausim/hybrid.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

#include "tausim/errors.hpp"
#include "tausim/rk4.hpp"

namespace tausim {

namespace {

using complex = std::complex<double>;

std::array<complex, 2> amplitudes(const HybridState& s) {
    return {complex{s.X1, s.P1}, complex{s.X2, s.P2}};
}

std::array<complex, 2> mat_apply(const ObservableMatrix& O, const std::array<complex, 2>& q) {
    return {O(0, 0) * q[0] + O(0, 1) * q[1], O(1, 0) * q[0] + O(1, 1) * q[1]};
}

bool finite(const HybridState& s) {
    return std::isfinite(s.x) && std::isfinite(s.p) && std::isfinite(s.X1) &&
           std::isfinite(s.X2) && std::isfinite(s.P1) && std::isfinite(s.P2);
}

}  // namespace

double qbit_expectation(const ObservableMatrix& O, const HybridState& s) {
    const auto q = amplitudes(s);
    const auto Oq = mat_apply(O, q);
    return (std::conj(q[0]) * Oq[0] + std::conj(q[1]) * Oq[1]).real();
}

std::array<double, 4> qbit_expectation_gradient(const ObservableMatrix& O, const HybridState& s) {
    const auto Oq = mat_apply(O, amplitudes(s));
    return {2.0 * Oq[0].real(), 2.0 * Oq[1].real(), 2.0 * Oq[0].imag(), 2.0 * Oq[1].imag()};
}

double constraint_C(const HybridState& s) {
    return 0.5 * (s.X1 * s.X1 + s.X2 * s.X2 + s.P1 * s.P1 + s.P2 * s.P2);
}

HybridDeriv hybrid_rhs(const HybridState& s, const HybridModel& model) {
    const auto& pm = model.params;
    const double c = std::cos(pm.omega * s.t);
    const double coupling = pm.lambda * s.x * c;
    const auto g = qbit_expectation_gradient(model.O, s);  // dX1, dX2, dP1, dP2

    HybridDeriv d;
    d.dx = pm.zeta * s.p * c;
    d.dp = -(pm.zeta * pm.Omega * pm.Omega * s.x + pm.lambda * qbit_expectation(model.O, s)) * c;
    d.dX1 = -pm.E0 * s.P1 + coupling * g[2];
    d.dX2 = pm.E0 * s.P2 + coupling * g[3];
    d.dP1 = pm.E0 * s.X1 - coupling * g[0];
    d.dP2 = -pm.E0 * s.X2 - coupling * g[1];
    return d;
}

std::vector<HybridState> integrate_hybrid(const HybridState& s0, const HybridModel& model,
                                          double dt, long steps, double c_tol) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_hybrid: dt must be > 0");
    if (steps < 0) throw std::invalid_argument("integrate_hybrid: steps must be >= 0");
    const bool enforce = std::isfinite(c_tol);
    if (enforce && std::abs(constraint_C(s0) - 1.0) > c_tol) {
        throw std::invalid_argument("integrate_hybrid: initial state violates C = 1");
    }

    auto rhs = [&](double t, const std::array<double, 6>& y) -> std::array<double, 6> {
        const HybridState s{t, y[0], y[1], y[2], y[3], y[4], y[5]};
        const HybridDeriv d = hybrid_rhs(s, model);
        return {d.dx, d.dp, d.dX1, d.dX2, d.dP1, d.dP2};
    };

    std::vector<HybridState> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(s0);
    std::array<double, 6> y{s0.x, s0.p, s0.X1, s0.X2, s0.P1, s0.P2};
    for (long k = 1; k <= steps; ++k) {
        const double t_prev = s0.t + static_cast<double>(k - 1) * dt;
        const double t = s0.t + static_cast<double>(k) * dt;
        y = rk4_step(rhs, t_prev, y, dt);
        const HybridState s{t, y[0], y[1], y[2], y[3], y[4], y[5]};
        if (!finite(s)) {
            throw numerical_error("integrate_hybrid: non-finite state", t);
        }
        if (enforce && std::abs(constraint_C(s) - 1.0) > c_tol) {
            throw numerical_error("integrate_hybrid: |C - 1| exceeded tolerance", t);
        }
        out.push_back(s);
    }
    return out;
}

double hybrid_hamiltonian_total(const HybridState& s, const HybridModel& model) {
    const auto& pm = model.params;
    const double c = std::cos(pm.omega * s.t);
    const double h_cl = 0.5 * pm.zeta * c * (s.p * s.p + pm.Omega * pm.Omega * s.x * s.x);
    const double h_qm = 0.5 * pm.E0 * (-(s.P1 * s.P1 + s.X1 * s.X1) + (s.P2 * s.P2 + s.X2 * s.X2));
    const double inter = pm.lambda * s.x * c * qbit_expectation(model.O, s);
    return h_cl + h_qm + inter;
}

std::array<double, 6> pack_hybrid(const HybridState& s) {
    return {s.x, s.p, s.X1, s.X2, s.P1, s.P2};
}

HybridState unpack_hybrid(std::span<const double> flat, double t) {
    if (flat.size() != 6) throw std::invalid_argument("unpack_hybrid: need six coordinates");
    return {t, flat[0], flat[1], flat[2], flat[3], flat[4], flat[5]};
}

CanonicalLayout hybrid_layout() {
    return CanonicalLayout{{{0, 1}, {2, 4}, {3, 5}}};
}

double generalized_bracket(const ScalarFn& A, const ScalarFn& B, std::span<const double> point,
                           double h) {
    return canonical_bracket(A, B, point, hybrid_layout(), h);
}

double flow_bracket_residual(
    const HybridState& s, const HybridModel& model, double h,
    const std::function<HybridDeriv(const HybridState&, const HybridModel&)>& rhs) {
    const double t = s.t;
    const ScalarFn hamiltonian = [&](std::span<const double> pt) {
        return hybrid_hamiltonian_total(unpack_hybrid(pt, t), model);
    };
    const auto flat = pack_hybrid(s);
    const HybridDeriv d = rhs(s, model);
    const std::array<double, 6> want{d.dx, d.dp, d.dX1, d.dX2, d.dP1, d.dP2};

    double residual = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const ScalarFn coord = [i](std::span<const double> pt) { return pt[i]; };
        const double via_bracket = generalized_bracket(coord, hamiltonian, flat, h);
        residual = std::max(residual, std::abs(via_bracket - want[i]));
    }
    return residual;
}

HybridState schrodinger_step(const HybridState& s, const std::function<double(double)>& x_of_t,
                             const HybridModel& model, double dt) {
    const auto& pm = model.params;
    // i psi' = (-E0 s3 + lambda x(t) cos(w t) s2) psi, in real coordinates
    // y = (X1, P1, X2, P2).
    auto rhs = [&](double t, const std::array<double, 4>& y) -> std::array<double, 4> {
        const double b = pm.lambda * x_of_t(t) * std::cos(pm.omega * t);
        return {-pm.E0 * y[1] - b * y[2], pm.E0 * y[0] - b * y[3], pm.E0 * y[3] + b * y[0],
                -pm.E0 * y[2] + b * y[1]};
    };
    const auto y = rk4_step(rhs, s.t, std::array<double, 4>{s.X1, s.P1, s.X2, s.P2}, dt);

    HybridState out = s;
    out.t = s.t + dt;
    out.x = x_of_t(out.t);
    out.X1 = y[0];
    out.P1 = y[1];
    out.X2 = y[2];
    out.P2 = y[3];
    return out;
}

std::function<double(double)> hermite_x_driver(const std::vector<HybridState>& run,
                                               double omega, double zeta) {
    if (run.size() < 2) throw std::invalid_argument("hermite_x_driver: need at least two samples");
    struct Table {
        std::vector<double> t, x, m;
    };
    auto tab = std::make_shared<Table>();
    tab->t.reserve(run.size());
    tab->x.reserve(run.size());
    tab->m.reserve(run.size());
    for (const auto& s : run) {
        tab->t.push_back(s.t);
        tab->x.push_back(s.x);
        tab->m.push_back(zeta * s.p * std::cos(omega * s.t));
    }
    const double t0 = tab->t.front();
    const double dt = (tab->t.back() - t0) / static_cast<double>(run.size() - 1);

    return [tab, t0, dt](double t) -> double {
        const double u = (t - t0) / dt;
        const auto n = tab->t.size();
        if (u <= 0.0) return tab->x.front();
        if (u >= static_cast<double>(n - 1)) return tab->x.back();
        const auto k = static_cast<std::size_t>(u);
        const double hseg = tab->t[k + 1] - tab->t[k];
        const double s = (t - tab->t[k]) / hseg;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * tab->x[k] + (s3 - 2 * s2 + s) * hseg * tab->m[k] +
               (-2 * s3 + 3 * s2) * tab->x[k + 1] + (s3 - s2) * hseg * tab->m[k + 1];
    };
}

}  // namespace tausim
