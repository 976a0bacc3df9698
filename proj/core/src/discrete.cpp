#include "tausim/discrete.hpp"

#include <cmath>
#include <stdexcept>

#include "tausim/errors.hpp"
#include "tausim/rk4.hpp"

namespace tausim {

namespace {

bool finite(const DiscreteState& s) {
    return std::isfinite(s.x) && std::isfinite(s.tau) && std::isfinite(s.p) && std::isfinite(s.P);
}

}  // namespace

DiscreteState step_forward(const DiscreteState& prev, const DiscreteState& curr,
                           const PotentialSpec& V, const PotentialSpec& Vtau, double l) {
    if (curr.n != prev.n + 1) {
        throw std::invalid_argument("step_forward: states must have consecutive indices");
    }
    DiscreteState next;
    next.n = curr.n + 1;

    const double dtau2 = 2.0 * l * curr.P;  // tau_{n+1} - tau_{n-1}
    next.tau = prev.tau + dtau2;
    next.x = prev.x + dtau2 * curr.p;
    next.p = prev.p - dtau2 * eval_potential_gradient(V, curr.x);

    const double e_next = energy_E_n(next.p, curr.p, next.x, curr.x, V);
    const double e_curr = energy_E_n(curr.p, prev.p, curr.x, prev.x, V);
    next.P = prev.P + (e_next - e_curr) - l * eval_potential_gradient(Vtau, curr.tau);
    return next;
}

DiscreteState step_backward(const DiscreteState& next, const DiscreteState& curr,
                            const PotentialSpec& V, const PotentialSpec& Vtau, double l) {
    if (next.n != curr.n + 1) {
        throw std::invalid_argument("step_backward: states must have consecutive indices");
    }
    DiscreteState prev;
    prev.n = curr.n - 1;

    const double dtau2 = 2.0 * l * curr.P;
    prev.tau = next.tau - dtau2;
    prev.x = next.x - dtau2 * curr.p;
    prev.p = next.p + dtau2 * eval_potential_gradient(V, curr.x);

    const double e_next = energy_E_n(next.p, curr.p, next.x, curr.x, V);
    const double e_curr = energy_E_n(curr.p, prev.p, curr.x, prev.x, V);
    prev.P = next.P - (e_next - e_curr) + l * eval_potential_gradient(Vtau, curr.tau);
    return prev;
}

DiscreteState bootstrap_state1(const DiscreteState& state0, const PotentialSpec& V,
                               const PotentialSpec& Vtau, double l) {
    // Continuum-limit equations: x' = P p, p' = -P V'(x), tau' = P,
    // P' = -Vtau'(tau)/2.
    auto rhs = [&](double, const std::array<double, 4>& y) -> std::array<double, 4> {
        return {y[3] * y[2], y[3], -y[3] * eval_potential_gradient(V, y[0]),
                -0.5 * eval_potential_gradient(Vtau, y[1])};
    };
    const std::array<double, 4> y1 =
        rk4_step(rhs, 0.0, std::array<double, 4>{state0.x, state0.tau, state0.p, state0.P}, l);
    return {state0.n + 1, y1[0], y1[1], y1[2], y1[3]};
}

DiscreteTrajectory run_discrete(const DiscreteState& s0, const DiscreteState& s1, int N,
                                const PotentialSpec& V, const PotentialSpec& Vtau, double l) {
    if (N < 0) throw std::invalid_argument("run_discrete: N must be >= 0");
    if (!(l > 0.0)) throw std::invalid_argument("run_discrete: l must be > 0");
    if (s1.n != s0.n + 1) {
        throw std::invalid_argument("run_discrete: seeds must have consecutive indices");
    }

    DiscreteTrajectory traj;
    traj.params.l = l;
    traj.V = V;
    traj.Vtau = Vtau;
    traj.states.reserve(static_cast<std::size_t>(N) + 2);
    traj.states.push_back(s0);
    traj.states.push_back(s1);
    for (int i = 0; i < N; ++i) {
        const auto& prev = traj.states[traj.states.size() - 2];
        const auto& curr = traj.states.back();
        DiscreteState next = step_forward(prev, curr, V, Vtau, l);
        if (!finite(next)) {
            throw numerical_error("run_discrete: non-finite state (instability)", next.n);
        }
        traj.states.push_back(next);
    }
    return traj;
}

double discrete_action(const DiscreteTrajectory& traj) {
    if (traj.states.size() < 2) {
        throw std::invalid_argument("discrete_action: need at least two states");
    }
    double action = 0.0;
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
        const auto& c = traj.states[n];
        const auto& pv = traj.states[n - 1];
        action += (c.p + pv.p) * (c.x - pv.x) + (c.P + pv.P) * (c.tau - pv.tau) -
                  hamiltonian_H_n(c, pv, traj.V, traj.Vtau, traj.params.l);
    }
    return action;
}

double action_stationarity_check(const DiscreteTrajectory& traj, double eps) {
    if (traj.states.size() < 3) {
        throw std::invalid_argument("action_stationarity_check: need interior states");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("action_stationarity_check: eps must be > 0");

    DiscreteTrajectory work = traj;
    double max_grad = 0.0;
    auto probe = [&](double& coord) {
        const double save = coord;
        coord = save + eps;
        const double ap = discrete_action(work);
        coord = save - eps;
        const double am = discrete_action(work);
        coord = save;
        const double g = std::abs(ap - am) / (2.0 * eps);
        if (g > max_grad) max_grad = g;
    };
    for (std::size_t n = 1; n + 1 < work.states.size(); ++n) {
        probe(work.states[n].x);
        probe(work.states[n].tau);
        probe(work.states[n].p);
        probe(work.states[n].P);
    }
    return max_grad;
}

std::vector<double> flatten(std::span<const DiscreteState> states) {
    std::vector<double> flat;
    flat.reserve(states.size() * 4);
    for (const auto& s : states) {
        flat.push_back(s.x);
        flat.push_back(s.tau);
        flat.push_back(s.p);
        flat.push_back(s.P);
    }
    return flat;
}

CanonicalLayout discrete_layout(std::size_t n_states) {
    CanonicalLayout layout;
    layout.pairs.reserve(2 * n_states);
    for (std::size_t n = 0; n < n_states; ++n) {
        layout.pairs.emplace_back(ix_x(n), ix_p(n));
        layout.pairs.emplace_back(ix_tau(n), ix_P(n));
    }
    return layout;
}

double discrete_poisson_bracket(const ScalarFn& f, const ScalarFn& g,
                                std::span<const DiscreteState> states, double h) {
    const std::vector<double> flat = flatten(states);
    return canonical_bracket(f, g, flat, discrete_layout(states.size()), h);
}

}  // namespace tausim
