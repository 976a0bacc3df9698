#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tausim/discrete.hpp"
#include "tausim/errors.hpp"
#include "tausim/rng.hpp"

using namespace tausim;

namespace {

const PotentialSpec kZero = PotentialSpec::zero();

double state_distance(const DiscreteState& a, const DiscreteState& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.tau - b.tau), std::abs(a.p - b.p),
                     std::abs(a.P - b.P)});
}

// Closed-form solutions of the recurrence for constant forces, used as the
// independent oracle for run_discrete. Derivation: substitute the ansatz
// (affine momenta, quadratic coordinates in n) into the four update rules.
//
// Case A, V' = 0 and Vtau' = b:
//   p_n = p0, P_n = P0 - (l b / 2) n,
//   tau_n = tau0 + l P0 n - (l^2 b / 4) n^2,  x_n = x0 + p0 (tau_n - tau0).
DiscreteState oracle_case_a(int n, double x0, double tau0, double p0, double P0, double l,
                            double b) {
    const double nn = static_cast<double>(n);
    DiscreteState s;
    s.n = n;
    s.p = p0;
    s.P = P0 - 0.5 * l * b * nn;
    s.tau = tau0 + l * P0 * nn - 0.25 * l * l * b * nn * nn;
    s.x = x0 + p0 * (s.tau - tau0);
    return s;
}

// Case B, V' = a and Vtau' = 0:
//   P_n = P0, tau_n = tau0 + l P0 n,
//   p_n = p0 - l P0 a n,  x_n = x0 + l P0 p0 n - (l^2 P0^2 a / 2) n^2.
DiscreteState oracle_case_b(int n, double x0, double tau0, double p0, double P0, double l,
                            double a) {
    const double nn = static_cast<double>(n);
    DiscreteState s;
    s.n = n;
    s.P = P0;
    s.tau = tau0 + l * P0 * nn;
    s.p = p0 - l * P0 * a * nn;
    s.x = x0 + l * P0 * p0 * nn - 0.5 * l * l * P0 * P0 * a * nn * nn;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("discrete-engine");

TEST_CASE("step_forward reproduces the free case") {
    const DiscreteState prev{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState curr{1, 0.1, 0.1, 1.0, 1.0};
    const DiscreteState next = step_forward(prev, curr, kZero, kZero, 0.1);
    CHECK(next.n == 2);
    CHECK(next.x == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(next.tau == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(next.p == 1.0);
    CHECK(next.P == 1.0);
}

TEST_CASE("step_forward keeps a static state static") {
    const DiscreteState prev{0, 0.0, 0.0, 0.0, 0.0};
    const DiscreteState curr{1, 0.0, 0.0, 0.0, 0.0};
    const DiscreteState next = step_forward(prev, curr, kZero, kZero, 0.1);
    CHECK(next.n == 2);
    CHECK(next.x == 0.0);
    CHECK(next.tau == 0.0);
    CHECK(next.p == 0.0);
    CHECK(next.P == 0.0);
}

TEST_CASE("linear V gives p_{n+1} = p_{n-1} - 2 l P_n c1 exactly") {
    const auto v = PotentialSpec::linear(1.7);
    const DiscreteState prev{0, 0.4, -0.2, 0.9, 1.3};
    const DiscreteState curr{1, 0.6, 0.1, 0.8, 1.1};
    const double l = 0.07;
    const DiscreteState next = step_forward(prev, curr, v, kZero, l);
    CHECK(next.p == prev.p - 2.0 * l * curr.P * 1.7);
}

TEST_CASE("step_forward rejects non-consecutive indices") {
    const DiscreteState a{0, 0, 0, 0, 0};
    const DiscreteState b{2, 0, 0, 0, 0};
    CHECK_THROWS_AS(step_forward(a, b, kZero, kZero, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(step_backward(b, a, kZero, kZero, 0.1), std::invalid_argument);
}

TEST_CASE("step_backward inverts step_forward") {
    const auto v = PotentialSpec::harmonic(0.8, 0.1);
    const auto vtau = PotentialSpec::harmonic(1.4);
    SampleStream rng(17);
    for (int i = 0; i < 50; ++i) {
        const DiscreteState prev{0, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                 rng.uniform(-1, 1)};
        const DiscreteState curr{1, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                 rng.uniform(-1, 1)};
        const DiscreteState next = step_forward(prev, curr, v, vtau, 0.05);
        const DiscreteState back = step_backward(next, curr, v, vtau, 0.05);
        CHECK(state_distance(back, prev) < 1e-12);
        CHECK(back.n == 0);
    }
}

TEST_CASE("step_backward reverses the free example") {
    const DiscreteState next{2, 0.2, 0.2, 1.0, 1.0};
    const DiscreteState curr{1, 0.1, 0.1, 1.0, 1.0};
    const DiscreteState prev = step_backward(next, curr, kZero, kZero, 0.1);
    CHECK(prev.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(prev.tau == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(prev.p == 1.0);
    CHECK(prev.P == 1.0);
}

TEST_CASE("run_discrete with N = 0 returns the seeds") {
    const DiscreteState s0{0, 0.3, 0.1, 0.5, 0.7};
    const DiscreteState s1{1, 0.4, 0.2, 0.5, 0.7};
    const auto traj = run_discrete(s0, s1, 0, kZero, kZero, 0.1);
    REQUIRE(traj.states.size() == 2);
    CHECK(state_distance(traj.states[0], s0) == 0.0);
    CHECK(state_distance(traj.states[1], s1) == 0.0);
}

TEST_CASE("free run follows x_n = tau_n = 0.1 n with unit momenta") {
    const DiscreteState s0{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState s1{1, 0.1, 0.1, 1.0, 1.0};
    const auto traj = run_discrete(s0, s1, 10, kZero, kZero, 0.1);
    REQUIRE(traj.states.size() == 12);
    for (const auto& s : traj.states) {
        CHECK(std::abs(s.x - 0.1 * s.n) < 1e-14);
        CHECK(std::abs(s.tau - 0.1 * s.n) < 1e-14);
        CHECK(s.p == 1.0);
        CHECK(s.P == 1.0);
    }
}

TEST_CASE("harmonic internal time stays bounded and tracks taubar sin(wt)") {
    // omega = 1, taubar = 1: the continuum limit is tau(t) = sin t.
    const auto vtau = PotentialSpec::harmonic(1.0);
    const double l = 1e-2;
    const DiscreteState s0{0, 0.0, 0.0, 0.0, 1.0};
    const DiscreteState s1 = bootstrap_state1(s0, kZero, vtau, l);
    const int period_steps = static_cast<int>(std::llround(2.0 * std::numbers::pi / l));
    const auto traj = run_discrete(s0, s1, period_steps, kZero, vtau, l);
    double worst = 0.0;
    double amplitude = 0.0;
    for (const auto& s : traj.states) {
        amplitude = std::max(amplitude, std::abs(s.tau));
        worst = std::max(worst, std::abs(s.tau - std::sin(l * s.n)));
    }
    CHECK(amplitude <= 1.0 + 5.0 * l * l);
    CHECK(worst < 10.0 * l * l);
}

TEST_CASE("run_discrete signals instability through non-finite states") {
    const auto stiff = PotentialSpec::harmonic(1e8);
    const DiscreteState s0{0, 1.0, 0.0, 0.0, 1.0};
    const DiscreteState s1{1, 1.0, 0.1, 0.0, 1.0};
    CHECK_THROWS_AS(run_discrete(s0, s1, 100000, stiff, kZero, 0.1), numerical_error);
}

TEST_CASE("bootstrap_state1 free case is the exact continuum step") {
    const DiscreteState s0{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState s1 = bootstrap_state1(s0, kZero, kZero, 0.1);
    CHECK(s1.n == 1);
    CHECK(std::abs(s1.x - 0.1) < 1e-14);
    CHECK(std::abs(s1.tau - 0.1) < 1e-14);
    CHECK(s1.p == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s1.P == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bootstrap_state1 of a force-free rest state is the same state") {
    const DiscreteState s0{0, 0.7, -0.3, 0.0, 0.0};
    const DiscreteState s1 = bootstrap_state1(s0, kZero, kZero, 0.1);
    CHECK(s1.n == 1);
    CHECK(s1.x == s0.x);
    CHECK(s1.tau == s0.tau);
    CHECK(s1.p == 0.0);
    CHECK(s1.P == 0.0);
}

TEST_CASE("bootstrap_state1 matches taubar sin(w l) to O(l^5)") {
    const double omega = 1.0;
    const double taubar = 1.0;
    const auto vtau = PotentialSpec::harmonic(omega * omega);
    for (const double l : {0.1, 0.05, 0.025}) {
        const DiscreteState s0{0, 0.0, 0.0, 0.0, taubar * omega};
        const DiscreteState s1 = bootstrap_state1(s0, kZero, vtau, l);
        CHECK(std::abs(s1.tau - taubar * std::sin(omega * l)) < std::pow(l, 5));
    }
}

TEST_CASE("discrete action on simple trajectories") {
    // Static trajectory with zero potentials: every term vanishes.
    DiscreteTrajectory traj;
    traj.params.l = 0.1;
    traj.V = kZero;
    traj.Vtau = kZero;
    traj.states = {{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {2, 0, 0, 0, 0}};
    CHECK(discrete_action(traj) == 0.0);

    // Free two-step run: per step (p+p) dx + (P+P) dtau - H = 0.2+0.2-0.2.
    const DiscreteState s0{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState s1{1, 0.1, 0.1, 1.0, 1.0};
    const auto free_traj = run_discrete(s0, s1, 1, kZero, kZero, 0.1);
    CHECK(discrete_action(free_traj) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("bilinear action terms double when all momenta double") {
    const DiscreteState s0{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState s1{1, 0.1, 0.1, 1.0, 1.0};
    auto traj = run_discrete(s0, s1, 4, kZero, kZero, 0.1);

    auto bilinear_part = [](const DiscreteTrajectory& t) {
        // A + sum H_n isolates (p_n + p_{n-1}) dx_n + (P_n + P_{n-1}) dtau_n.
        double h = 0.0;
        for (std::size_t n = 1; n < t.states.size(); ++n) {
            h += hamiltonian_H_n(t.states[n], t.states[n - 1], t.V, t.Vtau, t.params.l);
        }
        return discrete_action(t) + h;
    };

    const double base = bilinear_part(traj);
    for (auto& s : traj.states) {
        s.p *= 2.0;
        s.P *= 2.0;
    }
    CHECK(bilinear_part(traj) == doctest::Approx(2.0 * base).epsilon(1e-13));
}

TEST_CASE("action is stationary on solutions and not on perturbations") {
    const auto v = PotentialSpec::harmonic(0.5);
    const auto vtau = PotentialSpec::harmonic(1.0);
    const DiscreteState s0{0, 0.4, 0.0, 0.3, 1.0};
    const DiscreteState s1 = bootstrap_state1(s0, v, vtau, 1e-2);
    auto traj = run_discrete(s0, s1, 30, v, vtau, 1e-2);
    CHECK(action_stationarity_check(traj, 1e-5) < 1e-10);

    SampleStream rng(5);
    auto perturbed = traj;
    for (auto& s : perturbed.states) s.x += rng.uniform(-0.05, 0.05);
    CHECK(action_stationarity_check(perturbed, 1e-5) > 1e-3);
}

TEST_CASE("static trajectory has exactly zero action gradient") {
    DiscreteTrajectory traj;
    traj.params.l = 0.1;
    traj.V = kZero;
    traj.Vtau = kZero;
    for (int n = 0; n < 5; ++n) traj.states.push_back({n, 0, 0, 0, 0});
    CHECK(action_stationarity_check(traj, 1e-5) == 0.0);
}

TEST_CASE("forward-backward round trip over a long harmonic run") {
    const auto vtau = PotentialSpec::harmonic(1.0);
    const DiscreteState s0{0, 0.0, 0.0, 1.0, 1.0};
    const DiscreteState s1 = bootstrap_state1(s0, kZero, vtau, 1e-2);
    const int steps = 1000;
    const auto traj = run_discrete(s0, s1, steps, kZero, vtau, 1e-2);

    DiscreteState next = traj.states.back();
    DiscreteState curr = traj.states[traj.states.size() - 2];
    for (int k = 0; k < steps; ++k) {
        const DiscreteState prev = step_backward(next, curr, kZero, vtau, 1e-2);
        next = curr;
        curr = prev;
    }
    CHECK(state_distance(curr, s0) < 1e-10);
    CHECK(state_distance(next, s1) < 1e-10);
}

TEST_CASE("constant-force runs stay on the closed-form recurrence solutions") {
    const double l = 1e-3;
    const int N = 1000;

    SUBCASE("V free, Vtau linear") {
        const double b = 1.3;
        const auto vtau = PotentialSpec::linear(b);
        const DiscreteState s0 = oracle_case_a(0, 0.2, -0.1, 0.8, 1.1, l, b);
        const DiscreteState s1 = oracle_case_a(1, 0.2, -0.1, 0.8, 1.1, l, b);
        const auto traj = run_discrete(s0, s1, N - 1, kZero, vtau, l);
        double worst = 0.0;
        for (const auto& s : traj.states) {
            worst = std::max(worst,
                             state_distance(s, oracle_case_a(s.n, 0.2, -0.1, 0.8, 1.1, l, b)));
        }
        CHECK(worst < 1e-12);
    }

    SUBCASE("V linear, Vtau free") {
        const double a = 0.8;
        const auto v = PotentialSpec::linear(a);
        const DiscreteState s0 = oracle_case_b(0, -0.4, 0.3, 0.9, 1.2, l, a);
        const DiscreteState s1 = oracle_case_b(1, -0.4, 0.3, 0.9, 1.2, l, a);
        const auto traj = run_discrete(s0, s1, N - 1, v, kZero, l);
        double worst = 0.0;
        for (const auto& s : traj.states) {
            worst = std::max(worst,
                             state_distance(s, oracle_case_b(s.n, -0.4, 0.3, 0.9, 1.2, l, a)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("discrete Poisson bracket on canonical pairs") {
    const std::vector<DiscreteState> pts = {{0, 0.3, -0.2, 0.9, 0.4}, {1, -1.1, 0.5, 0.2, 0.7}};
    const ScalarFn x1 = [](std::span<const double> q) { return q[ix_x(1)]; };
    const ScalarFn p1 = [](std::span<const double> q) { return q[ix_p(1)]; };
    const ScalarFn tau1 = [](std::span<const double> q) { return q[ix_tau(1)]; };

    CHECK(std::abs(discrete_poisson_bracket(x1, p1, pts, 1e-4) - 1.0) < 1e-10);
    CHECK(std::abs(discrete_poisson_bracket(x1, tau1, pts, 1e-4)) < 1e-10);
}

TEST_CASE("shared bracket kernel: {C, H} = 0 for the q-bit system") {
    // Oscillator-representation coordinates as one canonical pair per level:
    // flat point (X1, P1, X2, P2).
    const CanonicalLayout layout{{{0, 1}, {2, 3}}};
    const double E0 = 1.7;
    const ScalarFn constraint = [](std::span<const double> q) {
        return 0.5 * (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    };
    const ScalarFn hamiltonian = [E0](std::span<const double> q) {
        return 0.5 * E0 * (-(q[0] * q[0] + q[1] * q[1]) + (q[2] * q[2] + q[3] * q[3]));
    };
    const std::vector<double> point{0.6, -0.2, 0.4, 0.9};
    CHECK(std::abs(canonical_bracket(constraint, hamiltonian, point, layout, 1e-4)) < 1e-10);
}

TEST_CASE("bracket antisymmetry is exact and Jacobi residual is small") {
    const std::vector<DiscreteState> pts = {{0, 0.31, -0.24, 0.95, 0.41}};
    const ScalarFn f = [](std::span<const double> q) {
        return q[0] * q[0] * q[2] + q[1] * q[3];
    };
    const ScalarFn g = [](std::span<const double> q) {
        return q[2] * q[3] * q[3] + 0.5 * q[0];
    };
    const ScalarFn k = [](std::span<const double> q) {
        return q[0] * q[1] * q[2] + q[3] * q[3] * q[3];
    };

    const double fg = discrete_poisson_bracket(f, g, pts, 1e-4);
    const double gf = discrete_poisson_bracket(g, f, pts, 1e-4);
    CHECK(fg + gf == 0.0);  // bitwise antisymmetry

    auto nested = [&](const ScalarFn& a, const ScalarFn& b) -> ScalarFn {
        return [a, b](std::span<const double> q) {
            const CanonicalLayout layout{{{0, 2}, {1, 3}}};
            return canonical_bracket(a, b, q, layout, 1e-4);
        };
    };
    const auto flat = flatten(pts);
    const CanonicalLayout layout{{{0, 2}, {1, 3}}};
    const double jacobi = canonical_bracket(f, nested(g, k), flat, layout, 1e-4) +
                          canonical_bracket(g, nested(k, f), flat, layout, 1e-4) +
                          canonical_bracket(k, nested(f, g), flat, layout, 1e-4);
    CHECK(std::abs(jacobi) < 1e-5);
}

TEST_SUITE_END();
