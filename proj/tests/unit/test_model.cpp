#include <doctest.h>

#include <cmath>
#include <complex>

#include "tausim/discrete.hpp"
#include "tausim/model.hpp"
#include "tausim/potential.hpp"
#include "tausim/rng.hpp"

using namespace tausim;

TEST_SUITE_BEGIN("core-model");

TEST_CASE("potential evaluation and exact gradients") {
    const auto harm = PotentialSpec::harmonic(4.0);  // Omega^2 = 4
    CHECK(eval_potential(harm, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(eval_potential_gradient(harm, 1.0) == doctest::Approx(8.0).epsilon(1e-15));

    const auto zero = PotentialSpec::zero();
    CHECK(eval_potential(zero, 7.3) == 0.0);
    CHECK(eval_potential_gradient(zero, 7.3) == 0.0);

    const auto lin = PotentialSpec::linear(2.0);
    CHECK(eval_potential(lin, 3.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(eval_potential_gradient(lin, 3.0) == 2.0);
}

TEST_CASE("harmonic potential rejects non-positive quadratic coefficient") {
    CHECK_THROWS_AS(PotentialSpec::harmonic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec::harmonic(-1.0), std::invalid_argument);
}

TEST_CASE("gradient matches central differences on random points") {
    SampleStream rng(321);
    const PotentialSpec specs[] = {PotentialSpec::zero(), PotentialSpec::constant(1.2),
                                   PotentialSpec::linear(-0.7, 2.0),
                                   PotentialSpec::harmonic(3.1, 0.5, -2.0)};
    for (const auto& spec : specs) {
        for (int i = 0; i < 64; ++i) {
            const double q = rng.uniform(-10.0, 10.0);
            for (const double h : {1e-4, 1e-5}) {
                const double fd =
                    (eval_potential(spec, q + h) - eval_potential(spec, q - h)) / (2.0 * h);
                CHECK(std::abs(fd - eval_potential_gradient(spec, q)) < 1e-7);
            }
        }
    }
}

TEST_CASE("per-step energy E_n") {
    CHECK(energy_E_n(1.0, 1.0, 0.0, 0.0, PotentialSpec::zero()) == 1.0);
    // E = (4 + 0)/2 + V(1) + V(0) with V = q^2
    CHECK(energy_E_n(2.0, 0.0, 1.0, 0.0, PotentialSpec::harmonic(1.0)) == 3.0);
    CHECK(energy_E_n(0.0, 0.0, 0.0, 0.0, PotentialSpec::zero()) == 0.0);
}

TEST_CASE("kappa K_n") {
    CHECK(kappa_K_n(1.0, 0.0, 0.1, PotentialSpec::zero()) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(kappa_K_n(0.0, 2.0, 0.5, PotentialSpec::harmonic(1.0)) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(kappa_K_n(0.0, 0.0, 0.3, PotentialSpec::harmonic(5.0)) == 0.0);
}

TEST_CASE("kappa is blind to x and p") {
    // K enters H_n additively and reads only (tau, P): subtracting the
    // explicit dtau * E_n part must leave a quantity untouched by any x or p
    // perturbation.
    const auto v = PotentialSpec::harmonic(0.7);
    const auto vtau = PotentialSpec::harmonic(1.3);
    const double l = 0.05;
    DiscreteState prev{3, 0.2, -0.1, 0.8, 1.1};
    DiscreteState curr{4, 0.5, 0.3, -0.4, 0.9};
    auto kappa_via_h = [&](const DiscreteState& c, const DiscreteState& p) {
        return hamiltonian_H_n(c, p, v, vtau, l) -
               (c.tau - p.tau) * energy_E_n(c.p, p.p, c.x, p.x, v);
    };
    const double base = kappa_via_h(curr, prev);
    DiscreteState curr2 = curr;
    curr2.x += 11.0;
    curr2.p -= 7.0;
    DiscreteState prev2 = prev;
    prev2.x *= -3.0;
    prev2.p += 2.5;
    CHECK(kappa_via_h(curr2, prev2) == base);
}

TEST_CASE("per-step Hamiltonian H_n") {
    const auto zero = PotentialSpec::zero();

    // dtau = 0 and K = 0
    DiscreteState prev{0, 0.0, 0.5, 0.0, 0.0};
    DiscreteState curr{1, 1.0, 0.5, 0.0, 0.0};
    CHECK(hamiltonian_H_n(curr, prev, zero, zero, 0.1) == 0.0);

    // dtau = 0.1, E = 1, K = l P^2 = 0.1
    prev = {0, 0.0, 0.0, 1.0, 1.0};
    curr = {1, 0.1, 0.1, 1.0, 1.0};
    CHECK(hamiltonian_H_n(curr, prev, zero, zero, 0.1) ==
          doctest::Approx(0.2).epsilon(1e-15));

    // fully static at the origin
    prev = {0, 0.0, 0.0, 0.0, 0.0};
    curr = {1, 0.0, 0.0, 0.0, 0.0};
    CHECK(hamiltonian_H_n(curr, prev, zero, zero, 0.1) == 0.0);

    CHECK_THROWS_AS(hamiltonian_H_n(prev, curr, zero, zero, 0.1), std::invalid_argument);
}

TEST_CASE("observable matrices are Hermitian by construction") {
    using complex = std::complex<double>;
    const auto s2 = ObservableMatrix::sigma2();
    CHECK(s2(0, 1) == complex{0.0, -1.0});
    CHECK(s2(1, 0) == complex{0.0, 1.0});

    const auto s3 = ObservableMatrix::sigma3();
    CHECK(s3(0, 0) == complex{1.0, 0.0});
    CHECK(s3(1, 1) == complex{-1.0, 0.0});

    const auto half = ObservableMatrix::sigma2_half();
    CHECK(half(0, 1) == complex{0.0, -0.5});
    CHECK(half(1, 0) == std::conj(half(0, 1)));

    CHECK_THROWS_AS(ObservableMatrix(1.0, complex{0.0, 1.0}, complex{0.0, 1.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ObservableMatrix(complex{0.0, 0.5}, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
