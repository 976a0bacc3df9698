#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tausim/errors.hpp"
#include "tausim/oracles.hpp"
#include "tausim/rng.hpp"

using namespace tausim;
using std::numbers::pi;

namespace {

ModelParams reference_params(double lambda) {
    ModelParams pm;
    pm.omega = 1.0;
    pm.Omega = 5.0;
    pm.E0 = 1.0;
    pm.lambda = lambda;
    pm.x1 = 1.0;
    pm.phi = 0.0;
    return pm;
}

HybridState reference_state() {
    HybridState s;
    s.x = 1.0;
    s.X1 = 1.0;
    s.P2 = 1.0;
    return s;
}

std::vector<HybridState> reference_run(double lambda, double horizon, double dt) {
    const HybridModel model{reference_params(lambda), ObservableMatrix::sigma2_half()};
    return integrate_hybrid(reference_state(), model, dt, std::lround(horizon / dt));
}

}  // namespace

TEST_SUITE_BEGIN("oracles");

TEST_CASE("Otilde history: bounds and the free-precession closed form") {
    const double dt = 1e-3;
    const auto run = reference_run(0.0, 2.0 * pi, dt);
    const auto hist = otilde_history(run, 1.0);

    REQUIRE(hist.samples.size() == run.size());
    CHECK(hist.samples.front().otilde == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& s : hist.samples) {
        CHECK(std::abs(s.otilde) <= 1.0 + 1e-9);           // Cauchy-Schwarz on C = 1
        CHECK(s.s == std::sin(1.0 * s.t) / 1.0);           // recorded s-grid
        // The initial state is the sigma2 eigenstate; under free precession
        // its sigma2 expectation rotates as cos(2 E0 t).
        CHECK(std::abs(s.otilde - std::cos(2.0 * s.t)) < 1e-8);
    }
}

TEST_CASE("Otilde of a stationary state is constant") {
    // sigma3 eigenstate (an energy eigenstate): every expectation is static.
    HybridState s;
    s.x = 1.0;
    s.X1 = std::sqrt(2.0);
    const HybridModel model{reference_params(0.0), ObservableMatrix::sigma2_half()};
    const auto run = integrate_hybrid(s, model, 1e-3, 4000);
    const auto hist = otilde_history(run, 1.0);
    for (const auto& smp : hist.samples) CHECK(std::abs(smp.otilde) < 1e-12);
}

TEST_CASE("Otilde of zeroed q-bit coordinates is identically zero") {
    std::vector<HybridState> run(10);
    for (std::size_t k = 0; k < run.size(); ++k) {
        run[k].t = 0.1 * static_cast<double>(k);
        run[k].x = 1.0;
    }
    const auto hist = otilde_history(run, 1.0);
    for (const auto& s : hist.samples) CHECK(s.otilde == 0.0);
}

TEST_CASE("green_x at lambda = 0 is the homogeneous oscillator") {
    const double dt = 1e-4;
    const auto run = reference_run(0.0, pi, dt);
    const auto pm = reference_params(0.0);
    const auto hist = otilde_history(run, pm.omega);

    double worst_hom = 0.0;
    double worst_run = 0.0;
    for (std::size_t k = 0; k < run.size(); k += 500) {
        const double t = run[k].t;
        const double tau = std::sin(t);
        const double x = green_x(t, pm, hist);
        worst_hom = std::max(worst_hom, std::abs(x - std::cos(5.0 * tau)));
        worst_run = std::max(worst_run, std::abs(x - run[k].x));
    }
    CHECK(worst_hom < 1e-12);  // lambda multiplies the whole integral
    CHECK(worst_run < 1e-6);
}

TEST_CASE("green_x self-consistency at lambda = 0.1 with 4x refinement") {
    const double dt = 1e-4;
    const auto run = reference_run(0.1, 2.0 * pi, dt);
    const auto pm = reference_params(0.1);

    double amplitude = 0.0;
    for (const auto& s : run) amplitude = std::max(amplitude, std::abs(s.x));

    auto self_error = [&](int stride) {
        const auto hist = otilde_history(run, pm.omega, stride);
        double worst = 0.0;
        for (std::size_t k = 0; k < hist.samples.size(); k += 37) {
            const double t = hist.samples[k].t;
            const double got = green_x(t, pm, hist);
            const double want = run[k * static_cast<std::size_t>(stride)].x;
            worst = std::max(worst, std::abs(got - want));
        }
        return worst / amplitude;
    };

    const double coarse = self_error(16);
    const double fine = self_error(8);
    CHECK(coarse < 1e-4);
    CHECK(fine < 1e-4);
    CHECK(coarse / fine > 3.0);
    CHECK(coarse / fine < 5.0);
}

TEST_CASE("green_p equals the tau-derivative of green_x away from turning points") {
    const double dt = 1e-4;
    const auto run = reference_run(0.1, 2.0 * pi, dt);
    const auto pm = reference_params(0.1);
    const auto hist = otilde_history(run, pm.omega);

    double worst = 0.0;
    for (std::size_t k = 200; k + 200 < hist.samples.size(); k += 211) {
        const double t = hist.samples[k].t;
        if (std::abs(std::cos(pm.omega * t)) < 0.05) continue;  // tau stalls here
        const double ds = hist.samples[k + 1].s - hist.samples[k - 1].s;
        const double dx = green_x(hist.samples[k + 1].t, pm, hist) -
                          green_x(hist.samples[k - 1].t, pm, hist);
        worst = std::max(worst, std::abs(dx / ds - green_p(t, pm, hist)));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("green reconstruction matches the integrated momentum as well") {
    const double dt = 1e-4;
    const auto run = reference_run(0.1, 2.0 * pi, dt);
    const auto pm = reference_params(0.1);
    const auto hist = otilde_history(run, pm.omega, 8);

    double amplitude = 0.0;
    for (const auto& s : run) amplitude = std::max(amplitude, std::abs(s.p));
    double worst = 0.0;
    for (std::size_t k = 0; k < hist.samples.size(); k += 37) {
        const double got = green_p(hist.samples[k].t, pm, hist);
        const double want = run[k * 8].p;
        worst = std::max(worst, std::abs(got - want) / amplitude);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("green guards against missing history coverage") {
    const auto run = reference_run(0.0, 0.5, 1e-3);
    const auto pm = reference_params(0.0);
    const auto hist = otilde_history(run, pm.omega);
    CHECK_THROWS_AS(green_x(1.0, pm, hist), numerical_error);
    CHECK_THROWS_AS(green_p(-0.5, pm, hist), numerical_error);
}

TEST_CASE("homogeneous-constant fit reproduces the initial conditions") {
    SampleStream rng(31);
    for (int i = 0; i < 20; ++i) {
        const double x0 = rng.uniform(-2.0, 2.0);
        const double p0 = rng.uniform(-2.0, 2.0);
        const double W = rng.uniform(0.5, 8.0);
        const auto [x1, phi] = fit_homogeneous(x0, p0, W);
        CHECK(x1 * std::cos(phi) == doctest::Approx(x0).epsilon(1e-12));
        CHECK(-x1 * W * std::sin(phi) == doctest::Approx(p0).epsilon(1e-12).scale(W));
    }
    // Reference scenario: x(0) = 1, p(0) = 0 -> x1 = 1, phi = 0.
    const auto [x1, phi] = fit_homogeneous(1.0, 0.0, 5.0);
    CHECK(x1 == 1.0);
    CHECK(phi == 0.0);
}

TEST_CASE("effective field B(t)") {
    const auto pm = reference_params(0.1);
    CHECK(effective_B(0.0, pm) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(std::abs(effective_B(pi / 2.0, pm)) < 1e-15);
    const double expected = 0.1 * std::cos(0.3) * std::cos(5.0 * std::sin(0.3));
    CHECK(effective_B(0.3, pm) == doctest::Approx(expected).epsilon(1e-15));

    for (const double t : {0.2, 0.9, 2.4}) {
        CHECK(effective_B(t, pm) == effective_B(-t, pm));
    }
}

TEST_CASE("eigenvalue shift: expansion vs exact diagonalization") {
    const auto flat = eigenvalue_shift(1.0, 0.0);
    CHECK(flat.expanded_plus == 1.0);
    CHECK(flat.exact_plus == 1.0);
    CHECK(flat.expanded_minus == -1.0);
    CHECK(flat.exact_minus == -1.0);

    const auto b02 = eigenvalue_shift(1.0, 0.2);
    CHECK(b02.expanded_plus == doctest::Approx(1.02).epsilon(1e-15));
    CHECK(b02.expanded_minus == doctest::Approx(-1.02).epsilon(1e-15));
    CHECK(b02.exact_plus == doctest::Approx(std::sqrt(1.04)).epsilon(1e-14));
    CHECK(b02.exact_plus == doctest::Approx(1.019803902718557).epsilon(1e-12));

    // Taylor remainder bound over the whole range.
    for (const double b : {0.05, 0.1, 0.2, 0.3}) {
        const auto s = eigenvalue_shift(1.0, b);
        CHECK(std::abs(s.expanded_plus - s.exact_plus) <= 1.5 * b * b * b * b / 8.0);
    }

    // Fourth-order convergence of the gap over the doubling triple.
    double prev_diff = 0.0;
    for (const double b : {0.05, 0.1, 0.2}) {
        const auto s = eigenvalue_shift(1.0, b);
        const double diff = std::abs(s.expanded_plus - s.exact_plus);
        if (prev_diff > 0.0) {
            const double slope = std::log2(diff / prev_diff);
            CHECK(slope > 3.8);
            CHECK(slope < 4.2);
        }
        prev_diff = diff;
    }

    CHECK_THROWS_AS(eigenvalue_shift(0.0, 0.1), std::invalid_argument);
}

TEST_SUITE_END();
