#include "tausim/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tausim/discrete.hpp"
#include "tausim/errors.hpp"
#include "tausim/rk4.hpp"

namespace tausim {

namespace {

struct TauP {
    double tau;
    double P;
};

// Exact solution of tau' = P, P' = -Vtau'(tau)/2 for the closed family.
TauP closed_form_tau(const PotentialSpec& Vtau, double tau0, double P0, double t) {
    switch (Vtau.kind) {
        case PotentialKind::zero:
        case PotentialKind::constant:
            return {tau0 + P0 * t, P0};
        case PotentialKind::linear:
            // P' = -c1/2
            return {tau0 + P0 * t - 0.25 * Vtau.c1 * t * t, P0 - 0.5 * Vtau.c1 * t};
        case PotentialKind::harmonic: {
            // tau'' = -c2 (tau - tau_eq), angular frequency sqrt(c2)
            const double w = std::sqrt(Vtau.c2);
            const double tau_eq = -0.5 * Vtau.c1 / Vtau.c2;
            const double a = tau0 - tau_eq;
            const double c = std::cos(w * t);
            const double s = std::sin(w * t);
            return {tau_eq + a * c + (P0 / w) * s, -a * w * s + P0 * c};
        }
    }
    return {tau0, P0};
}

}  // namespace

LapseSolution::LapseSolution(std::vector<LapseSample> samples, double dt)
    : samples_(std::move(samples)), dt_(dt) {
    if (samples_.empty()) throw std::invalid_argument("LapseSolution: no samples");
}

LapseSolution::LapseSolution(std::vector<LapseSample> samples, double dt, ClosedForm cf)
    : samples_(std::move(samples)), dt_(dt), closed_form_(cf) {
    if (samples_.empty()) throw std::invalid_argument("LapseSolution: no samples");
}

void LapseSolution::check_span(double t) const {
    const double slack = 1e-9 * std::max(1.0, std::abs(t_end()));
    if (t < t_begin() - slack || t > t_end() + slack) {
        throw numerical_error("lapse does not cover requested time", t);
    }
}

double LapseSolution::tau_at(double t) const {
    check_span(t);
    if (closed_form_) {
        return closed_form_tau(closed_form_->Vtau, closed_form_->tau0, closed_form_->P0, t).tau;
    }
    const double u = (t - t_begin()) / dt_;
    const auto k = static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(samples_.size() - 1)));
    if (k + 1 >= samples_.size()) return samples_.back().tau;
    const double w = u - static_cast<double>(k);
    return (1.0 - w) * samples_[k].tau + w * samples_[k + 1].tau;
}

double LapseSolution::rate_at(double t) const {
    check_span(t);
    if (closed_form_) {
        return closed_form_tau(closed_form_->Vtau, closed_form_->tau0, closed_form_->P0, t).P;
    }
    const double u = (t - t_begin()) / dt_;
    const auto k = static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(samples_.size() - 1)));
    if (k + 1 >= samples_.size()) return samples_.back().rate;
    const double w = u - static_cast<double>(k);
    return (1.0 - w) * samples_[k].rate + w * samples_[k + 1].rate;
}

LapseSolution integrate_internal_time(double tau0, double P0, const PotentialSpec& Vtau,
                                      double dt, int steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_internal_time: dt must be > 0");
    if (steps < 0) throw std::invalid_argument("integrate_internal_time: steps must be >= 0");

    auto rhs = [&](double, const std::array<double, 2>& y) -> std::array<double, 2> {
        return {y[1], -0.5 * eval_potential_gradient(Vtau, y[0])};
    };

    std::vector<LapseSample> samples;
    samples.reserve(static_cast<std::size_t>(steps) + 1);
    std::array<double, 2> y{tau0, P0};
    samples.push_back({0.0, y[0], y[1], y[1]});
    for (int k = 1; k <= steps; ++k) {
        y = rk4_step(rhs, (k - 1) * dt, y, dt);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw numerical_error("integrate_internal_time: non-finite state", k * dt);
        }
        samples.push_back({k * dt, y[0], y[1], y[1]});
    }
    return LapseSolution(std::move(samples), dt);
}

LapseSolution closed_form_lapse(double tau0, double P0, const PotentialSpec& Vtau,
                                double dt, int steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("closed_form_lapse: dt must be > 0");
    if (steps < 0) throw std::invalid_argument("closed_form_lapse: steps must be >= 0");

    std::vector<LapseSample> samples;
    samples.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const TauP v = closed_form_tau(Vtau, tau0, P0, k * dt);
        samples.push_back({k * dt, v.tau, v.P, v.P});
    }
    return LapseSolution(std::move(samples), dt, LapseSolution::ClosedForm{Vtau, tau0, P0});
}

std::vector<XPSample> integrate_xp_with_lapse(double x0, double p0, const PotentialSpec& V,
                                              const LapseSolution& lapse, int steps) {
    const std::size_t span = lapse.size() - 1;
    const std::size_t n = steps < 0 ? span : static_cast<std::size_t>(steps);
    if (n > span) {
        throw numerical_error("integrate_xp_with_lapse: lapse span exhausted",
                              lapse.t_begin() + static_cast<double>(n) * lapse.dt());
    }

    auto rhs = [&](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
        const double rate = lapse.rate_at(t);
        return {rate * y[1], -rate * eval_potential_gradient(V, y[0])};
    };

    std::vector<XPSample> out;
    out.reserve(n + 1);
    std::array<double, 2> y{x0, p0};
    const double t0 = lapse.t_begin();
    const double dt = lapse.dt();
    out.push_back({t0, y[0], y[1]});
    for (std::size_t k = 1; k <= n; ++k) {
        y = rk4_step(rhs, t0 + static_cast<double>(k - 1) * dt, y, dt);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw numerical_error("integrate_xp_with_lapse: non-finite state",
                                  t0 + static_cast<double>(k) * dt);
        }
        out.push_back({t0 + static_cast<double>(k) * dt, y[0], y[1]});
    }
    return out;
}

std::vector<std::pair<double, double>> integrate_internal_frame(double x0, double v0,
                                                                const PotentialSpec& V,
                                                                const LapseSolution& lapse) {
    const auto samples = lapse.samples();

    double tau_min = samples.front().tau;
    double tau_max = samples.front().tau;
    for (const auto& s : samples) {
        tau_min = std::min(tau_min, s.tau);
        tau_max = std::max(tau_max, s.tau);
    }
    const double tau0 = samples.front().tau;

    std::vector<std::pair<double, double>> out;
    out.reserve(samples.size());

    if (tau_max - tau_min < 1e-300) {
        // Frozen internal time: x never moves.
        for (const auto& s : samples) out.emplace_back(s.t, x0);
        return out;
    }

    auto rhs = [&](double, const std::array<double, 2>& y) -> std::array<double, 2> {
        return {y[1], -eval_potential_gradient(V, y[0])};
    };

    // Integrate the tau-parametrized curve once across [tau_min, tau_max],
    // carrying (x, dx/dtau) nodes for cubic Hermite evaluation.
    struct Node {
        double tau, x, v;
    };
    const std::size_t target = std::max<std::size_t>(4 * samples.size(), 1024);
    const double dtau = (tau_max - tau_min) / static_cast<double>(target);

    std::vector<Node> nodes;
    nodes.reserve(target + 4);
    {
        std::vector<Node> down;
        std::array<double, 2> y{x0, v0};
        down.push_back({tau0, y[0], y[1]});
        for (double tau = tau0; tau > tau_min + 0.5 * dtau;) {
            const double h = std::min(dtau, tau - tau_min);
            y = rk4_step(rhs, tau, y, -h);
            tau -= h;
            down.push_back({tau, y[0], y[1]});
        }
        nodes.assign(down.rbegin(), down.rend());

        y = {x0, v0};
        for (double tau = tau0; tau < tau_max - 0.5 * dtau;) {
            const double h = std::min(dtau, tau_max - tau);
            y = rk4_step(rhs, tau, y, h);
            tau += h;
            nodes.push_back({tau, y[0], y[1]});
        }
    }

    auto eval = [&](double tau) -> double {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), tau,
                                   [](const Node& n, double v) { return n.tau < v; });
        if (it == nodes.begin()) return nodes.front().x;
        if (it == nodes.end()) return nodes.back().x;
        const Node& b = *it;
        const Node& a = *(it - 1);
        const double hseg = b.tau - a.tau;
        if (hseg <= 0.0) return a.x;
        const double s = (tau - a.tau) / hseg;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * a.x + (s3 - 2 * s2 + s) * hseg * a.v +
               (-2 * s3 + 3 * s2) * b.x + (s3 - s2) * hseg * b.v;
    };

    for (const auto& s : samples) out.emplace_back(s.t, eval(s.tau));
    return out;
}

double effective_hamiltonian_value(double x, double p, double t, const PotentialSpec& V,
                                   const LapseSolution& lapse) {
    return lapse.rate_at(t) * (0.5 * p * p + eval_potential(V, x));
}

ConvergenceResult convergence_study(const ConvergenceScenario& scenario,
                                    std::span<const double> resolutions) {
    if (resolutions.size() < 3) {
        throw std::invalid_argument("convergence_study: need at least three resolutions");
    }
    for (std::size_t i = 0; i + 1 < resolutions.size(); ++i) {
        if (std::abs(resolutions[i + 1] - 0.5 * resolutions[i]) > 1e-12 * resolutions[i]) {
            throw std::invalid_argument("convergence_study: resolutions must halve");
        }
    }
    for (double l : resolutions) {
        if (!(l > 0.0)) throw std::invalid_argument("convergence_study: resolutions must be > 0");
        const double ratio = scenario.t_final / l;
        if (std::abs(ratio - std::round(ratio)) > 1e-9) {
            throw std::invalid_argument("convergence_study: t_final must be a multiple of every l");
        }
    }

    // Reference: the joint continuum system at a step far below the finest l,
    // so reference error is negligible against the O(l^2) discrete error.
    auto rhs = [&](double, const std::array<double, 4>& y) -> std::array<double, 4> {
        return {y[3] * y[2], y[3], -y[3] * eval_potential_gradient(scenario.V, y[0]),
                -0.5 * eval_potential_gradient(scenario.Vtau, y[1])};
    };
    std::array<double, 4> ref{scenario.x0, scenario.tau0, scenario.p0, scenario.P0};
    {
        const double dt_ref = resolutions.back() / 32.0;
        const auto steps = static_cast<long>(std::llround(scenario.t_final / dt_ref));
        for (long k = 0; k < steps; ++k) {
            ref = rk4_step(rhs, static_cast<double>(k) * dt_ref, ref, dt_ref);
        }
    }

    ConvergenceResult result;
    result.resolutions.assign(resolutions.begin(), resolutions.end());
    for (double l : resolutions) {
        const DiscreteState s0{0, scenario.x0, scenario.tau0, scenario.p0, scenario.P0};
        const DiscreteState s1 = bootstrap_state1(s0, scenario.V, scenario.Vtau, l);
        const auto final_index = static_cast<long>(std::llround(scenario.t_final / l));
        const auto traj = run_discrete(s0, s1, static_cast<int>(final_index - 1), scenario.V,
                                       scenario.Vtau, l);
        const DiscreteState& got = traj.states[static_cast<std::size_t>(final_index)];
        const double err = std::max({std::abs(got.x - ref[0]), std::abs(got.tau - ref[1]),
                                     std::abs(got.p - ref[2]), std::abs(got.P - ref[3])});
        result.errors.push_back(err);
    }

    result.exact = std::all_of(result.errors.begin(), result.errors.end(),
                               [](double e) { return e < 1e-12; });
    if (result.exact) {
        return result;
    }

    for (std::size_t i = 0; i + 1 < result.errors.size(); ++i) {
        if (result.errors[i + 1] >= result.errors[i]) {
            throw numerical_error("convergence_study: non-monotone error (instability)",
                                  result.resolutions[i + 1]);
        }
        result.orders.push_back(std::log2(result.errors[i] / result.errors[i + 1]));
    }
    double sum = 0.0;
    for (double o : result.orders) sum += o;
    result.observed_order = sum / static_cast<double>(result.orders.size());
    return result;
}

}  // namespace tausim
