#include "tausim/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tausim/discrete.hpp"
#include "tausim/errors.hpp"
#include "tausim/rk4.hpp"
#include "tausim/rng.hpp"

namespace tausim {

namespace {

std::size_t coordinate_count(EngineKind target) {
    return target == EngineKind::hybrid ? 6 : 4;
}

long steps_for(double horizon, double step, const char* what) {
    if (!(step > 0.0)) throw std::invalid_argument(std::string(what) + ": step must be > 0");
    if (horizon < 0.0) throw std::invalid_argument(std::string(what) + ": horizon must be >= 0");
    const auto steps = static_cast<long>(std::llround(horizon / step));
    if (std::abs(static_cast<double>(steps) * step - horizon) > 1e-9 * std::max(1.0, horizon)) {
        throw std::invalid_argument(std::string(what) +
                                    ": horizon must be a multiple of the engine step");
    }
    return steps;
}

std::array<double, 4> continuum_rhs(const EngineConfig& eng, const std::array<double, 4>& y) {
    // y = (x, tau, p, P)
    return {y[3] * y[2], y[3], -y[3] * eval_potential_gradient(eng.V, y[0]),
            -0.5 * eval_potential_gradient(eng.Vtau, y[1])};
}

ContinuumPoint advance_continuum(const EngineConfig& eng, ContinuumPoint pt, long steps) {
    auto rhs = [&](double, const std::array<double, 4>& y) { return continuum_rhs(eng, y); };
    std::array<double, 4> y{pt.x, pt.tau, pt.p, pt.P};
    for (long k = 0; k < steps; ++k) {
        y = rk4_step(rhs, static_cast<double>(k) * eng.params.dt, y, eng.params.dt);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) ||
            !std::isfinite(y[3])) {
            throw numerical_error("continuum flow: non-finite state",
                                  static_cast<double>(k + 1) * eng.params.dt);
        }
    }
    return {y[0], y[1], y[2], y[3]};
}

DiscretePairState advance_discrete(const EngineConfig& eng, DiscretePairState pair, long steps) {
    for (long k = 0; k < steps; ++k) {
        DiscreteState next = step_forward(pair.prev, pair.curr, eng.V, eng.Vtau, eng.params.l);
        if (!std::isfinite(next.x) || !std::isfinite(next.tau) || !std::isfinite(next.p) ||
            !std::isfinite(next.P)) {
            throw numerical_error("discrete flow: non-finite state", next.n);
        }
        pair.prev = pair.curr;
        pair.curr = next;
    }
    return pair;
}

HybridState advance_hybrid(const EngineConfig& eng, const HybridState& s, long steps,
                           double c_tol) {
    const HybridModel model{eng.params, eng.O};
    auto run = integrate_hybrid(s, model, eng.params.dt, steps, c_tol);
    return run.back();
}

}  // namespace

std::vector<EnsembleMember> sample_initial(const DensitySpec& spec, int n, EngineKind target,
                                           const PotentialSpec& V, const PotentialSpec& Vtau,
                                           double l) {
    if (n < 1) throw std::invalid_argument("sample_initial: n must be >= 1");
    const std::size_t dim = coordinate_count(target);
    if (spec.center.size() != dim) {
        throw std::invalid_argument("sample_initial: center must have " + std::to_string(dim) +
                                    " coordinates");
    }
    if (spec.shape != DensityShape::point) {
        if (spec.width.size() != dim) {
            throw std::invalid_argument("sample_initial: width must have " + std::to_string(dim) +
                                        " coordinates");
        }
        for (double w : spec.width) {
            if (!(w > 0.0)) throw std::invalid_argument("sample_initial: widths must be > 0");
        }
    }

    SampleStream rng(spec.seed);
    auto draw = [&](std::size_t i) -> double {
        switch (spec.shape) {
            case DensityShape::point:
                return spec.center[i];
            case DensityShape::gaussian:
                return rng.normal(spec.center[i], spec.width[i]);
            case DensityShape::uniform_box:
                return rng.uniform(spec.center[i] - spec.width[i], spec.center[i] + spec.width[i]);
        }
        return spec.center[i];
    };

    std::vector<EnsembleMember> members;
    members.reserve(static_cast<std::size_t>(n));
    const double weight = 1.0 / static_cast<double>(n);
    for (int m = 0; m < n; ++m) {
        std::vector<double> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = draw(i);

        EnsembleMember member;
        member.weight = weight;
        switch (target) {
            case EngineKind::continuum:
                member.state = ContinuumPoint{c[0], c[1], c[2], c[3]};
                break;
            case EngineKind::discrete: {
                const DiscreteState s0{0, c[0], c[1], c[2], c[3]};
                member.state = DiscretePairState{s0, bootstrap_state1(s0, V, Vtau, l)};
                break;
            }
            case EngineKind::hybrid: {
                // Project the q-bit 4-vector onto the C = 1 sphere.
                const double norm =
                    std::sqrt(0.5 * (c[2] * c[2] + c[3] * c[3] + c[4] * c[4] + c[5] * c[5]));
                if (!(norm > 0.0)) {
                    throw std::invalid_argument(
                        "sample_initial: q-bit coordinates have zero norm, cannot project");
                }
                member.state = HybridState{0.0,       c[0],       c[1],
                                           c[2] / norm, c[3] / norm, c[4] / norm,
                                           c[5] / norm};
                break;
            }
        }
        members.push_back(std::move(member));
    }
    return members;
}

std::vector<EnsembleMember> propagate_ensemble(std::vector<EnsembleMember> members,
                                               const EngineConfig& engine, double horizon) {
    const double step = engine.kind == EngineKind::discrete ? engine.params.l : engine.params.dt;
    const long steps = steps_for(horizon, step, "propagate_ensemble");

    for (std::size_t m = 0; m < members.size(); ++m) {
        try {
            switch (engine.kind) {
                case EngineKind::discrete:
                    members[m].state =
                        advance_discrete(engine, std::get<DiscretePairState>(members[m].state), steps);
                    break;
                case EngineKind::continuum:
                    members[m].state =
                        advance_continuum(engine, std::get<ContinuumPoint>(members[m].state), steps);
                    break;
                case EngineKind::hybrid:
                    members[m].state =
                        advance_hybrid(engine, std::get<HybridState>(members[m].state), steps, 1e-6);
                    break;
            }
        } catch (const std::bad_variant_access&) {
            throw std::invalid_argument("propagate_ensemble: member " + std::to_string(m) +
                                        " does not match the engine kind");
        } catch (const numerical_error& e) {
            throw numerical_error("propagate_ensemble: member " + std::to_string(m) + ": " +
                                      e.what(),
                                  e.when());
        }
    }
    return members;
}

double ensemble_expectation(std::span<const EnsembleMember> members,
                            const std::function<double(const EnsembleMember&)>& observable) {
    if (members.empty()) throw std::invalid_argument("ensemble_expectation: empty ensemble");
    double acc = 0.0;
    double total = 0.0;
    for (const auto& m : members) {
        acc += m.weight * observable(m);
        total += m.weight;
    }
    if (!(total > 0.0)) throw std::invalid_argument("ensemble_expectation: zero total weight");
    return acc / total;
}

std::vector<double> engine_flow(const EngineConfig& engine, std::span<const double> state,
                                double horizon) {
    switch (engine.kind) {
        case EngineKind::discrete: {
            if (state.size() != 8) {
                throw std::invalid_argument("engine_flow: discrete state needs 8 coordinates");
            }
            const long steps = steps_for(horizon, engine.params.l, "engine_flow");
            DiscretePairState pair{{0, state[0], state[1], state[2], state[3]},
                                   {1, state[4], state[5], state[6], state[7]}};
            pair = advance_discrete(engine, pair, steps);
            return {pair.prev.x, pair.prev.tau, pair.prev.p, pair.prev.P,
                    pair.curr.x, pair.curr.tau, pair.curr.p, pair.curr.P};
        }
        case EngineKind::continuum: {
            if (state.size() != 4) {
                throw std::invalid_argument("engine_flow: continuum state needs 4 coordinates");
            }
            const long steps = steps_for(horizon, engine.params.dt, "engine_flow");
            const ContinuumPoint out =
                advance_continuum(engine, {state[0], state[1], state[2], state[3]}, steps);
            return {out.x, out.tau, out.p, out.P};
        }
        case EngineKind::hybrid: {
            if (state.size() != 6) {
                throw std::invalid_argument("engine_flow: hybrid state needs 6 coordinates");
            }
            const long steps = steps_for(horizon, engine.params.dt, "engine_flow");
            // Off-surface starting points are legitimate here: the flow map is
            // defined on the whole space, so the constraint gate is disabled.
            const HybridState out =
                advance_hybrid(engine, unpack_hybrid(state, 0.0), steps,
                               std::numeric_limits<double>::infinity());
            const auto flat = pack_hybrid(out);
            return {flat.begin(), flat.end()};
        }
    }
    throw std::invalid_argument("engine_flow: unknown engine kind");
}

namespace {

// Determinant by LU with partial pivoting; n stays tiny (<= 8).
double determinant(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return det;
}

}  // namespace

double flow_jacobian_det(const FlowFn& flow, std::span<const double> state, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("flow_jacobian_det: h must be > 0");
    const std::size_t n = state.size();
    std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
    std::vector<double> probe(state.begin(), state.end());
    for (std::size_t j = 0; j < n; ++j) {
        const double save = probe[j];
        const double step = fd_step(save, h);
        probe[j] = save + step;
        const std::vector<double> plus = flow(probe);
        probe[j] = save - step;
        const std::vector<double> minus = flow(probe);
        probe[j] = save;
        for (std::size_t i = 0; i < n; ++i) {
            jac[i][j] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    return determinant(std::move(jac));
}

double flow_jacobian_det(const EngineConfig& engine, std::span<const double> state,
                         double horizon, double h) {
    return flow_jacobian_det(
        [&](std::span<const double> s) { return engine_flow(engine, s, horizon); }, state, h);
}

}  // namespace tausim
