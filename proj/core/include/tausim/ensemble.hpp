#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "tausim/hybrid.hpp"
#include "tausim/model.hpp"

namespace tausim {

/// Phase-space point of the joint continuum system.
struct ContinuumPoint {
    double x = 0.0;
    double tau = 0.0;
    double p = 0.0;
    double P = 0.0;
};

/// Two consecutive states, the stepping unit of the discrete engine.
struct DiscretePairState {
    DiscreteState prev;
    DiscreteState curr;
};

/// Weighted phase-space sample. Weights are assigned at sampling and never
/// written afterwards: transport by characteristics conserves normalization
/// and positivity structurally.
struct EnsembleMember {
    double weight = 0.0;
    std::variant<DiscretePairState, ContinuumPoint, HybridState> state;
};

enum class DensityShape { gaussian, uniform_box, point };
enum class EngineKind { discrete, continuum, hybrid };

/// Initial phase-space density. Coordinates are ordered (x, tau, p, P) for
/// discrete/continuum targets and (x, p, X1, X2, P1, P2) for hybrid ones.
/// gaussian widths are standard deviations; uniform_box widths are
/// half-extents. Sampling is deterministic given the seed.
struct DensitySpec {
    DensityShape shape = DensityShape::point;
    std::vector<double> center;
    std::vector<double> width;
    std::uint64_t seed = 0;
};

/// Everything needed to advance one member: which engine, its potentials and
/// parameters, and the coupling observable for hybrid flows.
struct EngineConfig {
    EngineKind kind = EngineKind::continuum;
    PotentialSpec V;
    PotentialSpec Vtau;
    ModelParams params;
    ObservableMatrix O = ObservableMatrix::sigma2_half();
};

/// n members with equal weights summing to one. Discrete members get their
/// second seed from the bootstrap step; hybrid members have their q-bit
/// coordinates projected onto the C = 1 sphere after sampling.
std::vector<EnsembleMember> sample_initial(const DensitySpec& spec, int n, EngineKind target,
                                           const PotentialSpec& V, const PotentialSpec& Vtau,
                                           double l);

/// Advances every member independently over the external-time horizon (a
/// near-integer multiple of the engine step). Weights are left untouched.
/// Engine failures are rethrown with the failing member identified.
std::vector<EnsembleMember> propagate_ensemble(std::vector<EnsembleMember> members,
                                               const EngineConfig& engine, double horizon);

/// Weighted mean of the observable; rejects empty ensembles. The reduction
/// runs in member order, independent of any parallel scheduling.
double ensemble_expectation(std::span<const EnsembleMember> members,
                            const std::function<double(const EnsembleMember&)>& observable);

/// Flat state for finite-difference flow maps: 8 coordinates for discrete
/// pairs, 4 for continuum points, 6 for hybrid states (t starts at 0).
std::vector<double> engine_flow(const EngineConfig& engine, std::span<const double> state,
                                double horizon);

using FlowFn = std::function<std::vector<double>(std::span<const double>)>;

/// Determinant of the finite-difference Jacobian of an arbitrary flow map
/// around `state` (central differences of step h). Hamiltonian flows give 1.
double flow_jacobian_det(const FlowFn& flow, std::span<const double> state, double h);

/// Same for the time-horizon map of one of the three engines.
double flow_jacobian_det(const EngineConfig& engine, std::span<const double> state,
                         double horizon, double h);

}  // namespace tausim
