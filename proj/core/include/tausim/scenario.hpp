#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tausim/ensemble.hpp"
#include "tausim/model.hpp"
#include "tausim/record.hpp"

namespace tausim {

enum class ScenarioKind {
    free_discrete,
    constant_force_discrete,
    harmonic_lapse,
    time_machine_continuum,
    hybrid_qbit,
    ensemble_discrete,
    ensemble_continuum,
    ensemble_hybrid,
};

struct ScenarioInfo {
    ScenarioKind kind;
    std::string name;
    std::string description;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& scenario_info(ScenarioKind kind);

/// Initial conditions; defaults depend on the scenario kind and are applied
/// before user overrides.
struct InitialState {
    double x = 0.0;
    double tau = 0.0;
    double p = 1.0;
    double P = 1.0;
    double X1 = 1.0;
    double X2 = 0.0;
    double P1 = 0.0;
    double P2 = 1.0;
};

/// A fully validated scenario: parsing collects every violation and throws a
/// single validation_error before any computation.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::free_discrete;
    int steps = 0;
    ModelParams params;
    PotentialSpec V;
    PotentialSpec Vtau;
    InitialState initial;
    std::optional<DiscreteState> initial2;  // optional explicit second seed
    std::optional<DensitySpec> density;
    int ensemble_count = 0;
    std::filesystem::path output_path;
    OutputFormat format = OutputFormat::csv;
    int stride = 1;
    std::map<std::string, std::string> raw;  // config echo, as parsed
};

/// Parses the flat key = value format ('#'/';' comments, [section] groups).
ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Relative output paths are redirected into $TAUSIM_OUTPUT_DIR when set.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

/// Deterministic execution of a validated scenario; writes nothing (the
/// caller exports the record).
RunRecord run_scenario(const ScenarioConfig& config);

}  // namespace tausim
