#include "tausim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tausim/continuum.hpp"
#include "tausim/discrete.hpp"
#include "tausim/errors.hpp"
#include "tausim/rng.hpp"
#include "tausim/version.hpp"

namespace tausim {

namespace {

const std::vector<ScenarioInfo>& registry() {
    static const std::vector<ScenarioInfo> infos = {
        {ScenarioKind::free_discrete, "free-discrete",
         "Three-term recurrence with V = Vtau = 0; affine solutions, exact at any step."},
        {ScenarioKind::constant_force_discrete, "constant-force-discrete",
         "Recurrence under constant forces (linear potentials); quadratic closed forms."},
        {ScenarioKind::harmonic_lapse, "harmonic-lapse",
         "Discrete run with an oscillator internal-time potential; continuum-limit benchmark."},
        {ScenarioKind::time_machine_continuum, "time-machine-continuum",
         "Continuum (x, p) dynamics driven by a periodically reversing internal time."},
        {ScenarioKind::hybrid_qbit, "hybrid-qbit",
         "Oscillator time machine coupled to a q-bit through lambda x cos(wt) <O>."},
        {ScenarioKind::ensemble_discrete, "ensemble-discrete",
         "Phase-space ensemble transported by the discrete recurrence."},
        {ScenarioKind::ensemble_continuum, "ensemble-continuum",
         "Phase-space ensemble transported by the joint continuum flow."},
        {ScenarioKind::ensemble_hybrid, "ensemble-hybrid",
         "Hybrid ensemble on the C = 1 constraint surface."},
    };
    return infos;
}

bool is_discrete(ScenarioKind k) {
    return k == ScenarioKind::free_discrete || k == ScenarioKind::constant_force_discrete ||
           k == ScenarioKind::harmonic_lapse;
}

bool is_ensemble(ScenarioKind k) {
    return k == ScenarioKind::ensemble_discrete || k == ScenarioKind::ensemble_continuum ||
           k == ScenarioKind::ensemble_hybrid;
}

bool is_hybrid(ScenarioKind k) {
    return k == ScenarioKind::hybrid_qbit || k == ScenarioKind::ensemble_hybrid;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::map<std::string, std::string> parse_kv(std::istream& in, const std::string& origin,
                                            std::vector<std::string>& violations) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                violations.push_back(origin + ":" + std::to_string(lineno) +
                                     ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                violations.push_back(origin + ":" + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            violations.push_back(origin + ":" + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (section.empty()) {
            violations.push_back(origin + ":" + std::to_string(lineno) +
                                 ": key outside of any [section]");
            continue;
        }
        const std::string full = section + "." + key;
        if (!kv.emplace(full, value).second) {
            violations.push_back(full + ": duplicate key");
        }
    }
    return kv;
}

// Typed access over the parsed keys; collects one message per violation and
// tracks consumption so leftovers are reported as unknown keys.
class ConfigCursor {
public:
    ConfigCursor(std::map<std::string, std::string> kv, std::vector<std::string> violations)
        : kv_(std::move(kv)), violations_(std::move(violations)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    bool has_prefix(const std::string& prefix) const {
        auto it = kv_.lower_bound(prefix);
        return it != kv_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto v = take(key);
        return v ? *v : fallback;
    }

    double number(const std::string& key, double fallback) {
        auto v = take(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const double d = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            if (!std::isfinite(d)) {
                complain(key, "must be finite");
                return fallback;
            }
            return d;
        } catch (const std::exception&) {
            complain(key, "malformed number '" + *v + "'");
            return fallback;
        }
    }

    long integer(const std::string& key, long fallback) {
        auto v = take(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const long n = std::stol(*v, &used, 10);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            complain(key, "malformed integer '" + *v + "'");
            return fallback;
        }
    }

    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
        auto v = take(key);
        if (!v) return fallback;
        try {
            std::size_t used = 0;
            const unsigned long long n = std::stoull(*v, &used, 10);
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            complain(key, "malformed unsigned integer '" + *v + "'");
            return fallback;
        }
    }

    void complain(const std::string& key, const std::string& what) {
        violations_.push_back(key + ": " + what);
    }

    void finish_or_throw() {
        for (const auto& [key, value] : kv_) {
            (void)value;
            if (!consumed_.count(key)) violations_.push_back(key + ": unknown key");
        }
        if (!violations_.empty()) {
            std::sort(violations_.begin(), violations_.end());
            throw validation_error(std::move(violations_));
        }
    }

    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> consumed_;
    std::vector<std::string> violations_;
};

PotentialSpec parse_potential(ConfigCursor& cur, const std::string& prefix,
                              const PotentialSpec& fallback) {
    if (!cur.has_prefix(prefix + ".")) return fallback;
    const std::string kind_name = cur.text(prefix + ".kind", to_string(fallback.kind));
    PotentialSpec spec = fallback;
    if (kind_name == "zero") {
        spec.kind = PotentialKind::zero;
    } else if (kind_name == "constant") {
        spec.kind = PotentialKind::constant;
    } else if (kind_name == "linear") {
        spec.kind = PotentialKind::linear;
    } else if (kind_name == "harmonic") {
        spec.kind = PotentialKind::harmonic;
    } else {
        cur.complain(prefix + ".kind", "unknown potential kind '" + kind_name + "'");
    }
    spec.c0 = cur.number(prefix + ".c0", spec.kind == fallback.kind ? fallback.c0 : 0.0);
    spec.c1 = cur.number(prefix + ".c1", spec.kind == fallback.kind ? fallback.c1 : 0.0);
    spec.c2 = cur.number(prefix + ".c2", spec.kind == fallback.kind ? fallback.c2 : 0.0);
    if (spec.kind == PotentialKind::harmonic && !(spec.c2 > 0.0)) {
        cur.complain(prefix + ".c2", "harmonic potential needs c2 > 0");
    }
    return spec;
}

InitialState default_initial(ScenarioKind kind, const ModelParams& pm) {
    InitialState init;
    switch (kind) {
        case ScenarioKind::free_discrete:
        case ScenarioKind::constant_force_discrete:
        case ScenarioKind::ensemble_discrete:
        case ScenarioKind::ensemble_continuum:
            break;  // x=0, tau=0, p=1, P=1
        case ScenarioKind::harmonic_lapse:
            init.P = pm.taubar * pm.omega;
            break;
        case ScenarioKind::time_machine_continuum:
        case ScenarioKind::hybrid_qbit:
        case ScenarioKind::ensemble_hybrid:
            init.x = 1.0;
            init.p = 0.0;
            init.P = pm.taubar * pm.omega;
            break;
    }
    return init;
}

std::vector<std::string> density_coordinates(ScenarioKind kind) {
    if (kind == ScenarioKind::ensemble_hybrid) return {"x", "p", "X1", "X2", "P1", "P2"};
    return {"x", "tau", "p", "P"};
}

double initial_coordinate(const InitialState& init, const std::string& name) {
    if (name == "x") return init.x;
    if (name == "tau") return init.tau;
    if (name == "p") return init.p;
    if (name == "P") return init.P;
    if (name == "X1") return init.X1;
    if (name == "X2") return init.X2;
    if (name == "P1") return init.P1;
    return init.P2;
}

double sub_energy_x(double p, double x, const PotentialSpec& V) {
    return 0.5 * p * p + eval_potential(V, x);
}

double sub_energy_tau(double P, double tau, const PotentialSpec& Vtau) {
    return P * P + eval_potential(Vtau, tau);
}

RunRecord run_discrete_scenario(const ScenarioConfig& cfg) {
    const DiscreteState s0{0, cfg.initial.x, cfg.initial.tau, cfg.initial.p, cfg.initial.P};
    const DiscreteState s1 =
        cfg.initial2 ? *cfg.initial2 : bootstrap_state1(s0, cfg.V, cfg.Vtau, cfg.params.l);
    const DiscreteTrajectory traj =
        run_discrete(s0, s1, cfg.steps, cfg.V, cfg.Vtau, cfg.params.l);

    RunRecord rec;
    rec.columns = {"n", "x", "tau", "p", "P", "Ex", "Etau"};
    for (std::size_t k = 0; k < traj.states.size(); k += static_cast<std::size_t>(cfg.stride)) {
        const auto& s = traj.states[k];
        rec.rows.push_back({static_cast<double>(s.n), s.x, s.tau, s.p, s.P,
                            sub_energy_x(s.p, s.x, cfg.V), sub_energy_tau(s.P, s.tau, cfg.Vtau)});
    }
    return rec;
}

RunRecord run_continuum_scenario(const ScenarioConfig& cfg) {
    const LapseSolution lapse = closed_form_lapse(cfg.initial.tau, cfg.initial.P, cfg.Vtau,
                                                  cfg.params.dt, cfg.steps);
    const auto xp = integrate_xp_with_lapse(cfg.initial.x, cfg.initial.p, cfg.V, lapse);
    const auto samples = lapse.samples();

    RunRecord rec;
    rec.columns = {"t", "x", "tau", "p", "P", "Ex", "Etau"};
    for (std::size_t k = 0; k < xp.size(); k += static_cast<std::size_t>(cfg.stride)) {
        rec.rows.push_back({xp[k].t, xp[k].x, samples[k].tau, xp[k].p, samples[k].P,
                            sub_energy_x(xp[k].p, xp[k].x, cfg.V),
                            sub_energy_tau(samples[k].P, samples[k].tau, cfg.Vtau)});
    }
    return rec;
}

RunRecord run_hybrid_scenario(const ScenarioConfig& cfg) {
    const HybridState s0{0.0,           cfg.initial.x,  cfg.initial.p, cfg.initial.X1,
                         cfg.initial.X2, cfg.initial.P1, cfg.initial.P2};
    const HybridModel model{cfg.params, ObservableMatrix::sigma2_half()};
    const auto run = integrate_hybrid(s0, model, cfg.params.dt, cfg.steps);

    RunRecord rec;
    rec.columns = {"t", "x", "p", "X1", "X2", "P1", "P2", "C", "Hsigma"};
    for (std::size_t k = 0; k < run.size(); k += static_cast<std::size_t>(cfg.stride)) {
        const auto& s = run[k];
        rec.rows.push_back({s.t, s.x, s.p, s.X1, s.X2, s.P1, s.P2, constraint_C(s),
                            hybrid_hamiltonian_total(s, model)});
    }
    return rec;
}

RunRecord run_ensemble_scenario(const ScenarioConfig& cfg) {
    EngineConfig engine;
    engine.V = cfg.V;
    engine.Vtau = cfg.Vtau;
    engine.params = cfg.params;
    engine.kind = cfg.kind == ScenarioKind::ensemble_discrete    ? EngineKind::discrete
                  : cfg.kind == ScenarioKind::ensemble_continuum ? EngineKind::continuum
                                                                 : EngineKind::hybrid;

    auto members = sample_initial(*cfg.density, cfg.ensemble_count, engine.kind, cfg.V, cfg.Vtau,
                                  cfg.params.l);

    const double step = engine.kind == EngineKind::discrete ? cfg.params.l : cfg.params.dt;
    const HybridModel model{cfg.params, engine.O};

    RunRecord rec;
    auto mean = [&](const std::function<double(const EnsembleMember&)>& f) {
        return ensemble_expectation(members, f);
    };
    auto weight_sum = [&]() {
        double total = 0.0;
        for (const auto& m : members) total += m.weight;
        return total;
    };

    if (engine.kind == EngineKind::hybrid) {
        rec.columns = {"t",       "mean_x",  "mean_p",  "mean_X1", "mean_X2",
                       "mean_P1", "mean_P2", "mean_C",  "mean_Hsigma", "weight_sum"};
    } else {
        rec.columns = {"t", "mean_x", "mean_tau", "mean_p", "mean_P",
                       "mean_Ex", "mean_Etau", "weight_sum"};
    }

    for (int k = 0;; ++k) {
        if (k % cfg.stride == 0) {
            const double t = static_cast<double>(k) * step;
            if (engine.kind == EngineKind::hybrid) {
                auto get = [](const EnsembleMember& m) -> const HybridState& {
                    return std::get<HybridState>(m.state);
                };
                rec.rows.push_back(
                    {t, mean([&](const EnsembleMember& m) { return get(m).x; }),
                     mean([&](const EnsembleMember& m) { return get(m).p; }),
                     mean([&](const EnsembleMember& m) { return get(m).X1; }),
                     mean([&](const EnsembleMember& m) { return get(m).X2; }),
                     mean([&](const EnsembleMember& m) { return get(m).P1; }),
                     mean([&](const EnsembleMember& m) { return get(m).P2; }),
                     mean([&](const EnsembleMember& m) { return constraint_C(get(m)); }),
                     mean([&](const EnsembleMember& m) {
                         return hybrid_hamiltonian_total(get(m), model);
                     }),
                     weight_sum()});
            } else if (engine.kind == EngineKind::continuum) {
                auto get = [](const EnsembleMember& m) -> const ContinuumPoint& {
                    return std::get<ContinuumPoint>(m.state);
                };
                rec.rows.push_back(
                    {t, mean([&](const EnsembleMember& m) { return get(m).x; }),
                     mean([&](const EnsembleMember& m) { return get(m).tau; }),
                     mean([&](const EnsembleMember& m) { return get(m).p; }),
                     mean([&](const EnsembleMember& m) { return get(m).P; }),
                     mean([&](const EnsembleMember& m) {
                         return sub_energy_x(get(m).p, get(m).x, cfg.V);
                     }),
                     mean([&](const EnsembleMember& m) {
                         return sub_energy_tau(get(m).P, get(m).tau, cfg.Vtau);
                     }),
                     weight_sum()});
            } else {
                auto get = [](const EnsembleMember& m) -> const DiscreteState& {
                    return std::get<DiscretePairState>(m.state).curr;
                };
                rec.rows.push_back(
                    {t, mean([&](const EnsembleMember& m) { return get(m).x; }),
                     mean([&](const EnsembleMember& m) { return get(m).tau; }),
                     mean([&](const EnsembleMember& m) { return get(m).p; }),
                     mean([&](const EnsembleMember& m) { return get(m).P; }),
                     mean([&](const EnsembleMember& m) {
                         return sub_energy_x(get(m).p, get(m).x, cfg.V);
                     }),
                     mean([&](const EnsembleMember& m) {
                         return sub_energy_tau(get(m).P, get(m).tau, cfg.Vtau);
                     }),
                     weight_sum()});
            }
        }
        if (k >= cfg.steps) break;
        members = propagate_ensemble(std::move(members), engine, step);
    }

    rec.rng_algorithm = SampleStream::algorithm_id;
    rec.seed = cfg.density->seed;
    return rec;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() { return registry(); }

const ScenarioInfo& scenario_info(ScenarioKind kind) {
    for (const auto& info : registry()) {
        if (info.kind == kind) return info;
    }
    throw std::logic_error("scenario_info: unregistered kind");
}

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
    std::vector<std::string> early;
    auto kv = parse_kv(in, origin, early);
    ConfigCursor cur(std::move(kv), std::move(early));

    ScenarioConfig cfg;
    cfg.raw = cur.raw();

    // [scenario]
    const std::string kind_name = cur.text("scenario.kind", "");
    bool kind_known = false;
    for (const auto& info : registry()) {
        if (info.name == kind_name) {
            cfg.kind = info.kind;
            kind_known = true;
            break;
        }
    }
    if (!kind_known) {
        cur.complain("scenario.kind", kind_name.empty()
                                          ? "missing (see `tausim scenarios` for the registry)"
                                          : "unknown scenario '" + kind_name + "'");
    }

    const long default_steps = is_discrete(cfg.kind) ? 100 : 1000;
    const long steps = cur.integer("scenario.steps", default_steps);
    if (steps < 0) {
        cur.complain("scenario.steps", "must be >= 0");
    } else {
        cfg.steps = static_cast<int>(steps);
    }

    // [params]
    cfg.params.l = cur.number("params.l", cfg.params.l);
    if (!(cfg.params.l > 0.0)) cur.complain("params.l", "must be > 0");
    cfg.params.dt = cur.number("params.dt", cfg.params.dt);
    if (!(cfg.params.dt > 0.0)) cur.complain("params.dt", "must be > 0");
    cfg.params.omega = cur.number("params.omega", cfg.params.omega);
    if (!(cfg.params.omega > 0.0)) cur.complain("params.omega", "must be > 0");
    cfg.params.Omega = cur.number("params.Omega", cfg.params.Omega);
    if (cfg.params.Omega < 0.0) cur.complain("params.Omega", "must be >= 0");
    cfg.params.E0 = cur.number("params.E0", cfg.params.E0);
    cfg.params.lambda = cur.number("params.lambda", cfg.params.lambda);
    cfg.params.zeta = cur.number("params.zeta", cfg.params.zeta);
    cfg.params.taubar = cur.number("params.taubar", cfg.params.taubar);
    cfg.params.phi = cur.number("params.phi", cfg.params.phi);
    cfg.params.x1 = cur.number("params.x1", cfg.params.x1);

    // [potential.v] / [potential.vtau], with per-scenario defaults
    PotentialSpec v_default = PotentialSpec::zero();
    PotentialSpec vtau_default = PotentialSpec::zero();
    switch (cfg.kind) {
        case ScenarioKind::free_discrete:
            break;
        case ScenarioKind::constant_force_discrete:
            v_default = PotentialSpec::linear(1.0);
            break;
        case ScenarioKind::harmonic_lapse:
        case ScenarioKind::ensemble_discrete:
        case ScenarioKind::ensemble_continuum:
            vtau_default = PotentialSpec::harmonic(cfg.params.omega * cfg.params.omega);
            break;
        case ScenarioKind::time_machine_continuum:
            vtau_default = PotentialSpec::harmonic(cfg.params.omega * cfg.params.omega);
            if (cfg.params.Omega > 0.0) {
                v_default = PotentialSpec::harmonic(0.5 * cfg.params.Omega * cfg.params.Omega);
            }
            break;
        case ScenarioKind::hybrid_qbit:
        case ScenarioKind::ensemble_hybrid:
            break;  // oscillator form is fixed by params, no potentials
    }
    cfg.V = parse_potential(cur, "potential.v", v_default);
    cfg.Vtau = parse_potential(cur, "potential.vtau", vtau_default);

    if (is_hybrid(cfg.kind)) {
        if (cur.has_prefix("potential.")) {
            cur.complain("potential", "hybrid scenarios fix the oscillator form via params.Omega; "
                                      "remove the potential sections");
        }
    }
    if (cfg.kind == ScenarioKind::free_discrete) {
        if (cfg.V.kind != PotentialKind::zero) cur.complain("potential.v.kind", "must be zero here");
        if (cfg.Vtau.kind != PotentialKind::zero) {
            cur.complain("potential.vtau.kind", "must be zero here");
        }
    }
    if (cfg.kind == ScenarioKind::constant_force_discrete) {
        if (cfg.V.kind == PotentialKind::harmonic) {
            cur.complain("potential.v.kind", "constant-force scenarios allow zero/constant/linear");
        }
        if (cfg.Vtau.kind == PotentialKind::harmonic) {
            cur.complain("potential.vtau.kind",
                         "constant-force scenarios allow zero/constant/linear");
        }
    }
    if (cfg.kind == ScenarioKind::harmonic_lapse && cfg.Vtau.kind != PotentialKind::harmonic) {
        cur.complain("potential.vtau.kind", "must be harmonic here");
    }

    // [initial]
    cfg.initial = default_initial(cfg.kind, cfg.params);
    cfg.initial.x = cur.number("initial.x", cfg.initial.x);
    cfg.initial.tau = cur.number("initial.tau", cfg.initial.tau);
    cfg.initial.p = cur.number("initial.p", cfg.initial.p);
    cfg.initial.P = cur.number("initial.P", cfg.initial.P);
    cfg.initial.X1 = cur.number("initial.X1", cfg.initial.X1);
    cfg.initial.X2 = cur.number("initial.X2", cfg.initial.X2);
    cfg.initial.P1 = cur.number("initial.P1", cfg.initial.P1);
    cfg.initial.P2 = cur.number("initial.P2", cfg.initial.P2);
    if (cfg.kind == ScenarioKind::hybrid_qbit) {
        const double c = 0.5 * (cfg.initial.X1 * cfg.initial.X1 + cfg.initial.X2 * cfg.initial.X2 +
                                cfg.initial.P1 * cfg.initial.P1 + cfg.initial.P2 * cfg.initial.P2);
        if (std::abs(c - 1.0) > 1e-9) {
            cur.complain("initial", "q-bit coordinates must satisfy C = 1 (got C = " +
                                        std::to_string(c) + ")");
        }
    }

    // [initial2] (optional explicit second seed, discrete scenarios only)
    if (cur.has_prefix("initial2.")) {
        if (!is_discrete(cfg.kind)) {
            cur.complain("initial2", "only valid for discrete scenarios");
        }
        DiscreteState s1;
        s1.n = 1;
        s1.x = cur.number("initial2.x", 0.0);
        s1.tau = cur.number("initial2.tau", 0.0);
        s1.p = cur.number("initial2.p", 0.0);
        s1.P = cur.number("initial2.P", 0.0);
        cfg.initial2 = s1;
    }

    // [density] (ensemble scenarios only)
    if (is_ensemble(cfg.kind)) {
        if (!cur.has_prefix("density.")) {
            cur.complain("density", "ensemble scenarios need a [density] section");
        }
        DensitySpec density;
        const std::string shape = cur.text("density.shape", "gaussian");
        if (shape == "gaussian") {
            density.shape = DensityShape::gaussian;
        } else if (shape == "uniform-box") {
            density.shape = DensityShape::uniform_box;
        } else if (shape == "point") {
            density.shape = DensityShape::point;
        } else {
            cur.complain("density.shape", "unknown shape '" + shape + "'");
        }
        density.seed = cur.unsigned64("density.seed", 0);
        const long count = cur.integer("density.count", 100);
        if (count < 1) {
            cur.complain("density.count", "must be >= 1");
        } else {
            cfg.ensemble_count = static_cast<int>(count);
        }
        for (const auto& name : density_coordinates(cfg.kind)) {
            density.center.push_back(
                cur.number("density.center_" + name, initial_coordinate(cfg.initial, name)));
            const double width = cur.number("density.width_" + name, 0.1);
            if (density.shape != DensityShape::point && !(width > 0.0)) {
                cur.complain("density.width_" + name, "must be > 0");
            }
            density.width.push_back(width);
        }
        cfg.density = std::move(density);
    } else if (cur.has_prefix("density.")) {
        cur.complain("density", "only valid for ensemble scenarios");
    }

    // [output]
    const std::string default_name = kind_known ? kind_name : "run";
    const std::string fmt = cur.text("output.format", "csv");
    try {
        cfg.format = parse_format(fmt);
    } catch (const std::invalid_argument& e) {
        cur.complain("output.format", e.what());
    }
    cfg.output_path = cur.text(
        "output.path", default_name + (cfg.format == OutputFormat::csv ? ".csv" : ".jsonl"));
    if (cfg.output_path.empty()) cur.complain("output.path", "must not be empty");
    const long stride = cur.integer("output.stride", 1);
    if (stride < 1) {
        cur.complain("output.stride", "must be >= 1");
    } else {
        cfg.stride = static_cast<int>(stride);
    }

    cur.finish_or_throw();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error({path.string() + ": cannot open config file"});
    }
    return parse_config(in, path.string());
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
    if (path.is_absolute()) return path;
    if (const char* dir = std::getenv("TAUSIM_OUTPUT_DIR")) {
        return std::filesystem::path(dir) / path;
    }
    return path;
}

RunRecord run_scenario(const ScenarioConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();

    RunRecord rec;
    switch (config.kind) {
        case ScenarioKind::free_discrete:
        case ScenarioKind::constant_force_discrete:
        case ScenarioKind::harmonic_lapse:
            rec = run_discrete_scenario(config);
            break;
        case ScenarioKind::time_machine_continuum:
            rec = run_continuum_scenario(config);
            break;
        case ScenarioKind::hybrid_qbit:
            rec = run_hybrid_scenario(config);
            break;
        case ScenarioKind::ensemble_discrete:
        case ScenarioKind::ensemble_continuum:
        case ScenarioKind::ensemble_hybrid:
            rec = run_ensemble_scenario(config);
            break;
    }

    rec.scenario = scenario_info(config.kind).name;
    rec.config_echo = config.raw;
    rec.version = tausim::version;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rec;
}

}  // namespace tausim
