#include "netcpd/io/run_config.hpp"

#include <set>
#include <string>

#include "netcpd/core/errors.hpp"
#include "netcpd/io/duration.hpp"
#include "netcpd/io/json_io.hpp"
#include "netcpd/io/presets.hpp"

namespace netcpd {

using nlohmann::json;

Variant parse_variant(const std::string& name) {
    if (name == "bhpp") {
        return Variant::bhpp;
    }
    if (name == "sbm") {
        return Variant::sbm;
    }
    if (name == "gem") {
        return Variant::gem;
    }
    throw ConfigError("variant", "expected bhpp, sbm or gem, got '" + name + "'");
}

std::string to_string(Variant v) {
    switch (v) {
    case Variant::bhpp:
        return "bhpp";
    case Variant::sbm:
        return "sbm";
    case Variant::gem:
        return "gem";
    }
    return "bhpp";
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where.empty() ? "config" : where, "expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

// Reads j[key] into `out` if present, turning type errors into ConfigError.
template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where = "") {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where.empty() ? key : where + "." + key, e.what());
    }
}

double read_duration(const json& v, const std::string& field) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        return parse_duration(v.get<std::string>());
    }
    throw ConfigError(field, "expected a number or a duration string");
}

Matrix read_matrix(const json& v, const std::string& field) {
    try {
        return matrix_from_json(v);
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
}

void apply_forgetting(ForgettingFactors& f, const json& v) {
    if (v.is_number()) {
        // A single factor tempers rates, proportions and sticks; membership tempering stays as configured.
        const double d = v.get<double>();
        f.rate = f.mixture = f.stick = d;
        return;
    }
    reject_unknown(v, {"rate", "membership", "mixture", "stick"}, "forgetting");
    read(v, "rate", f.rate, "forgetting");
    read(v, "membership", f.membership, "forgetting");
    read(v, "mixture", f.mixture, "forgetting");
    read(v, "stick", f.stick, "forgetting");
}

void apply_priors(Priors& p, const json& v) {
    reject_unknown(v, {"alpha", "beta", "gamma", "eta", "zeta", "xi"}, "priors");
    if (v.contains("alpha")) {
        p.alpha = read_matrix(v["alpha"], "priors.alpha");
    }
    if (v.contains("beta")) {
        p.beta = read_matrix(v["beta"], "priors.beta");
    }
    if (v.contains("eta")) {
        p.eta = read_matrix(v["eta"], "priors.eta");
    }
    if (v.contains("zeta")) {
        p.zeta = read_matrix(v["zeta"], "priors.zeta");
    }
    read(v, "gamma", p.gamma, "priors");
    read(v, "xi", p.xi, "priors");
}

void apply_detector(RunConfig& c, const json& v) {
    reject_unknown(v, {"B1", "B2", "kappa", "W_KL", "W_JS", "js_floor", "reset_after_flag", "memberships"},
                   "detector");
    DetectorConfig& d = c.detector;
    read(v, "B1", d.convergence_burn_in, "detector");
    read(v, "B2", d.window, "detector");
    read(v, "kappa", d.lag, "detector");
    read(v, "W_KL", d.rate_threshold, "detector");
    read(v, "W_JS", d.membership_threshold, "detector");
    read(v, "js_floor", d.js_floor, "detector");
    read(v, "reset_after_flag", d.reset_after_flag, "detector");
    read(v, "memberships", c.watch_memberships, "detector");
}

void apply_simulation(RunConfig& c, const json& v) {
    reject_unknown(v, {"horizon", "rates", "proportions", "memberships", "self_loops", "rho", "schedule"},
                   "simulation");
    SimulationSettings s = c.simulation.value_or(SimulationSettings{});
    if (v.contains("horizon")) {
        s.horizon = read_duration(v["horizon"], "simulation.horizon");
    }
    if (v.contains("rates")) {
        s.config.rates = read_matrix(v["rates"], "simulation.rates");
    }
    read(v, "proportions", s.config.proportions, "simulation");
    read(v, "memberships", s.config.memberships, "simulation");
    read(v, "self_loops", s.config.self_loops, "simulation");
    if (v.contains("rho")) {
        double rho = 0.0;
        read(v, "rho", rho, "simulation");
        s.rho = rho;
        s.config.adjacency = Matrix();
    }
    if (v.contains("schedule")) {
        s.schedule = schedule_from_json(v["schedule"]);
    }
    s.config.groups = s.config.rates.rows();
    c.simulation = std::move(s);
}

const std::set<std::string> top_level_keys = {
    "variant",    "seed",      "preset",          "nodes",          "groups",         "connection_groups",
    "truncation", "interval",  "forgetting",      "cavi_cycles",    "occupancy_threshold",
    "gem_concentration",       "gem_rate_shape",  "gem_rate_rate",  "fixed_point",    "priors",
    "detector",   "simulation", "input",          "node_policy",    "origin",         "horizon",
    "out_dir",    "self_loops", "replicates"};

} // namespace

void apply_json(RunConfig& c, const json& j) {
    reject_unknown(j, top_level_keys, "");
    read(j, "seed", c.seed);
    read(j, "nodes", c.model.nodes);
    if (j.contains("preset")) {
        std::string name;
        read(j, "preset", name);
        apply_preset(c, name);
    }
    if (j.contains("variant")) {
        std::string name;
        read(j, "variant", name);
        c.variant = parse_variant(name);
    }
    read(j, "nodes", c.model.nodes);
    read(j, "groups", c.model.groups);
    read(j, "connection_groups", c.model.connection_groups);
    read(j, "truncation", c.model.truncation);
    if (j.contains("interval")) {
        c.model.interval = read_duration(j["interval"], "interval");
    }
    if (j.contains("forgetting")) {
        apply_forgetting(c.model.forgetting, j["forgetting"]);
    }
    read(j, "cavi_cycles", c.model.cavi_cycles);
    read(j, "occupancy_threshold", c.model.occupancy_threshold);
    read(j, "gem_concentration", c.model.gem_concentration);
    read(j, "gem_rate_shape", c.model.gem_rate_shape);
    read(j, "gem_rate_rate", c.model.gem_rate_rate);
    if (j.contains("fixed_point")) {
        const auto& v = j["fixed_point"];
        reject_unknown(v, {"max_iters", "tol"}, "fixed_point");
        read(v, "max_iters", c.model.fixed_point.max_iters, "fixed_point");
        read(v, "tol", c.model.fixed_point.tol, "fixed_point");
    }
    if (j.contains("priors")) {
        apply_priors(c.model.priors, j["priors"]);
    }
    if (j.contains("detector")) {
        apply_detector(c, j["detector"]);
    }
    if (j.contains("simulation")) {
        if (j["simulation"].is_null()) {
            c.simulation.reset();
        } else {
            apply_simulation(c, j["simulation"]);
        }
    }
    if (j.contains("input")) {
        std::string p;
        read(j, "input", p);
        c.input = p;
    }
    if (j.contains("out_dir")) {
        std::string p;
        read(j, "out_dir", p);
        c.out_dir = p;
    }
    if (j.contains("node_policy")) {
        std::string p;
        read(j, "node_policy", p);
        c.node_policy = parse_node_policy(p);
    }
    if (j.contains("origin")) {
        const auto& v = j["origin"];
        if (v.is_number()) {
            c.origin = v.get<double>();
        } else if (v.is_string()) {
            try {
                c.origin = parse_timestamp(v.get<std::string>());
            } catch (const DataError& e) {
                throw ConfigError("origin", e.what());
            }
        } else {
            throw ConfigError("origin", "expected a number or an ISO-8601 string");
        }
    }
    if (j.contains("horizon")) {
        if (j["horizon"].is_null()) {
            c.horizon.reset();
        } else {
            c.horizon = read_duration(j["horizon"], "horizon");
        }
    }
    read(j, "self_loops", c.self_loops);
    read(j, "replicates", c.replicates);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    if (path.extension() == ".toml") {
        throw ConfigError("config", "TOML is not supported; use JSON");
    }
    json j;
    try {
        j = read_json_file(path);
    } catch (const DataError& e) {
        throw ConfigError("config", e.what());
    }
    RunConfig c;
    apply_json(c, j);
    return c;
}

json to_json(const RunConfig& c) {
    const ModelConfig& m = c.model;
    json priors = json::object();
    if (!m.priors.alpha.empty()) {
        priors["alpha"] = matrix_to_json(m.priors.alpha);
    }
    if (!m.priors.beta.empty()) {
        priors["beta"] = matrix_to_json(m.priors.beta);
    }
    if (!m.priors.eta.empty()) {
        priors["eta"] = matrix_to_json(m.priors.eta);
    }
    if (!m.priors.zeta.empty()) {
        priors["zeta"] = matrix_to_json(m.priors.zeta);
    }
    if (!m.priors.gamma.empty()) {
        priors["gamma"] = m.priors.gamma;
    }
    if (!m.priors.xi.empty()) {
        priors["xi"] = m.priors.xi;
    }
    json j = {
        {"variant", to_string(c.variant)},
        {"seed", c.seed},
        {"nodes", m.nodes},
        {"groups", m.groups},
        {"connection_groups", m.connection_groups},
        {"truncation", m.truncation},
        {"interval", m.interval},
        {"forgetting",
         {{"rate", m.forgetting.rate},
          {"membership", m.forgetting.membership},
          {"mixture", m.forgetting.mixture},
          {"stick", m.forgetting.stick}}},
        {"cavi_cycles", m.cavi_cycles},
        {"occupancy_threshold", m.occupancy_threshold},
        {"gem_concentration", m.gem_concentration},
        {"gem_rate_shape", m.gem_rate_shape},
        {"gem_rate_rate", m.gem_rate_rate},
        {"fixed_point", {{"max_iters", m.fixed_point.max_iters}, {"tol", m.fixed_point.tol}}},
        {"priors", priors},
        {"detector",
         {{"B1", c.detector.convergence_burn_in},
          {"B2", c.detector.window},
          {"kappa", c.detector.lag},
          {"W_KL", c.detector.rate_threshold},
          {"W_JS", c.detector.membership_threshold},
          {"js_floor", c.detector.js_floor},
          {"reset_after_flag", c.detector.reset_after_flag},
          {"memberships", c.watch_memberships}}},
        {"input", c.input.string()},
        {"out_dir", c.out_dir.string()},
        {"node_policy", c.node_policy == NodePolicy::numeric ? "numeric" : "first-appearance"},
        {"origin", c.origin},
        {"horizon", c.horizon ? json(*c.horizon) : json(nullptr)},
        {"self_loops", c.self_loops},
        {"replicates", c.replicates},
    };
    if (c.simulation) {
        const SimulationSettings& s = *c.simulation;
        json sim = {{"horizon", s.horizon},
                    {"rates", matrix_to_json(s.config.rates)},
                    {"proportions", s.config.proportions},
                    {"memberships", s.config.memberships},
                    {"self_loops", s.config.self_loops},
                    {"schedule", schedule_to_json(s.schedule)}};
        if (s.rho) {
            sim["rho"] = *s.rho;
        }
        j["simulation"] = sim;
    } else {
        j["simulation"] = nullptr;
    }
    // The preset name is informational here; re-applying it would overwrite the fields above.
    return j;
}

void RunConfig::validate() const {
    const ValidatedConfig checked = netcpd::validate(model);
    detector.validate();
    if (variant == Variant::gem && model.truncation < 1) {
        throw ConfigError("truncation", "the gem variant needs truncation >= 1");
    }
    if (replicates < 1) {
        throw ConfigError("replicates", "must be >= 1");
    }
    if (simulation) {
        const SimulationSettings& s = *simulation;
        if (!(s.horizon > 0.0)) {
            throw ConfigError("simulation.horizon", "must be positive");
        }
        if (s.config.rates.rows() != s.config.rates.cols() || s.config.rates.rows() == 0) {
            throw ConfigError("simulation.rates", "expected a non-empty square matrix");
        }
        if (s.config.nodes != 0 && s.config.nodes != model.nodes) {
            throw ConfigError("nodes", "simulation and model node counts differ");
        }
        if (!s.config.memberships.empty() && s.config.memberships.size() != model.nodes) {
            throw ConfigError("simulation.memberships", "length must equal the node count");
        }
        if (s.config.memberships.empty() && s.config.proportions.size() != s.config.rates.rows()) {
            throw ConfigError("simulation.proportions", "need one proportion per group");
        }
        if (s.rho && !(*s.rho > 0.0 && *s.rho <= 1.0)) {
            throw ConfigError("simulation.rho", "must lie in (0, 1]");
        }
        s.schedule.validate(s.horizon, model.nodes, s.config.rates.rows());
    }
}

} // namespace netcpd
