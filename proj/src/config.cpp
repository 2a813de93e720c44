#include "halfline/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "halfline/errors.hpp"

namespace halfline {
namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

std::string prob_string(const Json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return Json(v).dump();
    throw ConfigError(where + ": probability must be a string or number");
}

std::vector<std::pair<std::int64_t, std::string>> parse_one_dim(const Json& arr,
                                                                const std::string& where) {
    if (!arr.is_array()) throw ConfigError(where + ": expected an array of [value, p]");
    std::vector<std::pair<std::int64_t, std::string>> out;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError(where + ": entries must be [value, p]");
        out.emplace_back(e[0].get<std::int64_t>(), prob_string(e[1], where));
    }
    return out;
}

// "num/den" strings stay exact; plain numbers carry only a double.
std::pair<double, std::optional<Rational64>> parse_prob(const std::string& text) {
    if (text.find('/') != std::string::npos) {
        Rational64 r = Rational64::parse(text);
        return {r.to_double(), r};
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw ConfigError("bad probability '" + text + "'");
        return {v, std::nullopt};
    } catch (const std::logic_error&) {
        throw ConfigError("bad probability '" + text + "'");
    }
}

OneDimLaw build_one_dim(const std::vector<std::pair<std::int64_t, std::string>>& entries) {
    OneDimLaw law;
    bool all_exact = true;
    for (const auto& [v, p] : entries) {
        auto [d, r] = parse_prob(p);
        law.atoms.emplace_back(v, d);
        law.exact.push_back(r);
        all_exact = all_exact && r.has_value();
    }
    if (!all_exact) law.exact.clear();
    return law;
}

Json one_dim_json(const std::vector<std::pair<std::int64_t, std::string>>& entries) {
    Json arr = Json::array();
    for (const auto& [v, p] : entries) arr.push_back(Json::array({v, p}));
    return arr;
}

}  // namespace

Target parse_target(const std::string& name) {
    if (name == "V_minus") return Target::VMinus;
    if (name == "V_plus") return Target::VPlus;
    if (name == "V_plus_punctured") return Target::VPlusPunctured;
    if (name == "U") return Target::U;
    throw ConfigError("unknown target '" + name + "'");
}

IncrementDistribution DistributionConfig::build() const {
    IncrementDistribution dist = [&] {
        double d = delta.value_or(0.5);
        if (type == "simple") return IncrementDistribution::simple_walk();
        if (type == "table") {
            std::vector<Atom> list;
            for (const auto& [x1v, x2v, p] : atoms) {
                auto [pd, r] = parse_prob(p);
                list.push_back({{x1v, x2v}, pd, r});
            }
            return IncrementDistribution::table(std::move(list), d);
        }
        if (type == "product")
            return IncrementDistribution::product(build_one_dim(x1), build_one_dim(x2), d);
        if (type == "heavy_tail") {
            OneDimLaw law = heavy_x2 ? build_one_dim(*heavy_x2)
                                     : IncrementDistribution::default_x2_law();
            return IncrementDistribution::heavy_tail(alpha, law, head_size.value_or(4096),
                                                     d);
        }
        throw ConfigError("unknown distribution type '" + type + "'");
    }();
    return mirror_x1 ? dist.mirrored_x1() : dist;
}

SimConfig SimulateConfig::build() const {
    SimConfig c;
    c.n_paths = n_paths;
    c.horizon = horizon;
    c.seed = seed;
    c.streams = streams;
    c.target = parse_target(target);
    if (checkpoints == "pow2") {
        c.checkpoints = SimConfig::pow2_checkpoints(horizon);
    } else if (checkpoints == "log") {
        c.checkpoints =
            SimConfig::log_checkpoints(log_lo, log_hi == 0 ? horizon : log_hi, log_points);
    } else if (checkpoints == "explicit") {
        c.checkpoints = explicit_checkpoints;
    } else {
        throw ConfigError("checkpoints must be pow2 | log | explicit");
    }
    return c;
}

namespace {

DistributionConfig parse_distribution(const Json& j) {
    require_keys(j, "distribution",
                 {"type", "atoms", "x1", "x2", "alpha", "head_size", "delta", "mirror_x1"});
    DistributionConfig d;
    d.type = j.at("type").get<std::string>();
    if (d.type == "table") {
        for (const auto& e : j.at("atoms")) {
            if (!e.is_array() || e.size() != 3)
                throw ConfigError("table atoms must be [dx1, dx2, p]");
            d.atoms.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>(),
                                 prob_string(e[2], "atoms"));
        }
    } else if (d.type == "product") {
        d.x1 = parse_one_dim(j.at("x1"), "x1");
        d.x2 = parse_one_dim(j.at("x2"), "x2");
    } else if (d.type == "heavy_tail") {
        d.alpha = j.at("alpha").get<double>();
        if (j.contains("head_size")) d.head_size = j["head_size"].get<int>();
        if (j.contains("x2")) d.heavy_x2 = parse_one_dim(j["x2"], "x2");
    } else if (d.type != "simple") {
        throw ConfigError("unknown distribution type '" + d.type + "'");
    }
    if (j.contains("delta")) d.delta = j["delta"].get<double>();
    if (j.contains("mirror_x1")) d.mirror_x1 = j["mirror_x1"].get<bool>();
    return d;
}

template <class T>
void maybe(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(j, "config",
                 {"schema_version", "distribution", "output_dir", "analyze", "simulate",
                  "geometric", "wiener_hopf", "ladder", "verify"});
    RunConfig cfg;
    if (!j.contains("schema_version"))
        throw ConfigError("config: missing schema_version");
    cfg.schema_version = j["schema_version"].get<int>();
    if (cfg.schema_version != 1)
        throw ConfigError("config: unsupported schema_version");
    if (!j.contains("distribution")) throw ConfigError("config: missing distribution");
    cfg.distribution = parse_distribution(j["distribution"]);
    maybe(j, "output_dir", cfg.output_dir);

    if (j.contains("analyze")) {
        const Json& a = j["analyze"];
        require_keys(a, "analyze", {"theta_min", "theta_max", "points"});
        maybe(a, "theta_min", cfg.analyze.theta_min);
        maybe(a, "theta_max", cfg.analyze.theta_max);
        maybe(a, "points", cfg.analyze.points);
    }
    if (j.contains("simulate")) {
        const Json& s = j["simulate"];
        require_keys(s, "simulate",
                     {"n_paths", "horizon", "seed", "streams", "target", "checkpoints",
                      "log_lo", "log_hi", "log_points", "explicit_checkpoints", "fit_lo",
                      "fit_hi"});
        maybe(s, "n_paths", cfg.simulate.n_paths);
        maybe(s, "horizon", cfg.simulate.horizon);
        maybe(s, "seed", cfg.simulate.seed);
        maybe(s, "streams", cfg.simulate.streams);
        maybe(s, "target", cfg.simulate.target);
        maybe(s, "checkpoints", cfg.simulate.checkpoints);
        maybe(s, "log_lo", cfg.simulate.log_lo);
        maybe(s, "log_hi", cfg.simulate.log_hi);
        maybe(s, "log_points", cfg.simulate.log_points);
        maybe(s, "explicit_checkpoints", cfg.simulate.explicit_checkpoints);
        maybe(s, "fit_lo", cfg.simulate.fit_lo);
        maybe(s, "fit_hi", cfg.simulate.fit_hi);
    }
    if (j.contains("geometric")) {
        const Json& g = j["geometric"];
        require_keys(g, "geometric",
                     {"lambdas", "targets", "n_paths", "horizon", "seed", "streams",
                      "mode"});
        maybe(g, "lambdas", cfg.geometric.lambdas);
        maybe(g, "targets", cfg.geometric.targets);
        maybe(g, "n_paths", cfg.geometric.n_paths);
        maybe(g, "horizon", cfg.geometric.horizon);
        maybe(g, "seed", cfg.geometric.seed);
        maybe(g, "streams", cfg.geometric.streams);
        maybe(g, "mode", cfg.geometric.mode);
    }
    if (j.contains("wiener_hopf")) {
        const Json& w = j["wiener_hopf"];
        require_keys(w, "wiener_hopf", {"lambdas", "s0", "L", "tol", "k_max", "l_max"});
        maybe(w, "lambdas", cfg.wiener_hopf.lambdas);
        maybe(w, "s0", cfg.wiener_hopf.s0);
        maybe(w, "L", cfg.wiener_hopf.L);
        maybe(w, "tol", cfg.wiener_hopf.tol);
        maybe(w, "k_max", cfg.wiener_hopf.k_max);
        maybe(w, "l_max", cfg.wiener_hopf.l_max);
    }
    if (j.contains("ladder")) {
        const Json& l = j["ladder"];
        require_keys(l, "ladder",
                     {"lambda", "k", "l_values", "n_paths", "horizon", "seed", "streams"});
        maybe(l, "lambda", cfg.ladder.lambda);
        maybe(l, "k", cfg.ladder.k);
        maybe(l, "l_values", cfg.ladder.l_values);
        maybe(l, "n_paths", cfg.ladder.n_paths);
        maybe(l, "horizon", cfg.ladder.horizon);
        maybe(l, "seed", cfg.ladder.seed);
        maybe(l, "streams", cfg.ladder.streams);
    }
    if (j.contains("verify")) {
        const Json& v = j["verify"];
        require_keys(v, "verify", {"criteria"});
        maybe(v, "criteria", cfg.verify.criteria);
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_text(text);
}

std::string RunConfig::serialize() const {
    Json j;
    j["schema_version"] = schema_version;
    Json d;
    d["type"] = distribution.type;
    if (distribution.type == "table") {
        Json arr = Json::array();
        for (const auto& [x1v, x2v, p] : distribution.atoms)
            arr.push_back(Json::array({x1v, x2v, p}));
        d["atoms"] = arr;
    } else if (distribution.type == "product") {
        d["x1"] = one_dim_json(distribution.x1);
        d["x2"] = one_dim_json(distribution.x2);
    } else if (distribution.type == "heavy_tail") {
        d["alpha"] = distribution.alpha;
        if (distribution.head_size) d["head_size"] = *distribution.head_size;
        if (distribution.heavy_x2) d["x2"] = one_dim_json(*distribution.heavy_x2);
    }
    if (distribution.delta) d["delta"] = *distribution.delta;
    if (distribution.mirror_x1) d["mirror_x1"] = true;
    j["distribution"] = d;
    j["output_dir"] = output_dir;

    j["analyze"] = Json{{"theta_min", analyze.theta_min},
                        {"theta_max", analyze.theta_max},
                        {"points", analyze.points}};
    Json s{{"n_paths", simulate.n_paths},
           {"horizon", simulate.horizon},
           {"seed", simulate.seed},
           {"streams", simulate.streams},
           {"target", simulate.target},
           {"checkpoints", simulate.checkpoints}};
    if (simulate.checkpoints == "log") {
        s["log_lo"] = simulate.log_lo;
        s["log_hi"] = simulate.log_hi;
        s["log_points"] = simulate.log_points;
    }
    if (simulate.checkpoints == "explicit")
        s["explicit_checkpoints"] = simulate.explicit_checkpoints;
    if (simulate.fit_lo > 0.0) {
        s["fit_lo"] = simulate.fit_lo;
        s["fit_hi"] = simulate.fit_hi;
    }
    j["simulate"] = s;
    j["geometric"] = Json{{"lambdas", geometric.lambdas},
                          {"targets", geometric.targets},
                          {"n_paths", geometric.n_paths},
                          {"horizon", geometric.horizon},
                          {"seed", geometric.seed},
                          {"streams", geometric.streams},
                          {"mode", geometric.mode}};
    j["wiener_hopf"] = Json{{"lambdas", wiener_hopf.lambdas},
                            {"s0", wiener_hopf.s0},
                            {"L", wiener_hopf.L},
                            {"tol", wiener_hopf.tol},
                            {"k_max", wiener_hopf.k_max},
                            {"l_max", wiener_hopf.l_max}};
    Json l{{"lambda", ladder.lambda},
           {"k", ladder.k},
           {"l_values", ladder.l_values},
           {"n_paths", ladder.n_paths},
           {"horizon", ladder.horizon},
           {"seed", ladder.seed},
           {"streams", ladder.streams}};
    j["ladder"] = l;
    j["verify"] = Json{{"criteria", verify.criteria}};
    return j.dump(2) + "\n";
}

}  // namespace halfline
