#include "fracfilt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ff::harness {

using json = nlohmann::ordered_json;

namespace {
std::string join_messages(const std::vector<std::string>& msgs) {
    std::string s = "invalid config:";
    for (const auto& m : msgs) s += "\n  " + m;
    return s;
}
} // namespace

ConfigError::ConfigError(std::vector<std::string> msgs)
    : std::runtime_error(join_messages(msgs)), messages(std::move(msgs)) {}

double FnSpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

model::RealFn resolve_scalar_fn(const FnSpec& spec) {
    if (spec.name == "zero") return [](double) { return 0.0; };
    if (spec.name == "const") {
        double c = spec.param("c", 1.0);
        return [c](double) { return c; };
    }
    if (spec.name == "affine") {
        double a0 = spec.param("a0", 0.0), a1 = spec.param("a1", 1.0);
        return [a0, a1](double x) { return a0 + a1 * x; };
    }
    if (spec.name == "linear") {
        double s = spec.param("scale", 1.0);
        return [s](double x) { return s * x; };
    }
    if (spec.name == "scaled_sin") {
        double s = spec.param("scale", 1.0), f = spec.param("freq", 1.0);
        return [s, f](double x) { return s * std::sin(f * x); };
    }
    if (spec.name == "tanh") {
        double s = spec.param("scale", 1.0);
        return [s](double x) { return s * std::tanh(x); };
    }
    throw ConfigError({"unknown function name '" + spec.name + "'"});
}

filter::TestFunction resolve_test_function(const std::string& name) {
    auto zero = [](double) { return 0.0; };
    if (name == "one")
        return {"one", [](double) { return 1.0; }, zero, zero, zero, zero};
    if (name == "linear")
        return {"linear", [](double x) { return x; }, [](double) { return 1.0; }, zero, zero, zero};
    if (name == "sin")
        return {"sin",
                [](double x) { return std::sin(x); },
                [](double x) { return std::cos(x); },
                [](double x) { return -std::sin(x); },
                [](double x) { return -std::cos(x); },
                [](double x) { return std::sin(x); }};
    if (name == "cos")
        return {"cos",
                [](double x) { return std::cos(x); },
                [](double x) { return -std::sin(x); },
                [](double x) { return -std::cos(x); },
                [](double x) { return std::sin(x); },
                [](double x) { return std::cos(x); }};
    throw ConfigError({"unknown test function '" + name + "'"});
}

namespace {

FnSpec parse_fnspec(const json& j, const std::string& field, std::vector<std::string>& errs) {
    FnSpec s;
    if (!j.contains("name") || !j["name"].is_string()) {
        errs.push_back(field + ".name: required string");
        return s;
    }
    s.name = j["name"].get<std::string>();
    for (auto& [k, v] : j.items())
        if (k != "name") {
            if (!v.is_number()) {
                errs.push_back(field + "." + k + ": parameter must be numeric");
                continue;
            }
            s.params[k] = v.get<double>();
        }
    return s;
}

json fnspec_json(const FnSpec& s) {
    json j;
    j["name"] = s.name;
    for (auto& [k, v] : s.params) j[k] = v;
    return j;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("json parse error: ") + e.what()});
    }
    ExperimentConfig c;
    std::vector<std::string> errs;

    auto num = [&](const json& node, const char* field, double lo, double hi, double fallback) {
        if (!node.is_number()) {
            errs.push_back(std::string(field) + ": required number");
            return fallback;
        }
        double v = node.get<double>();
        if (!(v >= lo && v <= hi)) {
            std::ostringstream os;
            os << field << ": value " << v << " outside [" << lo << ", " << hi << "]";
            errs.push_back(os.str());
        }
        return v;
    };

    if (j.contains("schema_version")) c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != 1) errs.push_back("schema_version: only version 1 is supported");

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("T1")) c.T1 = num(g["T1"], "grid.T1", 1e-9, 1e9, 1.0);
        if (g.contains("T2")) c.T2 = num(g["T2"], "grid.T2", 1e-9, 1e9, 1.0);
        if (g.contains("n1")) c.n1 = static_cast<std::size_t>(num(g["n1"], "grid.n1", 2, 1e6, 8));
        if (g.contains("n2")) c.n2 = static_cast<std::size_t>(num(g["n2"], "grid.n2", 2, 1e6, 8));
    }
    if (j.contains("hurst")) {
        const auto& h = j["hurst"];
        if (h.contains("alpha")) c.alpha = h["alpha"].get<double>();
        if (h.contains("beta")) c.beta = h["beta"].get<double>();
    }
    if (!(c.alpha > 0.5 && c.alpha < 1.0))
        errs.push_back("hurst.alpha: persistence requires 0.5 < alpha < 1");
    if (!(c.beta > 0.5 && c.beta < 1.0))
        errs.push_back("hurst.beta: persistence requires 0.5 < beta < 1");

    if (j.contains("sde")) {
        const auto& s = j["sde"];
        if (s.contains("drift")) c.drift = parse_fnspec(s["drift"], "sde.drift", errs);
        if (s.contains("diffusion"))
            c.diffusion = parse_fnspec(s["diffusion"], "sde.diffusion", errs);
        if (s.contains("x0")) {
            const auto& x = s["x0"];
            if (x.contains("law")) c.x0.law = x["law"].get<std::string>();
            if (x.contains("mean")) c.x0.mean = x["mean"].get<double>();
            if (x.contains("sd")) c.x0.sd = x["sd"].get<double>();
            if (c.x0.law != "gaussian" && c.x0.law != "const")
                errs.push_back("sde.x0.law: must be 'gaussian' or 'const'");
            if (c.x0.law == "gaussian" && !(c.x0.sd >= 0))
                errs.push_back("sde.x0.sd: must be nonnegative");
        }
    }
    if (j.contains("sensor")) {
        const auto& s = j["sensor"];
        if (s.contains("g")) c.sensor = parse_fnspec(s["g"], "sensor.g", errs);
        if (s.contains("holder_order"))
            c.holder_order = num(s["holder_order"], "sensor.holder_order", 1e-6, 1.0, 1.0);
    }
    // condition (A1): lambda > 2 max(alpha,beta) - 1
    double a1_bound = 2.0 * std::max(c.alpha, c.beta) - 1.0;
    if (!(c.holder_order > a1_bound)) {
        std::ostringstream os;
        os << "sensor.holder_order: condition (A1) requires lambda > 2*max(alpha,beta)-1 = "
           << a1_bound;
        errs.push_back(os.str());
    }

    if (j.contains("filter")) {
        const auto& f = j["filter"];
        if (f.contains("particles"))
            c.particles = static_cast<std::size_t>(num(f["particles"], "filter.particles", 10, 1e9, 5000));
        if (f.contains("test_function")) c.test_function = f["test_function"].get<std::string>();
        if (f.contains("path")) c.path = f["path"].get<std::string>();
        if (f.contains("custom_path")) {
            for (const auto& p : f["custom_path"])
                c.custom_path.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
        }
        if (c.path != "diagonal" && c.path != "axis1" && c.path != "axis2" && c.path != "custom")
            errs.push_back("filter.path: must be diagonal | axis1 | axis2 | custom");
        if (c.path == "custom" && c.custom_path.empty())
            errs.push_back("filter.custom_path: required when path == custom");
    }
    if (j.contains("seeds") && j["seeds"].contains("master"))
        c.master_seed = j["seeds"]["master"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("sigma_multiplier"))
            c.sigma_mult = num(t["sigma_multiplier"], "tolerances.sigma_multiplier", 0.1, 100, 5.0);
        if (t.contains("refinement_levels")) {
            c.refinement_levels.clear();
            for (const auto& r : t["refinement_levels"])
                c.refinement_levels.push_back(r.get<std::size_t>());
        }
        if (t.contains("stability_threshold"))
            c.stability_threshold =
                num(t["stability_threshold"], "tolerances.stability_threshold", 0.0, 10, 0.25);
        if (t.contains("convergence_order_min"))
            c.order_min = num(t["convergence_order_min"], "tolerances.convergence_order_min", 0.0, 4, 0.8);
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        if (o.contains("directory")) c.out_dir = o["directory"].get<std::string>();
        if (o.contains("formats")) {
            c.formats.clear();
            for (const auto& f : o["formats"]) c.formats.push_back(f.get<std::string>());
        }
    }
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
    if (j.contains("check_level")) c.check_level = j["check_level"].get<std::string>();
    if (c.check_level != "fast" && c.check_level != "full")
        errs.push_back("check_level: must be fast | full");
    if (j.contains("wy_source")) c.wy_source = j["wy_source"].get<std::string>();
    if (c.wy_source != "decomposition" && c.wy_source != "whiten")
        errs.push_back("wy_source: must be decomposition | whiten");

    // registry resolution errors surface as config errors too
    if (errs.empty()) {
        try {
            resolve_scalar_fn(c.drift);
            resolve_scalar_fn(c.diffusion);
            resolve_scalar_fn(c.sensor);
            resolve_test_function(c.test_function);
        } catch (const ConfigError& e) {
            errs.insert(errs.end(), e.messages.begin(), e.messages.end());
        }
    }
    if (!errs.empty()) throw ConfigError(std::move(errs));
    return c;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file: " + path});
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["schema_version"] = schema_version;
    j["grid"] = {{"T1", T1}, {"T2", T2}, {"n1", n1}, {"n2", n2}};
    j["hurst"] = {{"alpha", alpha}, {"beta", beta}};
    j["sde"] = {{"drift", fnspec_json(drift)},
                {"diffusion", fnspec_json(diffusion)},
                {"x0", {{"law", x0.law}, {"mean", x0.mean}, {"sd", x0.sd}}}};
    j["sensor"] = {{"g", fnspec_json(sensor)}, {"holder_order", holder_order}};
    json cpath = json::array();
    for (auto& [a, b] : custom_path) cpath.push_back(json::array({a, b}));
    j["filter"] = {{"particles", particles},
                   {"test_function", test_function},
                   {"path", path},
                   {"custom_path", cpath}};
    j["seeds"] = {{"master", master_seed}};
    j["tolerances"] = {{"sigma_multiplier", sigma_mult},
                       {"refinement_levels", refinement_levels},
                       {"stability_threshold", stability_threshold},
                       {"convergence_order_min", order_min}};
    j["outputs"] = {{"directory", out_dir}, {"formats", formats}};
    j["jobs"] = jobs;
    j["check_level"] = check_level;
    j["wy_source"] = wy_source;
    return j.dump(2);
}

lattice::Grid2D ExperimentConfig::make_grid() const { return {T1, T2, n1, n2}; }
gauss::HurstPair ExperimentConfig::make_hurst() const { return {alpha, beta}; }
model::RealFn ExperimentConfig::make_drift() const { return resolve_scalar_fn(drift); }
model::RealFn ExperimentConfig::make_diffusion() const { return resolve_scalar_fn(diffusion); }

model::SensorFunction ExperimentConfig::make_sensor() const {
    return {resolve_scalar_fn(sensor), holder_order};
}

filter::TestFunction ExperimentConfig::make_test_function() const {
    return resolve_test_function(test_function);
}

std::function<double(std::mt19937_64&)> ExperimentConfig::make_x0_sampler() const {
    if (x0.law == "const") {
        double m = x0.mean;
        return [m](std::mt19937_64&) { return m; };
    }
    double m = x0.mean, s = x0.sd;
    return [m, s](std::mt19937_64& gen) {
        std::normal_distribution<double> nd(m, s);
        return nd(gen);
    };
}

filter::MonotonePath ExperimentConfig::make_path(const lattice::Grid2D& g) const {
    if (path == "diagonal") return filter::MonotonePath::diagonal(g);
    if (path == "axis1") return filter::MonotonePath::axis1_first(g);
    if (path == "axis2") return filter::MonotonePath::axis2_first(g);
    return filter::MonotonePath::from_nodes(g, custom_path);
}

} // namespace ff::harness
