#include "gp/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gp/errors.hpp"
#include "json.hpp"

namespace gp {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key \"" + item.key() + "\" in " +
                              section);
}

double require_number(const json& obj, const std::string& section,
                      const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("missing key \"" + key + "\" in " + section);
    if (!obj[key].is_number())
        throw ConfigError("key \"" + key + "\" in " + section +
                          " must be a number");
    return obj[key].get<double>();
}

std::vector<double> require_number_list(const json& obj,
                                        const std::string& section,
                                        const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("missing key \"" + key + "\" in " + section);
    if (!obj[key].is_array())
        throw ConfigError("key \"" + key + "\" in " + section +
                          " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number())
            throw ConfigError("key \"" + key + "\" in " + section +
                              " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::size_t require_count(const json& obj, const std::string& section,
                          const std::string& key) {
    const double v = require_number(obj, section, key);
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw ConfigError("key \"" + key + "\" in " + section +
                          " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

void parse_kernel(const json& k, RunConfig& cfg) {
    if (!k.is_object()) throw ConfigError("\"kernel\" must be an object");
    if (!k.contains("type") || !k["type"].is_string())
        throw ConfigError("kernel needs a string \"type\"");
    const std::string type = k["type"].get<std::string>();

    try {
        if (type == "finite_list") {
            reject_unknown_keys(k, "kernel",
                                {"type", "amplitudes", "rates", "terms"});
            auto a = require_number_list(k, "kernel", "amplitudes");
            auto b = require_number_list(k, "kernel", "rates");
            cfg.family = KernelFamily::finite_list(std::move(a), std::move(b));
            const std::size_t M = k.contains("terms")
                                      ? require_count(k, "kernel", "terms")
                                      : cfg.family->max_terms();
            cfg.kernel = cfg.family->instantiate(M);
        } else if (type == "power_law") {
            reject_unknown_keys(k, "kernel",
                                {"type", "A", "gamma", "c", "beta", "terms"});
            cfg.family = KernelFamily::power_law(
                require_number(k, "kernel", "A"),
                require_number(k, "kernel", "gamma"),
                require_number(k, "kernel", "c"),
                require_number(k, "kernel", "beta"));
            cfg.kernel =
                cfg.family->instantiate(require_count(k, "kernel", "terms"));
        } else if (type == "log_rates") {
            reject_unknown_keys(k, "kernel", {"type", "A", "gamma", "terms"});
            cfg.family =
                KernelFamily::log_rates(require_number(k, "kernel", "A"),
                                        require_number(k, "kernel", "gamma"));
            cfg.kernel =
                cfg.family->instantiate(require_count(k, "kernel", "terms"));
        } else {
            throw ConfigError("unknown kernel type \"" + type + "\"");
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid kernel: ") + e.what());
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(root, "config root",
                        {"kernel", "modes", "branches", "tolerances",
                         "pair_box_eps", "output", "simulate", "sweep"});

    RunConfig cfg;
    if (!root.contains("kernel")) throw ConfigError("missing \"kernel\" section");
    parse_kernel(root["kernel"], cfg);

    cfg.branches = cfg.kernel.size() - 1;
    if (root.contains("modes")) {
        const json& m = root["modes"];
        if (!m.is_object()) throw ConfigError("\"modes\" must be an object");
        reject_unknown_keys(m, "modes", {"n_min", "n_max"});
        cfg.n_min = static_cast<unsigned>(require_count(m, "modes", "n_min"));
        cfg.n_max = static_cast<unsigned>(require_count(m, "modes", "n_max"));
    }
    if (cfg.n_min < 1) throw ConfigError("n_min must be >= 1");
    if (cfg.n_max < cfg.n_min) throw ConfigError("n_max must be >= n_min");

    if (root.contains("branches")) {
        cfg.branches = require_count(root, "config root", "branches");
        if (cfg.branches + 1 > cfg.kernel.size())
            throw ConfigError("branches exceeds M-1 for the stored kernel");
    }

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        if (!t.is_object()) throw ConfigError("\"tolerances\" must be an object");
        reject_unknown_keys(t, "tolerances", {"tol_root", "integrator"});
        if (t.contains("tol_root"))
            cfg.tol_root = require_number(t, "tolerances", "tol_root");
        if (t.contains("integrator"))
            cfg.integrator_tol = require_number(t, "tolerances", "integrator");
    }
    if (!(cfg.tol_root > 0.0) || !(cfg.integrator_tol > 0.0))
        throw ConfigError("tolerances must be positive");

    if (root.contains("pair_box_eps")) {
        cfg.pair_box_eps = require_number(root, "config root", "pair_box_eps");
    }
    if (!(cfg.pair_box_eps > 0.0 && cfg.pair_box_eps < 1.0))
        throw ConfigError("pair_box_eps must be in (0, 1)");

    if (root.contains("output")) {
        const json& o = root["output"];
        if (!o.is_object()) throw ConfigError("\"output\" must be an object");
        reject_unknown_keys(o, "output", {"dir", "format"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string())
                throw ConfigError("output dir must be a string");
            cfg.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string())
                throw ConfigError("output format must be a string");
            const std::string f = o["format"].get<std::string>();
            if (f == "csv")
                cfg.format = RunConfig::Format::Csv;
            else if (f == "json")
                cfg.format = RunConfig::Format::Json;
            else
                throw ConfigError("output format must be csv or json");
        }
    }

    if (root.contains("simulate")) {
        const json& s = root["simulate"];
        if (!s.is_object()) throw ConfigError("\"simulate\" must be an object");
        reject_unknown_keys(s, "simulate",
                            {"xi", "t_end", "grid_points", "x_samples"});
        cfg.xi = require_number_list(s, "simulate", "xi");
        cfg.t_end = require_number(s, "simulate", "t_end");
        if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
        if (s.contains("grid_points")) {
            cfg.grid_points = require_count(s, "simulate", "grid_points");
            if (cfg.grid_points < 2)
                throw ConfigError("grid_points must be at least 2");
        }
        if (s.contains("x_samples"))
            cfg.x_samples = require_number_list(s, "simulate", "x_samples");
    }

    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        if (!s.is_object()) throw ConfigError("\"sweep\" must be an object");
        reject_unknown_keys(s, "sweep", {"j"});
        cfg.sweep_j = require_count(s, "sweep", "j");
        if (cfg.sweep_j < 1) throw ConfigError("sweep j must be >= 1");
        if (cfg.sweep_j > cfg.branches && cfg.kernel.size() > 1)
            throw ConfigError("sweep j exceeds the branch count");
    }

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace gp
