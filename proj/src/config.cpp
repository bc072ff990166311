#include "qnec/config.hpp"

#include "yaml_util.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace qnec {

ConfigError::ConfigError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : msg),
      line_(line),
      column_(column) {}

InsertMode insert_mode_from_name(const std::string& s) {
    if (s == "direct") return InsertMode::Direct;
    if (s == "ancilla") return InsertMode::Ancilla;
    throw std::invalid_argument("unknown insertion mode '" + s + "' (expected direct or ancilla)");
}

Engine engine_from_name(const std::string& s) {
    if (s == "exact") return Engine::Exact;
    if (s == "shots") return Engine::Shots;
    throw std::invalid_argument("unknown engine '" + s + "' (expected exact or shots)");
}

std::vector<double> ExperimentConfig::grid_values() const { return theta_grid.empty() ? tau_grid : theta_grid; }

std::vector<NoiseModel> ExperimentConfig::noise_models() const {
    std::vector<NoiseModel> out;
    const bool by_theta = !theta_grid.empty();
    for (double v : grid_values()) {
        const double tau = by_theta ? tau_from_theta(v) : v;
        switch (noise_kind) {
            case NoiseKind::None: out.push_back(NoiseModel::none()); break;
            case NoiseKind::AD: out.push_back(NoiseModel::amplitude_damping(tau)); break;
            case NoiseKind::GAD: out.push_back(NoiseModel::generalized_ad(tau, n_bar)); break;
            case NoiseKind::PD: out.push_back(NoiseModel::phase_damping(tau)); break;
            case NoiseKind::ADPD: out.push_back(NoiseModel::ad_pd(tau, tau_pd_ratio * tau)); break;
            case NoiseKind::Depolarizing: out.push_back(NoiseModel::depolarizing(p_depol_ratio * tau)); break;
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (observables.empty()) throw std::invalid_argument("config: at least one observable is required");
    if (!device_table) {
        if (theta_grid.empty() && tau_grid.empty()) throw std::invalid_argument("config: noise grid is empty");
        if (!theta_grid.empty() && !tau_grid.empty()) throw std::invalid_argument("config: give either theta or tau, not both");
        for (double v : grid_values())
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("config: grid values must be finite and >= 0");
        for (const auto& m : noise_models()) m.validate();
    }
    if (engine == Engine::Shots) {
        if (!seed_given) throw std::invalid_argument("config: a seed is required for the shots engine");
        shots.validate();
    }
    if (order != 1 && order != 2) throw std::invalid_argument("config: order must be 1 or 2");
    if (order == 2 && (noise_kind != NoiseKind::AD || device_table)) {
        throw std::invalid_argument("config: second order needs homogeneous ad noise");
    }
    if (pec.enabled) {
        if (noise_kind != NoiseKind::AD || device_table) throw std::invalid_argument("config: pec needs homogeneous ad noise");
        if (pec.m < 1 || pec.repetitions < 1) throw std::invalid_argument("config: pec m and repetitions must be >= 1");
        if (!seed_given) throw std::invalid_argument("config: a seed is required for pec");
    }
    if (csv_name.empty() || json_name.empty()) throw std::invalid_argument("config: output file names must be nonempty");
}

namespace {

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!node.IsMap()) throw yaml::error_at(node, "'" + where + "' must be a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) throw yaml::error_at(kv.first, "unknown key '" + key + "' in " + where);
    }
}

// Either a list of values or {start, step, count}.
std::vector<double> parse_grid(const YAML::Node& n, const std::string& what) {
    if (n.IsSequence()) return yaml::as_list<double>(n, what);
    check_keys(n, {"start", "step", "count"}, what);
    const double start = yaml::get_or<double>(n, "start", 0.0);
    const double step = yaml::as<double>(yaml::require(n, "step"), "step");
    const int count = yaml::as<int>(yaml::require(n, "count"), "count");
    if (count < 1) throw yaml::error_at(n, "'count' must be >= 1");
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
    return out;
}

DecomposeStyle style_from(const YAML::Node& n) {
    const auto s = yaml::as<std::string>(n, "style");
    if (s == "direct") return DecomposeStyle::Direct;
    if (s == "native") return DecomposeStyle::Native;
    throw yaml::error_at(n, "style must be direct or native");
}

template <class F>
auto wrap(const YAML::Node& n, F f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw yaml::error_at(n, e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    const YAML::Node root = yaml::parse(text);
    if (!root || root.IsNull()) throw ConfigError(origin + ": empty configuration", 0, 0);
    check_keys(root, {"name", "benchmark", "circuit_file", "observables", "noise", "engine", "qem", "pec", "threads", "output"},
               "configuration");
    ExperimentConfig cfg;
    cfg.name = yaml::get_or<std::string>(root, "name", cfg.name);

    if (const auto b = root["benchmark"]) {
        check_keys(b, {"name", "depth", "reps", "style", "qaoa_params", "graph"}, "benchmark");
        cfg.benchmark.name = yaml::as<std::string>(yaml::require(b, "name"), "benchmark.name");
        cfg.benchmark.depth = yaml::get_or<int>(b, "depth", cfg.benchmark.depth);
        cfg.benchmark.reps = yaml::get_or<int>(b, "reps", cfg.benchmark.reps);
        if (b["style"]) cfg.benchmark.style = style_from(b["style"]);
        if (const auto q = b["qaoa_params"]) {
            const auto v = yaml::as_list<double>(q, "qaoa_params");
            if (v.size() != 4) throw yaml::error_at(q, "qaoa_params needs 4 angles");
            std::copy(v.begin(), v.end(), cfg.benchmark.qaoa.begin());
        }
        if (const auto g = b["graph"]) {
            check_keys(g, {"n_vertices", "edges"}, "graph");
            MaxCutGraph graph;
            graph.n_vertices = yaml::as<int>(yaml::require(g, "n_vertices"), "n_vertices");
            const auto edges = yaml::require(g, "edges");
            if (!edges.IsSequence()) throw yaml::error_at(edges, "'edges' must be a list");
            for (const auto& e : edges) {
                if (!e.IsSequence() || (e.size() != 2 && e.size() != 3)) throw yaml::error_at(e, "edge must be [a, b] or [a, b, w]");
                graph.edges.emplace_back(yaml::as<int>(e[0], "edge"), yaml::as<int>(e[1], "edge"),
                                         e.size() == 3 ? yaml::as<double>(e[2], "edge weight") : 1.0);
            }
            wrap(g, [&] {
                graph.validate();
                return 0;
            });
            cfg.benchmark.graph = graph;
        }
    }
    if (const auto f = root["circuit_file"]) cfg.circuit_file = yaml::as<std::string>(f, "circuit_file");
    if (!root["benchmark"] && !cfg.circuit_file) throw yaml::error_at(root, "missing key 'benchmark' (or 'circuit_file')");

    const auto obs = yaml::require(root, "observables");
    cfg.observables = yaml::as_list<std::string>(obs, "observables");

    const auto noise = yaml::require(root, "noise");
    check_keys(noise, {"kind", "theta", "tau", "n_bar", "tau_pd_ratio", "p_ratio", "device_table"}, "noise");
    {
        const auto k = yaml::require(noise, "kind");
        const auto kind = noise_kind_from_name(yaml::as<std::string>(k, "kind"));
        if (!kind) throw yaml::error_at(k, "unknown noise kind");
        cfg.noise_kind = *kind;
    }
    if (const auto t = noise["theta"]) cfg.theta_grid = parse_grid(t, "theta");
    if (const auto t = noise["tau"]) cfg.tau_grid = parse_grid(t, "tau");
    cfg.n_bar = yaml::get_or<double>(noise, "n_bar", 0.0);
    cfg.tau_pd_ratio = yaml::get_or<double>(noise, "tau_pd_ratio", 0.0);
    cfg.p_depol_ratio = yaml::get_or<double>(noise, "p_ratio", 1.0);
    if (const auto d = noise["device_table"]) cfg.device_table = yaml::as<std::string>(d, "device_table");

    if (const auto e = root["engine"]) {
        check_keys(e, {"kind", "n_qc", "n_samp", "seed"}, "engine");
        if (e["kind"]) cfg.engine = wrap(e["kind"], [&] { return engine_from_name(yaml::as<std::string>(e["kind"], "kind")); });
        cfg.shots.n_qc = yaml::get_or<std::uint64_t>(e, "n_qc", cfg.shots.n_qc);
        cfg.shots.n_samp = yaml::get_or<std::uint64_t>(e, "n_samp", cfg.shots.n_samp);
        if (e["seed"]) {
            cfg.seed = yaml::as<std::uint64_t>(e["seed"], "seed");
            cfg.seed_given = true;
        }
    }
    cfg.shots.seed = cfg.seed;

    if (const auto q = root["qem"]) {
        check_keys(q, {"order", "mode"}, "qem");
        cfg.order = yaml::get_or<int>(q, "order", 1);
        if (q["mode"]) cfg.mode = wrap(q["mode"], [&] { return insert_mode_from_name(yaml::as<std::string>(q["mode"], "mode")); });
    }
    if (const auto p = root["pec"]) {
        check_keys(p, {"enabled", "m", "repetitions"}, "pec");
        cfg.pec.enabled = yaml::get_or<bool>(p, "enabled", true);
        cfg.pec.m = yaml::get_or<std::size_t>(p, "m", cfg.pec.m);
        cfg.pec.repetitions = yaml::get_or<std::size_t>(p, "repetitions", cfg.pec.repetitions);
    }
    cfg.threads = yaml::get_or<unsigned>(root, "threads", 1U);
    if (const auto o = root["output"]) {
        check_keys(o, {"dir", "csv", "json", "manifest"}, "output");
        cfg.out_dir = yaml::get_or<std::string>(o, "dir", cfg.out_dir);
        cfg.csv_name = yaml::get_or<std::string>(o, "csv", cfg.csv_name);
        cfg.json_name = yaml::get_or<std::string>(o, "json", cfg.json_name);
        if (o["manifest"]) cfg.manifest_name = yaml::as<std::string>(o["manifest"], "manifest");
    }
    wrap(root, [&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = parse_config(ss.str(), path);
    // relative input paths are taken from the config file's directory
    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::optional<std::string>& p) {
        if (p && std::filesystem::path(*p).is_relative()) p = (base / *p).string();
    };
    resolve(cfg.device_table);
    resolve(cfg.circuit_file);
    return cfg;
}

}  // namespace qnec
