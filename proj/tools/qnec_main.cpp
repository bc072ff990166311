#include "qnec/calib.hpp"
#include "qnec/config.hpp"
#include "qnec/experiment.hpp"
#include "qnec/recipes.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kRecipeFailure = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<std::string> out;
    std::optional<int> order;
    std::optional<std::string> mode;
    std::optional<unsigned> threads;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Master seed for shot sampling and PEC");
    cmd->add_option("--engine", o.engine, "exact or shots")->check(CLI::IsMember({"exact", "shots"}));
    cmd->add_option("--out", o.out, "Output directory (overrides the config and QNEC_OUT_DIR)");
    cmd->add_option("--order", o.order, "QEM order")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--mode", o.mode, "Insertion mode")->check(CLI::IsMember({"direct", "ancilla"}));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

qnec::ExperimentConfig load_with(const std::string& path, const Overrides& o) {
    qnec::ExperimentConfig cfg = qnec::load_config(path);
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.shots.seed = *o.seed;
        cfg.seed_given = true;
    }
    if (o.engine) cfg.engine = qnec::engine_from_name(*o.engine);
    if (o.order) cfg.order = *o.order;
    if (o.mode) cfg.mode = qnec::insert_mode_from_name(*o.mode);
    if (o.threads) cfg.threads = *o.threads;
    if (o.out) {
        cfg.out_dir = *o.out;
    } else if (const char* env = std::getenv("QNEC_OUT_DIR"); env && *env) {
        cfg.out_dir = env;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw qnec::ConfigError(e.what(), 0, 0);
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

qnec::DecaySeries read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qnec::ConfigError("cannot read data file '" + path + "'", 0, 0);
    qnec::DecaySeries s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t = 0.0, v = 0.0;
        if (!(ls >> t >> v)) throw qnec::ConfigError("expected 'time,value'", lineno, 1);
        s.times.push_back(t);
        s.values.push_back(v);
    }
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"Noisy circuit simulation and quantum error mitigation"};
    app.require_subcommand(1);
    Overrides ov;

    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Ideal and noisy expectation values over the noise grid");
    simulate->add_option("config", config, "Experiment config (YAML)")->required();
    add_overrides(simulate, ov);

    auto* qem = app.add_subcommand("qem", "Circuit-group error mitigation over the noise grid");
    qem->add_option("config", config)->required();
    add_overrides(qem, ov);

    auto* pec = app.add_subcommand("pec-compare", "Mitigation compared against probabilistic error cancellation");
    pec->add_option("config", config)->required();
    add_overrides(pec, ov);

    auto* sweep = app.add_subcommand("sweep", "Full pipeline as configured");
    sweep->add_option("config", config)->required();
    add_overrides(sweep, ov);

    auto* manifest = app.add_subcommand("manifest", "Print the first-order circuit group");
    manifest->add_option("config", config)->required();
    add_overrides(manifest, ov);

    std::string data, kind = "t1";
    auto* calib = app.add_subcommand("calib-fit", "Fit T1 or T2 from a CSV of (seconds, <P1>)");
    calib->add_option("data", data, "CSV file")->required();
    calib->add_option("--kind", kind, "t1 or t2")->check(CLI::IsMember({"t1", "t2"}));

    std::string recipe_dir = "recipes", report_path;
    std::vector<std::string> recipe_list;
    unsigned recipe_threads = 1;
    auto* recipes = app.add_subcommand("recipes", "Run reproduction recipes and report");
    recipes->add_option("--dir", recipe_dir, "Directory of recipe JSON files");
    recipes->add_option("--recipe", recipe_list, "Specific recipe files (overrides --dir)");
    recipes->add_option("--report", report_path, "Write the JSON report here instead of stdout");
    recipes->add_option("--threads", recipe_threads, "Recipes run in parallel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](const std::string& what) {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << what << " finished in " << s << " s\n";
    };

    if (*simulate) {
        const auto cfg = load_with(config, ov);
        const std::string csv = qnec::run_simulate(cfg);
        std::filesystem::create_directories(cfg.out_dir);
        write_text((std::filesystem::path(cfg.out_dir) / cfg.csv_name).string(), csv);
        finish("simulate");
        return 0;
    }
    if (*qem || *pec || *sweep) {
        auto cfg = load_with(config, ov);
        if (*qem) cfg.pec.enabled = false;
        if (*pec) {
            cfg.pec.enabled = true;
            if (!cfg.seed_given) throw qnec::ConfigError("pec-compare needs a seed (config or --seed)", 0, 0);
        }
        const auto result = qnec::run_sweep(cfg);
        qnec::write_outputs(result, cfg, cfg.out_dir);
        finish(*qem ? "qem" : (*pec ? "pec-compare" : "sweep"));
        return 0;
    }
    if (*manifest) {
        const auto cfg = load_with(config, ov);
        const std::string text = qnec::run_manifest(cfg);
        if (ov.out) {
            std::filesystem::create_directories(*ov.out);
            write_text((std::filesystem::path(*ov.out) / cfg.manifest_name.value_or("manifest.txt")).string(), text);
        } else {
            std::cout << text;
        }
        return 0;
    }
    if (*calib) {
        const auto series = read_series(data);
        nlohmann::json j;
        if (kind == "t1") {
            const auto f = qnec::fit_t1(series);
            j = {{"t1", f.t1}, {"residual", f.residual}, {"evaluations", f.evaluations}};
        } else {
            const auto f = qnec::fit_t2(series);
            j = {{"t2", f.t2},         {"amplitudes", f.amplitudes}, {"frequencies", f.frequencies}, {"phases", f.phases},
                 {"offset", f.offset}, {"residual", f.residual},     {"degenerate", f.degenerate}};
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    if (*recipes) {
        const auto files = recipe_list.empty() ? qnec::recipe_files(recipe_dir) : recipe_list;
        std::vector<qnec::Recipe> list;
        for (const auto& f : files) list.push_back(qnec::load_recipe(f));
        const auto reports = qnec::run_all(list, recipe_threads);
        const auto j = qnec::report_json(reports);
        if (report_path.empty()) std::cout << j.dump(2) << '\n';
        else write_text(report_path, j.dump(2) + "\n");
        for (const auto& r : reports) {
            std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name;
            if (r.error) std::cerr << " error: " << *r.error;
            for (const auto& a : r.results)
                if (!a.pass) std::cerr << " [" << a.assertion.metric << ' ' << a.assertion.op << ' ' << a.assertion.expected << ']';
            std::cerr << '\n';
        }
        return j.at("pass").get<bool>() ? 0 : kRecipeFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qnec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
}
