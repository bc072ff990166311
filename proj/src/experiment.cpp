#include "qnec/experiment.hpp"

#include "qnec/algos.hpp"
#include "qnec/analysis.hpp"
#include "qnec/calib.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnec {

namespace {

constexpr std::uint64_t kPecStream = 0x5045430000000000ULL;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::json json_ratio(const std::optional<double>& v) {
    if (!v) return "saturated";
    return *v;
}

nlohmann::json json_opt(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

struct Setup {
    Circuit circuit;
    std::vector<NoiseModel> models;
    std::vector<std::optional<double>> theta;
    std::vector<std::optional<double>> tau;
};

Setup make_setup(const ExperimentConfig& cfg) {
    Setup s;
    s.circuit = experiment_circuit(cfg);
    if (cfg.device_table) {
        const DeviceTable table = load_device_table(*cfg.device_table);
        const auto n = static_cast<std::size_t>(s.circuit.n_register);
        if (table.t1.size() < n) throw std::invalid_argument("device table has fewer qubits than the circuit register");
        std::vector<double> t1(table.t1.begin(), table.t1.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<double> t2;
        if (cfg.noise_kind == NoiseKind::ADPD) t2.assign(table.t2.begin(), table.t2.begin() + static_cast<std::ptrdiff_t>(n));
        else if (cfg.noise_kind != NoiseKind::AD) throw std::invalid_argument("device tables support noise kinds ad and adpd");
        s.models.push_back(NoiseModel::t1t2(std::move(t1), std::move(t2), 1.0));
        s.theta.emplace_back();
        s.tau.emplace_back();
        return s;
    }
    s.models = cfg.noise_models();
    const bool by_theta = !cfg.theta_grid.empty();
    for (double v : cfg.grid_values()) {
        s.theta.emplace_back(by_theta ? v : theta_from_tau(v));
        s.tau.emplace_back(by_theta ? tau_from_theta(v) : v);
    }
    return s;
}

CircuitGroup manifest_group(const Circuit& c, const NoiseModel& model, const GroupOptions& opts) {
    if (model.inhomogeneous) {
        const auto& h = *model.inhomogeneous;
        return inhomogeneous_group(c, h.t1, h.t2, h.time_unit, opts);
    }
    GroupOptions g = opts;
    switch (model.kind) {
        case NoiseKind::GAD: g.n_bar = model.n_bar; return first_order_group(c, GroupKind::GAD, g);
        case NoiseKind::PD: return first_order_group(c, GroupKind::PD, g);
        case NoiseKind::Depolarizing: return first_order_group(c, GroupKind::Pauli, g);
        default: return first_order_group(c, GroupKind::AD, g);
    }
}

std::string render_csv(const ExperimentConfig& cfg, const std::vector<PointResult>& points) {
    std::ostringstream os;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    const std::string engine = cfg.engine == Engine::Exact ? "exact" : "shots";
    const std::string bench = cfg.circuit_file ? std::string("file") : cfg.benchmark.name;
    const std::string noise(cfg.device_table ? std::string("t1t2-") + std::string(noise_kind_name(cfg.noise_kind))
                                             : std::string(noise_kind_name(cfg.noise_kind)));
    for (const auto& p : points) {
        std::size_t rows = 1;
        if (p.qem.mitigated_series) rows = p.qem.mitigated_series->values.size();
        if (p.pec) rows = std::max(rows, p.pec->series.values.size());
        const std::optional<double> qem2_only = p.qem.mitigated_second_only;
        std::optional<double> mfs;
        if (qem2_only && p.qem.tau > 0.0) mfs = m_first_second(p.qem.mitigated, *qem2_only, p.qem.tau);
        for (std::size_t r = 0; r < rows; ++r) {
            double noisy = p.qem.noisy, qem = p.qem.mitigated;
            if (p.qem.noisy_series && r < p.qem.noisy_series->values.size()) noisy = p.qem.noisy_series->values[r];
            if (p.qem.mitigated_series && r < p.qem.mitigated_series->values.size()) qem = p.qem.mitigated_series->values[r];
            std::optional<double> pec;
            if (p.pec && r < p.pec->series.values.size()) pec = p.pec->series.values[r];
            os << bench << ',' << noise << ',' << engine << ',' << opt_double(p.theta_tau) << ',' << opt_double(p.tau) << ','
               << p.observable << ',' << r << ',' << format_double(p.ideal) << ',' << format_double(noisy) << ','
               << format_double(qem) << ',' << format_ratio(rt_qem(p.ideal, noisy, qem)) << ',' << format_double(p.qem.delta1)
               << ',' << opt_double(qem2_only) << ',' << opt_double(mfs) << ',' << opt_double(pec) << ','
               << (pec ? format_ratio(rt_pec_qem(p.ideal, *pec, qem)) : std::string()) << ',' << p.qem.group_circuits << '\n';
        }
    }
    return os.str();
}

std::string render_json(const ExperimentConfig& cfg, const std::vector<PointResult>& points) {
    using nlohmann::json;
    json root;
    root["schema_version"] = 1;
    root["name"] = cfg.name;
    root["benchmark"] = cfg.circuit_file ? *cfg.circuit_file : cfg.benchmark.name;
    root["noise"] = std::string(noise_kind_name(cfg.noise_kind));
    root["device_table"] = cfg.device_table ? json(*cfg.device_table) : json(nullptr);
    root["engine"] = cfg.engine == Engine::Exact ? "exact" : "shots";
    if (cfg.engine == Engine::Shots) {
        root["n_qc"] = cfg.shots.n_qc;
        root["n_samp"] = cfg.shots.n_samp;
    }
    root["seed"] = cfg.seed_given ? json(cfg.seed) : json(nullptr);
    root["order"] = cfg.order;
    root["mode"] = cfg.mode == InsertMode::Direct ? "direct" : "ancilla";
    json pts = json::array();
    for (const auto& p : points) {
        json j;
        j["theta_tau"] = json_opt(p.theta_tau);
        j["tau"] = json_opt(p.tau);
        j["observable"] = p.observable;
        j["ideal"] = p.ideal;
        j["noisy"] = p.qem.noisy;
        j["qem"] = p.qem.mitigated;
        j["rt_qem"] = json_ratio(rt_qem(p.ideal, p.qem.noisy, p.qem.mitigated));
        j["delta1"] = p.qem.delta1;
        j["group_circuits"] = p.qem.group_circuits;
        if (p.qem.delta_pd) j["delta_pd"] = *p.qem.delta_pd;
        if (p.qem.delta2) {
            j["delta2"] = *p.qem.delta2;
            j["delta1_of_delta1"] = *p.qem.delta1_of_delta1;
            j["qem_first_order"] = mitigate_first_order(p.qem.noisy, p.qem.delta1, p.qem.tau);
            j["qem2_only"] = *p.qem.mitigated_second_only;
            if (p.qem.tau > 0.0) j["m_first_second"] = m_first_second(p.qem.mitigated, *p.qem.mitigated_second_only, p.qem.tau);
        }
        std::vector<double> qem_values{p.qem.mitigated};
        if (p.qem.mitigated_series) {
            qem_values = p.qem.mitigated_series->values;
            j["noisy_std_error"] = p.qem.noisy_series->std_error();
            j["qem_std_error"] = p.qem.mitigated_series->std_error();
            j["noisy_variance"] = p.qem.noisy_series->variance();
            j["qem_variance"] = p.qem.mitigated_series->variance();
        }
        j["mse_qem"] = mse(qem_values, p.ideal);
        if (p.pec) {
            const auto& v = p.pec->series.values;
            j["pec_mean"] = p.pec->series.mean();
            j["pec_std_error"] = p.pec->series.std_error();
            j["pec_gamma_total"] = p.pec->gamma_total;
            j["pec_sites"] = p.pec->sites;
            j["mse_pec"] = mse(v, p.ideal);
            std::size_t wins = 0;
            const double qem_err = std::abs(p.qem.mitigated - p.ideal);
            for (double x : v) {
                const auto rt = rt_pec_qem(p.ideal, x, p.qem.mitigated);
                if (rt ? *rt > 1.0 : std::abs(x - p.ideal) > qem_err) ++wins;
            }
            j["frac_rt_pec_qem_gt1"] = static_cast<double>(wins) / static_cast<double>(v.size());
        }
        pts.push_back(std::move(j));
    }
    root["points"] = std::move(pts);
    return root.dump(2) + "\n";
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_ratio(const std::optional<double>& v) { return v ? format_double(*v) : std::string("saturated"); }

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{"benchmark", "noise",    "engine",    "theta_tau",      "tau",
                                               "observable", "sample",  "ideal",     "noisy",          "qem",
                                               "rt_qem",    "delta1",   "qem2_only", "m_first_second", "pec",
                                               "rt_pec_qem", "group_circuits"};
    return cols;
}

Circuit experiment_circuit(const ExperimentConfig& cfg) {
    Circuit c = cfg.circuit_file ? circuit_from_text(read_file(*cfg.circuit_file)) : build(cfg.benchmark);
    if (cfg.device_table) c = with_device_durations(c, load_device_table(*cfg.device_table));
    return c;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const Setup setup = make_setup(cfg);
    const Circuit& c = setup.circuit;
    const MaxCutGraph* graph = cfg.benchmark.name.rfind("qaoa", 0) == 0 ? &cfg.benchmark.graph : nullptr;

    std::vector<Observable> observables;
    for (const auto& name : cfg.observables) observables.push_back(named_observable(name, c.n_register, graph));

    QemOptions qo;
    qo.order = cfg.order;
    qo.group.mode = cfg.mode;
    qo.eval.engine = cfg.engine;
    qo.eval.shots = cfg.shots;
    qo.eval.threads = cfg.threads;

    SweepResult out;
    for (std::size_t g = 0; g < setup.models.size(); ++g) {
        for (std::size_t k = 0; k < observables.size(); ++k) {
            const Observable& o = observables[k];
            // rotations run as noisy layers; the group is built on the measured circuit
            const Circuit mc = measured_circuit(c, o);
            const Observable diag = make_observable(o.name, o.matrix);
            const std::uint64_t point = g * observables.size() + k;
            QemOptions opts = qo;
            opts.eval.stream_base = point << 40;
            PointResult p;
            p.theta_tau = setup.theta[g];
            p.tau = setup.tau[g];
            p.observable = o.name;
            p.qem = run_qem(mc, diag, setup.models[g], opts);
            p.ideal = *p.qem.ideal;
            if (cfg.pec.enabled) {
                p.pec = pec_sample(mc, diag, setup.models[g], cfg.pec.m, cfg.pec.repetitions,
                                   derive_seed(cfg.seed, kPecStream, point), cfg.threads);
            }
            out.points.push_back(std::move(p));
        }
    }
    out.csv = render_csv(cfg, out.points);
    out.json = render_json(cfg, out.points);
    if (cfg.manifest_name) {
        GroupOptions gopt;
        gopt.mode = cfg.mode;
        out.manifest = group_manifest(manifest_group(measured_circuit(c, observables.front()), setup.models.front(), gopt));
    }
    return out;
}

std::string run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const Setup setup = make_setup(cfg);
    const MaxCutGraph* graph = cfg.benchmark.name.rfind("qaoa", 0) == 0 ? &cfg.benchmark.graph : nullptr;
    ShotConfig shots = cfg.shots;
    std::ostringstream os;
    os << "theta_tau,tau,observable,ideal,noisy\n";
    for (std::size_t g = 0; g < setup.models.size(); ++g) {
        for (std::size_t k = 0; k < cfg.observables.size(); ++k) {
            const Observable o = named_observable(cfg.observables[k], setup.circuit.n_register, graph);
            const Circuit mc = measured_circuit(setup.circuit, o);
            const Observable diag = make_observable(o.name, o.matrix);
            const double ideal = circuit_expectation(mc, diag, NoiseModel::none());
            const double noisy = cfg.engine == Engine::Exact
                                     ? circuit_expectation(mc, diag, setup.models[g])
                                     : estimate_expectation(mc, diag, setup.models[g], shots, g * cfg.observables.size() + k).mean();
            os << opt_double(setup.theta[g]) << ',' << opt_double(setup.tau[g]) << ',' << o.name << ',' << format_double(ideal)
               << ',' << format_double(noisy) << '\n';
        }
    }
    return os.str();
}

std::string run_manifest(const ExperimentConfig& cfg) {
    const Setup setup = make_setup(cfg);
    const MaxCutGraph* graph = cfg.benchmark.name.rfind("qaoa", 0) == 0 ? &cfg.benchmark.graph : nullptr;
    const Observable o = named_observable(cfg.observables.front(), setup.circuit.n_register, graph);
    GroupOptions gopt;
    gopt.mode = cfg.mode;
    return group_manifest(manifest_group(measured_circuit(setup.circuit, o), setup.models.front(), gopt));
}

void write_outputs(const SweepResult& r, const ExperimentConfig& cfg, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / cfg.csv_name, r.csv);
    write_file(dir / cfg.json_name, r.json);
    if (r.manifest && cfg.manifest_name) write_file(dir / *cfg.manifest_name, *r.manifest);
}

}  // namespace qnec
