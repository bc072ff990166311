#include "qnec/algos.hpp"
#include "qnec/analysis.hpp"
#include "qnec/calib.hpp"
#include "qnec/experiment.hpp"
#include "qnec/pec.hpp"
#include "qnec/qem.hpp"
#include "qnec/recipes.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qnec {

namespace {

using nlohmann::json;

template <class T>
T param(const json& p, const char* key, T fallback) {
    return p.contains(key) ? p.at(key).get<T>() : fallback;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string key_of(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Saturated ratios count as unbounded improvement.
double ratio_or_inf(const std::optional<double>& r) { return r ? *r : kInf; }

std::vector<double> theta_list(const json& p, const char* key, std::vector<double> fallback) {
    return p.contains(key) ? p.at(key).get<std::vector<double>>() : fallback;
}

// Random single-qubit density matrices (mixed, with complex coherences).
std::vector<CMatrix> random_qubit_states(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < n; ++i) {
        double x = g(rng), y = g(rng), z = g(rng);
        const double r = std::cbrt(u(rng)) / std::sqrt(x * x + y * y + z * z);
        x *= r;
        y *= r;
        z *= r;
        CMatrix m(2, 2);
        m << cplx(0.5 * (1 + z), 0), cplx(0.5 * x, -0.5 * y), cplx(0.5 * x, 0.5 * y), cplx(0.5 * (1 - z), 0);
        out.push_back(m);
    }
    return out;
}

CMatrix ad_analytic(const CMatrix& r, double theta) {
    const double e = std::pow(std::cos(theta / 2.0), 2);
    CMatrix out(2, 2);
    out(0, 0) = r(0, 0) + r(1, 1) * (1.0 - e);
    out(0, 1) = r(0, 1) * std::sqrt(e);
    out(1, 0) = r(1, 0) * std::sqrt(e);
    out(1, 1) = r(1, 1) * e;
    return out;
}

Metrics probe_channel_exactness(const json& p) {
    const int points = param(p, "points", 50);
    const double theta_max = param(p, "theta_max", 3.0);
    const auto states = random_qubit_states(param<std::size_t>(p, "states", 20), param<std::uint64_t>(p, "seed", 11));
    double err_kraus = 0.0, err_gadget = 0.0;
    for (int i = 1; i <= points; ++i) {
        const double theta = theta_max * i / points;
        const auto model = NoiseModel::amplitude_damping_theta(theta);
        Circuit gadget(2);
        gadget.n_register = 1;
        gadget.add(Gate(GateKind::CRy, {0, 1}, theta)).add(Gate(GateKind::CX, {1, 0}));
        for (const auto& s : states) {
            const CMatrix expected = ad_analytic(s, theta);
            CMatrix rho = s;
            apply_noise_all(rho, model, 1, 1.0);
            err_kraus = std::max(err_kraus, (rho - expected).cwiseAbs().maxCoeff());
            CMatrix anc0 = CMatrix::Zero(2, 2);
            anc0(0, 0) = 1.0;
            const auto full = evolve(gadget, NoiseModel::none(), DensityMatrix::from_matrix(kron(anc0, s)));
            const auto reduced = partial_trace(full.rho, 1);
            err_gadget = std::max(err_gadget, (reduced.m - expected).cwiseAbs().maxCoeff());
        }
    }
    return {{"max_error_kraus", err_kraus}, {"max_error_gadget", err_gadget}};
}

double completeness_error(const std::vector<CMatrix>& ks) {
    CMatrix s = CMatrix::Zero(2, 2);
    for (const auto& k : ks) s += k.adjoint() * k;
    return (s - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
}

Metrics probe_kraus_completeness(const json& p) {
    const int points = param(p, "points", 50);
    double ad = 0.0, gad = 0.0, pd = 0.0, dep = 0.0, adpd = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double theta = 3.0 * i / points;
        const double tau = tau_from_theta(theta);
        const auto a = ad_kraus(theta);
        ad = std::max(ad, completeness_error({a[0], a[1]}));
        for (double nb : {0.05, 0.5, 2.0}) gad = std::max(gad, completeness_error(gad_kraus(tau, nb)));
        pd = std::max(pd, completeness_error(pd_kraus(tau)));
        dep = std::max(dep, completeness_error(depolarizing_kraus(0.75 * i / points)));
        adpd = std::max(adpd, completeness_error(qubit_kraus(NoiseModel::ad_pd(tau, 0.5 * tau), 0, 1.0)));
    }
    return {{"ad", ad}, {"gad", gad}, {"pd", pd}, {"depolarizing", dep}, {"adpd", adpd},
            {"max_error", std::max({ad, gad, pd, dep, adpd})}};
}

std::size_t positive_layers(const Circuit& c) {
    std::size_t n = 0;
    for (const auto& l : c.layers) n += l.duration > 0.0 ? 1 : 0;
    return n;
}

Metrics probe_group_size(const json&) {
    Metrics m;
    double gap = 0.0;
    auto record = [&](const std::string& key, const Circuit& c) {
        for (auto mode : {InsertMode::Direct, InsertMode::Ancilla}) {
            GroupOptions o;
            o.mode = mode;
            const auto g = first_order_group(c, GroupKind::AD, o);
            const double count = static_cast<double>(g.distinct_circuits());
            const double formula = 3.0 * static_cast<double>(positive_layers(c) * static_cast<std::size_t>(c.n_qubits)) + 1.0;
            gap = std::max(gap, std::abs(count - formula));
            if (mode == InsertMode::Direct) m[key] = count;
            else m[key + "_ancilla"] = count;
        }
    };
    for (int d : {9, 17, 33}) record("pre1_d" + std::to_string(d), build_pre1(d));
    for (int d : {9, 17}) record("pre2_d" + std::to_string(d), build_pre2(d));
    record("qaa3", build_qaa3());
    record("qaoa", build_qaoa());
    m["max_formula_gap"] = gap;
    return m;
}

CMatrix layer_unitary(const Circuit& c, std::size_t k) {
    Circuit one(c.n_qubits);
    one.n_register = c.n_register;
    one.layers = {c.layers[k]};
    return circuit_unitary(one);
}

// Sum over positive-duration layers of duration * Tr(O U_{>k} L[rho_k] U_{>k}^dagger) at zero noise.
double lindblad_insertion_delta(const Circuit& c, const CMatrix& o) {
    const std::size_t d = c.layers.size();
    std::vector<CMatrix> u(d);
    for (std::size_t k = 0; k < d; ++k) u[k] = layer_unitary(c, k);
    CMatrix rho = DensityMatrix::ground(c.n_qubits).m;
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        rho = u[k] * rho * u[k].adjoint();
        if (!(c.layers[k].duration > 0.0)) continue;
        CMatrix x = lindblad(DensityMatrix::from_matrix(rho), LindbladKind::AD);
        for (std::size_t l = k + 1; l < d; ++l) x = u[l] * x * u[l].adjoint();
        total += c.layers[k].duration * (o * x).trace().real();
    }
    return total;
}

struct NamedCircuit {
    std::string name;
    Circuit circuit;
    std::vector<std::string> observables;
};

std::vector<NamedCircuit> small_benchmarks() {
    return {
        {"pre1", build_pre1(9), {"Z", "X"}},
        {"pre2", build_pre2(9), {"ZI", "IZ", "P11"}},
        {"qaa3", build_qaa3(), {"P110", "P111", "ZZI"}},
        {"qaa2_direct", build_qaa2(DecomposeStyle::Direct), {"P00", "ZI"}},
        {"qaa2_native", build_qaa2(DecomposeStyle::Native), {"P00", "IZ"}},
        {"imp2_direct", build_imp2(3, DecomposeStyle::Direct), {"ZZ", "P11"}},
        {"imp2_native", build_imp2(3, DecomposeStyle::Native), {"ZZ", "P11"}},
    };
}

Metrics probe_first_order_fidelity(const json&) {
    double worst = 0.0;
    Metrics m;
    for (const auto& b : small_benchmarks()) {
        double local = 0.0;
        for (const auto& name : b.observables) {
            const Observable ob = named_observable(name, b.circuit.n_register);
            const Circuit mc = measured_circuit(b.circuit, ob);
            const double oracle = lindblad_insertion_delta(mc, ob.matrix);
            const Observable diag = make_observable(name, ob.matrix);
            for (auto mode : {InsertMode::Direct, InsertMode::Ancilla}) {
                GroupOptions go;
                go.mode = mode;
                const double v = delta_expectation(first_order_group(mc, GroupKind::AD, go), diag, NoiseModel::none());
                local = std::max(local, std::abs(v - oracle));
            }
        }
        m[b.name] = local;
        worst = std::max(worst, local);
    }
    m["max_abs_diff"] = worst;
    return m;
}

Metrics probe_residual_scaling(const json& p) {
    const int depth = param(p, "depth", 5);
    const int points = param(p, "points", 8);
    const double lo = param(p, "tau_min", 1e-3), hi = param(p, "tau_max", 3e-2);
    const Circuit c = build_pre1(depth);
    const Observable z = named_observable("Z", 1);
    std::vector<double> taus, e0, e1, e2;
    QemOptions q2;
    q2.order = 2;
    for (int i = 0; i < points; ++i) {
        const double tau = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
        const auto est = run_qem(c, z, NoiseModel::amplitude_damping(tau), q2);
        taus.push_back(tau);
        e0.push_back(std::abs(est.noisy - *est.ideal));
        e1.push_back(std::abs(mitigate_first_order(est.noisy, est.delta1, tau) - *est.ideal));
        e2.push_back(std::abs(est.mitigated - *est.ideal));
    }
    return {{"slope_noisy", loglog_slope(taus, e0)}, {"slope_first", loglog_slope(taus, e1)}, {"slope_second", loglog_slope(taus, e2)}};
}

double rt_at(const Circuit& c, const Observable& o, double theta, const QemOptions& opts = {}) {
    const Circuit mc = measured_circuit(c, o);
    const auto est = run_qem(mc, make_observable(o.name, o.matrix), NoiseModel::amplitude_damping_theta(theta), opts);
    return ratio_or_inf(rt_qem(*est.ideal, est.noisy, est.mitigated));
}

Metrics probe_pre1_rt(const json& p) {
    const auto thetas = theta_list(p, "theta", {0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3});
    const double fixed = param(p, "theta_fixed", 0.2);
    Metrics m;
    double min_rt = kInf, min_gap = kInf;
    for (const std::string name : {"X", "Z"}) {
        const Observable o = named_observable(name, 1);
        std::vector<double> at_fixed;
        for (int d : {9, 17, 33}) {
            const Circuit c = build_pre1(d);
            for (double th : thetas) min_rt = std::min(min_rt, rt_at(c, o, th));
            at_fixed.push_back(rt_at(c, o, fixed));
            m["rt_" + name + "_d" + std::to_string(d)] = at_fixed.back();
        }
        const double gap = std::min(at_fixed[0] - at_fixed[1], at_fixed[1] - at_fixed[2]);
        m["depth_order_gap_" + name] = gap;
        min_gap = std::min(min_gap, gap);
    }
    m["min_rt"] = min_rt;
    m["min_depth_order_gap"] = min_gap;
    return m;
}

Metrics probe_qaa3(const json& p) {
    const double theta = param(p, "theta", 0.2);
    const Circuit c = build_qaa3();
    Metrics m;
    for (const std::string name : {"P110", "P111"}) {
        const Observable o = named_observable(name, c.n_register);
        m["ideal_" + name] = circuit_expectation(c, o, NoiseModel::none());
        m["rt_" + name] = rt_at(c, o, theta);
    }
    return m;
}

Metrics probe_qaa2(const json& p) {
    const double theta = param(p, "theta", 0.2);
    Metrics m;
    for (auto style : {DecomposeStyle::Direct, DecomposeStyle::Native}) {
        const std::string tag = style == DecomposeStyle::Direct ? "direct" : "native";
        const Circuit c = build_qaa2(style);
        const Observable o = named_observable("P00", 2);
        m["delta1_" + tag] = delta_expectation(first_order_group(c, GroupKind::AD), o, NoiseModel::none());
        m["abs_delta1_" + tag] = std::abs(m["delta1_" + tag]);
        m["rt_" + tag] = rt_at(c, o, theta);
    }
    return m;
}

Metrics probe_qaoa(const json& p) {
    const auto thetas = theta_list(p, "theta", {0.1, 0.2, 0.3, 0.4, 0.5});
    const Circuit c = build_qaoa();
    const Observable cost = named_observable("cost", 4);
    Metrics m;
    m["ideal_cost"] = circuit_expectation(c, cost, NoiseModel::none());
    m["ideal_P0101"] = circuit_expectation(c, named_observable("P0101", 4), NoiseModel::none());
    m["ideal_P1010"] = circuit_expectation(c, named_observable("P1010", 4), NoiseModel::none());
    double min_rt = kInf;
    for (double th : thetas) {
        const double rt = rt_at(c, cost, th);
        m["rt_theta_" + key_of(th)] = rt;
        min_rt = std::min(min_rt, rt);
    }
    m["min_rt"] = min_rt;
    return m;
}

Metrics probe_shot_statistics(const json& p) {
    const double theta = param(p, "theta", 0.2);
    const int lo = param(p, "log2_min", 8), hi = param(p, "log2_max", 14);
    ShotConfig cfg;
    cfg.n_samp = param<std::uint64_t>(p, "n_samp", 100);
    cfg.seed = param<std::uint64_t>(p, "seed", 2024);
    const Circuit c = build_qaa3();
    const Observable o = named_observable("P110", c.n_register);
    const auto model = NoiseModel::amplitude_damping_theta(theta);
    const double prob = circuit_expectation(c, o, model);
    std::vector<std::pair<double, double>> pts;
    for (int e = lo; e <= hi; ++e) {
        cfg.n_qc = std::uint64_t{1} << e;
        const auto s = estimate_expectation(c, o, model, cfg, static_cast<std::uint64_t>(e));
        pts.emplace_back(static_cast<double>(cfg.n_qc), s.variance());
    }
    const double alpha = inverse_variance_fit(pts);
    const double exact = 1.0 / (prob * (1.0 - prob));
    return {{"p_noisy", prob}, {"alpha_fit", alpha}, {"alpha_exact", exact}, {"rel_dev", std::abs(alpha - exact) / exact}};
}

Metrics probe_pec_exact(const json& p) {
    const double theta = param(p, "theta", 0.2);
    const auto model = NoiseModel::amplitude_damping_theta(theta);
    double worst = 0.0;
    Metrics m;
    auto check = [&](const std::string& key, const Circuit& c, const Observable& o) {
        const double ideal = circuit_expectation(c, o, NoiseModel::none());
        const double err = std::abs(pec_exact_check(c, o, model) - ideal);
        m[key] = std::max(m[key], err);
        worst = std::max(worst, err);
    };
    for (const auto& b : small_benchmarks())
        for (const auto& name : b.observables) check(b.name, b.circuit, named_observable(name, b.circuit.n_register));
    const Circuit q = build_qaoa();
    check("qaoa", q, named_observable("cost", 4));
    check("qaoa", q, named_observable("P0101", 4));
    m["max_abs_err"] = worst;
    return m;
}

Metrics probe_pec_compare(const json& p) {
    const auto thetas = theta_list(p, "theta", {0.1, 0.2, 0.3, 0.4, 0.5});
    const std::size_t m_circuits = param<std::size_t>(p, "m", 181);
    const std::size_t reps = param<std::size_t>(p, "repetitions", 100);
    const std::uint64_t seed = param<std::uint64_t>(p, "seed", 7);
    const unsigned threads = param<unsigned>(p, "threads", 0U);
    const Circuit c = build_qaoa();
    const Observable cost = named_observable("cost", 4);
    const double ideal = circuit_expectation(c, cost, NoiseModel::none());
    Metrics m;
    double mse_failures = 0.0, frac_failures = 0.0, min_frac = kInf, min_ratio = kInf;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const auto model = NoiseModel::amplitude_damping_theta(thetas[i]);
        QemOptions qo;
        qo.compute_ideal = false;
        qo.eval.threads = threads;
        const double qem = run_qem(c, cost, model, qo).mitigated;
        const auto pec = pec_sample(c, cost, model, m_circuits, reps, derive_seed(seed, i, 0), threads);
        const double mse_qem = (qem - ideal) * (qem - ideal);
        const double mse_pec = mse(pec.series.values, ideal);
        std::size_t wins = 0;
        for (double v : pec.series.values) wins += ratio_or_inf(rt_pec_qem(ideal, v, qem)) > 1.0 ? 1 : 0;
        const double frac = static_cast<double>(wins) / static_cast<double>(reps);
        const std::string key = key_of(thetas[i]);
        m["mse_qem_theta_" + key] = mse_qem;
        m["mse_pec_theta_" + key] = mse_pec;
        m["frac_theta_" + key] = frac;
        mse_failures += mse_qem < mse_pec ? 0.0 : 1.0;
        frac_failures += frac > 0.5 ? 0.0 : 1.0;
        min_frac = std::min(min_frac, frac);
        min_ratio = std::min(min_ratio, mse_pec / mse_qem);
    }
    m["mse_failures"] = mse_failures;
    m["frac_failures"] = frac_failures;
    m["min_frac"] = min_frac;
    m["min_mse_ratio"] = min_ratio;
    return m;
}

const std::vector<double> kBelemT1{62.93e-6, 62.31e-6, 45.03e-6, 61.95e-6, 90.69e-6};
const std::vector<double> kBelemT2{50.00e-6, 89.38e-6, 50.00e-6, 78.29e-6, 50.00e-6};

Metrics probe_inhomogeneous_reduction(const json& p) {
    const double unit = param(p, "time_unit", 35.56e-9);
    double site_diff = 0.0, original_diff = 0.0, value_diff = 0.0;
    for (const Circuit& c : {build_pre2(9), build_qaa3(), build_qaa2(DecomposeStyle::Native)}) {
        const auto n = static_cast<std::size_t>(c.n_qubits);
        std::vector<double> t1(kBelemT1.begin(), kBelemT1.begin() + static_cast<std::ptrdiff_t>(n)), t2;
        for (double v : t1) t2.push_back(2.0 * v);
        const auto inh = inhomogeneous_group(c, t1, t2, unit);
        const auto ad = first_order_group(c, GroupKind::AD);
        std::map<std::string, double> ad_coeff;
        for (const auto& mbr : ad.members) ad_coeff[mbr.label] = mbr.coefficient;
        double expected_original = 0.0;
        for (const auto& l : c.layers)
            if (l.duration > 0.0)
                for (std::size_t j = 0; j < n; ++j) expected_original += -0.25 * l.duration * unit / t1[j];
        for (const auto& mbr : inh.members) {
            if (mbr.order == 0) {
                original_diff = std::max(original_diff, std::abs(mbr.coefficient - expected_original));
                continue;
            }
            // label "layer:qubit:OP"
            const auto first = mbr.label.find(':');
            const int q = std::stoi(mbr.label.substr(first + 1));
            const auto it = ad_coeff.find(mbr.label);
            const double expected = it == ad_coeff.end() ? 0.0 : unit / t1[static_cast<std::size_t>(q)] * it->second;
            site_diff = std::max(site_diff, std::abs(mbr.coefficient - expected));
        }
        // uniform T1: whole-group value equals tau times the homogeneous estimate
        const std::vector<double> u1(n, t1[0]), u2(n, 2.0 * t1[0]);
        const auto uni = inhomogeneous_group(c, u1, u2, unit);
        const Observable o = named_observable(std::string(n, 'Z'), c.n_register);
        const double tau = unit / t1[0];
        const double lhs = delta_expectation(uni, o, NoiseModel::none());
        const double rhs = tau * delta_expectation(ad, o, NoiseModel::none());
        value_diff = std::max(value_diff, std::abs(lhs - rhs));
    }
    return {{"max_site_diff", site_diff}, {"original_diff", original_diff}, {"value_diff", value_diff}};
}

T2Model belem_t2_model(std::size_t j) {
    T2Model m;
    m.t2 = kBelemT2[j];
    m.amplitudes = {0.32, 0.14};
    m.frequencies = {0.10e6, 0.155e6};
    m.phases = {0.05 * static_cast<double>(j), -0.4};
    m.offset = 0.5;
    return m;
}

Metrics probe_calibration(const json& p) {
    const double sigma = param(p, "sigma", 0.02);
    const std::uint64_t seed = param<std::uint64_t>(p, "seed", 99);
    double t1_clean = 0.0, t2_clean = 0.0, t1_noisy = 0.0, t2_noisy = 0.0;
    const auto g1 = t1_time_grid();
    const auto g2 = t2_time_grid();
    for (std::size_t j = 0; j < kBelemT1.size(); ++j) {
        const double t1 = kBelemT1[j];
        const auto model = belem_t2_model(j);
        t1_clean = std::max(t1_clean, std::abs(fit_t1(synthetic_t1(t1, g1)).t1 - t1) / t1);
        t2_clean = std::max(t2_clean, std::abs(fit_t2(synthetic_t2(model, g2)).t2 - model.t2) / model.t2);
        t1_noisy = std::max(t1_noisy, std::abs(fit_t1(synthetic_t1(t1, g1, sigma, seed + j)).t1 - t1) / t1);
        t2_noisy =
            std::max(t2_noisy, std::abs(fit_t2(synthetic_t2(model, g2, sigma, seed + 100 + j)).t2 - model.t2) / model.t2);
    }
    return {{"t1_rel_err_noiseless", t1_clean},
            {"t2_rel_err_noiseless", t2_clean},
            {"t1_rel_err_noisy", t1_noisy},
            {"t2_rel_err_noisy", t2_noisy},
            {"theta_tau_100ns_100us", theta_from_tau(100e-9 / 100e-6)}};
}

Metrics probe_determinism(const json& p, const std::string& base_dir) {
    const auto rel = param<std::string>(p, "config", "configs/fig16_qaoa.yaml");
    const std::filesystem::path path = std::filesystem::path(base_dir) / rel;
    ExperimentConfig cfg = load_config(path.string());
    const auto threads = p.contains("threads") ? p.at("threads").get<std::vector<unsigned>>() : std::vector<unsigned>{1, 1, 3};
    std::optional<SweepResult> first;
    double identical = 1.0;
    double runs = 0.0;
    for (unsigned t : threads) {
        cfg.threads = t;
        SweepResult r = run_sweep(cfg);
        runs += 1.0;
        if (!first) {
            first = std::move(r);
            continue;
        }
        if (r.csv != first->csv || r.json != first->json || r.manifest != first->manifest) identical = 0.0;
    }
    return {{"identical", identical}, {"runs", runs}, {"csv_bytes", static_cast<double>(first->csv.size())}};
}

using ProbeFn = std::function<Metrics(const json&, const std::string&)>;

const std::map<std::string, ProbeFn>& registry() {
    static const std::map<std::string, ProbeFn> r{
        {"channel_exactness", [](const json& p, const std::string&) { return probe_channel_exactness(p); }},
        {"kraus_completeness", [](const json& p, const std::string&) { return probe_kraus_completeness(p); }},
        {"group_size", [](const json& p, const std::string&) { return probe_group_size(p); }},
        {"first_order_fidelity", [](const json& p, const std::string&) { return probe_first_order_fidelity(p); }},
        {"residual_scaling", [](const json& p, const std::string&) { return probe_residual_scaling(p); }},
        {"pre1_rt", [](const json& p, const std::string&) { return probe_pre1_rt(p); }},
        {"qaa3", [](const json& p, const std::string&) { return probe_qaa3(p); }},
        {"qaa2", [](const json& p, const std::string&) { return probe_qaa2(p); }},
        {"qaoa", [](const json& p, const std::string&) { return probe_qaoa(p); }},
        {"shot_statistics", [](const json& p, const std::string&) { return probe_shot_statistics(p); }},
        {"pec_exact", [](const json& p, const std::string&) { return probe_pec_exact(p); }},
        {"pec_compare", [](const json& p, const std::string&) { return probe_pec_compare(p); }},
        {"inhomogeneous_reduction", [](const json& p, const std::string&) { return probe_inhomogeneous_reduction(p); }},
        {"calibration", [](const json& p, const std::string&) { return probe_calibration(p); }},
        {"determinism", [](const json& p, const std::string& base) { return probe_determinism(p, base); }},
        {"constant", [](const json& p, const std::string&) {
             Metrics m;
             for (const auto& [k, v] : p.items()) m[k] = v.get<double>();
             return m;
         }},
    };
    return r;
}

}  // namespace

Metrics run_probe(const std::string& probe, const json& params, const std::string& base_dir) {
    const auto& r = registry();
    const auto it = r.find(probe);
    if (it == r.end()) throw std::invalid_argument("unknown probe '" + probe + "'");
    return it->second(params.is_null() ? json::object() : params, base_dir);
}

std::vector<std::string> probe_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

}  // namespace qnec
