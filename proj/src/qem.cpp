#include "qnec/qem.hpp"

#include "qnec/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qnec {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string member_key(const Circuit& c) {
    std::string key = structure_key(c);
    for (const auto& p : c.postselect) key += "post " + std::to_string(p.qubit) + ' ' + std::to_string(p.outcome) + '\n';
    return key;
}

std::string site_label(const Site& s) {
    return std::to_string(s.layer) + ':' + std::to_string(s.qubit) + ':' + std::string(insert_op_name(s.op));
}

// Accumulates weighted circuits, merging members whose circuits coincide.
class GroupBuilder {
public:
    GroupBuilder(const Circuit& original, GroupKind kind, int order) {
        group_.original = original;
        group_.kind = kind;
        group_.order = order;
    }

    void add(Circuit c, double coefficient, int order, std::string label) {
        std::string key = member_key(c);
        const auto it = index_.find(key);
        if (it != index_.end()) {
            auto& m = group_.members[it->second];
            m.coefficient += coefficient;
            return;
        }
        index_.emplace(std::move(key), group_.members.size());
        group_.members.push_back(GroupMember{std::move(c), coefficient, order, group_.order, std::move(label)});
    }

    CircuitGroup finish() { return std::move(group_); }

private:
    CircuitGroup group_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::vector<WeightedRewrite> kind_terms(GroupKind kind, double n_bar) {
    switch (kind) {
        case GroupKind::AD: return {{1.0, RewriteKind::AD}};
        case GroupKind::GAD: return {{n_bar + 1.0, RewriteKind::GADEmission}, {n_bar, RewriteKind::GADAbsorption}};
        case GroupKind::PD: return {{1.0, RewriteKind::PD}};
        case GroupKind::Pauli: return {{1.0, RewriteKind::Pauli}};
        case GroupKind::Inhomogeneous: break;
    }
    throw std::invalid_argument("first_order_group: use inhomogeneous_group for per-qubit T1/T2 weights");
}

struct WeightedSite {
    double weight;
    Site site;
};

// Every (qubit, operator) pair on one layer with its rewrite weight (identity terms included).
std::vector<WeightedSite> layer_sites(const Circuit& c, std::size_t k, std::span<const WeightedRewrite> terms) {
    std::vector<WeightedSite> out;
    const double s = c.layers[k].duration;
    for (int j = 0; j < c.n_qubits; ++j) {
        for (const auto& [w, kind] : terms) {
            if (w == 0.0) continue;
            for (const auto& t : rewrite_lindblad_terms(kind)) {
                out.push_back(WeightedSite{w * s * t.coefficient, Site{k, j, t.op}});
            }
        }
    }
    return out;
}

int count_ops(const std::vector<Site>& sites) {
    return static_cast<int>(std::count_if(sites.begin(), sites.end(), [](const Site& s) { return s.op != InsertOp::Identity; }));
}

std::string join_labels(const std::vector<Site>& sites) {
    std::string out;
    for (const auto& s : sites) {
        if (s.op == InsertOp::Identity) continue;
        if (!out.empty()) out += ' ';
        out += site_label(s);
    }
    return out.empty() ? "original" : out;
}

}  // namespace

std::string_view group_kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::AD: return "ad";
        case GroupKind::GAD: return "gad";
        case GroupKind::PD: return "pd";
        case GroupKind::Pauli: return "pauli";
        case GroupKind::Inhomogeneous: return "t1t2";
    }
    return "?";
}

std::size_t CircuitGroup::distinct_circuits() const {
    std::set<std::string> keys;
    for (const auto& m : members) keys.insert(structure_key(m.circuit));
    return keys.size();
}

Circuit apply_sites(const Circuit& c, std::vector<Site> sites, InsertMode mode, const GadgetOptions& gadget) {
    std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) { return a.layer > b.layer; });
    Circuit out = c;
    std::size_t i = 0;
    while (i < sites.size()) {
        const std::size_t layer = sites[i].layer;
        std::size_t pos = layer;
        for (; i < sites.size() && sites[i].layer == layer; ++i) {
            const std::size_t before = out.layers.size();
            out = apply_insertion(out, Insertion{pos, sites[i].qubit, sites[i].op, mode}, gadget);
            pos += out.layers.size() - before;
        }
    }
    return out;
}

CircuitGroup first_order_group(const Circuit& c, std::span<const WeightedRewrite> terms, const GroupOptions& opts,
                               GroupKind kind) {
    validate_circuit(c);
    GroupBuilder b(c, kind, 1);
    b.add(c, 0.0, 0, "original");
    for (std::size_t k = 0; k < c.layers.size(); ++k) {
        if (c.layers[k].duration <= 0.0) continue;
        for (const auto& ws : layer_sites(c, k, terms)) {
            std::vector<Site> sites{ws.site};
            b.add(apply_sites(c, sites, opts.mode, opts.gadget), ws.weight, count_ops(sites), join_labels(sites));
        }
    }
    return b.finish();
}

CircuitGroup first_order_group(const Circuit& c, GroupKind kind, const GroupOptions& opts) {
    if (opts.n_bar < 0.0) throw std::invalid_argument("first_order_group: n_bar must be >= 0");
    const auto terms = kind_terms(kind, opts.n_bar);
    return first_order_group(c, terms, opts, kind);
}

CircuitGroup second_order_group(const Circuit& c, const GroupOptions& opts) {
    validate_circuit(c);
    const std::vector<WeightedRewrite> terms{{1.0, RewriteKind::AD}};
    GroupBuilder b(c, GroupKind::AD, 2);
    b.add(c, 0.0, 0, "original");
    std::vector<std::size_t> noisy;
    for (std::size_t k = 0; k < c.layers.size(); ++k)
        if (c.layers[k].duration > 0.0) noisy.push_back(k);
    std::vector<std::vector<WeightedSite>> per_layer;
    for (std::size_t k : noisy) per_layer.push_back(layer_sites(c, k, terms));
    for (std::size_t a = 0; a < noisy.size(); ++a) {
        // same layer: the second generator acts after the first
        for (const auto& first : per_layer[a]) {
            for (const auto& second : per_layer[a]) {
                std::vector<Site> sites{first.site, second.site};
                b.add(apply_sites(c, sites, opts.mode, opts.gadget), first.weight * second.weight, count_ops(sites),
                      join_labels(sites));
            }
        }
        // cross layers: k1 = noisy[a] > k2 = noisy[z]
        for (std::size_t z = 0; z < a; ++z) {
            for (const auto& late : per_layer[a]) {
                for (const auto& early : per_layer[z]) {
                    std::vector<Site> sites{late.site, early.site};
                    b.add(apply_sites(c, sites, opts.mode, opts.gadget), 2.0 * late.weight * early.weight, count_ops(sites),
                          join_labels(sites));
                }
            }
        }
    }
    return b.finish();
}

CircuitGroup delta1_of_delta1_group(const Circuit& c, const GroupOptions& opts) {
    const CircuitGroup g1 = first_order_group(c, GroupKind::AD, opts);
    GroupBuilder b(c, GroupKind::AD, 2);
    for (const auto& m : g1.members) {
        if (m.coefficient == 0.0) continue;
        const CircuitGroup inner = first_order_group(m.circuit, GroupKind::AD, opts);
        for (const auto& im : inner.members) {
            if (im.coefficient == 0.0) continue;
            std::string label = m.label == "original" ? im.label : (im.label == "original" ? m.label : m.label + " ; " + im.label);
            b.add(im.circuit, m.coefficient * im.coefficient, m.order + im.order, std::move(label));
        }
    }
    return b.finish();
}

CircuitGroup inhomogeneous_group(const Circuit& c, std::span<const double> t1, std::span<const double> t2,
                                 std::span<const double> durations, const GroupOptions& opts) {
    validate_circuit(c);
    if (durations.size() != c.layers.size()) {
        throw std::invalid_argument("inhomogeneous_group: " + std::to_string(durations.size()) + " durations for " +
                                    std::to_string(c.layers.size()) + " layers");
    }
    if (t1.size() < static_cast<std::size_t>(c.n_qubits)) throw std::invalid_argument("inhomogeneous_group: T1 list too short");
    if (!t2.empty() && t2.size() != t1.size()) throw std::invalid_argument("inhomogeneous_group: T1 and T2 lists differ in length");
    for (std::size_t j = 0; j < t1.size(); ++j) {
        if (!(t1[j] > 0.0)) throw std::invalid_argument("inhomogeneous_group: T1 must be > 0");
        if (!t2.empty() && !(t2[j] > 0.0)) throw std::invalid_argument("inhomogeneous_group: T2 must be > 0");
    }
    GroupBuilder b(c, GroupKind::Inhomogeneous, 1);
    b.add(c, 0.0, 0, "original");
    for (std::size_t k = 0; k < c.layers.size(); ++k) {
        const double dt = durations[k];
        if (dt < 0.0) throw std::invalid_argument("inhomogeneous_group: negative duration");
        if (dt == 0.0) continue;
        for (int j = 0; j < c.n_qubits; ++j) {
            const double g1 = 1.0 / t1[static_cast<std::size_t>(j)];
            // without T2 data the dephasing part is the AD-induced 1/(4 T1)
            const double z = t2.empty() ? 0.25 * g1 : 0.5 / t2[static_cast<std::size_t>(j)];
            const std::pair<double, InsertOp> terms[] = {
                {-dt * z, InsertOp::Identity}, {dt * z, InsertOp::Z}, {dt * g1, InsertOp::SigmaMinus}, {-dt * g1, InsertOp::P1}};
            for (const auto& [w, op] : terms) {
                if (w == 0.0) continue;
                std::vector<Site> sites{Site{k, j, op}};
                b.add(apply_sites(c, sites, opts.mode, opts.gadget), w, count_ops(sites), join_labels(sites));
            }
        }
    }
    return b.finish();
}

CircuitGroup inhomogeneous_group(const Circuit& c, std::span<const double> t1, std::span<const double> t2, double time_unit,
                                 const GroupOptions& opts) {
    if (!(time_unit > 0.0)) throw std::invalid_argument("inhomogeneous_group: time_unit must be > 0");
    std::vector<double> d;
    d.reserve(c.layers.size());
    for (const auto& l : c.layers) d.push_back(l.duration * time_unit);
    return inhomogeneous_group(c, t1, t2, std::span<const double>(d), opts);
}

GroupValue evaluate_group(const CircuitGroup& g, const Observable& o, const NoiseModel& model, const EvalOptions& eval) {
    GroupValue out;
    const std::size_t n = g.members.size();
    out.member_values.assign(n, 0.0);
    if (eval.engine == Engine::Exact) {
        parallel_for(n, eval.threads, [&](std::size_t i) {
            out.member_values[i] = circuit_expectation(g.members[i].circuit, o, model);
        });
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += g.members[i].coefficient * out.member_values[i];
        out.value = s;
        return out;
    }
    eval.shots.validate();
    std::vector<SampleSeries> per(n);
    parallel_for(n, eval.threads, [&](std::size_t i) {
        per[i] = estimate_expectation(g.members[i].circuit, o, model, eval.shots, eval.stream_base + i);
    });
    SampleSeries sum;
    sum.values.assign(eval.shots.n_samp, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.member_values[i] = per[i].mean();
        for (std::size_t s = 0; s < sum.values.size(); ++s) sum.values[s] += g.members[i].coefficient * per[i].values[s];
    }
    out.value = sum.mean();
    out.series = std::move(sum);
    return out;
}

double delta_expectation(const CircuitGroup& g, const Observable& o, const NoiseModel& model, const EvalOptions& eval) {
    return evaluate_group(g, o, model, eval).value;
}

double mitigate_first_order(double noisy, double delta1, double tau) {
    if (tau < 0.0) throw std::invalid_argument("mitigate_first_order: tau must be >= 0");
    return noisy - tau * delta1;
}

double mitigate_second_order(double noisy, double delta1, double delta2, double delta1_of_delta1, double tau) {
    if (tau < 0.0) throw std::invalid_argument("mitigate_second_order: tau must be >= 0");
    return noisy - tau * delta1 - 0.5 * tau * tau * delta2 + tau * tau * delta1_of_delta1;
}

double mitigate_second_order_only(double noisy, double delta2, double delta1_of_delta1, double tau) {
    return mitigate_second_order(noisy, 0.0, delta2, delta1_of_delta1, tau);
}

double gad_combine(double emission, double absorption, double n_bar) {
    return (n_bar + 1.0) * emission + n_bar * absorption;
}

double composite_mitigate(double noisy, double gad_delta1, double pd_delta1, double tau, double tau_pd) {
    if (tau < 0.0 || tau_pd < 0.0) throw std::invalid_argument("composite_mitigate: strengths must be >= 0");
    return noisy - tau * gad_delta1 - tau_pd * pd_delta1;
}

double group_multiplier(const NoiseModel& model) {
    if (model.inhomogeneous) return 1.0;
    switch (model.kind) {
        case NoiseKind::None: return 0.0;
        case NoiseKind::AD:
        case NoiseKind::GAD:
        case NoiseKind::ADPD: return model.tau;
        case NoiseKind::PD: return model.tau_pd;
        case NoiseKind::Depolarizing: return model.p_depol;
    }
    return 0.0;
}

namespace {

GroupValue noisy_value(const Circuit& c, const Observable& o, const NoiseModel& model, const EvalOptions& eval) {
    GroupValue v;
    if (eval.engine == Engine::Exact) {
        v.value = circuit_expectation(c, o, model);
        return v;
    }
    v.series = estimate_expectation(c, o, model, eval.shots, eval.stream_base);
    v.value = v.series->mean();
    return v;
}

EvalOptions with_base(EvalOptions e, std::uint64_t slot) {
    e.stream_base = e.stream_base + (slot << 32);
    return e;
}

// Applies f sample by sample when every input carries a series.
template <class F>
std::optional<SampleSeries> combine_series(std::initializer_list<const GroupValue*> parts, F f) {
    for (const auto* p : parts)
        if (!p->series) return std::nullopt;
    const std::size_t n = (*parts.begin())->series->values.size();
    SampleSeries out;
    out.values.resize(n);
    std::vector<double> args(parts.size());
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t i = 0;
        for (const auto* p : parts) args[i++] = p->series->values[s];
        out.values[s] = f(args);
    }
    return out;
}

}  // namespace

QemEstimate run_qem(const Circuit& c, const Observable& o, const NoiseModel& model, const QemOptions& opts) {
    model.validate();
    if (opts.order != 1 && opts.order != 2) throw std::invalid_argument("run_qem: order must be 1 or 2");
    QemEstimate est;
    if (opts.compute_ideal) est.ideal = circuit_expectation(c, o, NoiseModel::none());
    const GroupValue noisy = noisy_value(c, o, model, with_base(opts.eval, 0));
    est.noisy = noisy.value;
    est.noisy_series = noisy.series;
    est.tau = group_multiplier(model);

    if (model.kind == NoiseKind::None) {
        est.mitigated = est.noisy;
        est.mitigated_series = noisy.series;
        est.group_circuits = 1;
        return est;
    }
    if (opts.order == 2 && (model.kind != NoiseKind::AD || model.inhomogeneous)) {
        throw std::invalid_argument("run_qem: second order is available for homogeneous AD only");
    }

    if (model.inhomogeneous) {
        const auto& h = *model.inhomogeneous;
        const std::vector<double> t2 = model.kind == NoiseKind::ADPD ? h.t2 : std::vector<double>{};
        const auto g = inhomogeneous_group(c, h.t1, t2, h.time_unit, opts.group);
        const GroupValue d1 = evaluate_group(g, o, model, with_base(opts.eval, 1));
        est.delta1 = d1.value;
        est.group_circuits = g.distinct_circuits();
        est.mitigated = mitigate_first_order(est.noisy, est.delta1, 1.0);
        est.mitigated_series =
            combine_series({&noisy, &d1}, [](const std::vector<double>& a) { return mitigate_first_order(a[0], a[1], 1.0); });
        return est;
    }

    GroupOptions gopt = opts.group;
    GroupKind kind = GroupKind::AD;
    switch (model.kind) {
        case NoiseKind::AD:
        case NoiseKind::ADPD: kind = GroupKind::AD; break;
        case NoiseKind::GAD:
            kind = GroupKind::GAD;
            gopt.n_bar = model.n_bar;
            break;
        case NoiseKind::PD: kind = GroupKind::PD; break;
        case NoiseKind::Depolarizing: kind = GroupKind::Pauli; break;
        case NoiseKind::None: break;
    }
    const auto g1 = first_order_group(c, kind, gopt);
    const GroupValue d1 = evaluate_group(g1, o, model, with_base(opts.eval, 1));
    est.delta1 = d1.value;
    est.group_circuits = g1.distinct_circuits();
    const double tau = est.tau;

    if (model.kind == NoiseKind::ADPD) {
        const auto gpd = first_order_group(c, GroupKind::PD, gopt);
        const GroupValue dpd = evaluate_group(gpd, o, model, with_base(opts.eval, 2));
        est.delta_pd = dpd.value;
        est.tau_pd = model.tau_pd;
        est.mitigated = composite_mitigate(est.noisy, est.delta1, *est.delta_pd, model.tau, model.tau_pd);
        const double tpd = model.tau_pd;
        est.mitigated_series = combine_series(
            {&noisy, &d1, &dpd}, [&](const std::vector<double>& a) { return composite_mitigate(a[0], a[1], a[2], tau, tpd); });
        return est;
    }

    est.mitigated = mitigate_first_order(est.noisy, est.delta1, tau);
    est.mitigated_series =
        combine_series({&noisy, &d1}, [&](const std::vector<double>& a) { return mitigate_first_order(a[0], a[1], tau); });
    if (opts.order == 2) {
        const auto g2 = second_order_group(c, gopt);
        const auto g11 = delta1_of_delta1_group(c, gopt);
        const GroupValue d2 = evaluate_group(g2, o, model, with_base(opts.eval, 3));
        const GroupValue d11 = evaluate_group(g11, o, model, with_base(opts.eval, 4));
        est.delta2 = d2.value;
        est.delta1_of_delta1 = d11.value;
        est.mitigated = mitigate_second_order(est.noisy, est.delta1, *est.delta2, *est.delta1_of_delta1, tau);
        est.mitigated_second_only = mitigate_second_order_only(est.noisy, *est.delta2, *est.delta1_of_delta1, tau);
        est.mitigated_series = combine_series({&noisy, &d1, &d2, &d11}, [&](const std::vector<double>& a) {
            return mitigate_second_order(a[0], a[1], a[2], a[3], tau);
        });
    }
    return est;
}

std::string group_manifest(const CircuitGroup& g) {
    std::ostringstream os;
    os << "group kind=" << group_kind_name(g.kind) << " order=" << g.order << " members=" << g.members.size()
       << " distinct=" << g.distinct_circuits() << '\n';
    os << "original\n";
    std::istringstream orig(to_text(g.original));
    for (std::string line; std::getline(orig, line);) os << "  " << line << '\n';
    for (std::size_t i = 0; i < g.members.size(); ++i) {
        const auto& m = g.members[i];
        os << "member " << i << " coeff=" << fmt17(m.coefficient) << " order=" << m.order << " insertions=" << m.label;
        if (!m.circuit.postselect.empty()) {
            os << " post=";
            for (std::size_t p = 0; p < m.circuit.postselect.size(); ++p) {
                os << (p ? "," : "") << m.circuit.postselect[p].qubit << ':' << m.circuit.postselect[p].outcome;
            }
        }
        os << '\n';
        std::istringstream body(to_text(m.circuit));
        for (std::string line; std::getline(body, line);) os << "  " << line << '\n';
    }
    return os.str();
}

}  // namespace qnec
