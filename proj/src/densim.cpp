#include "qnec/densim.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qnec {

namespace {

const Superop& reset_superop() {
    static const Superop s = [] {
        CMatrix k0(2, 2), k1(2, 2);
        k0 << 1, 0, 0, 0;
        k1 << 0, 1, 0, 0;
        const std::vector<CMatrix> ks{k0, k1};
        return superop_from_kraus(ks);
    }();
    return s;
}

void apply_gate(CMatrix& rho, const Gate& g) {
    if (g.kind == GateKind::Reset) {
        apply_superop(rho, reset_superop(), g.qubits[0]);
        return;
    }
    if (g.kind == GateKind::I) return;
    apply_local(rho, gate_local_matrix(g), g.qubits);
}

std::vector<std::optional<Superop>> noise_superops(const NoiseModel& model, const Circuit& c, double duration) {
    std::vector<std::optional<Superop>> out(static_cast<std::size_t>(c.n_qubits));
    if (model.kind == NoiseKind::None || duration <= 0.0) return out;
    if (!model.inhomogeneous) {
        const Superop s = qubit_superop(model, 0, duration);
        std::fill(out.begin(), out.end(), s);
        return out;
    }
    const std::size_t table = model.inhomogeneous->t1.size();
    for (int q = 0; q < c.n_qubits; ++q) {
        if (q >= c.n_register && static_cast<std::size_t>(q) >= table) continue;
        out[static_cast<std::size_t>(q)] = qubit_superop(model, q, duration);
    }
    return out;
}

}  // namespace

EvolutionResult evolve(const Circuit& c, const NoiseModel& model, const EvolveOptions& opts) {
    validate_circuit(c);
    model.validate();
    EvolutionResult r;
    if (opts.initial) {
        if (opts.initial->n_qubits != c.n_qubits || static_cast<int>(qubits_for_dim(opts.initial->m.rows())) != c.n_qubits) {
            throw std::invalid_argument("evolve: initial state has " + std::to_string(opts.initial->n_qubits) +
                                        " qubits, circuit has " + std::to_string(c.n_qubits));
        }
        r.rho = *opts.initial;
    } else {
        r.rho = DensityMatrix::ground(c.n_qubits);
    }
    bool unitary = true;
    double cached_duration = -1.0;
    std::vector<std::optional<Superop>> channel;
    for (std::size_t k = 0; k < c.layers.size(); ++k) {
        const Layer& layer = c.layers[k];
        for (const auto& g : layer.gates) {
            apply_gate(r.rho.m, g);
            if (!gate_is_unitary(g.kind) && g.kind != GateKind::Reset) unitary = false;
        }
        if (layer.duration > 0.0 && model.kind != NoiseKind::None) {
            if (layer.duration != cached_duration) {
                channel = noise_superops(model, c, layer.duration);
                cached_duration = layer.duration;
            }
            for (int q = 0; q < c.n_qubits; ++q) {
                if (channel[static_cast<std::size_t>(q)]) apply_superop(r.rho.m, *channel[static_cast<std::size_t>(q)], q);
            }
        }
        if (opts.after_layer) opts.after_layer(k, r.rho.m);
    }
    r.rho.normalized = r.rho.normalized && unitary;
    r.branch_weight = r.rho.trace();
    return r;
}

EvolutionResult evolve(const Circuit& c, const NoiseModel& model, const DensityMatrix& initial) {
    EvolveOptions opts;
    opts.initial = initial;
    return evolve(c, model, opts);
}

EvolutionResult postselect(const EvolutionResult& full, int ancilla, int outcome) {
    const int n = full.rho.n_qubits;
    if (ancilla < 0 || ancilla >= n) throw std::out_of_range("postselect: ancilla index out of range");
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("postselect: outcome must be 0 or 1");
    const std::size_t dim = full.rho.dim();
    const std::size_t half = dim / 2;
    const std::size_t low = (std::size_t{1} << ancilla) - 1;
    const std::size_t bit = static_cast<std::size_t>(outcome);
    auto expand = [&](std::size_t i) { return ((i & ~low) << 1) | (bit << ancilla) | (i & low); };
    EvolutionResult out;
    out.rho.n_qubits = n - 1;
    out.rho.normalized = false;
    out.rho.m.resize(static_cast<Eigen::Index>(half), static_cast<Eigen::Index>(half));
    for (std::size_t r = 0; r < half; ++r)
        for (std::size_t col = 0; col < half; ++col)
            out.rho.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                full.rho.m(static_cast<Eigen::Index>(expand(r)), static_cast<Eigen::Index>(expand(col)));
    out.branch_weight = out.rho.trace();
    return out;
}

EvolutionResult reduce_to_register(const EvolutionResult& full, const Circuit& c) {
    if (full.rho.n_qubits != c.n_qubits) throw std::invalid_argument("reduce_to_register: state and circuit sizes differ");
    std::vector<std::optional<int>> sel(static_cast<std::size_t>(c.n_qubits));
    for (const auto& p : c.postselect) {
        auto& slot = sel[static_cast<std::size_t>(p.qubit)];
        if (slot && *slot != p.outcome) throw std::invalid_argument("conflicting post-selection on one ancilla");
        slot = p.outcome;
    }
    EvolutionResult r = full;
    for (int q = c.n_qubits - 1; q >= c.n_register; --q) {
        const auto& s = sel[static_cast<std::size_t>(q)];
        if (s) {
            r = postselect(r, q, *s);
        } else {
            const double w = r.branch_weight;
            r.rho = partial_trace(r.rho, q);
            r.branch_weight = w;
        }
    }
    return r;
}

EvolutionResult evolve_register(const Circuit& c, const NoiseModel& model) {
    return reduce_to_register(evolve(c, model), c);
}

std::vector<double> basis_probabilities(const EvolutionResult& r) {
    std::vector<double> p(r.rho.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r.rho.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    return p;
}

Observable make_observable(std::string name, CMatrix matrix) {
    if (!is_hermitian(matrix, 1e-12)) throw std::invalid_argument("observable '" + name + "' is not Hermitian");
    qubits_for_dim(matrix.rows());
    return Observable{std::move(name), std::move(matrix), Circuit{}};
}

Observable make_observable(std::string name, CMatrix matrix, Circuit rotation) {
    Observable o = make_observable(std::move(name), std::move(matrix));
    if (!rotation.layers.empty()) {
        if (!o.matrix.isDiagonal(1e-12)) throw std::invalid_argument("observable with a basis rotation must be diagonal");
        if (rotation.n_qubits != qubits_for_dim(o.matrix.rows())) {
            throw std::invalid_argument("rotation circuit size does not match the observable");
        }
    }
    o.rotation = std::move(rotation);
    return o;
}

Circuit measured_circuit(const Circuit& c, const Observable& o, bool noiseless_rotation) {
    const int nreg = qubits_for_dim(o.matrix.rows());
    if (nreg != c.n_register) {
        throw std::invalid_argument("observable '" + o.name + "' acts on " + std::to_string(nreg) + " qubits, register has " +
                                    std::to_string(c.n_register));
    }
    if (!o.has_rotation()) return c;
    Circuit out = c;
    for (Layer l : o.rotation.layers) {
        if (noiseless_rotation) l.duration = 0.0;
        out.layers.push_back(std::move(l));
    }
    return out;
}

double measured_expectation(const EvolutionResult& r, const CMatrix& o, const Circuit* rotation) {
    if (!rotation || rotation->layers.empty()) return expectation(o, r.rho);
    if (!o.isDiagonal(1e-12)) throw std::invalid_argument("measured_expectation: observable must be diagonal after a rotation");
    EvolveOptions opts;
    opts.initial = r.rho;
    const auto rotated = evolve(*rotation, NoiseModel::none(), opts);
    return expectation(o, rotated.rho);
}

double circuit_expectation(const Circuit& c, const Observable& o, const NoiseModel& model, bool noiseless_rotation) {
    const Circuit full = measured_circuit(c, o, noiseless_rotation);
    return expectation(o.matrix, evolve_register(full, model).rho);
}

}  // namespace qnec
