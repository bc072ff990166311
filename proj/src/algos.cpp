#include "qnec/algos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnec {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

MaxCutGraph MaxCutGraph::square() { return MaxCutGraph{4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}}}; }

void MaxCutGraph::validate() const {
    if (n_vertices < 1) throw std::invalid_argument("graph: needs at least one vertex");
    for (const auto& [a, b, w] : edges) {
        if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices) throw std::out_of_range("graph: edge vertex out of range");
        if (a == b) throw std::invalid_argument("graph: self-loop");
        if (!(w >= 0.0)) throw std::invalid_argument("graph: negative edge weight");
    }
}

QaoaParams default_qaoa_params() { return {2.023075, 2.130055, 1.011537, 1.118518}; }

Circuit build_pre1(int depth) {
    if (depth < 1) throw std::invalid_argument("pre1: depth must be >= 1");
    Circuit c(1);
    c.add(Gate(GateKind::X, {0}));
    for (int k = 1; k < depth; ++k) c.add(Gate(GateKind::H, {0}));
    return c;
}

Circuit build_pre2(int depth) {
    if (depth < 1) throw std::invalid_argument("pre2: depth must be >= 1");
    Circuit c(2);
    c.add({Gate(GateKind::X, {0}), Gate(GateKind::X, {1})});
    for (int k = 1; k < depth; ++k) c.add(Gate(GateKind::CH, {0, 1}));
    return c;
}

Circuit build_qaa3(int reps) {
    if (reps < 1) throw std::invalid_argument("qaa3: reps must be >= 1");
    const int r0 = 0, r1 = 1, o = 2;
    Circuit c(3);
    c.add({Gate(GateKind::H, {r0}), Gate(GateKind::H, {r1}), Gate(GateKind::X, {o})});
    c.add(Gate(GateKind::H, {o}));
    for (int k = 0; k < reps; ++k) {
        c.add(Gate(GateKind::Toffoli, {r0, r1, o}));
        c.add({Gate(GateKind::H, {r0}), Gate(GateKind::H, {r1})});
        c.add({Gate(GateKind::X, {r0}), Gate(GateKind::X, {r1})});
        c.add(Gate(GateKind::H, {r1}));
        c.add(Gate(GateKind::CX, {r0, r1}));
        c.add(Gate(GateKind::H, {r1}));
        c.add({Gate(GateKind::X, {r0}), Gate(GateKind::X, {r1})});
        c.add({Gate(GateKind::H, {r0}), Gate(GateKind::H, {r1})});
    }
    return c;
}

Circuit build_qaa2(DecomposeStyle cz_style, int reps) {
    if (reps < 1) throw std::invalid_argument("qaa2: reps must be >= 1");
    const int r0 = 0, r1 = 1;
    const double a = 2.0 * kPi / 3.0;
    Circuit c(2);
    auto init = [&] {
        c.add({Gate(GateKind::Ry, {r0}, a), Gate(GateKind::H, {r1})});
        c.add(Gate(GateKind::CX, {r1, r0}));
    };
    init();
    for (int k = 0; k < reps; ++k) {
        // V_omega = (X Z X) on r0, Z on r1
        c.add({Gate(GateKind::X, {r0}), Gate(GateKind::Z, {r1})});
        c.add(Gate(GateKind::Z, {r0}));
        c.add(Gate(GateKind::X, {r0}));
        // V_init^dagger
        c.add(Gate(GateKind::CX, {r1, r0}));
        c.add({Gate(GateKind::Ry, {r0}, -a), Gate(GateKind::H, {r1})});
        c.add({Gate(GateKind::X, {r0}), Gate(GateKind::X, {r1})});
        if (cz_style == DecomposeStyle::Direct) {
            c.add(Gate(GateKind::CZ, {r0, r1}));
        } else {
            // H on the CX target r0: H_r0 CX[r1; r0] H_r0 = CZ
            for (const auto& g : decompose(Gate(GateKind::CZ, {r1, r0}), DecomposeStyle::Native)) c.add(g);
        }
        c.add({Gate(GateKind::X, {r0}), Gate(GateKind::X, {r1})});
        init();
    }
    return c;
}

Circuit build_qaoa(const QaoaParams& params, const MaxCutGraph& g) {
    g.validate();
    // greedy split of the edges into matchings; each matching becomes CX / Rz / CX layers
    std::vector<std::vector<std::tuple<int, int, double>>> groups;
    for (const auto& e : g.edges) {
        bool placed = false;
        for (auto& grp : groups) {
            bool clash = false;
            for (const auto& f : grp) {
                const int a = std::get<0>(e), b = std::get<1>(e), x = std::get<0>(f), y = std::get<1>(f);
                if (a == x || a == y || b == x || b == y) clash = true;
            }
            if (!clash) {
                grp.push_back(e);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({e});
    }
    Circuit c(g.n_vertices);
    std::vector<Gate> hs;
    for (int v = 0; v < g.n_vertices; ++v) hs.emplace_back(GateKind::H, std::vector<int>{v});
    c.add(hs);
    for (int round = 0; round < 2; ++round) {
        const double theta = params[static_cast<std::size_t>(round)];
        const double phi = params[static_cast<std::size_t>(round + 2)];
        for (const auto& grp : groups) {
            std::vector<Gate> cx, rz;
            for (const auto& [a, b, w] : grp) {
                cx.emplace_back(GateKind::CX, std::vector<int>{a, b});
                rz.emplace_back(GateKind::Rz, std::vector<int>{b}, 2.0 * theta * w);
            }
            c.add(cx);
            c.add(rz);
            c.add(cx);
        }
        std::vector<Gate> rx;
        for (int v = 0; v < g.n_vertices; ++v) rx.emplace_back(GateKind::Rx, std::vector<int>{v}, 2.0 * phi);
        c.add(rx);
    }
    return c;
}

Circuit build_imp2(int n_rep, DecomposeStyle style, int n_qubits, int qi, int qj) {
    if (n_rep < 1) throw std::invalid_argument("imp2: n_rep must be >= 1");
    if (qi == qj || qi < 0 || qj < 0 || qi >= n_qubits || qj >= n_qubits) throw std::invalid_argument("imp2: bad qubit pair");
    Circuit c(n_qubits);
    c.add({Gate(GateKind::X, {qi}), Gate(GateKind::X, {qj})});
    if (style == DecomposeStyle::Direct) {
        for (int r = 0; r < n_rep; ++r) c.add(Gate(GateKind::CZ, {qi, qj}));
        return c;
    }
    // (CZ)^n = H_j CX^n H_j with H = Rz(pi/2) SX Rz(pi/2); interior H H pairs become identity layers
    auto native_h = [&] {
        c.add(Gate(GateKind::Rz, {qj}, kPi / 2), 0.0);
        c.add(Gate(GateKind::SX, {qj}));
        c.add(Gate(GateKind::Rz, {qj}, kPi / 2), 0.0);
    };
    native_h();
    c.add(Gate(GateKind::CX, {qi, qj}));
    for (int r = 1; r < n_rep; ++r) {
        c.add({Gate(GateKind::I, {qi}), Gate(GateKind::I, {qj})});
        c.add({Gate(GateKind::I, {qi}), Gate(GateKind::I, {qj})});
        c.add(Gate(GateKind::CX, {qi, qj}));
    }
    native_h();
    return c;
}

Circuit build(const BenchmarkSpec& spec) {
    const std::string& n = spec.name;
    if (n == "pre1") return build_pre1(spec.depth);
    if (n == "pre2") return build_pre2(spec.depth);
    if (n == "qaa3") return build_qaa3(spec.reps);
    if (n == "qaa2") return build_qaa2(spec.style, spec.reps);
    if (n == "qaoa" || n == "qaoa_square") return build_qaoa(spec.qaoa, spec.graph);
    if (n == "imp2") return build_imp2(spec.reps, spec.style);
    throw std::invalid_argument("unknown benchmark '" + n + "'");
}

CMatrix qaoa_cost_hamiltonian(const MaxCutGraph& g) {
    g.validate();
    if (g.n_vertices > 6) throw std::invalid_argument("qaoa_cost_hamiltonian: at most 6 vertices");
    const std::size_t dim = std::size_t{1} << g.n_vertices;
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<int> spins(static_cast<std::size_t>(g.n_vertices));
    for (std::size_t x = 0; x < dim; ++x) {
        for (int v = 0; v < g.n_vertices; ++v) spins[static_cast<std::size_t>(v)] = ((x >> v) & 1U) ? -1 : 1;
        h(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = classical_cost(g, spins);
    }
    return h;
}

CMatrix qaoa_mixer_hamiltonian(int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    CMatrix h = CMatrix::Zero(dim, dim);
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    for (int q = 0; q < n_qubits; ++q) {
        const int qs[] = {q};
        h += embed(x, qs, n_qubits);
    }
    return h;
}

double classical_cost(const MaxCutGraph& g, const std::vector<int>& spins) {
    if (spins.size() != static_cast<std::size_t>(g.n_vertices)) throw std::invalid_argument("classical_cost: spin count mismatch");
    double c = 0.0;
    for (const auto& [a, b, w] : g.edges) {
        c += 0.5 * w * (spins[static_cast<std::size_t>(a)] * spins[static_cast<std::size_t>(b)] - 1.0);
    }
    return c;
}

double qaoa_ideal_cost(const QaoaParams& params, const MaxCutGraph& g) {
    const Circuit c = build_qaoa(params, g);
    return expectation(qaoa_cost_hamiltonian(g), evolve(c, NoiseModel::none()).rho);
}

DescentResult coordinate_descent(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                 double step, double tol, int max_iter) {
    DescentResult r;
    r.x = std::move(x0);
    r.value = f(r.x);
    while (step > tol && r.iterations < max_iter) {
        bool improved = false;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            for (double dir : {1.0, -1.0}) {
                std::vector<double> trial = r.x;
                trial[i] += dir * step;
                const double v = f(trial);
                ++r.iterations;
                if (v < r.value) {
                    r.x = std::move(trial);
                    r.value = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return r;
}

CMatrix projector(int n_qubits, std::size_t index) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (static_cast<Eigen::Index>(index) >= dim) throw std::out_of_range("projector: index out of range");
    CMatrix p = CMatrix::Zero(dim, dim);
    p(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return p;
}

CMatrix pauli_string(const std::string& s) {
    const int n = static_cast<int>(s.size());
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix out = CMatrix::Identity(dim, dim);
    for (int q = 0; q < n; ++q) {
        GateKind k;
        switch (s[static_cast<std::size_t>(q)]) {
            case 'I': continue;
            case 'X': k = GateKind::X; break;
            case 'Y': k = GateKind::Y; break;
            case 'Z': k = GateKind::Z; break;
            default: throw std::invalid_argument("pauli_string: bad letter in '" + s + "'");
        }
        const int qs[] = {q};
        apply_left(out, gate_local_matrix(Gate(k, {0})), qs);
    }
    return out;
}

Observable named_observable(const std::string& name, int n_register, const MaxCutGraph* graph) {
    if (name == "cost") {
        const MaxCutGraph g = graph ? *graph : MaxCutGraph::square();
        if (g.n_vertices != n_register) throw std::invalid_argument("cost observable: graph size differs from register");
        return make_observable(name, qaoa_cost_hamiltonian(g));
    }
    if (name.size() == static_cast<std::size_t>(n_register) + 1 && name[0] == 'P') {
        std::size_t index = 0;
        for (int q = 0; q < n_register; ++q) {
            const char ch = name[static_cast<std::size_t>(q) + 1];
            if (ch != '0' && ch != '1') throw std::invalid_argument("bad projector name '" + name + "'");
            if (ch == '1') index |= std::size_t{1} << q;
        }
        return make_observable(name, projector(n_register, index));
    }
    if (name.size() != static_cast<std::size_t>(n_register)) {
        throw std::invalid_argument("observable '" + name + "' does not match a register of " + std::to_string(n_register));
    }
    std::string diag = name;
    std::vector<Gate> sdg, had;
    for (int q = 0; q < n_register; ++q) {
        const char ch = name[static_cast<std::size_t>(q)];
        if (ch == 'X' || ch == 'Y') {
            if (ch == 'Y') sdg.emplace_back(GateKind::Sdg, std::vector<int>{q});
            had.emplace_back(GateKind::H, std::vector<int>{q});
            diag[static_cast<std::size_t>(q)] = 'Z';
        }
    }
    if (had.empty()) return make_observable(name, pauli_string(name));
    Circuit rot(n_register);
    if (!sdg.empty()) rot.add(sdg);
    rot.add(had);
    return make_observable(name, pauli_string(diag), rot);
}

}  // namespace qnec
