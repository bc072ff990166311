#include "qnec/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnec {

namespace {

struct GateInfo {
    GateKind kind;
    std::string_view name;
    int arity;
    bool angle;
    bool unitary;
};

constexpr std::array<GateInfo, 23> kGates{{
    {GateKind::I, "I", 1, false, true},
    {GateKind::X, "X", 1, false, true},
    {GateKind::Y, "Y", 1, false, true},
    {GateKind::Z, "Z", 1, false, true},
    {GateKind::H, "H", 1, false, true},
    {GateKind::S, "S", 1, false, true},
    {GateKind::Sdg, "SDG", 1, false, true},
    {GateKind::T, "T", 1, false, true},
    {GateKind::Tdg, "TDG", 1, false, true},
    {GateKind::SX, "SX", 1, false, true},
    {GateKind::Rx, "RX", 1, true, true},
    {GateKind::Ry, "RY", 1, true, true},
    {GateKind::Rz, "RZ", 1, true, true},
    {GateKind::CX, "CX", 2, false, true},
    {GateKind::CZ, "CZ", 2, false, true},
    {GateKind::CH, "CH", 2, false, true},
    {GateKind::CRy, "CRY", 2, true, true},
    {GateKind::Toffoli, "CCX", 3, false, true},
    {GateKind::SigmaMinus, "SM", 1, false, false},
    {GateKind::SigmaPlus, "SP", 1, false, false},
    {GateKind::P0, "P0", 1, false, false},
    {GateKind::P1, "P1", 1, false, false},
    {GateKind::Reset, "RESET", 1, false, false},
}};

const GateInfo& info(GateKind k) {
    for (const auto& g : kGates) {
        if (g.kind == k) return g;
    }
    throw std::invalid_argument("unknown gate kind");
}

CMatrix m2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CMatrix single_qubit(const Gate& g) {
    using namespace std::complex_literals;
    const double h = 0.5 * g.angle;
    const double r = 1.0 / std::numbers::sqrt2;
    switch (g.kind) {
        case GateKind::I: return m2(1, 0, 0, 1);
        case GateKind::X: return m2(0, 1, 1, 0);
        case GateKind::Y: return m2(0, -1i, 1i, 0);
        case GateKind::Z: return m2(1, 0, 0, -1);
        case GateKind::H: return m2(r, r, r, -r);
        case GateKind::S: return m2(1, 0, 0, 1i);
        case GateKind::Sdg: return m2(1, 0, 0, -1i);
        case GateKind::T: return m2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4));
        case GateKind::Tdg: return m2(1, 0, 0, std::polar(1.0, -std::numbers::pi / 4));
        case GateKind::SX: return m2(0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i);
        case GateKind::Rx: return m2(std::cos(h), -1i * std::sin(h), -1i * std::sin(h), std::cos(h));
        case GateKind::Ry: return m2(std::cos(h), -std::sin(h), std::sin(h), std::cos(h));
        case GateKind::Rz: return m2(std::polar(1.0, -h), 0, 0, std::polar(1.0, h));
        case GateKind::SigmaMinus: return m2(0, 1, 0, 0);
        case GateKind::SigmaPlus: return m2(0, 0, 1, 0);
        case GateKind::P0: return m2(1, 0, 0, 0);
        case GateKind::P1: return m2(0, 0, 0, 1);
        default: break;
    }
    throw std::invalid_argument("not a single-qubit matrix gate: " + std::string(gate_name(g.kind)));
}

// Controlled version of a 2x2 block: local bit 0 is the control, bit 1 the target.
CMatrix controlled(const CMatrix& u) {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(2, 2) = 1.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m(1 + 2 * a, 1 + 2 * b) = u(a, b);
    return m;
}

}  // namespace

int gate_arity(GateKind k) { return info(k).arity; }
bool gate_has_angle(GateKind k) { return info(k).angle; }
bool gate_is_unitary(GateKind k) { return info(k).unitary; }
std::string_view gate_name(GateKind k) { return info(k).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (up == "TOFFOLI") up = "CCX";
    if (up == "CNOT") up = "CX";
    for (const auto& g : kGates) {
        if (g.name == up) return g.kind;
    }
    return std::nullopt;
}

void validate_gate(const Gate& g, int n_qubits) {
    const int arity = gate_arity(g.kind);
    if (static_cast<int>(g.qubits.size()) != arity) {
        throw std::invalid_argument("gate " + std::string(gate_name(g.kind)) + " expects " + std::to_string(arity) +
                                    " qubits, got " + std::to_string(g.qubits.size()));
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
        if (g.qubits[i] < 0 || g.qubits[i] >= n_qubits) {
            throw std::out_of_range("gate " + std::string(gate_name(g.kind)) + " qubit " + std::to_string(g.qubits[i]) +
                                    " outside register of " + std::to_string(n_qubits));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (g.qubits[i] == g.qubits[j]) throw std::invalid_argument("gate qubits must be distinct");
        }
    }
    if (!std::isfinite(g.angle)) throw std::invalid_argument("gate angle is not finite");
}

CMatrix gate_local_matrix(const Gate& g) {
    switch (g.kind) {
        case GateKind::CX: return controlled(single_qubit(Gate(GateKind::X, {0})));
        case GateKind::CZ: return controlled(single_qubit(Gate(GateKind::Z, {0})));
        case GateKind::CH: return controlled(single_qubit(Gate(GateKind::H, {0})));
        case GateKind::CRy: return controlled(single_qubit(Gate(GateKind::Ry, {0}, g.angle)));
        case GateKind::Toffoli: {
            CMatrix m = CMatrix::Identity(8, 8);
            m(3, 3) = 0.0;
            m(7, 7) = 0.0;
            m(3, 7) = 1.0;
            m(7, 3) = 1.0;
            return m;
        }
        case GateKind::Reset:
            throw std::invalid_argument("RESET is a channel and has no matrix");
        default: return single_qubit(g);
    }
}

CMatrix gate_unitary(const Gate& g, int n_qubits) {
    validate_gate(g, n_qubits);
    return embed(gate_local_matrix(g), g.qubits, n_qubits);
}

Circuit& Circuit::add(std::vector<Gate> gates, double duration) {
    layers.push_back(Layer{std::move(gates), duration});
    return *this;
}

Circuit& Circuit::add(Gate g, double duration) { return add(std::vector<Gate>{std::move(g)}, duration); }

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_qubits != n_qubits) throw std::invalid_argument("append: qubit count mismatch");
    layers.insert(layers.end(), other.layers.begin(), other.layers.end());
    return *this;
}

std::size_t Circuit::effective_depth() const {
    return static_cast<std::size_t>(std::count_if(layers.begin(), layers.end(), [](const Layer& l) { return l.duration > 0.0; }));
}

bool Circuit::has_nonunitary() const {
    for (const auto& l : layers)
        for (const auto& g : l.gates)
            if (!gate_is_unitary(g.kind)) return true;
    return false;
}

void validate_circuit(const Circuit& c) {
    if (c.n_qubits < 0 || c.n_register < 0 || c.n_register > c.n_qubits) {
        throw std::invalid_argument("circuit register size is inconsistent");
    }
    for (std::size_t k = 0; k < c.layers.size(); ++k) {
        const auto& layer = c.layers[k];
        if (!(layer.duration >= 0.0) || !std::isfinite(layer.duration)) {
            throw std::invalid_argument("layer " + std::to_string(k) + " has a negative or non-finite duration");
        }
        std::vector<bool> used(static_cast<std::size_t>(c.n_qubits), false);
        for (const auto& g : layer.gates) {
            validate_gate(g, c.n_qubits);
            for (int q : g.qubits) {
                if (used[static_cast<std::size_t>(q)]) {
                    throw std::invalid_argument("layer " + std::to_string(k) + " uses qubit " + std::to_string(q) + " twice");
                }
                used[static_cast<std::size_t>(q)] = true;
            }
        }
    }
    for (const auto& p : c.postselect) {
        if (p.qubit < c.n_register || p.qubit >= c.n_qubits) throw std::invalid_argument("post-selection must target an ancilla");
        if (p.outcome != 0 && p.outcome != 1) throw std::invalid_argument("post-selection outcome must be 0 or 1");
    }
}

CMatrix circuit_unitary(const Circuit& c) {
    validate_circuit(c);
    const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
    CMatrix u = CMatrix::Identity(dim, dim);
    for (const auto& layer : c.layers) {
        for (const auto& g : layer.gates) {
            if (!gate_is_unitary(g.kind)) {
                throw std::invalid_argument("circuit_unitary: layer holds non-unitary " + std::string(gate_name(g.kind)));
            }
            apply_left(u, gate_local_matrix(g), g.qubits);
        }
    }
    return u;
}

std::vector<Gate> decompose(const Gate& g, DecomposeStyle style) {
    if (style == DecomposeStyle::Direct) return {g};
    const double pi = std::numbers::pi;
    switch (g.kind) {
        case GateKind::CRy: {
            const int c = g.qubits[0], t = g.qubits[1];
            return {Gate(GateKind::CX, {c, t}), Gate(GateKind::Ry, {t}, -0.5 * g.angle),
                    Gate(GateKind::CX, {c, t}), Gate(GateKind::Ry, {t}, 0.5 * g.angle)};
        }
        case GateKind::CZ: {
            const int c = g.qubits[0], t = g.qubits[1];
            return {Gate(GateKind::H, {t}), Gate(GateKind::CX, {c, t}), Gate(GateKind::H, {t})};
        }
        case GateKind::CH: {
            const int c = g.qubits[0], t = g.qubits[1];
            return {Gate(GateKind::Ry, {t}, pi / 4), Gate(GateKind::CX, {c, t}), Gate(GateKind::Ry, {t}, -pi / 4)};
        }
        case GateKind::Toffoli: {
            const int a = g.qubits[0], b = g.qubits[1], t = g.qubits[2];
            return {Gate(GateKind::H, {t}),      Gate(GateKind::CX, {b, t}), Gate(GateKind::Tdg, {t}),
                    Gate(GateKind::CX, {a, t}),  Gate(GateKind::T, {t}),     Gate(GateKind::CX, {b, t}),
                    Gate(GateKind::Tdg, {t}),    Gate(GateKind::CX, {a, t}), Gate(GateKind::T, {b}),
                    Gate(GateKind::T, {t}),      Gate(GateKind::H, {t}),     Gate(GateKind::CX, {a, b}),
                    Gate(GateKind::T, {a}),      Gate(GateKind::Tdg, {b}),   Gate(GateKind::CX, {a, b})};
        }
        case GateKind::H: {
            const int q = g.qubits[0];
            return {Gate(GateKind::Rz, {q}, pi / 2), Gate(GateKind::SX, {q}), Gate(GateKind::Rz, {q}, pi / 2)};
        }
        default: break;
    }
    throw std::invalid_argument("decompose: no native form for " + std::string(gate_name(g.kind)));
}

Circuit decompose_circuit(const Circuit& c, DecomposeStyle style, const std::vector<GateKind>& kinds) {
    Circuit out = c;
    out.layers.clear();
    for (const auto& layer : c.layers) {
        std::vector<std::vector<Gate>> seqs;
        std::size_t longest = 0;
        for (const auto& g : layer.gates) {
            const bool pick = std::find(kinds.begin(), kinds.end(), g.kind) != kinds.end();
            seqs.push_back(pick ? decompose(g, style) : std::vector<Gate>{g});
            longest = std::max(longest, seqs.back().size());
        }
        if (layer.gates.empty()) {
            out.layers.push_back(layer);
            continue;
        }
        for (std::size_t i = 0; i < longest; ++i) {
            Layer sub;
            bool only_rz = true;
            for (const auto& s : seqs) {
                if (i < s.size()) {
                    sub.gates.push_back(s[i]);
                    only_rz = only_rz && s[i].kind == GateKind::Rz;
                }
            }
            sub.duration = only_rz ? 0.0 : layer.duration;
            out.layers.push_back(std::move(sub));
        }
    }
    return out;
}

std::string_view insert_op_name(InsertOp op) {
    switch (op) {
        case InsertOp::Identity: return "I";
        case InsertOp::X: return "X";
        case InsertOp::Y: return "Y";
        case InsertOp::Z: return "Z";
        case InsertOp::SigmaMinus: return "SM";
        case InsertOp::SigmaPlus: return "SP";
        case InsertOp::P0: return "P0";
        case InsertOp::P1: return "P1";
    }
    return "?";
}

namespace {

GateKind insert_gate_kind(InsertOp op) {
    switch (op) {
        case InsertOp::Identity: return GateKind::I;
        case InsertOp::X: return GateKind::X;
        case InsertOp::Y: return GateKind::Y;
        case InsertOp::Z: return GateKind::Z;
        case InsertOp::SigmaMinus: return GateKind::SigmaMinus;
        case InsertOp::SigmaPlus: return GateKind::SigmaPlus;
        case InsertOp::P0: return GateKind::P0;
        case InsertOp::P1: return GateKind::P1;
    }
    throw std::invalid_argument("unknown insertion operator");
}

}  // namespace

bool insert_op_is_unitary(InsertOp op) {
    return op == InsertOp::Identity || op == InsertOp::X || op == InsertOp::Y || op == InsertOp::Z;
}

CMatrix insert_op_matrix(InsertOp op) { return gate_local_matrix(Gate(insert_gate_kind(op), {0})); }

Circuit apply_insertion(const Circuit& c, const Insertion& ins, const GadgetOptions& gadget) {
    if (ins.layer >= c.layers.size()) {
        throw std::out_of_range("insertion layer " + std::to_string(ins.layer) + " outside circuit of depth " +
                                std::to_string(c.layers.size()));
    }
    if (ins.qubit < 0 || ins.qubit >= c.n_qubits) throw std::out_of_range("insertion qubit out of range");
    if (ins.op == InsertOp::Identity) return c;

    Circuit out = c;
    auto pos = out.layers.begin() + static_cast<std::ptrdiff_t>(ins.layer + 1);
    const bool direct = ins.mode == InsertMode::Direct || insert_op_is_unitary(ins.op);
    if (direct) {
        out.layers.insert(pos, Layer{{Gate(insert_gate_kind(ins.op), {ins.qubit})}, 0.0});
        return out;
    }

    // gadget A realizes {P0, sigma-} on outcomes {0, 1}; gadget B realizes {P1, sigma+}
    const int a = out.n_qubits++;
    const int j = ins.qubit;
    const bool gadget_b = ins.op == InsertOp::P1 || ins.op == InsertOp::SigmaPlus;
    std::vector<Layer> g;
    g.push_back(Layer{{Gate(GateKind::CRy, {j, a}, gadget.angle)}, gadget.duration});
    if (gadget_b) g.push_back(Layer{{Gate(GateKind::X, {a})}, gadget.duration});
    g.push_back(Layer{{Gate(GateKind::CX, {a, j})}, gadget.duration});
    out.layers.insert(pos, g.begin(), g.end());
    const int outcome = (ins.op == InsertOp::SigmaMinus || ins.op == InsertOp::SigmaPlus) ? 1 : 0;
    out.postselect.push_back(PostSelection{a, outcome});
    return out;
}

}  // namespace qnec
