#pragma once

#include "qnec/linalg.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qnec {

enum class GateKind {
    I, X, Y, Z, H, S, Sdg, T, Tdg, SX, Rx, Ry, Rz,
    CX, CZ, CH, CRy, Toffoli,
    // non-unitary single-qubit operators used by insertions and PEC
    SigmaMinus, SigmaPlus, P0, P1, Reset,
};

// Controls come before the target in `qubits`.
struct Gate {
    GateKind kind = GateKind::I;
    std::vector<int> qubits;
    double angle = 0.0;

    Gate() = default;
    Gate(GateKind k, std::vector<int> q, double a = 0.0) : kind(k), qubits(std::move(q)), angle(a) {}
};

int gate_arity(GateKind k);
bool gate_has_angle(GateKind k);
bool gate_is_unitary(GateKind k);
std::string_view gate_name(GateKind k);
std::optional<GateKind> gate_from_name(std::string_view name);

void validate_gate(const Gate& g, int n_qubits);

// 2^k x 2^k matrix; local index bit b corresponds to g.qubits[b].
CMatrix gate_local_matrix(const Gate& g);
// 2^n x 2^n embedding; throws for Reset.
CMatrix gate_unitary(const Gate& g, int n_qubits);

struct Layer {
    std::vector<Gate> gates;
    double duration = 1.0;
};

struct PostSelection {
    int qubit = 0;
    int outcome = 0;
};

struct Circuit {
    int n_qubits = 0;
    // qubits [0, n_register) carry observables; the rest are ancillas
    int n_register = 0;
    std::vector<Layer> layers;
    std::vector<PostSelection> postselect;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n), n_register(n) {}

    Circuit& add(std::vector<Gate> gates, double duration = 1.0);
    Circuit& add(Gate g, double duration = 1.0);
    Circuit& append(const Circuit& other);

    std::size_t depth() const { return layers.size(); }
    std::size_t effective_depth() const;
    bool has_nonunitary() const;
};

void validate_circuit(const Circuit& c);

CMatrix circuit_unitary(const Circuit& c);

enum class DecomposeStyle { Direct, Native };

// Time-ordered gate list whose product reproduces g up to a global phase.
std::vector<Gate> decompose(const Gate& g, DecomposeStyle style);
// Rewrites every layer through decompose(); sublayers holding only Rz gates get duration 0.
Circuit decompose_circuit(const Circuit& c, DecomposeStyle style, const std::vector<GateKind>& kinds);

enum class InsertOp { Identity, X, Y, Z, SigmaMinus, SigmaPlus, P0, P1 };

bool insert_op_is_unitary(InsertOp op);
enum class InsertMode { Direct, Ancilla };

std::string_view insert_op_name(InsertOp op);
CMatrix insert_op_matrix(InsertOp op);

struct Insertion {
    std::size_t layer = 0;  // 0-based; the operator acts right after this layer
    int qubit = 0;
    InsertOp op = InsertOp::Z;
    InsertMode mode = InsertMode::Direct;
};

struct GadgetOptions {
    double angle = 3.14159265358979323846;
    double duration = 1.0;
};

Circuit apply_insertion(const Circuit& c, const Insertion& ins, const GadgetOptions& gadget = {});

// Line-oriented text format, see README.
std::string to_text(const Circuit& c);
Circuit circuit_from_text(std::string_view text);

// Canonical key used to identify distinct circuits (post-selection excluded).
std::string structure_key(const Circuit& c);

}  // namespace qnec
