#include "qnec/circuit.hpp"
#include "qnec/densim.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace qnec;
using namespace qnec::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Controlled-U with control bit c and target bit t, built column by column.
CMatrix controlled_oracle(const CMatrix& u, int c, int t, int n) {
    const int dim = 1 << n;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        if (((col >> c) & 1) == 0) {
            out(col, col) = 1.0;
            continue;
        }
        const int tb = (col >> t) & 1;
        for (int nb = 0; nb < 2; ++nb) {
            const int row = (col & ~(1 << t)) | (nb << t);
            out(row, col) = u(nb, tb);
        }
    }
    return out;
}

CMatrix sequence_unitary(const std::vector<Gate>& gates, int n) {
    Circuit c(n);
    for (const auto& g : gates) c.add(g);
    return circuit_unitary(c);
}

}  // namespace

TEST(Circuit, SingleQubitMatricesAreUnitary) {
    for (auto k : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg, GateKind::T,
                   GateKind::Tdg, GateKind::SX, GateKind::Rx, GateKind::Ry, GateKind::Rz}) {
        EXPECT_TRUE(is_unitary(gate_local_matrix(Gate(k, {0}, 0.37)))) << gate_name(k);
    }
}

TEST(Circuit, RotationsMatchExponentials) {
    const double a = 0.81;
    const CMatrix ry = gate_local_matrix(Gate(GateKind::Ry, {0}, a));
    EXPECT_NEAR(ry(0, 0).real(), std::cos(a / 2), 1e-15);
    EXPECT_NEAR(ry(1, 0).real(), std::sin(a / 2), 1e-15);
    const CMatrix sx = gate_local_matrix(Gate(GateKind::SX, {0}));
    EXPECT_LT(max_abs(sx * sx - gate_local_matrix(Gate(GateKind::X, {0}))), 1e-15);
    const CMatrix t = gate_local_matrix(Gate(GateKind::T, {0}));
    EXPECT_LT(max_abs(t * t - gate_local_matrix(Gate(GateKind::S, {0}))), 1e-15);
}

TEST(Circuit, ControlledGatesFollowControlTargetOrder) {
    const CMatrix x = gate_local_matrix(Gate(GateKind::X, {0}));
    EXPECT_LT(max_abs(gate_unitary(Gate(GateKind::CX, {0, 2}), 3) - controlled_oracle(x, 0, 2, 3)), 1e-15);
    EXPECT_LT(max_abs(gate_unitary(Gate(GateKind::CX, {2, 1}), 3) - controlled_oracle(x, 2, 1, 3)), 1e-15);
    const CMatrix ry = gate_local_matrix(Gate(GateKind::Ry, {0}, 1.1));
    EXPECT_LT(max_abs(gate_unitary(Gate(GateKind::CRy, {1, 0}, 1.1), 2) - controlled_oracle(ry, 1, 0, 2)), 1e-15);
}

TEST(Circuit, ToffoliFlipsTargetOnlyWhenBothControlsSet) {
    const CMatrix u = gate_unitary(Gate(GateKind::Toffoli, {0, 1, 2}), 3);
    for (int col = 0; col < 8; ++col) {
        const int row = (col & 3) == 3 ? col ^ 4 : col;
        EXPECT_EQ(u(row, col), cplx(1)) << col;
    }
}

TEST(Circuit, NativeDecompositionsReproduceGates) {
    for (const Gate& g : {Gate(GateKind::CZ, {0, 1}), Gate(GateKind::CZ, {1, 0}), Gate(GateKind::CH, {0, 1}),
                          Gate(GateKind::CRy, {1, 0}, 0.93), Gate(GateKind::H, {1})}) {
        EXPECT_TRUE(equal_up_to_phase(sequence_unitary(decompose(g, DecomposeStyle::Native), 2), gate_unitary(g, 2), 1e-12))
            << gate_name(g.kind);
    }
    const Gate tof(GateKind::Toffoli, {2, 0, 1});
    EXPECT_TRUE(equal_up_to_phase(sequence_unitary(decompose(tof, DecomposeStyle::Native), 3), gate_unitary(tof, 3), 1e-12));
    EXPECT_THROW(decompose(Gate(GateKind::X, {0}), DecomposeStyle::Native), std::invalid_argument);
}

TEST(Circuit, DecomposeCircuitKeepsUnitaryAndZeroesRzLayers) {
    Circuit c(2);
    c.add({Gate(GateKind::H, {0}), Gate(GateKind::X, {1})});
    c.add(Gate(GateKind::CZ, {0, 1}));
    const auto d = decompose_circuit(c, DecomposeStyle::Native, {GateKind::H, GateKind::CZ});
    EXPECT_TRUE(equal_up_to_phase(circuit_unitary(d), circuit_unitary(c), 1e-12));
    EXPECT_EQ(d.depth(), 6u);
    EXPECT_DOUBLE_EQ(d.layers[0].duration, 1.0);  // Rz on 0 shares the layer with X on 1
    EXPECT_DOUBLE_EQ(d.layers[2].duration, 0.0);  // trailing Rz alone
}

TEST(Circuit, ValidationErrors) {
    Circuit c(2);
    c.add({Gate(GateKind::X, {0}), Gate(GateKind::Z, {0})});
    EXPECT_THROW(validate_circuit(c), std::invalid_argument);
    Circuit d(2);
    d.add(Gate(GateKind::CX, {0, 2}));
    EXPECT_ANY_THROW(validate_circuit(d));
    Circuit e(1);
    e.add(Gate(GateKind::X, {0}), -1.0);
    EXPECT_THROW(validate_circuit(e), std::invalid_argument);
    Circuit f(2);
    f.n_register = 1;
    f.postselect.push_back({0, 1});
    EXPECT_THROW(validate_circuit(f), std::invalid_argument);
}

TEST(Circuit, TextRoundTrip) {
    Circuit c(3);
    c.n_register = 2;
    c.add({Gate(GateKind::Ry, {0}, 0.1234567890123), Gate(GateKind::CX, {1, 2})}, 0.5);
    c.add(Gate(GateKind::Toffoli, {0, 1, 2}), 0.0);
    c.postselect.push_back({2, 1});
    const auto back = circuit_from_text(to_text(c));
    EXPECT_EQ(to_text(back), to_text(c));
    EXPECT_EQ(back.n_register, 2);
    EXPECT_DOUBLE_EQ(back.layers[0].gates[0].angle, 0.1234567890123);
    ASSERT_EQ(back.postselect.size(), 1u);
    EXPECT_EQ(back.postselect[0].outcome, 1);
}

TEST(Circuit, TextParserReportsLine) {
    try {
        circuit_from_text("qubits 2\nlayer 1 : X 0\nlayer 1 : FOO 1\n");
        FAIL() << "expected an error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(circuit_from_text("layer 1 : X 0\n"), std::invalid_argument);
    EXPECT_THROW(circuit_from_text("qubits 1\nlayer 1 : Ry 0\n"), std::invalid_argument);
}

TEST(Circuit, DirectInsertionAddsZeroDurationLayer) {
    Circuit c(2);
    c.add(Gate(GateKind::H, {0}));
    c.add(Gate(GateKind::CX, {0, 1}));
    const auto out = apply_insertion(c, {0, 1, InsertOp::SigmaMinus, InsertMode::Direct});
    ASSERT_EQ(out.depth(), 3u);
    EXPECT_EQ(out.layers[1].gates[0].kind, GateKind::SigmaMinus);
    EXPECT_DOUBLE_EQ(out.layers[1].duration, 0.0);
    EXPECT_EQ(out.n_qubits, 2);
    EXPECT_THROW(apply_insertion(c, {2, 0, InsertOp::Z}), std::out_of_range);
    EXPECT_EQ(apply_insertion(c, {0, 0, InsertOp::Identity}).depth(), 2u);
}

TEST(Circuit, AncillaGadgetsRealizeInsertedOperators) {
    std::mt19937_64 rng(17);
    for (auto op : {InsertOp::SigmaMinus, InsertOp::SigmaPlus, InsertOp::P0, InsertOp::P1}) {
        Circuit c(2);
        c.add({Gate(GateKind::Ry, {0}, 0.7), Gate(GateKind::Rx, {1}, 1.9)});
        c.add(Gate(GateKind::CX, {0, 1}));
        const auto g = apply_insertion(c, {0, 1, op, InsertMode::Ancilla});
        EXPECT_EQ(g.n_qubits, 3);
        EXPECT_EQ(g.n_register, 2);
        ASSERT_EQ(g.postselect.size(), 1u);
        const auto got = evolve_register(g, NoiseModel::none());

        Circuit first(2), second(2);
        first.layers = {c.layers[0]};
        second.layers = {c.layers[1]};
        DensityMatrix rho = evolve(first, NoiseModel::none()).rho;
        const int q1[] = {1};
        const CMatrix s = embed(insert_op_matrix(op), q1, 2);
        rho.m = s * rho.m * s.adjoint();
        const auto expected = evolve(second, NoiseModel::none(), rho);
        EXPECT_LT(max_abs(got.rho.m - expected.rho.m), 1e-12)
            << insert_op_name(op);
    }
}

TEST(Circuit, StructureKeyIgnoresPostselection) {
    Circuit c(2);
    c.n_register = 1;
    c.add(Gate(GateKind::CX, {0, 1}));
    Circuit d = c;
    d.postselect.push_back({1, 0});
    EXPECT_EQ(structure_key(c), structure_key(d));
    EXPECT_NE(to_text(c), to_text(d));
}
