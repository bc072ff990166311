#include "qnec/algos.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace qnec;
using namespace qnec::testing;

namespace {

double ideal(const Circuit& c, const std::string& obs) {
    return circuit_expectation(c, named_observable(obs, c.n_register), NoiseModel::none());
}

// Statevector QAOA with matrix exponentials of the cost and mixer Hamiltonians.
double qaoa_oracle(const QaoaParams& p, const MaxCutGraph& g) {
    const int n = g.n_vertices;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd hc = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        double c = 0.0;
        for (const auto& [a, b, w] : g.edges) {
            const int za = ((x >> a) & 1) ? -1 : 1, zb = ((x >> b) & 1) ? -1 : 1;
            c += 0.5 * w * (za * zb - 1);
        }
        hc(x, x) = c;
    }
    Eigen::MatrixXcd hb = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x)
        for (int q = 0; q < n; ++q) hb(x ^ (Eigen::Index{1} << q), x) += 1.0;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    const cplx i(0, 1);
    for (int r = 0; r < 2; ++r) {
        psi = Eigen::MatrixXcd(-i * 2.0 * p[static_cast<std::size_t>(r)] * hc).exp() * psi;
        psi = Eigen::MatrixXcd(-i * p[static_cast<std::size_t>(r + 2)] * hb).exp() * psi;
    }
    return (psi.adjoint() * hc * psi)(0, 0).real();
}

}  // namespace

TEST(Algos, Pre1IdealIsBasisState) {
    // X then an even number of H gates leaves |1>
    EXPECT_NEAR(ideal(build_pre1(9), "Z"), -1.0, 1e-14);
    EXPECT_NEAR(ideal(build_pre1(2), "X"), -1.0, 1e-14);
    EXPECT_EQ(build_pre1(9).depth(), 9u);
    EXPECT_THROW(build_pre1(0), std::invalid_argument);
}

TEST(Algos, Pre2UsesControlledHadamards) {
    const Circuit c = build_pre2(3);
    EXPECT_EQ(c.n_qubits, 2);
    // CH twice on |11> returns to |11>
    EXPECT_NEAR(ideal(c, "P11"), 1.0, 1e-14);
}

TEST(Algos, Qaa3FindsMarkedState) {
    const Circuit c = build_qaa3(1);
    EXPECT_NEAR(ideal(c, "P110") + ideal(c, "P111"), 1.0, 1e-12);
    EXPECT_NEAR(ideal(c, "P110"), 0.5, 1e-12);
}

TEST(Algos, Qaa2StylesAgree) {
    const Circuit direct = build_qaa2(DecomposeStyle::Direct);
    const Circuit native = build_qaa2(DecomposeStyle::Native);
    EXPECT_TRUE(equal_up_to_phase(circuit_unitary(direct), circuit_unitary(native), 1e-12));
    EXPECT_GT(native.depth(), direct.depth());
}

TEST(Algos, Imp2StylesAgree) {
    for (int n : {1, 2, 5}) {
        const Circuit d = build_imp2(n, DecomposeStyle::Direct);
        const Circuit v = build_imp2(n, DecomposeStyle::Native);
        EXPECT_TRUE(equal_up_to_phase(circuit_unitary(d), circuit_unitary(v), 1e-12)) << n;
    }
    EXPECT_THROW(build_imp2(1, DecomposeStyle::Direct, 2, 0, 0), std::invalid_argument);
}

TEST(Algos, QaoaMatchesStatevectorOracle) {
    const auto g = MaxCutGraph::square();
    for (const QaoaParams& p : {default_qaoa_params(), QaoaParams{0.3, 0.7, 0.2, 1.1}}) {
        EXPECT_NEAR(qaoa_ideal_cost(p, g), qaoa_oracle(p, g), 1e-12);
    }
    MaxCutGraph tri{3, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 2, 2.0}}};
    const QaoaParams p{0.4, 0.9, 0.3, 0.6};
    EXPECT_NEAR(qaoa_ideal_cost(p, tri), qaoa_oracle(p, tri), 1e-12);
}

TEST(Algos, CostHamiltonianAndClassicalCost) {
    const auto g = MaxCutGraph::square();
    EXPECT_DOUBLE_EQ(classical_cost(g, {1, -1, 1, -1}), -4.0);
    EXPECT_DOUBLE_EQ(classical_cost(g, {1, 1, 1, 1}), 0.0);
    const CMatrix h = qaoa_cost_hamiltonian(g);
    EXPECT_DOUBLE_EQ(h(0b1010, 0b1010).real(), -4.0);
    EXPECT_DOUBLE_EQ(h(0b0011, 0b0011).real(), -2.0);
    EXPECT_THROW(classical_cost(g, {1, 1}), std::invalid_argument);
}

TEST(Algos, DefaultParametersReachMaxCut) {
    EXPECT_NEAR(qaoa_ideal_cost(default_qaoa_params()), -4.0, 1e-4);
}

TEST(Algos, CoordinateDescentFindsQuadraticMinimum) {
    auto f = [](const std::vector<double>& x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] + 0.7) * (x[1] + 0.7); };
    const auto r = coordinate_descent(f, {0.0, 0.0});
    EXPECT_NEAR(r.x[0], 0.3, 1e-6);
    EXPECT_NEAR(r.x[1], -0.7, 1e-6);
    EXPECT_LT(r.value, 1e-11);
}

TEST(Algos, PauliStringsAndProjectors) {
    const CMatrix zi = pauli_string("ZI");
    EXPECT_DOUBLE_EQ(zi(1, 1).real(), -1.0);  // qubit 0 set
    EXPECT_DOUBLE_EQ(zi(2, 2).real(), 1.0);
    EXPECT_DOUBLE_EQ(projector(2, 2)(2, 2).real(), 1.0);
    EXPECT_THROW(pauli_string("ZQ"), std::invalid_argument);
    EXPECT_THROW(named_observable("P1", 2), std::invalid_argument);
    const auto p = named_observable("P01", 2);
    EXPECT_DOUBLE_EQ(p.matrix(2, 2).real(), 1.0);
    const auto xy = named_observable("XY", 2);
    EXPECT_TRUE(xy.has_rotation());
    EXPECT_LT(max_abs(xy.matrix - pauli_string("ZZ")), 1e-15);
}

TEST(Algos, BuildDispatch) {
    BenchmarkSpec s;
    s.name = "pre1";
    s.depth = 4;
    EXPECT_EQ(build(s).depth(), 4u);
    s.name = "nope";
    EXPECT_THROW(build(s), std::invalid_argument);
}
