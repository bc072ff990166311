#pragma once

#include "qnec/circuit.hpp"
#include "qnec/densim.hpp"
#include "qnec/linalg.hpp"

#include <array>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace qnec {

struct MaxCutGraph {
    int n_vertices = 0;
    std::vector<std::tuple<int, int, double>> edges;

    static MaxCutGraph square();
    void validate() const;
};

// QAOA angles (theta_1, theta_2, phi_1, phi_2); round r uses (theta_r, phi_r).
using QaoaParams = std::array<double, 4>;
QaoaParams default_qaoa_params();

struct BenchmarkSpec {
    std::string name;  // pre1, pre2, qaa3, qaa2, qaoa, imp2
    int depth = 9;     // pre1 / pre2
    int reps = 1;      // Grover repetitions (qaa3, qaa2) or CZ repetitions (imp2)
    DecomposeStyle style = DecomposeStyle::Direct;  // qaa2 CZ and imp2
    QaoaParams qaoa = default_qaoa_params();
    MaxCutGraph graph = MaxCutGraph::square();
};

Circuit build_pre1(int depth);
Circuit build_pre2(int depth);
Circuit build_qaa3(int reps = 1);
Circuit build_qaa2(DecomposeStyle cz_style = DecomposeStyle::Direct, int reps = 1);
Circuit build_qaoa(const QaoaParams& params = default_qaoa_params(), const MaxCutGraph& g = MaxCutGraph::square());
Circuit build_imp2(int n_rep, DecomposeStyle style = DecomposeStyle::Direct, int n_qubits = 2, int qi = 0, int qj = 1);
Circuit build(const BenchmarkSpec& spec);

// Diagonal H_C = 1/2 sum C_ij (Z_i Z_j - 1); qubit v is bit v of the basis index.
CMatrix qaoa_cost_hamiltonian(const MaxCutGraph& g);
CMatrix qaoa_mixer_hamiltonian(int n_qubits);
// Cost for spins z_v = +1 (bit 0) or -1 (bit 1).
double classical_cost(const MaxCutGraph& g, const std::vector<int>& spins);
double qaoa_ideal_cost(const QaoaParams& params, const MaxCutGraph& g = MaxCutGraph::square());

struct DescentResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};
// Derivative-free coordinate descent with step halving.
DescentResult coordinate_descent(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                 double step = 0.05, double tol = 1e-7, int max_iter = 10000);

CMatrix projector(int n_qubits, std::size_t index);
// Character i of `s` acts on qubit i; letters I, X, Y, Z.
CMatrix pauli_string(const std::string& s);

// Named register observable: "P<bits>" (bit i is qubit i), a Pauli string, or "cost" (QAOA graph).
// Pauli strings containing X or Y are measured as Z after rotation layers of duration 1.
Observable named_observable(const std::string& name, int n_register, const MaxCutGraph* graph = nullptr);

}  // namespace qnec
