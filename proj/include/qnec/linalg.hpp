#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qnec {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Qubit q is bit q of the computational-basis index (q = 0 is least significant).
struct DensityMatrix {
    CMatrix m;
    int n_qubits = 0;
    bool normalized = true;

    static DensityMatrix ground(int n_qubits);
    static DensityMatrix basis(int n_qubits, std::size_t index);
    static DensityMatrix from_matrix(CMatrix m, bool normalized = true);

    std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }
    double trace() const { return m.trace().real(); }
};

int qubits_for_dim(Eigen::Index dim);

// kron(a, b): a occupies the most-significant index block.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);

DensityMatrix conjugate(const DensityMatrix& rho, const CMatrix& s);
DensityMatrix partial_trace(const DensityMatrix& rho, int qubit);
double expectation(const CMatrix& o, const DensityMatrix& rho);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);
bool is_unitary(const CMatrix& m, double tol = 1e-12);
bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double tol = 1e-12);

// Full 2^n matrix of `op` acting on `qubits`; local bit b of op's index is qubits[b].
CMatrix embed(const CMatrix& op, std::span<const int> qubits, int n_qubits);

// In-place rho <- op rho op^dagger with op acting on `qubits`.
void apply_local(CMatrix& rho, const CMatrix& op, std::span<const int> qubits);
// In-place rho <- op rho and rho <- rho op^dagger.
void apply_left(CMatrix& rho, const CMatrix& op, std::span<const int> qubits);
void apply_right_adjoint(CMatrix& rho, const CMatrix& op, std::span<const int> qubits);

// Single-qubit linear map given as a 4x4 matrix acting on
// (rho_00, rho_01, rho_10, rho_11) of the local block.
using Superop = Eigen::Matrix<cplx, 4, 4>;
Superop superop_from_kraus(std::span<const CMatrix> kraus);
void apply_superop(CMatrix& rho, const Superop& s, int qubit);

}  // namespace qnec
