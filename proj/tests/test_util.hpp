#pragma once

#include "qnec/linalg.hpp"

#include <random>

namespace qnec::testing {

inline CMatrix random_matrix(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = cplx(n(rng), n(rng));
    return m;
}

inline DensityMatrix random_state(int n_qubits, std::mt19937_64& rng) {
    const CMatrix a = random_matrix(1 << n_qubits, rng);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix::from_matrix(rho);
}

inline CMatrix random_hermitian(int n_qubits, std::mt19937_64& rng) {
    const CMatrix a = random_matrix(1 << n_qubits, rng);
    return (a + a.adjoint()) / 2.0;
}

inline CMatrix random_unitary(int dim, std::mt19937_64& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(dim, rng));
    return qr.householderQ();
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qnec::testing
