#include "qnec/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnec {

namespace {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }
}

std::vector<std::size_t> local_offsets(std::span<const int> qubits) {
    std::vector<std::size_t> off(std::size_t{1} << qubits.size(), 0);
    for (std::size_t l = 0; l < off.size(); ++l) {
        std::size_t o = 0;
        for (std::size_t b = 0; b < qubits.size(); ++b) {
            if ((l >> b) & 1U) o |= std::size_t{1} << qubits[b];
        }
        off[l] = o;
    }
    return off;
}

std::size_t target_mask(std::span<const int> qubits) {
    std::size_t mask = 0;
    for (int q : qubits) mask |= std::size_t{1} << q;
    return mask;
}

void check_local(const CMatrix& rho, const CMatrix& op, std::span<const int> qubits) {
    const Eigen::Index k = Eigen::Index{1} << qubits.size();
    if (op.rows() != k || op.cols() != k) {
        throw std::invalid_argument("local operator size does not match its qubit count");
    }
    const int n = qubits_for_dim(rho.rows());
    std::size_t seen = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
        if (seen & (std::size_t{1} << q)) throw std::invalid_argument("repeated qubit index");
        seen |= std::size_t{1} << q;
    }
}

}  // namespace

int qubits_for_dim(Eigen::Index dim) {
    if (dim <= 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension is not a power of two: " + std::to_string(dim));
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

DensityMatrix DensityMatrix::ground(int n_qubits) { return basis(n_qubits, 0); }

DensityMatrix DensityMatrix::basis(int n_qubits, std::size_t index) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (static_cast<Eigen::Index>(index) >= dim) throw std::out_of_range("basis index out of range");
    DensityMatrix r;
    r.m = CMatrix::Zero(dim, dim);
    r.m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    r.n_qubits = n_qubits;
    return r;
}

DensityMatrix DensityMatrix::from_matrix(CMatrix m, bool normalized) {
    require_square(m, "density matrix");
    DensityMatrix r;
    r.n_qubits = qubits_for_dim(m.rows());
    r.m = std::move(m);
    r.normalized = normalized;
    return r;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out = Eigen::kroneckerProduct(a, b).eval();
    return out;
}

CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

DensityMatrix conjugate(const DensityMatrix& rho, const CMatrix& s) {
    if (s.rows() != rho.m.rows() || s.cols() != rho.m.cols()) {
        throw std::invalid_argument("conjugate: dimension mismatch");
    }
    DensityMatrix out = rho;
    out.m = s * rho.m * s.adjoint();
    out.normalized = rho.normalized && is_unitary(s);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int qubit) {
    if (qubit < 0 || qubit >= rho.n_qubits) throw std::out_of_range("partial_trace: qubit out of range");
    const std::size_t dim = rho.dim();
    const std::size_t half = dim / 2;
    const std::size_t low = (std::size_t{1} << qubit) - 1;
    auto expand = [&](std::size_t i, std::size_t bit) {
        return ((i & ~low) << 1) | (bit << qubit) | (i & low);
    };
    DensityMatrix out;
    out.n_qubits = rho.n_qubits - 1;
    out.normalized = rho.normalized;
    out.m = CMatrix::Zero(static_cast<Eigen::Index>(half), static_cast<Eigen::Index>(half));
    for (std::size_t r = 0; r < half; ++r) {
        for (std::size_t c = 0; c < half; ++c) {
            out.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rho.m(static_cast<Eigen::Index>(expand(r, 0)), static_cast<Eigen::Index>(expand(c, 0))) +
                rho.m(static_cast<Eigen::Index>(expand(r, 1)), static_cast<Eigen::Index>(expand(c, 1)));
        }
    }
    return out;
}

double expectation(const CMatrix& o, const DensityMatrix& rho) {
    if (o.rows() != rho.m.rows() || o.cols() != rho.m.cols()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    if (!is_hermitian(o, 1e-12)) throw std::invalid_argument("expectation: observable is not Hermitian");
    // Tr(O rho) = sum_ij O_ij rho_ji
    const cplx t = (o.array() * rho.m.transpose().array()).sum();
    const double scale = std::max(1.0, o.cwiseAbs().maxCoeff());
    if (std::abs(t.imag()) > 1e-10 * scale) {
        throw std::runtime_error("expectation: imaginary part " + std::to_string(t.imag()) + " exceeds tolerance");
    }
    return t.real();
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
    return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    Eigen::Index ri = 0, ci = 0;
    b.cwiseAbs().maxCoeff(&ri, &ci);
    if (std::abs(b(ri, ci)) < tol) return a.cwiseAbs().maxCoeff() <= tol;
    const cplx ratio = a(ri, ci) / b(ri, ci);
    if (std::abs(std::abs(ratio) - 1.0) > tol) return false;
    return (a - ratio * b).cwiseAbs().maxCoeff() <= tol;
}

CMatrix embed(const CMatrix& op, std::span<const int> qubits, int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    CMatrix out = CMatrix::Identity(dim, dim);
    apply_left(out, op, qubits);
    return out;
}

void apply_left(CMatrix& rho, const CMatrix& op, std::span<const int> qubits) {
    check_local(rho, op, qubits);
    const auto off = local_offsets(qubits);
    const std::size_t mask = target_mask(qubits);
    const std::size_t k = off.size();
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    std::vector<cplx> buf(k);
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) continue;
        for (std::size_t c = 0; c < dim; ++c) {
            for (std::size_t l = 0; l < k; ++l) buf[l] = rho(static_cast<Eigen::Index>(base | off[l]), static_cast<Eigen::Index>(c));
            for (std::size_t r = 0; r < k; ++r) {
                cplx acc = 0.0;
                for (std::size_t l = 0; l < k; ++l) acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) * buf[l];
                rho(static_cast<Eigen::Index>(base | off[r]), static_cast<Eigen::Index>(c)) = acc;
            }
        }
    }
}

void apply_right_adjoint(CMatrix& rho, const CMatrix& op, std::span<const int> qubits) {
    check_local(rho, op, qubits);
    const auto off = local_offsets(qubits);
    const std::size_t mask = target_mask(qubits);
    const std::size_t k = off.size();
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    std::vector<cplx> buf(k);
    // (rho op^dagger)_{r, base|off[c]} = sum_l rho_{r, base|off[l]} conj(op_{c,l})
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) continue;
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t l = 0; l < k; ++l) buf[l] = rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(base | off[l]));
            for (std::size_t c = 0; c < k; ++c) {
                cplx acc = 0.0;
                for (std::size_t l = 0; l < k; ++l) acc += buf[l] * std::conj(op(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(l)));
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(base | off[c])) = acc;
            }
        }
    }
}

void apply_local(CMatrix& rho, const CMatrix& op, std::span<const int> qubits) {
    apply_left(rho, op, qubits);
    apply_right_adjoint(rho, op, qubits);
}

Superop superop_from_kraus(std::span<const CMatrix> kraus) {
    Superop s = Superop::Zero();
    // out_{ab} = sum_K sum_{cd} K_{ac} rho_{cd} conj(K_{bd}); index (a,b) -> 2a+b
    for (const auto& k : kraus) {
        if (k.rows() != 2 || k.cols() != 2) throw std::invalid_argument("superop_from_kraus: expected 2x2 operators");
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) s(2 * a + b, 2 * c + d) += k(a, c) * std::conj(k(b, d));
    }
    return s;
}

void apply_superop(CMatrix& rho, const Superop& s, int qubit) {
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    if (qubit < 0 || (std::size_t{1} << qubit) >= dim) throw std::out_of_range("apply_superop: qubit out of range");
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t r = 0; r < dim; ++r) {
        if (r & bit) continue;
        const auto r0 = static_cast<Eigen::Index>(r), r1 = static_cast<Eigen::Index>(r | bit);
        for (std::size_t c = 0; c < dim; ++c) {
            if (c & bit) continue;
            const auto c0 = static_cast<Eigen::Index>(c), c1 = static_cast<Eigen::Index>(c | bit);
            const cplx v0 = rho(r0, c0), v1 = rho(r0, c1), v2 = rho(r1, c0), v3 = rho(r1, c1);
            rho(r0, c0) = s(0, 0) * v0 + s(0, 1) * v1 + s(0, 2) * v2 + s(0, 3) * v3;
            rho(r0, c1) = s(1, 0) * v0 + s(1, 1) * v1 + s(1, 2) * v2 + s(1, 3) * v3;
            rho(r1, c0) = s(2, 0) * v0 + s(2, 1) * v1 + s(2, 2) * v2 + s(2, 3) * v3;
            rho(r1, c1) = s(3, 0) * v0 + s(3, 1) * v1 + s(3, 2) * v2 + s(3, 3) * v3;
        }
    }
}

}  // namespace qnec
