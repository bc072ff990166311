#include "qnec/linalg.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>

using namespace qnec;
using namespace qnec::testing;

namespace {

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

const CMatrix kX = mat2(0, 1, 1, 0);
const CMatrix kZ = mat2(1, 0, 0, -1);

// Element-by-element partial trace over the bit `q` of a 2^n index.
CMatrix brute_partial_trace(const CMatrix& rho, int n, int q) {
    const int dim = 1 << (n - 1);
    CMatrix out = CMatrix::Zero(dim, dim);
    auto expand = [&](int idx, int bit) {
        const int low = idx & ((1 << q) - 1);
        const int high = idx >> q;
        return (high << (q + 1)) | (bit << q) | low;
    };
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            for (int b = 0; b < 2; ++b) out(r, c) += rho(expand(r, b), expand(c, b));
    return out;
}

}  // namespace

TEST(Linalg, KronPlacesFirstFactorInHighBits) {
    const CMatrix k = kron(kX, CMatrix::Identity(2, 2));
    // X on the high bit maps |00> to |10>, which is index 2
    EXPECT_EQ(k(2, 0), cplx(1));
    EXPECT_EQ(k(0, 2), cplx(1));
    EXPECT_EQ(k(1, 0), cplx(0));
}

TEST(Linalg, EmbedMatchesKronOrdering) {
    const int q0[] = {0};
    const int q1[] = {1};
    EXPECT_LT(max_abs(embed(kX, q0, 2) - kron(CMatrix::Identity(2, 2), kX)), 1e-15);
    EXPECT_LT(max_abs(embed(kX, q1, 2) - kron(kX, CMatrix::Identity(2, 2))), 1e-15);
}

TEST(Linalg, EmbedTwoQubitOperatorWithSwappedQubits) {
    std::mt19937_64 rng(3);
    const CMatrix u = random_matrix(4, rng);
    const int order[] = {2, 0};
    const CMatrix full = embed(u, order, 3);
    // local index bit 0 -> qubit 2, bit 1 -> qubit 0
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const int rl = ((r >> 2) & 1) | ((r & 1) << 1);
            const int cl = ((c >> 2) & 1) | ((c & 1) << 1);
            const cplx expected = (((r >> 1) & 1) == ((c >> 1) & 1)) ? u(rl, cl) : cplx(0);
            EXPECT_LT(std::abs(full(r, c) - expected), 1e-14);
        }
}

TEST(Linalg, PartialTraceMatchesBruteForce) {
    std::mt19937_64 rng(11);
    const auto rho = random_state(3, rng);
    for (int q = 0; q < 3; ++q) {
        const auto reduced = partial_trace(rho, q);
        EXPECT_EQ(reduced.n_qubits, 2);
        EXPECT_LT(max_abs(reduced.m - brute_partial_trace(rho.m, 3, q)), 1e-14) << "qubit " << q;
    }
}

TEST(Linalg, PartialTraceOfBellStateIsMaximallyMixed) {
    CMatrix psi = CMatrix::Zero(4, 1);
    psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
    const auto rho = DensityMatrix::from_matrix(psi * psi.adjoint());
    const auto r = partial_trace(rho, 1);
    EXPECT_LT(max_abs(r.m - CMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(Linalg, ExpectationOfPauliZ) {
    EXPECT_DOUBLE_EQ(expectation(kZ, DensityMatrix::ground(1)), 1.0);
    EXPECT_DOUBLE_EQ(expectation(kZ, DensityMatrix::basis(1, 1)), -1.0);
    const int q1[] = {1};
    EXPECT_DOUBLE_EQ(expectation(embed(kZ, q1, 2), DensityMatrix::basis(2, 2)), -1.0);
}

TEST(Linalg, ExpectationRejectsNonHermitianAndWrongSize) {
    EXPECT_THROW(expectation(mat2(0, 1, 0, 0), DensityMatrix::ground(1)), std::invalid_argument);
    EXPECT_THROW(expectation(kZ, DensityMatrix::ground(2)), std::invalid_argument);
}

TEST(Linalg, ConjugateAndLocalApplicationAgree) {
    std::mt19937_64 rng(5);
    const auto rho = random_state(3, rng);
    const CMatrix u = random_unitary(4, rng);
    const int qs[] = {1, 2};
    const auto full = conjugate(rho, embed(u, qs, 3));
    CMatrix local = rho.m;
    apply_local(local, u, qs);
    EXPECT_LT(max_abs(full.m - local), 1e-13);

    CMatrix left = rho.m;
    apply_left(left, u, qs);
    apply_right_adjoint(left, u, qs);
    EXPECT_LT(max_abs(full.m - left), 1e-13);
}

TEST(Linalg, SuperopFromKrausActsLikeKraus) {
    std::mt19937_64 rng(7);
    const auto rho = random_state(2, rng);
    const std::array<CMatrix, 2> k = {random_matrix(2, rng), random_matrix(2, rng)};
    const Superop s = superop_from_kraus(k);
    CMatrix got = rho.m;
    apply_superop(got, s, 1);
    CMatrix expected = CMatrix::Zero(4, 4);
    const int q1[] = {1};
    for (const auto& op : k) {
        const CMatrix e = embed(op, q1, 2);
        expected += e * rho.m * e.adjoint();
    }
    EXPECT_LT(max_abs(got - expected), 1e-13);
}

TEST(Linalg, Predicates) {
    std::mt19937_64 rng(9);
    const CMatrix u = random_unitary(4, rng);
    EXPECT_TRUE(is_unitary(u, 1e-12));
    EXPECT_FALSE(is_unitary(2.0 * u));
    EXPECT_TRUE(equal_up_to_phase(u, std::polar(1.0, 0.7) * u));
    EXPECT_FALSE(equal_up_to_phase(u, kron(kX, kZ)));
    EXPECT_TRUE(is_hermitian(kron(kX, kZ)));
    EXPECT_FALSE(is_hermitian(mat2(0, 1, 0, 0)));
}

TEST(Linalg, QubitsForDim) {
    EXPECT_EQ(qubits_for_dim(8), 3);
    EXPECT_THROW(qubits_for_dim(6), std::invalid_argument);
}
