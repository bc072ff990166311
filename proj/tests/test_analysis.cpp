#include "qnec/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace qnec;

TEST(Analysis, RtQemExamples) {
    EXPECT_NEAR(*rt_qem(1.0, 0.8, 0.98), 10.0, 1e-12);
    EXPECT_DOUBLE_EQ(*rt_qem(0.5, 0.4, 0.45), 2.0);
    EXPECT_FALSE(rt_qem(0.5, 0.4, 0.5));
    EXPECT_FALSE(rt_qem(0.5, 0.4, 0.5 + 1e-15));
}

TEST(Analysis, RtQemMatchesDefinitionOnRandomTriples) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double ideal = u(rng), noisy = u(rng), mitigated = u(rng);
        const double den = std::abs(mitigated - ideal);
        const auto r = rt_qem(ideal, noisy, mitigated);
        if (den <= 1e-14) {
            EXPECT_FALSE(r);
            continue;
        }
        ASSERT_TRUE(r);
        EXPECT_NEAR(*r, std::abs(noisy - ideal) / den, 1e-12 * *r);
        // shifting all three values together leaves the ratio unchanged
        EXPECT_NEAR(*rt_qem(ideal + 0.25, noisy + 0.25, mitigated + 0.25), *r, 1e-9 * *r);
    }
}

TEST(Analysis, RtPecQem) {
    EXPECT_NEAR(*rt_pec_qem(1.0, 0.9, 0.95), 2.0, 1e-12);
    EXPECT_FALSE(rt_pec_qem(1.0, 0.9, 1.0));
}

TEST(Analysis, Mse) {
    const std::vector<double> v = {1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(mse(v, 2.0), 2.0 / 3.0);
    EXPECT_THROW(mse(std::vector<double>{}, 0.0), std::invalid_argument);
}

TEST(Analysis, LogLogSlope) {
    const std::vector<double> x = {0.01, 0.02, 0.04, 0.08};
    std::vector<double> y;
    for (double t : x) y.push_back(3.0 * t * t);
    EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
    EXPECT_THROW(loglog_slope(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
    EXPECT_THROW(loglog_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, -2, 3}), std::invalid_argument);
    EXPECT_THROW(loglog_slope(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(Analysis, MFirstSecond) {
    EXPECT_DOUBLE_EQ(m_first_second(0.99, 0.97, 0.01), 2.0);
    EXPECT_THROW(m_first_second(1.0, 1.0, 0.0), std::invalid_argument);
}
