#include "qnec/calib.hpp"
#include "qnec/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qnec;

namespace {

const char* kTable = R"(qubits:
  - {t1: 60e-6, t2: 50e-6, frequency: 5.0e9}
  - {t1: 80e-6, t2: 90e-6}
gate_times:
  single: 40e-9
  rz: 0.0
  cx:
    - [0, 1, 800e-9]
    - [1, 0, 700e-9]
)";

}  // namespace

TEST(Calib, TimeGrids) {
    const auto g1 = t1_time_grid();
    ASSERT_EQ(g1.size(), 50u);
    EXPECT_NEAR(g1.front(), 2e-6 + 35.56e-9, 1e-15);
    EXPECT_NEAR(g1.back(), 100e-6 + 35.56e-9, 1e-15);
    const auto g2 = t2_time_grid();
    ASSERT_EQ(g2.size(), 300u);
    EXPECT_NEAR(g2.front(), 16e-6 / 45.0, 1e-18);
    EXPECT_NEAR(g2.back(), 300.0 * 16e-6 / 45.0, 1e-15);
}

TEST(Calib, T1FitRecoversNoiselessDecay) {
    const auto s = synthetic_t1(62.93e-6, t1_time_grid());
    const auto f = fit_t1(s);
    EXPECT_NEAR(f.t1, 62.93e-6, 62.93e-6 * 1e-8);
    EXPECT_LT(f.residual, 1e-10);
}

TEST(Calib, T1FitToleratesNoise) {
    const auto s = synthetic_t1(45e-6, t1_time_grid(), 0.01, 3);
    EXPECT_NEAR(fit_t1(s).t1, 45e-6, 0.05 * 45e-6);
}

TEST(Calib, T1FitRejectsFlatData) {
    DecaySeries s;
    for (int i = 1; i <= 10; ++i) {
        s.times.push_back(i * 1e-6);
        s.values.push_back(1.0);
    }
    EXPECT_THROW(fit_t1(s), std::runtime_error);
    DecaySeries few{{1e-6, 2e-6}, {0.9, 0.8}};
    EXPECT_THROW(fit_t1(few), std::invalid_argument);
    DecaySeries unordered{{2e-6, 1e-6, 3e-6, 4e-6, 5e-6}, {0.9, 0.8, 0.7, 0.6, 0.5}};
    EXPECT_THROW(fit_t1(unordered), std::invalid_argument);
}

TEST(Calib, T2FitRecoversTwoFrequencies) {
    T2Model m;
    m.t2 = 70e-6;
    m.amplitudes = {0.3, 0.15};
    m.frequencies = {0.11e6, 0.17e6};
    m.phases = {0.2, -0.4};
    m.offset = 0.5;
    const auto f = fit_t2(synthetic_t2(m, t2_time_grid()));
    EXPECT_FALSE(f.degenerate);
    EXPECT_NEAR(f.t2, m.t2, 1e-6 * m.t2);
    EXPECT_NEAR(f.frequencies[0], m.frequencies[0], 1.0);
    EXPECT_NEAR(f.frequencies[1], m.frequencies[1], 1.0);
    EXPECT_NEAR(f.offset, 0.5, 1e-8);
    EXPECT_LT(f.residual, 1e-9);
}

TEST(Calib, T2FitDegenerateOnConstantData) {
    DecaySeries s;
    for (double t : t2_time_grid()) {
        s.times.push_back(t);
        s.values.push_back(0.42);
    }
    const auto f = fit_t2(s);
    EXPECT_TRUE(f.degenerate);
    EXPECT_TRUE(std::isinf(f.t2));
    EXPECT_NEAR(f.offset, 0.42, 1e-12);
}

TEST(Calib, T2ModelEvaluation) {
    T2Model m;
    m.t2 = 1.0;
    m.amplitudes = {1.0, 0.0};
    m.frequencies = {0.0, 0.0};
    m.offset = 0.25;
    EXPECT_NEAR(m(1.0), std::exp(-1.0) + 0.25, 1e-15);
}

TEST(Calib, ParsesDeviceTable) {
    const auto t = parse_device_table(kTable);
    EXPECT_EQ(t.n_qubits(), 2);
    EXPECT_DOUBLE_EQ(t.t1[1], 80e-6);
    EXPECT_DOUBLE_EQ(t.single_qubit_time, 40e-9);
    EXPECT_DOUBLE_EQ(t.cx_times.at({1, 0}), 700e-9);
    EXPECT_DOUBLE_EQ(t.frequencies[0], 5.0e9);
}

TEST(Calib, DeviceTableErrorsCarryPosition) {
    const std::string bad = "qubits:\n  - {t1: 60e-6, t2: 50e-6}\ngate_times:\n  single: 40e-9\n  cx:\n    - [0, 1]\n";
    try {
        parse_device_table(bad);
        FAIL() << "expected an error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 6);
        EXPECT_GT(e.column(), 0);
    }
    EXPECT_THROW(parse_device_table("qubits: []\n"), ConfigError);
    EXPECT_THROW(load_device_table("/nonexistent/table.yaml"), ConfigError);
}

TEST(Calib, BundledDeviceTableLoads) {
    const auto t = load_device_table("data/belem_device.yaml");
    EXPECT_EQ(t.n_qubits(), 5);
    EXPECT_DOUBLE_EQ(t.t1[0], 62.93e-6);
    EXPECT_EQ(t.cx_times.size(), 8u);
}

TEST(Calib, LayerDurationsFollowGateTimes) {
    const auto t = parse_device_table(kTable);
    EXPECT_DOUBLE_EQ(layer_duration(t, Layer{{Gate(GateKind::X, {0}), Gate(GateKind::Rz, {1}, 0.3)}, 1.0}), 40e-9);
    EXPECT_DOUBLE_EQ(layer_duration(t, Layer{{Gate(GateKind::Rz, {0}, 0.3)}, 1.0}), 0.0);
    EXPECT_DOUBLE_EQ(layer_duration(t, Layer{{Gate(GateKind::CX, {1, 0})}, 1.0}), 700e-9);
    EXPECT_DOUBLE_EQ(layer_duration(t, Layer{{Gate(GateKind::SigmaMinus, {0})}, 1.0}), 0.0);
    EXPECT_THROW(layer_duration(t, Layer{{Gate(GateKind::CZ, {0, 1})}, 1.0}), std::invalid_argument);

    Circuit c(2);
    c.add(Gate(GateKind::X, {0}));
    c.add(Gate(GateKind::CX, {0, 1}));
    const auto d = with_device_durations(c, t);
    EXPECT_DOUBLE_EQ(d.layers[1].duration, 800e-9);
    const auto tm = tau_matrix(t, d);
    EXPECT_DOUBLE_EQ(tm.ad[1][1], 800e-9 / 80e-6);
    EXPECT_DOUBLE_EQ(tm.pd[0][0], 40e-9 / (2.0 * 50e-6));
    Circuit wide(3);
    wide.add(Gate(GateKind::X, {2}));
    EXPECT_THROW(tau_matrix(t, with_device_durations(Circuit(2), t)).ad.at(2), std::out_of_range);
    EXPECT_THROW(layer_duration(t, Layer{{Gate(GateKind::CX, {0, 2})}, 1.0}), std::out_of_range);
}
