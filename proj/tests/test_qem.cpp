#include "qnec/algos.hpp"
#include "qnec/qem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace qnec;

namespace {

Circuit two_qubit_circuit() {
    Circuit c(2);
    c.add({Gate(GateKind::Ry, {0}, 1.1), Gate(GateKind::H, {1})});
    c.add(Gate(GateKind::CX, {0, 1}), 2.0);
    c.add({Gate(GateKind::Rx, {0}, 0.6), Gate(GateKind::Rz, {1}, 0.3)}, 0.0);
    c.add(Gate(GateKind::CRy, {1, 0}, 0.8), 0.5);
    return c;
}

Observable zz() { return named_observable("ZZ", 2); }

// Derivative at zero from one-sided second-order differences.
double derivative_at_zero(const std::function<double(double)>& f, double h = 1e-5) {
    return (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
}

double second_derivative_at_zero(const std::function<double(double)>& f, double h = 2e-4) {
    return (2.0 * f(0.0) - 5.0 * f(h) + 4.0 * f(2.0 * h) - f(3.0 * h)) / (h * h);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

}  // namespace

TEST(Qem, FirstOrderGroupIsNoiseDerivative) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    const auto none = NoiseModel::none();

    const double ad = derivative_at_zero([&](double t) { return circuit_expectation(c, o, NoiseModel::amplitude_damping(t)); });
    EXPECT_NEAR(delta_expectation(first_order_group(c, GroupKind::AD), o, none), ad, 1e-7);

    const double pd = derivative_at_zero([&](double t) { return circuit_expectation(c, o, NoiseModel::phase_damping(t)); });
    EXPECT_NEAR(delta_expectation(first_order_group(c, GroupKind::PD), o, none), pd, 1e-7);

    const double dep = derivative_at_zero([&](double t) { return circuit_expectation(c, o, NoiseModel::depolarizing(t)); });
    EXPECT_NEAR(delta_expectation(first_order_group(c, GroupKind::Pauli), o, none), dep, 1e-7);

    GroupOptions gad;
    gad.n_bar = 0.4;
    const double g =
        derivative_at_zero([&](double t) { return circuit_expectation(c, o, NoiseModel::generalized_ad(t, 0.4)); });
    EXPECT_NEAR(delta_expectation(first_order_group(c, GroupKind::GAD, gad), o, none), g, 1e-7);
}

TEST(Qem, AncillaGroupMatchesDirectGroup) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    GroupOptions anc;
    anc.mode = InsertMode::Ancilla;
    const auto direct = first_order_group(c, GroupKind::AD);
    const auto gadget = first_order_group(c, GroupKind::AD, anc);
    EXPECT_EQ(direct.size(), gadget.size());
    EXPECT_NEAR(delta_expectation(direct, o, NoiseModel::none()), delta_expectation(gadget, o, NoiseModel::none()), 1e-13);
}

TEST(Qem, GroupSizeCountsFoldedIdentity) {
    const Circuit c = two_qubit_circuit();  // three noisy layers, two qubits
    const auto g = first_order_group(c, GroupKind::AD);
    // the identity terms fold onto the original; Z, sigma-, P1 per (layer, qubit)
    EXPECT_EQ(g.size(), 1u + 3u * 3u * 2u);
    EXPECT_EQ(g.distinct_circuits(), g.size());
    EXPECT_EQ(first_order_group(c, GroupKind::PD).size(), 1u + 3u * 2u);
    EXPECT_EQ(first_order_group(c, GroupKind::Pauli).size(), 1u + 3u * 3u * 2u);
    GroupOptions gad;
    gad.n_bar = 0.2;
    // emission and absorption share the Z term: Z, sigma-, P1, sigma+, P0 per (layer, qubit)
    EXPECT_EQ(first_order_group(c, GroupKind::GAD, gad).size(), 1u + 5u * 3u * 2u);
}

TEST(Qem, InhomogeneousGroupIsDerivativeInTime) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    const std::vector<double> t1 = {80e-6, 120e-6}, t2 = {60e-6, 150e-6};
    const double unit = 1e-6;
    const auto g = inhomogeneous_group(c, t1, t2, unit);
    const double group = delta_expectation(g, o, NoiseModel::none());
    // the channel is linear in the time unit, so d/ds <O>(s) at 0 times the unit is the first-order term
    const double d = derivative_at_zero(
        [&](double s) { return s == 0.0 ? circuit_expectation(c, o, NoiseModel::none())
                                        : circuit_expectation(c, o, NoiseModel::t1t2(t1, t2, s)); },
        1e-9);
    EXPECT_NEAR(group, d * unit, 1e-6);
}

TEST(Qem, SecondOrderGroupIsSecondDerivative) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    const double d2 =
        second_derivative_at_zero([&](double t) { return circuit_expectation(c, o, NoiseModel::amplitude_damping(t)); });
    EXPECT_NEAR(delta_expectation(second_order_group(c), o, NoiseModel::none()), d2, 1e-4);
}

TEST(Qem, ResidualsScaleWithOrder) {
    const Circuit c = build_pre1(9);
    const auto o = named_observable("Z", 1);
    std::vector<double> taus = {0.002, 0.004, 0.008, 0.016}, r1, r2;
    for (double t : taus) {
        QemOptions opts;
        opts.order = 2;
        const auto e = run_qem(c, o, NoiseModel::amplitude_damping(t), opts);
        r1.push_back(std::abs(mitigate_first_order(e.noisy, e.delta1, t) - *e.ideal));
        r2.push_back(std::abs(e.mitigated - *e.ideal));
    }
    EXPECT_NEAR(slope(taus, r1), 2.0, 0.1);
    EXPECT_NEAR(slope(taus, r2), 3.0, 0.15);
}

TEST(Qem, RunQemFirstOrderFormula) {
    const Circuit c = two_qubit_circuit();
    const auto o = named_observable("IZ", 2);
    const auto model = NoiseModel::amplitude_damping(0.03);
    const auto e = run_qem(c, o, model);
    ASSERT_TRUE(e.ideal);
    EXPECT_NEAR(*e.ideal, circuit_expectation(c, o, NoiseModel::none()), 1e-14);
    EXPECT_NEAR(e.noisy, circuit_expectation(c, o, model), 1e-14);
    const double d1 = delta_expectation(first_order_group(c, GroupKind::AD), o, model);
    EXPECT_NEAR(e.mitigated, e.noisy - 0.03 * d1, 1e-14);
    EXPECT_LT(std::abs(e.mitigated - *e.ideal), std::abs(e.noisy - *e.ideal));
}

TEST(Qem, CompositeModelUsesBothGroups) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    const auto model = NoiseModel::ad_pd(0.004, 0.002);
    const auto e = run_qem(c, o, model);
    ASSERT_TRUE(e.delta_pd);
    EXPECT_NEAR(e.mitigated, composite_mitigate(e.noisy, e.delta1, *e.delta_pd, 0.004, 0.002), 1e-15);
    EXPECT_LT(std::abs(e.mitigated - *e.ideal), 0.1 * std::abs(e.noisy - *e.ideal));
}

TEST(Qem, Formulas) {
    EXPECT_DOUBLE_EQ(mitigate_first_order(0.8, -2.0, 0.1), 1.0);
    EXPECT_DOUBLE_EQ(mitigate_second_order(1.0, 1.0, 2.0, 3.0, 0.5), 1.0 - 0.5 - 0.25 + 0.75);
    EXPECT_DOUBLE_EQ(mitigate_second_order_only(1.0, 2.0, 3.0, 0.5), 1.0 - 0.25 + 0.75);
    EXPECT_DOUBLE_EQ(gad_combine(1.0, 2.0, 0.5), 1.5 + 1.0);
    EXPECT_THROW(mitigate_first_order(0.0, 0.0, -1.0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(group_multiplier(NoiseModel::phase_damping(0.3)), 0.3);
    EXPECT_DOUBLE_EQ(group_multiplier(NoiseModel::t1t2({1.0}, {})), 1.0);
}

TEST(Qem, ShotsEngineIsThreadIndependent) {
    const Circuit c = two_qubit_circuit();
    const auto o = zz();
    QemOptions a;
    a.eval.engine = Engine::Shots;
    a.eval.shots = ShotConfig{128, 8, 77};
    QemOptions b = a;
    b.eval.threads = 3;
    const auto model = NoiseModel::amplitude_damping(0.05);
    const auto ea = run_qem(c, o, model, a);
    const auto eb = run_qem(c, o, model, b);
    ASSERT_TRUE(ea.mitigated_series && eb.mitigated_series);
    EXPECT_EQ(ea.mitigated_series->values, eb.mitigated_series->values);
    EXPECT_NEAR(ea.mitigated, ea.mitigated_series->mean(), 1e-12);
    EXPECT_NEAR(ea.noisy, ea.noisy_series->mean(), 1e-12);
}

TEST(Qem, ManifestListsMembers) {
    const Circuit c = build_pre1(2);
    const auto g = first_order_group(c, GroupKind::AD);
    const std::string m = group_manifest(g);
    for (const auto& member : g.members)
        if (!member.label.empty()) EXPECT_NE(m.find(member.label), std::string::npos) << member.label;
    EXPECT_NE(m.find("qubits 1"), std::string::npos);
}

TEST(Qem, ApplySitesOrdersLaterLayersFirst) {
    const Circuit c = build_pre1(3);
    const auto out = apply_sites(c, {{0, 0, InsertOp::Z}, {2, 0, InsertOp::X}}, InsertMode::Direct);
    ASSERT_EQ(out.depth(), 5u);
    EXPECT_EQ(out.layers[1].gates[0].kind, GateKind::Z);
    EXPECT_EQ(out.layers[4].gates[0].kind, GateKind::X);
}
