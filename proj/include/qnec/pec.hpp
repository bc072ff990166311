#pragma once

#include "qnec/circuit.hpp"
#include "qnec/densim.hpp"
#include "qnec/noise.hpp"
#include "qnec/shotsim.hpp"

#include <array>
#include <cstdint>

namespace qnec {

// Quasiprobabilities of the AD recovery over the basis operations {identity, Z, reset to |0>}.
struct RecoveryOp {
    double epsilon = 0.0;
    double eta_i = 1.0;
    double eta_z = 0.0;
    double eta_reset = 0.0;
    double gamma_norm = 1.0;

    std::array<double, 3> etas() const { return {eta_i, eta_z, eta_reset}; }
};

RecoveryOp recovery(double theta_tau);
RecoveryOp recovery_from_tau(double tau);

// Signed linear map sum_b eta_b B(rho) on one qubit.
Superop recovery_superop(const RecoveryOp& r);

// Recovery map inserted after every positive-duration layer on every register qubit.
double pec_exact_check(const Circuit& c, const Observable& o, const NoiseModel& model);

struct PecSample {
    SampleSeries series;      // one estimate per repetition
    double gamma_total = 1.0;  // product of per-site gamma norms
    std::size_t sites = 0;
};

// For each repetition draws m circuits, picking per site I, Z or reset with probability |eta|/gamma;
// the repetition's estimate is gamma_total * mean(sign * noisy expectation of the drawn circuit).
// Stream for circuit i of repetition r derives from (seed, r, i).
PecSample pec_sample(const Circuit& c, const Observable& o, const NoiseModel& model, std::size_t m, std::size_t repetitions,
                     std::uint64_t seed, unsigned threads = 1);

}  // namespace qnec
