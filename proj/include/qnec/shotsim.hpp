#pragma once

#include "qnec/circuit.hpp"
#include "qnec/densim.hpp"
#include "qnec/noise.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qnec {

// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then a two-round xor-shift-multiply finalizer.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform double in [0, 1) from the top 53 bits.
    double uniform();

private:
    std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);
// Stream seed for (master, member, sample): chained finalizer over the three words.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t member, std::uint64_t sample);

struct ShotConfig {
    std::uint64_t n_qc = 1024;
    std::uint64_t n_samp = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SampleSeries {
    std::vector<double> values;

    double mean() const;
    // Population variance (divides by the number of samples).
    double variance() const;
    double std_error() const;
};

// Multinomial draw of n_qc shots by inverse CDF; probability missing from the vector is a discard outcome.
std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t n_qc, std::uint64_t stream_seed);

// Estimates Tr(O rho) of the register branch from basis counts; O must be diagonal.
// Discarded shots (failed post-selection) count towards n_qc.
SampleSeries estimate_expectation(std::span<const double> probs, std::span<const double> diag, const ShotConfig& cfg,
                                  std::uint64_t member = 0);
SampleSeries estimate_expectation(const Circuit& c, const Observable& o, const NoiseModel& model, const ShotConfig& cfg,
                                  std::uint64_t member = 0);

std::vector<double> observable_diagonal(const CMatrix& o);

// Least-squares slope through the origin of 1/variance against N_QC; zero-variance points are skipped.
double inverse_variance_fit(std::span<const std::pair<double, double>> n_qc_and_variance);

}  // namespace qnec
