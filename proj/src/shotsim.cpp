#include "qnec/shotsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qnec {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t member, std::uint64_t sample) {
    std::uint64_t h = mix64(master + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (member + 0x632BE59BD9B4E019ULL));
    h = mix64(h ^ (sample + 0x85157AF5ULL));
    return h;
}

void ShotConfig::validate() const {
    if (n_qc < 1) throw std::invalid_argument("shots: n_qc must be >= 1");
    if (n_samp < 1) throw std::invalid_argument("shots: n_samp must be >= 1");
}

double SampleSeries::mean() const {
    if (values.empty()) throw std::invalid_argument("SampleSeries: empty");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double SampleSeries::variance() const {
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size());
}

double SampleSeries::std_error() const { return std::sqrt(variance() / static_cast<double>(values.size())); }

std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t n_qc, std::uint64_t stream_seed) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i];
        if (p < -1e-9) throw std::invalid_argument("sample_counts: negative probability " + std::to_string(p));
        acc += std::max(p, 0.0);
        cdf[i] = acc;
    }
    if (acc > 1.0 + 1e-9) throw std::invalid_argument("sample_counts: probabilities sum to " + std::to_string(acc));
    std::vector<std::uint64_t> counts(probs.size(), 0);
    SplitMix64 rng(stream_seed);
    for (std::uint64_t s = 0; s < n_qc; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it != cdf.end()) ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
}

std::vector<double> observable_diagonal(const CMatrix& o) {
    if (!o.isDiagonal(1e-12)) throw std::invalid_argument("shot estimation needs a diagonal observable");
    std::vector<double> d(static_cast<std::size_t>(o.rows()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = o(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    return d;
}

SampleSeries estimate_expectation(std::span<const double> probs, std::span<const double> diag, const ShotConfig& cfg,
                                  std::uint64_t member) {
    cfg.validate();
    if (probs.size() != diag.size()) throw std::invalid_argument("estimate_expectation: size mismatch");
    SampleSeries out;
    out.values.reserve(cfg.n_samp);
    for (std::uint64_t i = 0; i < cfg.n_samp; ++i) {
        const auto counts = sample_counts(probs, cfg.n_qc, derive_seed(cfg.seed, member, i));
        double s = 0.0;
        for (std::size_t x = 0; x < counts.size(); ++x) s += static_cast<double>(counts[x]) * diag[x];
        out.values.push_back(s / static_cast<double>(cfg.n_qc));
    }
    return out;
}

SampleSeries estimate_expectation(const Circuit& c, const Observable& o, const NoiseModel& model, const ShotConfig& cfg,
                                  std::uint64_t member) {
    const auto diag = observable_diagonal(o.matrix);
    const auto r = evolve_register(measured_circuit(c, o), model);
    const auto probs = basis_probabilities(r);
    return estimate_expectation(probs, diag, cfg, member);
}

double inverse_variance_fit(std::span<const std::pair<double, double>> pts) {
    if (pts.size() < 3) throw std::invalid_argument("inverse_variance_fit: need at least 3 points");
    double sxy = 0.0, sxx = 0.0;
    std::size_t used = 0;
    for (const auto& [n, var] : pts) {
        if (!(n > 0.0)) throw std::invalid_argument("inverse_variance_fit: N_QC must be positive");
        if (var < 0.0) throw std::invalid_argument("inverse_variance_fit: negative variance");
        if (var == 0.0) continue;
        sxy += n / var;
        sxx += n * n;
        ++used;
    }
    if (used == 0) throw std::invalid_argument("inverse_variance_fit: all variances are zero");
    return sxy / sxx;
}

}  // namespace qnec
