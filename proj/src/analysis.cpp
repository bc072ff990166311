#include "qnec/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qnec {

namespace {

std::optional<double> error_ratio(double ideal, double numerator_value, double denominator_value) {
    const double den = std::abs(denominator_value - ideal);
    if (!(den > kSaturationFloor)) return std::nullopt;
    return std::abs(numerator_value - ideal) / den;
}

}  // namespace

std::optional<double> rt_qem(double ideal, double noisy, double mitigated) { return error_ratio(ideal, noisy, mitigated); }

std::optional<double> rt_pec_qem(double ideal, double pec_value, double qem_value) {
    return error_ratio(ideal, pec_value, qem_value);
}

double mse(std::span<const double> values, double ideal) {
    if (values.empty()) throw std::invalid_argument("mse: empty series");
    double s = 0.0;
    for (double v : values) s += (v - ideal) * (v - ideal);
    return s / static_cast<double>(values.size());
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("loglog_slope: size mismatch");
    if (xs.size() < 3) throw std::invalid_argument("loglog_slope: need at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("loglog_slope: data must be positive");
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("loglog_slope: x values must not all be equal");
    return sxy / sxx;
}

double m_first_second(double qem2, double qem2_only, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("m_first_second: tau must be > 0");
    return std::abs(qem2 - qem2_only) / tau;
}

}  // namespace qnec
