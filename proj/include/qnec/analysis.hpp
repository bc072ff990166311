#pragma once

#include <optional>
#include <span>

namespace qnec {

// Denominators at or below this are reported as saturated.
inline constexpr double kSaturationFloor = 1e-14;

// |noisy - ideal| / |mitigated - ideal|; nullopt when the mitigated error is saturated.
std::optional<double> rt_qem(double ideal, double noisy, double mitigated);
// |pec - ideal| / |qem - ideal|; nullopt when the QEM error is saturated.
std::optional<double> rt_pec_qem(double ideal, double pec_value, double qem_value);

// Mean of (v - ideal)^2. Throws std::invalid_argument on an empty series.
double mse(std::span<const double> values, double ideal);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

// |qem2 - qem2_only| / tau: size of the first-order correction relative to the second-order one.
double m_first_second(double qem2, double qem2_only, double tau);

}  // namespace qnec
