#pragma once

#include "qnec/config.hpp"
#include "qnec/pec.hpp"
#include "qnec/qem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qnec {

struct PointResult {
    std::optional<double> theta_tau;  // empty for device-table runs
    std::optional<double> tau;
    std::string observable;
    double ideal = 0.0;
    QemEstimate qem;
    std::optional<PecSample> pec;
};

struct SweepResult {
    std::vector<PointResult> points;  // grid-major, then observables in config order
    std::string csv;
    std::string json;
    std::optional<std::string> manifest;
};

// CSV header columns in order.
const std::vector<std::string>& csv_columns();

// Benchmark (or circuit file) with device durations applied when a table is configured.
Circuit experiment_circuit(const ExperimentConfig& cfg);

SweepResult run_sweep(const ExperimentConfig& cfg);
// Ideal and noisy values only, as CSV (theta_tau, tau, observable, ideal, noisy).
std::string run_simulate(const ExperimentConfig& cfg);
// Manifest of the first-order group for the first observable and grid point.
std::string run_manifest(const ExperimentConfig& cfg);
// Writes the CSV, JSON and optional manifest into out_dir (created if missing).
void write_outputs(const SweepResult& r, const ExperimentConfig& cfg, const std::string& out_dir);

// Formatting shared by the CSV writer and the CLI: %.17g, "saturated" for an empty ratio.
std::string format_double(double v);
std::string format_ratio(const std::optional<double>& v);

}  // namespace qnec
