#pragma once

#include "qnec/circuit.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qnec {

struct DecaySeries {
    std::vector<double> times;   // seconds, strictly increasing
    std::vector<double> values;  // <P1>(t)

    void validate(std::size_t min_points) const;
};

struct T1Fit {
    double t1 = 0.0;  // seconds
    double residual = 0.0;  // RMS
    int evaluations = 0;
};

struct T2Fit {
    double t2 = 0.0;  // seconds
    std::array<double, 2> amplitudes{};
    std::array<double, 2> frequencies{};  // Hz
    std::array<double, 2> phases{};
    double offset = 0.0;
    double residual = 0.0;  // RMS
    bool degenerate = false;  // no oscillation found; offset-only fit
};

// Parameters of exp(-t/T2) [a1 cos(2 pi f1 t + p1) + a2 cos(2 pi f2 t + p2)] + b.
struct T2Model {
    double t2 = 0.0;
    std::array<double, 2> amplitudes{};
    std::array<double, 2> frequencies{};
    std::array<double, 2> phases{};
    double offset = 0.0;

    double operator()(double t) const;
};

// Least-squares fit of exp(-t/T1). Throws std::runtime_error when there is no decay or the solver fails.
T1Fit fit_t1(const DecaySeries& s);
// Levenberg-Marquardt fit of the two-cosine model with 16 frequency seeds from a spectrum scan.
T2Fit fit_t2(const DecaySeries& s);

// Relaxation grids of the device study: 2a us + 35.56 ns (a = 1..50) and 16a/45 us (a = 1..300).
std::vector<double> t1_time_grid();
std::vector<double> t2_time_grid();
DecaySeries synthetic_t1(double t1, const std::vector<double>& times, double noise_sigma = 0.0, std::uint64_t seed = 0);
DecaySeries synthetic_t2(const T2Model& m, const std::vector<double>& times, double noise_sigma = 0.0, std::uint64_t seed = 0);

struct DeviceTable {
    std::vector<double> t1;  // seconds, per qubit
    std::vector<double> t2;
    std::vector<double> frequencies;  // Hz, informational
    double single_qubit_time = 0.0;   // seconds, for every 1-qubit gate except Rz
    double rz_time = 0.0;             // 0 for virtual Z
    std::map<std::pair<int, int>, double> cx_times;  // (control, target) -> seconds

    void validate() const;
    int n_qubits() const { return static_cast<int>(t1.size()); }
};

// YAML device table; see README for the layout. Errors carry line/column positions.
DeviceTable load_device_table(const std::string& path);
DeviceTable parse_device_table(const std::string& yaml_text);

// Layer duration = longest gate in the layer; layers of only Rz (or inserted operators) take 0.
double layer_duration(const DeviceTable& table, const Layer& layer);
// Copy of c with layer durations in seconds.
Circuit with_device_durations(const Circuit& c, const DeviceTable& table);

struct TauMatrix {
    // [qubit][layer]
    std::vector<std::vector<double>> ad;  // dt_k / T1_j
    std::vector<std::vector<double>> pd;  // dt_k / (2 T2_j)
};

// Uses the circuit's layer durations (seconds).
TauMatrix tau_matrix(const DeviceTable& table, const Circuit& c);

}  // namespace qnec
