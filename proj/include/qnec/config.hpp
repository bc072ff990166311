#pragma once

#include "qnec/algos.hpp"
#include "qnec/noise.hpp"
#include "qnec/qem.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnec {

// Configuration problem with a 1-based source position (0 when unknown).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct PecSettings {
    bool enabled = false;
    std::size_t m = 181;
    std::size_t repetitions = 100;
};

struct ExperimentConfig {
    std::string name = "experiment";
    BenchmarkSpec benchmark;
    std::optional<std::string> circuit_file;  // replaces the benchmark when set
    std::vector<std::string> observables;

    NoiseKind noise_kind = NoiseKind::AD;
    std::vector<double> theta_grid;  // AD / GAD strengths given as theta_tau
    std::vector<double> tau_grid;    // alternative to theta_grid
    double n_bar = 0.0;
    double tau_pd_ratio = 0.0;  // ADPD: tau_pd = ratio * tau; PD: tau_pd = tau
    double p_depol_ratio = 1.0;  // depolarizing: p = ratio * tau
    std::optional<std::string> device_table;  // per-qubit T1/T2 model with device gate times

    Engine engine = Engine::Exact;
    ShotConfig shots;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int order = 1;
    InsertMode mode = InsertMode::Direct;
    unsigned threads = 1;
    PecSettings pec;

    std::string out_dir = ".";
    std::string csv_name = "results.csv";
    std::string json_name = "summary.json";
    std::optional<std::string> manifest_name;

    // Noise models for every grid point, in grid order.
    std::vector<NoiseModel> noise_models() const;
    std::vector<double> grid_values() const;
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text, const std::string& origin = "<config>");

InsertMode insert_mode_from_name(const std::string& s);
Engine engine_from_name(const std::string& s);

}  // namespace qnec
