#pragma once

#include "qnec/circuit.hpp"
#include "qnec/linalg.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qnec {

enum class NoiseKind { None, AD, GAD, PD, ADPD, Depolarizing };

std::string_view noise_kind_name(NoiseKind k);
std::optional<NoiseKind> noise_kind_from_name(std::string_view name);

// Per-qubit T1/T2 (seconds). A layer of duration s lasts s * time_unit seconds.
struct T1T2 {
    std::vector<double> t1;
    std::vector<double> t2;
    double time_unit = 1.0;
};

// Homogeneous strengths apply per unit of layer duration.
struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double tau = 0.0;
    double n_bar = 0.0;
    double tau_pd = 0.0;
    double p_depol = 0.0;
    std::optional<T1T2> inhomogeneous;

    static NoiseModel none() { return {}; }
    static NoiseModel amplitude_damping(double tau);
    static NoiseModel amplitude_damping_theta(double theta_tau);
    static NoiseModel generalized_ad(double tau, double n_bar);
    static NoiseModel phase_damping(double tau_pd);
    static NoiseModel ad_pd(double tau, double tau_pd);
    static NoiseModel depolarizing(double p);
    static NoiseModel t1t2(std::vector<double> t1, std::vector<double> t2, double time_unit = 1.0);

    double theta_tau() const;
    void validate() const;
};

double tau_from_theta(double theta_tau);
double theta_from_tau(double tau);

std::array<CMatrix, 2> ad_kraus(double theta_tau);
std::vector<CMatrix> gad_kraus(double tau, double n_bar);
std::vector<CMatrix> pd_kraus(double tau_pd);
std::vector<CMatrix> depolarizing_kraus(double p);

// Kraus set seen by `qubit` during a layer of the given duration.
std::vector<CMatrix> qubit_kraus(const NoiseModel& model, int qubit, double duration);
Superop qubit_superop(const NoiseModel& model, int qubit, double duration);

DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseModel& model, std::span<const int> qubits,
                            double duration = 1.0);
void apply_noise_all(CMatrix& rho, const NoiseModel& model, int n_qubits, double duration);

enum class LindbladKind { AD, GAD, PD };

// Generator summed over every qubit; GAD uses (n_bar + 1) emission + n_bar absorption.
CMatrix lindblad(const DensityMatrix& rho, LindbladKind kind, double n_bar = 0.0);

enum class RewriteKind { AD, GADEmission, GADAbsorption, PD, Pauli };

struct WeightedOp {
    double coefficient;
    InsertOp op;
};

// Per-qubit generator as sum_c c * S rho S^dagger.
std::vector<WeightedOp> rewrite_lindblad_terms(RewriteKind kind);

}  // namespace qnec
