#pragma once

#include "qnec/circuit.hpp"
#include "qnec/linalg.hpp"
#include "qnec/noise.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qnec {

struct EvolutionResult {
    DensityMatrix rho;
    double branch_weight = 1.0;
};

struct EvolveOptions {
    std::optional<DensityMatrix> initial;
    // Called after the gates and the channel of every layer, with the layer index.
    std::function<void(std::size_t, CMatrix&)> after_layer;
};

// Gates of each layer are applied in order; the channel follows every layer whose duration is positive.
// In per-qubit T1/T2 models, ancillas without a table entry are treated as noiseless.
EvolutionResult evolve(const Circuit& c, const NoiseModel& model, const EvolveOptions& opts = {});
EvolutionResult evolve(const Circuit& c, const NoiseModel& model, const DensityMatrix& initial);

// Unnormalized <outcome| rho |outcome> on `ancilla`; the ancilla is removed from the state.
EvolutionResult postselect(const EvolutionResult& full, int ancilla, int outcome);

// Applies the circuit's own post-selection list (highest ancilla first) and traces out any
// remaining ancillas, leaving a state over the register qubits.
EvolutionResult reduce_to_register(const EvolutionResult& full, const Circuit& c);
EvolutionResult evolve_register(const Circuit& c, const NoiseModel& model);

std::vector<double> basis_probabilities(const EvolutionResult& r);

// Observable over the register qubits, optionally measured after a basis rotation.
struct Observable {
    std::string name;
    CMatrix matrix;
    Circuit rotation;  // layers appended before measurement; empty for none

    bool has_rotation() const { return !rotation.layers.empty(); }
};

Observable make_observable(std::string name, CMatrix matrix);
Observable make_observable(std::string name, CMatrix matrix, Circuit rotation);

// Circuit followed by the observable's rotation layers (durations kept, so they are noisy).
Circuit measured_circuit(const Circuit& c, const Observable& o, bool noiseless_rotation = false);

// Tr(O rho) of an evolution result; a rotation here is applied to the final state without noise.
double measured_expectation(const EvolutionResult& r, const CMatrix& o, const Circuit* rotation = nullptr);

// Full pipeline: evolve c plus the rotation, reduce to the register and take Tr(O rho).
double circuit_expectation(const Circuit& c, const Observable& o, const NoiseModel& model, bool noiseless_rotation = false);

}  // namespace qnec
