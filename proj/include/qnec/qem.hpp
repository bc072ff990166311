#pragma once

#include "qnec/circuit.hpp"
#include "qnec/densim.hpp"
#include "qnec/noise.hpp"
#include "qnec/shotsim.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qnec {

struct GroupMember {
    Circuit circuit;
    double coefficient = 0.0;
    int order = 0;      // number of non-identity insertions
    int tau_power = 1;  // power of the noise strength that multiplies this group
    std::string label;  // insertions as "k:q:OP" (0-based layer of the base circuit)
};

enum class GroupKind { AD, GAD, PD, Pauli, Inhomogeneous };

std::string_view group_kind_name(GroupKind k);

struct CircuitGroup {
    Circuit original;
    std::vector<GroupMember> members;
    GroupKind kind = GroupKind::AD;
    int order = 1;

    // Members whose circuits differ after removing post-selection flags.
    std::size_t distinct_circuits() const;
    std::size_t size() const { return members.size(); }
};

struct GroupOptions {
    InsertMode mode = InsertMode::Direct;
    GadgetOptions gadget;
    double n_bar = 0.0;  // GAD only
};

// One (layer, qubit, operator) insertion site.
struct Site {
    std::size_t layer = 0;
    int qubit = 0;
    InsertOp op = InsertOp::Identity;
};

// Applies the sites to c. Sites on later layers are applied first; sites on the same layer act in list order.
Circuit apply_sites(const Circuit& c, std::vector<Site> sites, InsertMode mode, const GadgetOptions& gadget = {});

using WeightedRewrite = std::pair<double, RewriteKind>;

// General first-order builder: for every positive-duration layer k and every qubit j, adds
// weight * duration_k * c * (op inserted after layer k on j) for each rewrite term; members
// sharing a circuit are merged, so identity terms fold onto the original.
CircuitGroup first_order_group(const Circuit& c, std::span<const WeightedRewrite> terms, const GroupOptions& opts = {},
                               GroupKind kind = GroupKind::AD);
// AD, PD and Pauli use one rewrite; GAD uses (n_bar + 1) emission + n_bar absorption.
CircuitGroup first_order_group(const Circuit& c, GroupKind kind, const GroupOptions& opts = {});

// Same-layer L_k L_k terms plus 2 * L_{k1} L_{k2} for k1 > k2 (AD rewrite).
CircuitGroup second_order_group(const Circuit& c, const GroupOptions& opts = {});
// The first-order group applied to every member of the first-order group.
CircuitGroup delta1_of_delta1_group(const Circuit& c, const GroupOptions& opts = {});

// Per-qubit T1/T2 group. durations[k] is the physical duration of layer k in seconds;
// t2 may be empty for pure AD. Weights carry the time factors, so the external multiplier is 1.
CircuitGroup inhomogeneous_group(const Circuit& c, std::span<const double> t1, std::span<const double> t2,
                                 std::span<const double> durations, const GroupOptions& opts = {});
// Durations taken from the layers times time_unit.
CircuitGroup inhomogeneous_group(const Circuit& c, std::span<const double> t1, std::span<const double> t2,
                                 double time_unit, const GroupOptions& opts = {});

enum class Engine { Exact, Shots };

struct EvalOptions {
    Engine engine = Engine::Exact;
    ShotConfig shots;
    unsigned threads = 1;
    // Offset added to member indices when deriving shot streams, so distinct groups use distinct streams.
    std::uint64_t stream_base = 0;
};

struct GroupValue {
    double value = 0.0;
    std::vector<double> member_values;
    std::optional<SampleSeries> series;  // shots engine: per-sample weighted sums
};

// Sum over members of coefficient * <O> under `model`, in member order.
GroupValue evaluate_group(const CircuitGroup& g, const Observable& o, const NoiseModel& model, const EvalOptions& eval = {});
double delta_expectation(const CircuitGroup& g, const Observable& o, const NoiseModel& model, const EvalOptions& eval = {});

double mitigate_first_order(double noisy, double delta1, double tau);
double mitigate_second_order(double noisy, double delta1, double delta2, double delta1_of_delta1, double tau);
// Second-order terms only, without the first-order correction.
double mitigate_second_order_only(double noisy, double delta2, double delta1_of_delta1, double tau);
double gad_combine(double emission, double absorption, double n_bar);
double composite_mitigate(double noisy, double gad_delta1, double pd_delta1, double tau, double tau_pd);

// Strength that multiplies the homogeneous first-order group (tau, tau_pd or p); 1 for T1/T2 models.
double group_multiplier(const NoiseModel& model);

struct QemEstimate {
    std::optional<double> ideal;
    double noisy = 0.0;
    double mitigated = 0.0;
    double delta1 = 0.0;
    std::optional<double> delta_pd;
    std::optional<double> delta2;
    std::optional<double> delta1_of_delta1;
    std::optional<double> mitigated_second_only;
    double tau = 0.0;
    double tau_pd = 0.0;
    std::size_t group_circuits = 0;
    // Shots engine: per-sample noisy and mitigated estimates.
    std::optional<SampleSeries> noisy_series;
    std::optional<SampleSeries> mitigated_series;
};

struct QemOptions {
    int order = 1;
    GroupOptions group;
    EvalOptions eval;
    bool compute_ideal = true;
};

// Builds the groups that match the model, evaluates them and applies the matching formula.
QemEstimate run_qem(const Circuit& c, const Observable& o, const NoiseModel& model, const QemOptions& opts = {});

// Text listing of members, coefficients, insertions and circuits.
std::string group_manifest(const CircuitGroup& g);

}  // namespace qnec
