#include "qnec/recipes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

using nlohmann::json;
using qnec::Assertion;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::string probe;
    json params;
    std::vector<Assertion> checks;
};

Assertion le(std::string m, double tol) { return {std::move(m), "le", 0.0, tol, ""}; }
Assertion eq(std::string m, double v, double tol) { return {std::move(m), "eq", v, tol, ""}; }
Assertion gt(std::string m, double v) { return {std::move(m), "gt", v, 0.0, ""}; }

std::vector<Criterion> criteria() {
    const json thetas = {0.1, 0.2, 0.3, 0.4, 0.5};
    return {
        {1, "AD channel from Kraus operators and gadgets", "channel_exactness", {{"points", 50}},
         {le("max_error_kraus", 1e-12), le("max_error_gadget", 1e-12)}},
        {2, "Kraus completeness", "kraus_completeness", {{"points", 50}}, {le("max_error", 1e-15)}},
        {3, "Circuit group sizes", "group_size", json::object(),
         {eq("pre1_d9", 28, 0), eq("pre1_d17", 52, 0), eq("pre1_d33", 100, 0), eq("pre2_d9", 55, 0), eq("qaa3", 91, 0),
          eq("qaoa", 181, 0), eq("max_formula_gap", 0, 0)}},
        {4, "First-order group equals the Lindblad insertion", "first_order_fidelity", json::object(),
         {le("max_abs_diff", 1e-10)}},
        {5, "Residual scaling with mitigation order", "residual_scaling",
         {{"depth", 5}, {"tau_min", 0.001}, {"tau_max", 0.03}, {"points", 8}},
         {eq("slope_noisy", 1, 0.1), eq("slope_first", 2, 0.15), eq("slope_second", 3, 0.2)}},
        {6, "pre1 improvement ratio and depth ordering", "pre1_rt",
         {{"theta", {0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}}, {"theta_fixed", 0.2}},
         {gt("min_rt", 1), gt("min_depth_order_gap", 0)}},
        {7, "qaa3 ideal and mitigated probabilities", "qaa3", {{"theta", 0.2}},
         {eq("ideal_P110", 0.5, 1e-12), eq("ideal_P111", 0.5, 1e-12), gt("rt_P110", 1), gt("rt_P111", 1)}},
        {8, "qaa2 first-order null and native recovery", "qaa2", {{"theta", 0.2}},
         {le("abs_delta1_direct", 1e-10), gt("abs_delta1_native", 1e-6), gt("rt_native", 1)}},
        {9, "QAOA ideal cost and mitigation", "qaoa", {{"theta", thetas}},
         {eq("ideal_cost", -4.0, 0.01), eq("ideal_P0101", 0.5, 0.01), eq("ideal_P1010", 0.5, 0.01), gt("min_rt", 1)}},
        {10, "Shot variance scales as 1/N_QC", "shot_statistics",
         {{"theta", 0.2}, {"log2_min", 8}, {"log2_max", 14}, {"n_samp", 100}, {"seed", 2024}}, {le("rel_dev", 0.25)}},
        {11, "PEC recovery is exact", "pec_exact", {{"theta", 0.2}}, {le("max_abs_err", 1e-10)}},
        {12, "QEM beats PEC at equal sampling", "pec_compare",
         {{"theta", thetas}, {"m", 181}, {"repetitions", 100}, {"seed", 7}},
         {eq("mse_failures", 0, 0), eq("frac_failures", 0, 0), gt("min_frac", 0.5)}},
        {13, "Per-qubit T1/T2 group reduces to the homogeneous one", "inhomogeneous_reduction", {{"time_unit", 3.556e-8}},
         {le("max_site_diff", 1e-12), le("original_diff", 1e-12), le("value_diff", 1e-12)}},
        {14, "T1/T2 fits and device theta", "calibration", {{"sigma", 0.02}, {"seed", 99}},
         {le("t1_rel_err_noiseless", 0.01), le("t2_rel_err_noiseless", 0.01), le("t1_rel_err_noisy", 0.1),
          le("t2_rel_err_noisy", 0.1), eq("theta_tau_100ns_100us", 0.063, 0.001)}},
        {15, "Seeded runs are bit-identical across thread counts", "determinism",
         {{"config", "configs/fig16_qaoa.yaml"}, {"threads", {1, 1, 3}}}, {eq("identical", 1, 0)}},
    };
}

}  // namespace

int main() {
    int failed = 0;
    for (const auto& c : criteria()) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = true;
        try {
            const auto m = qnec::run_probe(c.probe, c.params, ".");
            for (const auto& a : c.checks) {
                const auto it = m.find(a.metric);
                const bool ok = it != m.end() && qnec::check_assertion(a, it->second);
                char buf[160];
                std::snprintf(buf, sizeof buf, " %s=%.6g", a.metric.c_str(), it != m.end() ? it->second : std::nan(""));
                detail += buf;
                if (!ok) {
                    pass = false;
                    detail += "(" + a.op + " " + std::to_string(a.expected) + ")";
                }
            }
        } catch (const std::exception& e) {
            pass = false;
            detail = std::string(" error: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s [%.1fs]%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), s, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failed;
    }
    std::printf("%d of 15 criteria passed\n", 15 - failed);
    return failed == 0 ? 0 : 1;
}
