#include "qnec/pec.hpp"

#include "qnec/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnec {

namespace {

void require_ad(const NoiseModel& model) {
    model.validate();
    if (model.kind != NoiseKind::AD || model.inhomogeneous) throw std::invalid_argument("PEC supports homogeneous AD noise only");
}

CMatrix op2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

RecoveryOp recovery_from_tau(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::domain_error("recovery: tau must be finite and >= 0");
    RecoveryOp r;
    r.epsilon = -std::expm1(-tau);
    const double keep = 1.0 - r.epsilon;
    const double root = std::sqrt(keep);
    r.eta_i = (1.0 + root) / (2.0 * keep);
    r.eta_z = (1.0 - root) / (2.0 * keep);
    r.eta_reset = -r.epsilon / keep;
    r.gamma_norm = std::abs(r.eta_i) + std::abs(r.eta_z) + std::abs(r.eta_reset);
    return r;
}

RecoveryOp recovery(double theta_tau) {
    if (!(theta_tau >= 0.0 && theta_tau < std::numbers::pi)) {
        throw std::domain_error("recovery: theta_tau must lie in [0, pi); full damping is not invertible");
    }
    return recovery_from_tau(tau_from_theta(theta_tau));
}

Superop recovery_superop(const RecoveryOp& r) {
    const std::vector<CMatrix> id{op2(1, 0, 0, 1)};
    const std::vector<CMatrix> z{op2(1, 0, 0, -1)};
    const std::vector<CMatrix> reset{op2(1, 0, 0, 0), op2(0, 1, 0, 0)};
    return r.eta_i * superop_from_kraus(id) + r.eta_z * superop_from_kraus(z) + r.eta_reset * superop_from_kraus(reset);
}

double pec_exact_check(const Circuit& c, const Observable& o, const NoiseModel& model) {
    require_ad(model);
    const Circuit full = measured_circuit(c, o);
    EvolveOptions opts;
    opts.after_layer = [&](std::size_t k, CMatrix& rho) {
        const double s = full.layers[k].duration;
        if (s <= 0.0) return;
        const Superop rec = recovery_superop(recovery_from_tau(model.tau * s));
        for (int q = 0; q < full.n_register; ++q) apply_superop(rho, rec, q);
    };
    const auto r = reduce_to_register(evolve(full, model, opts), full);
    return expectation(o.matrix, r.rho);
}

PecSample pec_sample(const Circuit& c, const Observable& o, const NoiseModel& model, std::size_t m, std::size_t repetitions,
                     std::uint64_t seed, unsigned threads) {
    require_ad(model);
    if (m < 1) throw std::invalid_argument("pec_sample: m must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("pec_sample: repetitions must be >= 1");
    const Circuit full = measured_circuit(c, o);

    struct SiteDist {
        std::size_t layer;
        int qubit;
        RecoveryOp rec;
    };
    std::vector<SiteDist> sites;
    PecSample out;
    for (std::size_t k = 0; k < full.layers.size(); ++k) {
        const double s = full.layers[k].duration;
        if (s <= 0.0) continue;
        const RecoveryOp rec = recovery_from_tau(model.tau * s);
        for (int q = 0; q < full.n_register; ++q) {
            sites.push_back(SiteDist{k, q, rec});
            out.gamma_total *= rec.gamma_norm;
        }
    }
    out.sites = sites.size();

    const std::vector<CMatrix> z_kraus{op2(1, 0, 0, -1)};
    const std::vector<CMatrix> reset_kraus{op2(1, 0, 0, 0), op2(0, 1, 0, 0)};
    const Superop z_map = superop_from_kraus(z_kraus);
    const Superop reset_map = superop_from_kraus(reset_kraus);
    const std::size_t total = m * repetitions;
    std::vector<double> signed_values(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        const std::size_t rep = idx / m, i = idx % m;
        SplitMix64 rng(derive_seed(seed, rep, i));
        // choice per site: 0 identity, 1 Z, 2 reset
        std::vector<int> choice(sites.size());
        double sign = 1.0;
        for (std::size_t s = 0; s < sites.size(); ++s) {
            const auto& rec = sites[s].rec;
            const double u = rng.uniform() * rec.gamma_norm;
            const auto e = rec.etas();
            int pick = 0;
            if (u >= std::abs(e[0])) pick = u < std::abs(e[0]) + std::abs(e[1]) ? 1 : 2;
            if (std::abs(e[static_cast<std::size_t>(pick)]) == 0.0) pick = 0;
            choice[s] = pick;
            if (e[static_cast<std::size_t>(pick)] < 0.0) sign = -sign;
        }
        std::vector<std::vector<std::pair<int, int>>> ops(full.layers.size());
        for (std::size_t s = 0; s < sites.size(); ++s) {
            if (choice[s] != 0) ops[sites[s].layer].emplace_back(sites[s].qubit, choice[s]);
        }
        EvolveOptions eo;
        eo.after_layer = [&](std::size_t k, CMatrix& rho) {
            for (const auto& [q, pick] : ops[k]) {
                apply_superop(rho, pick == 1 ? z_map : reset_map, q);
            }
        };
        signed_values[idx] = sign * expectation(o.matrix, reduce_to_register(evolve(full, model, eo), full).rho);
    });
    out.series.values.resize(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += signed_values[rep * m + i];
        out.series.values[rep] = out.gamma_total * s / static_cast<double>(m);
    }
    return out;
}

}  // namespace qnec
