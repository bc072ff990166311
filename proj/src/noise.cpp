#include "qnec/noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qnec {

namespace {

CMatrix m2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

std::vector<CMatrix> compose_kraus(const std::vector<CMatrix>& second, const std::vector<CMatrix>& first) {
    std::vector<CMatrix> out;
    out.reserve(second.size() * first.size());
    for (const auto& b : second)
        for (const auto& a : first) out.push_back(b * a);
    return out;
}

}  // namespace

std::string_view noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::None: return "none";
        case NoiseKind::AD: return "ad";
        case NoiseKind::GAD: return "gad";
        case NoiseKind::PD: return "pd";
        case NoiseKind::ADPD: return "adpd";
        case NoiseKind::Depolarizing: return "depolarizing";
    }
    return "?";
}

std::optional<NoiseKind> noise_kind_from_name(std::string_view name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (auto k : {NoiseKind::None, NoiseKind::AD, NoiseKind::GAD, NoiseKind::PD, NoiseKind::ADPD, NoiseKind::Depolarizing}) {
        if (noise_kind_name(k) == low) return k;
    }
    if (low == "ad&pd" || low == "ad+pd") return NoiseKind::ADPD;
    return std::nullopt;
}

double tau_from_theta(double theta_tau) {
    if (!(theta_tau >= 0.0 && theta_tau <= std::numbers::pi)) throw std::domain_error("theta_tau must lie in [0, pi]");
    const double tau = -2.0 * std::log(std::cos(0.5 * theta_tau));
    return tau == 0.0 ? 0.0 : tau;  // no negative zero
}

double theta_from_tau(double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("tau must be nonnegative");
    return 2.0 * std::acos(std::exp(-0.5 * tau));
}

NoiseModel NoiseModel::amplitude_damping(double tau) {
    NoiseModel m;
    m.kind = NoiseKind::AD;
    m.tau = tau;
    m.validate();
    return m;
}

NoiseModel NoiseModel::amplitude_damping_theta(double theta_tau) { return amplitude_damping(tau_from_theta(theta_tau)); }

NoiseModel NoiseModel::generalized_ad(double tau, double n_bar) {
    NoiseModel m;
    m.kind = NoiseKind::GAD;
    m.tau = tau;
    m.n_bar = n_bar;
    m.validate();
    return m;
}

NoiseModel NoiseModel::phase_damping(double tau_pd) {
    NoiseModel m;
    m.kind = NoiseKind::PD;
    m.tau_pd = tau_pd;
    m.validate();
    return m;
}

NoiseModel NoiseModel::ad_pd(double tau, double tau_pd) {
    NoiseModel m;
    m.kind = NoiseKind::ADPD;
    m.tau = tau;
    m.tau_pd = tau_pd;
    m.validate();
    return m;
}

NoiseModel NoiseModel::depolarizing(double p) {
    NoiseModel m;
    m.kind = NoiseKind::Depolarizing;
    m.p_depol = p;
    m.validate();
    return m;
}

NoiseModel NoiseModel::t1t2(std::vector<double> t1, std::vector<double> t2, double time_unit) {
    NoiseModel m;
    m.kind = t2.empty() ? NoiseKind::AD : NoiseKind::ADPD;
    m.inhomogeneous = T1T2{std::move(t1), std::move(t2), time_unit};
    m.validate();
    return m;
}

double NoiseModel::theta_tau() const { return theta_from_tau(tau); }

void NoiseModel::validate() const {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("noise: tau must be finite and >= 0");
    if (!(n_bar >= 0.0)) throw std::invalid_argument("noise: n_bar must be >= 0");
    if (!(tau_pd >= 0.0)) throw std::invalid_argument("noise: tau_pd must be >= 0");
    if (!(p_depol >= 0.0 && p_depol <= 1.0)) throw std::invalid_argument("noise: p_depol must lie in [0, 1]");
    if (inhomogeneous) {
        const auto& h = *inhomogeneous;
        if (kind != NoiseKind::AD && kind != NoiseKind::ADPD) {
            throw std::invalid_argument("noise: per-qubit T1/T2 requires kind ad or adpd");
        }
        if (!(h.time_unit > 0.0)) throw std::invalid_argument("noise: time_unit must be > 0");
        for (double t : h.t1)
            if (!(t > 0.0)) throw std::invalid_argument("noise: T1 must be > 0");
        if (kind == NoiseKind::ADPD) {
            if (h.t2.size() != h.t1.size()) throw std::invalid_argument("noise: T1 and T2 lists differ in length");
            for (std::size_t j = 0; j < h.t2.size(); ++j) {
                if (!(h.t2[j] > 0.0)) throw std::invalid_argument("noise: T2 must be > 0");
                if (h.t2[j] > 2.0 * h.t1[j] * (1.0 + 1e-12)) {
                    throw std::invalid_argument("noise: T2 exceeds 2*T1 on qubit " + std::to_string(j));
                }
            }
        }
    }
}

std::array<CMatrix, 2> ad_kraus(double theta_tau) {
    if (!(theta_tau >= 0.0 && theta_tau <= std::numbers::pi)) throw std::domain_error("ad_kraus: theta_tau must lie in [0, pi]");
    const double s = std::sin(0.5 * theta_tau), c = std::cos(0.5 * theta_tau);
    return {m2(0, s, 0, 0), m2(1, 0, 0, c)};
}

std::vector<CMatrix> gad_kraus(double tau, double n_bar) {
    if (!(tau >= 0.0) || !(n_bar >= 0.0)) throw std::domain_error("gad_kraus: tau and n_bar must be >= 0");
    const double p = (n_bar + 1.0) / (2.0 * n_bar + 1.0);
    const double g = -std::expm1(-tau * (2.0 * n_bar + 1.0));
    const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p), sg = std::sqrt(g), sr = std::sqrt(1.0 - g);
    return {m2(sp, 0, 0, sp * sr), m2(0, sp * sg, 0, 0), m2(sq * sr, 0, 0, sq), m2(0, 0, sq * sg, 0)};
}

std::vector<CMatrix> pd_kraus(double tau_pd) {
    if (!(tau_pd >= 0.0)) throw std::domain_error("pd_kraus: tau_pd must be >= 0");
    const double e = std::exp(-2.0 * tau_pd);
    const double a = std::sqrt(0.5 * (1.0 + e)), b = std::sqrt(0.5 * (1.0 - e));
    return {m2(a, 0, 0, a), m2(b, 0, 0, -b)};
}

std::vector<CMatrix> depolarizing_kraus(double p) {
    using namespace std::complex_literals;
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("depolarizing_kraus: p must lie in [0, 1]");
    const double a = std::sqrt(1.0 - p), b = std::sqrt(p / 3.0);
    return {m2(a, 0, 0, a), m2(0, b, b, 0), m2(0, -1i * b, 1i * b, 0), m2(b, 0, 0, -b)};
}

std::vector<CMatrix> qubit_kraus(const NoiseModel& model, int qubit, double duration) {
    if (duration < 0.0) throw std::invalid_argument("qubit_kraus: negative duration");
    auto ad = [](double tau) {
        const auto k = ad_kraus(theta_from_tau(tau));
        return std::vector<CMatrix>{k[0], k[1]};
    };
    if (model.inhomogeneous) {
        const auto& h = *model.inhomogeneous;
        if (qubit < 0 || static_cast<std::size_t>(qubit) >= h.t1.size()) {
            throw std::out_of_range("noise: no T1/T2 entry for qubit " + std::to_string(qubit));
        }
        const double dt = duration * h.time_unit;
        const double t1 = h.t1[static_cast<std::size_t>(qubit)];
        auto k = ad(dt / t1);
        if (model.kind == NoiseKind::ADPD) {
            const double t2 = h.t2[static_cast<std::size_t>(qubit)];
            const double tau_pd = std::max(0.0, dt * (0.5 / t2 - 0.25 / t1));
            k = compose_kraus(pd_kraus(tau_pd), k);
        }
        return k;
    }
    switch (model.kind) {
        case NoiseKind::None: return {CMatrix::Identity(2, 2)};
        case NoiseKind::AD: return ad(model.tau * duration);
        case NoiseKind::GAD: return gad_kraus(model.tau * duration, model.n_bar);
        case NoiseKind::PD: return pd_kraus(model.tau_pd * duration);
        case NoiseKind::ADPD: return compose_kraus(pd_kraus(model.tau_pd * duration), ad(model.tau * duration));
        case NoiseKind::Depolarizing: return depolarizing_kraus(std::min(1.0, model.p_depol * duration));
    }
    throw std::invalid_argument("unsupported noise kind");
}

Superop qubit_superop(const NoiseModel& model, int qubit, double duration) {
    const auto k = qubit_kraus(model, qubit, duration);
    return superop_from_kraus(k);
}

DensityMatrix apply_channel(const DensityMatrix& rho, const NoiseModel& model, std::span<const int> qubits, double duration) {
    model.validate();
    DensityMatrix out = rho;
    for (int q : qubits) {
        if (q < 0 || q >= rho.n_qubits) throw std::out_of_range("apply_channel: qubit out of range");
        if (model.kind == NoiseKind::None) continue;
        apply_superop(out.m, qubit_superop(model, q, duration), q);
    }
    return out;
}

void apply_noise_all(CMatrix& rho, const NoiseModel& model, int n_qubits, double duration) {
    if (model.kind == NoiseKind::None || duration <= 0.0) return;
    if (!model.inhomogeneous) {
        const Superop s = qubit_superop(model, 0, duration);
        for (int q = 0; q < n_qubits; ++q) apply_superop(rho, s, q);
        return;
    }
    for (int q = 0; q < n_qubits; ++q) apply_superop(rho, qubit_superop(model, q, duration), q);
}

CMatrix lindblad(const DensityMatrix& rho, LindbladKind kind, double n_bar) {
    if (!(n_bar >= 0.0)) throw std::invalid_argument("lindblad: n_bar must be >= 0");
    const int n = rho.n_qubits;
    CMatrix out = CMatrix::Zero(rho.m.rows(), rho.m.cols());
    const CMatrix lower = m2(0, 1, 0, 0), raise = m2(0, 0, 1, 0), z = m2(1, 0, 0, -1);
    auto dissipator = [&](const CMatrix& l, double rate) {
        const CMatrix ldl = l.adjoint() * l;
        return CMatrix(rate * (l * rho.m * l.adjoint() - 0.5 * (ldl * rho.m + rho.m * ldl)));
    };
    for (int j = 0; j < n; ++j) {
        const int q[] = {j};
        switch (kind) {
            case LindbladKind::AD:
                out += dissipator(embed(lower, q, n), 1.0);
                break;
            case LindbladKind::GAD:
                out += dissipator(embed(lower, q, n), n_bar + 1.0);
                out += dissipator(embed(raise, q, n), n_bar);
                break;
            case LindbladKind::PD: {
                const CMatrix zj = embed(z, q, n);
                out += zj * rho.m * zj - rho.m;
                break;
            }
        }
    }
    return out;
}

std::vector<WeightedOp> rewrite_lindblad_terms(RewriteKind kind) {
    switch (kind) {
        case RewriteKind::AD:
        case RewriteKind::GADEmission:
            return {{-0.25, InsertOp::Identity}, {0.25, InsertOp::Z}, {1.0, InsertOp::SigmaMinus}, {-1.0, InsertOp::P1}};
        case RewriteKind::GADAbsorption:
            return {{-0.25, InsertOp::Identity}, {0.25, InsertOp::Z}, {1.0, InsertOp::SigmaPlus}, {-1.0, InsertOp::P0}};
        case RewriteKind::PD:
            return {{-1.0, InsertOp::Identity}, {1.0, InsertOp::Z}};
        case RewriteKind::Pauli:
            return {{-1.0, InsertOp::Identity}, {1.0 / 3.0, InsertOp::X}, {1.0 / 3.0, InsertOp::Y}, {1.0 / 3.0, InsertOp::Z}};
    }
    throw std::invalid_argument("unknown rewrite kind");
}

}  // namespace qnec
