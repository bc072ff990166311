#include "qnec/calib.hpp"

#include "yaml_util.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qnec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMicro = 1e-6;

bool lm_converged(int status) {
    using namespace Eigen::LevenbergMarquardtSpace;
    return status != ImproperInputParameters && status != TooManyFunctionEvaluation;
}

double rms(const Eigen::VectorXd& r) { return std::sqrt(r.squaredNorm() / static_cast<double>(r.size())); }

// exp(-k t), t in microseconds, k in 1/us.
struct T1Functor {
    const std::vector<double>& t;
    const std::vector<double>& y;
    int inputs() const { return 1; }
    int values() const { return static_cast<int>(t.size()); }
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < t.size(); ++i) f(static_cast<Eigen::Index>(i)) = std::exp(-x(0) * t[i]) - y[i];
        return 0;
    }
    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
        for (std::size_t i = 0; i < t.size(); ++i) j(static_cast<Eigen::Index>(i), 0) = -t[i] * std::exp(-x(0) * t[i]);
        return 0;
    }
};

// x = (k, f1, f2, c1, s1, c2, s2, b) with t in us and f in MHz.
struct T2Functor {
    const std::vector<double>& t;
    const std::vector<double>& y;
    int inputs() const { return 8; }
    int values() const { return static_cast<int>(t.size()); }
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double e = std::exp(-x(0) * t[i]);
            const double w1 = kTwoPi * x(1) * t[i], w2 = kTwoPi * x(2) * t[i];
            const double osc = x(3) * std::cos(w1) + x(4) * std::sin(w1) + x(5) * std::cos(w2) + x(6) * std::sin(w2);
            f(static_cast<Eigen::Index>(i)) = e * osc + x(7) - y[i];
        }
        return 0;
    }
    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const double ti = t[i];
            const double e = std::exp(-x(0) * ti);
            const double w1 = kTwoPi * x(1) * ti, w2 = kTwoPi * x(2) * ti;
            const double c1 = std::cos(w1), s1 = std::sin(w1), c2 = std::cos(w2), s2 = std::sin(w2);
            const double osc = x(3) * c1 + x(4) * s1 + x(5) * c2 + x(6) * s2;
            j(r, 0) = -ti * e * osc;
            j(r, 1) = e * kTwoPi * ti * (-x(3) * s1 + x(4) * c1);
            j(r, 2) = e * kTwoPi * ti * (-x(5) * s2 + x(6) * c2);
            j(r, 3) = e * c1;
            j(r, 4) = e * s1;
            j(r, 5) = e * c2;
            j(r, 6) = e * s2;
            j(r, 7) = 1.0;
        }
        return 0;
    }
};

// Linear least squares for (c1, s1, c2, s2, b) at fixed (k, f1, f2); returns the residual norm.
double linear_seed(const std::vector<double>& t, const std::vector<double>& y, double k, double f1, double f2,
                   Eigen::VectorXd& x) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd a(n, 5);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = t[static_cast<std::size_t>(i)];
        const double e = std::exp(-k * ti);
        a(i, 0) = e * std::cos(kTwoPi * f1 * ti);
        a(i, 1) = e * std::sin(kTwoPi * f1 * ti);
        a(i, 2) = e * std::cos(kTwoPi * f2 * ti);
        a(i, 3) = e * std::sin(kTwoPi * f2 * ti);
        a(i, 4) = 1.0;
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    x.resize(8);
    x << k, f1, f2, sol(0), sol(1), sol(2), sol(3), sol(4);
    return (a * sol - rhs).norm();
}

std::vector<double> spectrum_peaks(const std::vector<double>& t, const std::vector<double>& r, std::size_t max_peaks) {
    const double span = t.back() - t.front();
    std::vector<double> dts;
    for (std::size_t i = 1; i < t.size(); ++i) dts.push_back(t[i] - t[i - 1]);
    std::nth_element(dts.begin(), dts.begin() + static_cast<std::ptrdiff_t>(dts.size() / 2), dts.end());
    const double fmax = 0.5 / dts[dts.size() / 2];
    const double fmin = 0.5 / span;
    constexpr int kGrid = 4000;
    std::vector<double> fs(kGrid), power(kGrid);
    for (int g = 0; g < kGrid; ++g) {
        const double f = fmin + (fmax - fmin) * g / (kGrid - 1);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            re += r[i] * std::cos(kTwoPi * f * t[i]);
            im -= r[i] * std::sin(kTwoPi * f * t[i]);
        }
        fs[static_cast<std::size_t>(g)] = f;
        power[static_cast<std::size_t>(g)] = re * re + im * im;
    }
    std::vector<std::pair<double, double>> peaks;
    for (int g = 1; g + 1 < kGrid; ++g) {
        const auto u = static_cast<std::size_t>(g);
        if (power[u] >= power[u - 1] && power[u] > power[u + 1]) peaks.emplace_back(power[u], fs[u]);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> out;
    for (std::size_t i = 0; i < peaks.size() && out.size() < max_peaks; ++i) out.push_back(peaks[i].second);
    return out;
}

}  // namespace

void DecaySeries::validate(std::size_t min_points) const {
    if (times.size() != values.size()) throw std::invalid_argument("decay series: times and values differ in length");
    if (times.size() < min_points) {
        throw std::invalid_argument("decay series: need at least " + std::to_string(min_points) + " points");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("decay series: times must be strictly increasing");
    }
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("decay series: non-finite value");
}

double T2Model::operator()(double t) const {
    const double e = std::exp(-t / t2);
    return e * (amplitudes[0] * std::cos(kTwoPi * frequencies[0] * t + phases[0]) +
                amplitudes[1] * std::cos(kTwoPi * frequencies[1] * t + phases[1])) +
           offset;
}

T1Fit fit_t1(const DecaySeries& s) {
    s.validate(5);
    std::vector<double> t, y = s.values;
    for (double v : s.times) t.push_back(v / kMicro);
    // log-linear seed through the origin from the positive points
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] <= 0.0) continue;
        sxy += t[i] * std::log(y[i]);
        sxx += t[i] * t[i];
    }
    const double k0 = sxx > 0.0 ? -sxy / sxx : 0.0;
    if (!(k0 > 1e-12)) throw std::runtime_error("fit_t1: data show no decay");
    T1Functor fn{t, y};
    Eigen::VectorXd x(1);
    x << k0;
    Eigen::LevenbergMarquardt<T1Functor> lm(fn);
    lm.parameters.xtol = 1e-10;
    lm.parameters.maxfev = 500;
    const int status = lm.minimize(x);
    if (!lm_converged(status) || !(x(0) > 0.0) || !std::isfinite(x(0))) {
        throw std::runtime_error("fit_t1: solver did not converge (status " + std::to_string(status) + ")");
    }
    Eigen::VectorXd f(static_cast<Eigen::Index>(t.size()));
    fn(x, f);
    return T1Fit{kMicro / x(0), rms(f), static_cast<int>(lm.nfev)};
}

T2Fit fit_t2(const DecaySeries& s) {
    s.validate(20);
    std::vector<double> t, y = s.values;
    for (double v : s.times) t.push_back(v / kMicro);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    std::vector<double> r(y.size());
    double var = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = y[i] - mean;
        var += r[i] * r[i];
    }
    T2Fit out;
    if (std::sqrt(var / static_cast<double>(y.size())) < 1e-12) {
        out.degenerate = true;
        out.offset = mean;
        out.t2 = std::numeric_limits<double>::infinity();
        return out;
    }

    const double span = t.back() - t.front();
    const auto peaks = spectrum_peaks(t, r, 4);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < peaks.size(); ++i)
        for (std::size_t j = i + 1; j < peaks.size(); ++j) pairs.emplace_back(peaks[i], peaks[j]);
    const double delta = 1.0 / span;
    for (std::size_t i = 0; i < std::min<std::size_t>(peaks.size(), 2); ++i) {
        pairs.emplace_back(peaks[i], peaks[i] + delta);
        pairs.emplace_back(peaks[i], std::max(0.25 * delta, peaks[i] - delta));
        pairs.emplace_back(peaks[i], 0.5 * peaks[i]);
        pairs.emplace_back(peaks[i], 1.5 * peaks[i]);
    }
    for (double scale : {2.0, 3.0}) {
        if (pairs.size() >= 16 || peaks.empty()) break;
        pairs.emplace_back(peaks[0], scale * peaks[0]);
    }
    if (pairs.size() > 16) pairs.resize(16);
    if (pairs.empty()) throw std::runtime_error("fit_t2: no oscillation frequency found");

    T2Functor fn{t, y};
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;
    for (const auto& [f1, f2] : pairs) {
        Eigen::VectorXd seed;
        double seed_res = std::numeric_limits<double>::infinity();
        for (double frac : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0}) {
            Eigen::VectorXd x;
            const double res = linear_seed(t, y, 1.0 / (frac * span), f1, f2, x);
            if (res < seed_res) {
                seed_res = res;
                seed = x;
            }
        }
        Eigen::LevenbergMarquardt<T2Functor> lm(fn);
        lm.parameters.xtol = 1e-10;
        lm.parameters.maxfev = 500;
        const int status = lm.minimize(seed);
        if (!lm_converged(status) || !(seed(0) > 0.0) || !seed.allFinite()) continue;
        Eigen::VectorXd f(static_cast<Eigen::Index>(t.size()));
        fn(seed, f);
        const double res = f.norm();
        if (res < best) {
            best = res;
            best_x = seed;
        }
    }
    if (best_x.size() == 0) throw std::runtime_error("fit_t2: no seed converged");

    struct Osc {
        double a, f, p;
    };
    Osc o1{std::hypot(best_x(3), best_x(4)), std::abs(best_x(1)), std::atan2(-best_x(4), best_x(3))};
    Osc o2{std::hypot(best_x(5), best_x(6)), std::abs(best_x(2)), std::atan2(-best_x(6), best_x(5))};
    // a negative fitted frequency flips the phase sign
    if (best_x(1) < 0.0) o1.p = -o1.p;
    if (best_x(2) < 0.0) o2.p = -o2.p;
    if (o1.f > o2.f) std::swap(o1, o2);
    out.t2 = kMicro / best_x(0);
    out.amplitudes = {o1.a, o2.a};
    out.frequencies = {o1.f / kMicro, o2.f / kMicro};
    out.phases = {o1.p, o2.p};
    out.offset = best_x(7);
    out.residual = best / std::sqrt(static_cast<double>(t.size()));
    out.degenerate = o1.a + o2.a < 1e-9;
    return out;
}

std::vector<double> t1_time_grid() {
    std::vector<double> g;
    for (int a = 1; a <= 50; ++a) g.push_back(2.0 * a * 1e-6 + 35.56e-9);
    return g;
}

std::vector<double> t2_time_grid() {
    std::vector<double> g;
    for (int a = 1; a <= 300; ++a) g.push_back(16.0 * a / 45.0 * 1e-6);
    return g;
}

DecaySeries synthetic_t1(double t1, const std::vector<double>& times, double noise_sigma, std::uint64_t seed) {
    if (!(t1 > 0.0)) throw std::invalid_argument("synthetic_t1: T1 must be > 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DecaySeries s;
    s.times = times;
    for (double t : times) s.values.push_back(std::exp(-t / t1) + (noise_sigma > 0.0 ? noise_sigma * gauss(rng) : 0.0));
    return s;
}

DecaySeries synthetic_t2(const T2Model& m, const std::vector<double>& times, double noise_sigma, std::uint64_t seed) {
    if (!(m.t2 > 0.0)) throw std::invalid_argument("synthetic_t2: T2 must be > 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DecaySeries s;
    s.times = times;
    for (double t : times) s.values.push_back(m(t) + (noise_sigma > 0.0 ? noise_sigma * gauss(rng) : 0.0));
    return s;
}

void DeviceTable::validate() const {
    if (t1.empty()) throw std::invalid_argument("device table: no qubits");
    if (t2.size() != t1.size()) throw std::invalid_argument("device table: T1 and T2 lists differ in length");
    for (std::size_t j = 0; j < t1.size(); ++j) {
        if (!(t1[j] > 0.0) || !(t2[j] > 0.0)) throw std::invalid_argument("device table: T1/T2 must be positive");
    }
    if (!(single_qubit_time >= 0.0) || !(rz_time >= 0.0)) throw std::invalid_argument("device table: negative gate time");
    for (const auto& [pair, dt] : cx_times) {
        if (!(dt > 0.0)) throw std::invalid_argument("device table: CX time must be positive");
        if (pair.first < 0 || pair.second < 0 || pair.first >= n_qubits() || pair.second >= n_qubits()) {
            throw std::invalid_argument("device table: CX pair outside the qubit list");
        }
    }
}

DeviceTable parse_device_table(const std::string& text) {
    const YAML::Node root = yaml::parse(text);
    if (!root.IsMap()) throw yaml::error_at(root, "device table must be a mapping");
    DeviceTable t;
    const YAML::Node qubits = yaml::require(root, "qubits");
    if (!qubits.IsSequence()) throw yaml::error_at(qubits, "'qubits' must be a list");
    for (const auto& q : qubits) {
        t.t1.push_back(yaml::as<double>(yaml::require(q, "t1"), "t1"));
        t.t2.push_back(yaml::as<double>(yaml::require(q, "t2"), "t2"));
        t.frequencies.push_back(yaml::get_or<double>(q, "frequency", 0.0));
    }
    const YAML::Node gates = yaml::require(root, "gate_times");
    t.single_qubit_time = yaml::as<double>(yaml::require(gates, "single"), "single");
    t.rz_time = yaml::get_or<double>(gates, "rz", 0.0);
    if (const YAML::Node cx = gates["cx"]) {
        if (!cx.IsSequence()) throw yaml::error_at(cx, "'cx' must be a list of [control, target, seconds]");
        for (const auto& e : cx) {
            if (!e.IsSequence() || e.size() != 3) throw yaml::error_at(e, "cx entry must be [control, target, seconds]");
            t.cx_times[{yaml::as<int>(e[0], "control"), yaml::as<int>(e[1], "target")}] = yaml::as<double>(e[2], "cx time");
        }
    }
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw yaml::error_at(root, e.what());
    }
    return t;
}

DeviceTable load_device_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open device table '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_device_table(ss.str());
}

double layer_duration(const DeviceTable& table, const Layer& layer) {
    double d = 0.0;
    for (const auto& g : layer.gates) {
        double gd = 0.0;
        switch (g.kind) {
            case GateKind::Rz:
            case GateKind::Z:
            case GateKind::S:
            case GateKind::Sdg:
            case GateKind::T:
            case GateKind::Tdg: gd = table.rz_time; break;
            case GateKind::I:
            case GateKind::X:
            case GateKind::Y:
            case GateKind::H:
            case GateKind::SX:
            case GateKind::Rx:
            case GateKind::Ry: gd = table.single_qubit_time; break;
            case GateKind::CX: {
                const auto it = table.cx_times.find({g.qubits[0], g.qubits[1]});
                if (it == table.cx_times.end()) {
                    throw std::out_of_range("device table has no CX time for [" + std::to_string(g.qubits[0]) + "," +
                                            std::to_string(g.qubits[1]) + "]");
                }
                gd = it->second;
                break;
            }
            case GateKind::SigmaMinus:
            case GateKind::SigmaPlus:
            case GateKind::P0:
            case GateKind::P1:
            case GateKind::Reset: gd = 0.0; break;
            default:
                throw std::invalid_argument("device durations: decompose " + std::string(gate_name(g.kind)) +
                                            " into native gates first");
        }
        d = std::max(d, gd);
    }
    return d;
}

Circuit with_device_durations(const Circuit& c, const DeviceTable& table) {
    table.validate();
    Circuit out = c;
    for (auto& l : out.layers) l.duration = layer_duration(table, l);
    return out;
}

TauMatrix tau_matrix(const DeviceTable& table, const Circuit& c) {
    table.validate();
    if (c.n_qubits > table.n_qubits()) {
        throw std::out_of_range("tau_matrix: device table covers " + std::to_string(table.n_qubits()) + " qubits, circuit uses " +
                                std::to_string(c.n_qubits));
    }
    TauMatrix m;
    for (int j = 0; j < c.n_qubits; ++j) {
        std::vector<double> ad, pd;
        for (const auto& l : c.layers) {
            ad.push_back(l.duration / table.t1[static_cast<std::size_t>(j)]);
            pd.push_back(l.duration / (2.0 * table.t2[static_cast<std::size_t>(j)]));
        }
        m.ad.push_back(std::move(ad));
        m.pd.push_back(std::move(pd));
    }
    return m;
}

}  // namespace qnec
