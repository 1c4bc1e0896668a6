#pragma once

#include <Eigen/QR>
#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "qprot/protractor.hpp"
#include "qprot/rng.hpp"
#include "qprot/spin.hpp"

namespace qprot {

// Average Cramer-Rao bound over the three axes for n independent copies:
// (1/3) sum_k 1/(4 n var_k) = 1/(4 n harmonic_mean(var)). Infinite if any var is 0.
inline double crb_average(const PureState& s, long n_copies) {
    if (n_copies < 1) throw ValidationError("n_copies must be >= 1");
    double acc = 0.0;
    for (char label : {'x', 'y', 'z'}) {
        const Mat op = angular_momentum(s.j, label);
        const Vec a = s.to_z();
        const double mean = expectation(op, a);
        const double second = expectation(op * op, a);
        const double var = second - mean * mean;
        if (var <= 0.0) return std::numeric_limits<double>::infinity();
        acc += 1.0 / (4.0 * static_cast<double>(n_copies) * var);
    }
    return acc / 3.0;
}

struct Povm {
    HalfInt j;
    std::vector<Mat> elements;
    double completeness_residual;
};

// Covariant n-outcome POVM Pi_l = (d/n) R(theta_l) |psi><psi| R(theta_l)^dag with
// theta_l = 2 pi l / n about `axis`. Complete exactly when the state has uniform
// moduli in the axis eigenbasis and n >= d.
inline Povm covariant_povm(const PureState& s, const Axis& axis, int n) {
    if (n < 1) throw ValidationError("POVM needs at least one element");
    const int d = s.j.dim();
    const Vec a = s.to_z();
    Povm out{s.j, {}, 0.0};
    out.elements.reserve(n);
    Mat sum = Mat::Zero(d, d);
    for (int l = 0; l < n; ++l) {
        const Vec rotated = rotation(s.j, axis, 2.0 * std::numbers::pi * l / n) * a;
        Mat element = (static_cast<double>(d) / n) * (rotated * rotated.adjoint());
        sum += element;
        out.elements.push_back(std::move(element));
    }
    out.completeness_residual = (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (out.completeness_residual > 1e-6) throw CompletenessViolation(out.completeness_residual);
    return out;
}

struct GameReport {
    double p_success;
    std::vector<double> per_angle;  // Tr(rho_l Pi_l) for each hidden angle index l
};

// n-angle discrimination game: a uniformly random theta_l is applied to the probe
// and the covariant POVM guesses l. Success probability d/n for a complete POVM.
inline GameReport discrete_success_probability(const PureState& s, const Axis& axis, int n) {
    const Povm povm = covariant_povm(s, axis, n);
    const Vec a = s.to_z();
    GameReport report{0.0, {}};
    report.per_angle.reserve(n);
    for (int l = 0; l < n; ++l) {
        const Vec rotated = rotation(s.j, axis, 2.0 * std::numbers::pi * l / n) * a;
        const double term = (rotated.adjoint() * povm.elements[l] * rotated)(0).real();
        report.per_angle.push_back(term);
        report.p_success += term / n;
    }
    return report;
}

struct GameSample {
    long trials = 0;
    long successes = 0;
    double frequency = 0.0;
    double expected = 0.0;
    double binomial_sigma = 0.0;  // std of `frequency` under the expected rate
};

// Seeded Monte-Carlo of the same game. Outcome weights depend only on (l - k) mod n,
// so the distribution is precomputed once from the overlap curve.
inline GameSample run_discrete_game(const PureState& s, const Axis& axis, int n, long trials, std::uint64_t seed) {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    const GameReport exact = discrete_success_probability(s, axis, n);
    const int d = s.j.dim();
    const Vec a = s.to_z();
    const Vec in_axis = eigenbasis_matrix(s.j, axis).adjoint() * a;
    std::vector<double> cumulative(n, 0.0);
    double running = 0.0;
    for (int t = 0; t < n; ++t) {
        cd amp = 0.0;
        for (int i = 0; i < d; ++i)
            amp += std::norm(in_axis(i)) * std::polar(1.0, -m_of_index(s.j, i) * 2.0 * std::numbers::pi * t / n);
        running += (static_cast<double>(d) / n) * std::norm(amp);
        cumulative[t] = running;
    }

    Rng rng = Rng::substream(seed, 0);
    GameSample sample;
    sample.trials = trials;
    // p_success is a probability; clamp off the float noise so the sigma below stays real.
    sample.expected = std::clamp(exact.p_success, 0.0, 1.0);
    for (long i = 0; i < trials; ++i) {
        const int hidden = static_cast<int>(rng.uniform01() * n);
        const double u = rng.uniform01() * running;  // running == 1 for a complete POVM
        int shift = static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (shift >= n) shift = n - 1;
        const int outcome = (hidden + shift) % n;
        if (outcome == hidden) ++sample.successes;
    }
    sample.frequency = static_cast<double>(sample.successes) / trials;
    sample.binomial_sigma = std::sqrt(sample.expected * (1.0 - sample.expected) / trials);
    return sample;
}

struct MVector {
    double m1, m2, m3;
};

namespace detail {

inline std::pair<char, char> cyclic_pair(char label) {
    switch (label) {
        case 'z': return {'x', 'y'};
        case 'x': return {'y', 'z'};
        case 'y': return {'z', 'x'};
        default: throw ValidationError("axis label must be one of x, y, z");
    }
}

}  // namespace detail

// Expectations of the three signal observables for the given axis label k with its
// cyclic pair (a, b): m1 = <J_a^2 - J_b^2>, m2 = <J_a J_b + J_b J_a>, m3 = <J_k>.
inline MVector m_vector(const PureState& s, char label) {
    const auto [la, lb] = detail::cyclic_pair(label);
    if (s.j.twice != 2) throw DomainError("signal observables are defined for spin 1");
    const Mat ja = angular_momentum(s.j, la);
    const Mat jb = angular_momentum(s.j, lb);
    const Mat jk = angular_momentum(s.j, label);
    const Vec a = s.to_z();
    return {expectation(ja * ja - jb * jb, a), expectation(ja * jb + jb * ja, a), expectation(jk, a)};
}

// |<(J_a + i J_b)^2>| = sqrt(m1^2 + m2^2) = 2 sqrt(p_down p_up) in the k eigenbasis.
inline double radius(const PureState& s, char label) {
    const MVector m = m_vector(s, label);
    return std::hypot(m.m1, m.m2);
}

// R_z(-pi/4) R_x(-acos(1/sqrt(3))) |0>_z, the experimental preparation of the spin-1
// protractor with phases (3pi/4, 0, pi/4).
inline PureState prepare_protractor_sequence() {
    const HalfInt one{2};
    PureState s = z_eigenstate(one, 0);
    s = apply_operator(rotation(one, Axis::x(), -std::acos(1.0 / std::sqrt(3.0))), s);
    s = apply_operator(rotation(one, Axis::z(), -std::numbers::pi / 4.0), s);
    return s;
}

struct SignalParams {
    double eta = 1.0;
    double zeta = 1.0;
    double gamma1 = 0.0;  // 1/s
    double gamma2 = 0.0;  // 1/s
    double omega_L = 0.0;  // rad/s
    double noise_sigma = 0.0;
    std::vector<double> times;  // seconds, strictly increasing

    void validate() const {
        if (gamma1 < 0.0 || gamma2 < 0.0) throw ValidationError("decay rates must be >= 0");
        if (noise_sigma < 0.0) throw ValidationError("noise_sigma must be >= 0");
        if (times.empty()) throw ValidationError("times must be non-empty");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (times[i] <= times[i - 1]) throw ValidationError("times must be strictly increasing");
    }
};

// delta_alpha(t) = eta e^{-g1 t} [m1 sin(2 w t) + m2 cos(2 w t)] - zeta e^{-g2 t} m3 + noise.
inline std::vector<std::pair<double, double>> synthesize_signal(const MVector& m, const SignalParams& p,
                                                                std::uint64_t seed) {
    p.validate();
    Rng rng = Rng::substream(seed, 1);
    std::vector<std::pair<double, double>> trace;
    trace.reserve(p.times.size());
    for (double t : p.times) {
        const double osc = m.m1 * std::sin(2.0 * p.omega_L * t) + m.m2 * std::cos(2.0 * p.omega_L * t);
        double value = p.eta * std::exp(-p.gamma1 * t) * osc - p.zeta * std::exp(-p.gamma2 * t) * m.m3;
        if (p.noise_sigma > 0.0) value += p.noise_sigma * rng.normal();
        trace.emplace_back(t, value);
    }
    return trace;
}

struct FittedMVector {
    MVector m;
    double stderr1, stderr2, stderr3;
    double rss;  // residual sum of squares
};

// Linear least squares for (m1, m2, m3) given known eta, zeta, gamma1, gamma2, omega_L.
// Design columns: eta e^{-g1 t} sin(2 w t), eta e^{-g1 t} cos(2 w t), -zeta e^{-g2 t}.
inline FittedMVector fit_signal(const std::vector<std::pair<double, double>>& trace, const SignalParams& p) {
    const long n = static_cast<long>(trace.size());
    if (n < 16) throw ValidationError("fit needs at least 16 samples");
    RMat design(n, 3);
    RVec y(n);
    for (long i = 0; i < n; ++i) {
        const double t = trace[i].first;
        design(i, 0) = p.eta * std::exp(-p.gamma1 * t) * std::sin(2.0 * p.omega_L * t);
        design(i, 1) = p.eta * std::exp(-p.gamma1 * t) * std::cos(2.0 * p.omega_L * t);
        design(i, 2) = -p.zeta * std::exp(-p.gamma2 * t);
        y(i) = trace[i].second;
    }
    Eigen::ColPivHouseholderQR<RMat> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw RankDeficientDesign("signal design matrix is rank-deficient");
    const RVec beta = qr.solve(y);
    const double rss = (y - design * beta).squaredNorm();
    const double sigma2 = rss / static_cast<double>(n - 3);
    const RMat cov = sigma2 * (design.transpose() * design).inverse();
    return {{beta(0), beta(1), beta(2)},
            std::sqrt(std::max(0.0, cov(0, 0))),
            std::sqrt(std::max(0.0, cov(1, 1))),
            std::sqrt(std::max(0.0, cov(2, 2))),
            rss};
}

struct SweepRow {
    char axis;
    double theta;
    MVector m;
};

// Rotate the probe about each axis k by theta_l = pi l / count and record the k-label
// signal observables. For a protractor probe, (m1, m2) sweeps a circle of radius 2/3.
inline std::vector<SweepRow> rotation_sweep(const PureState& s, int count = 34) {
    if (count < 1) throw ValidationError("sweep needs at least one angle");
    std::vector<SweepRow> rows;
    rows.reserve(3 * count);
    for (char label : {'x', 'y', 'z'}) {
        const Axis axis = Axis::of_label(label);
        for (int l = 0; l < count; ++l) {
            const double theta = std::numbers::pi * l / count;
            const PureState rotated = apply_operator(rotation(s.j, axis, theta), s);
            rows.push_back({label, theta, m_vector(rotated, label)});
        }
    }
    return rows;
}

}  // namespace qprot
