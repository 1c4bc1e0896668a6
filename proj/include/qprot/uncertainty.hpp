#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "qprot/protractor.hpp"
#include "qprot/rng.hpp"
#include "qprot/spin.hpp"

namespace qprot {

inline void require_probability_vector(const RVec& p) {
    for (int i = 0; i < p.size(); ++i)
        if (p(i) < -1e-12) throw DomainError("negative probability entry " + std::to_string(p(i)));
    if (std::abs(p.sum() - 1.0) > 1e-9)
        throw DomainError("probabilities sum to " + std::to_string(p.sum()) + ", not 1");
}

// Shannon entropy in nats with the 0 ln 0 = 0 convention.
inline double shannon_entropy(const RVec& p) {
    require_probability_vector(p);
    double h = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    return h;
}

// Renyi entropy H_alpha in nats; alpha = 1 is the Shannon branch, alpha = 0 the
// support size. Zero entries contribute nothing for any alpha > 0.
inline double renyi_entropy(const RVec& p, double alpha) {
    require_probability_vector(p);
    if (alpha < 0.0) throw ValidationError("Renyi order must be >= 0");
    if (alpha == 1.0) return shannon_entropy(p);
    if (alpha == 0.0) {
        int support = 0;
        for (int i = 0; i < p.size(); ++i)
            if (p(i) > 0.0) ++support;
        return std::log(static_cast<double>(support));
    }
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) acc += std::pow(p(i), alpha);
    return std::log(acc) / (1.0 - alpha);
}

inline double entropy_sum(const PureState& s) {
    return shannon_entropy(axis_distribution(s, Axis::x())) +
           shannon_entropy(axis_distribution(s, Axis::y())) +
           shannon_entropy(axis_distribution(s, Axis::z()));
}

inline double variance(const PureState& s, const Axis& axis) {
    const Mat jop = angular_momentum_along(s.j, axis);
    const double first = expectation(jop, s);
    return expectation(jop * jop, s) - first * first;
}

struct PythagoreanMeans {
    double arithmetic = 0.0;
    double geometric = 0.0;
    std::optional<double> harmonic;  // undefined when any variance vanishes
};

inline PythagoreanMeans pythagorean_means(const PureState& s) {
    const double vx = variance(s, Axis::x());
    const double vy = variance(s, Axis::y());
    const double vz = variance(s, Axis::z());
    PythagoreanMeans m;
    m.arithmetic = (vx + vy + vz) / 3.0;
    m.geometric = std::cbrt(vx * vy * vz);
    if (vx > 0.0 && vy > 0.0 && vz > 0.0) m.harmonic = 3.0 / (1.0 / vx + 1.0 / vy + 1.0 / vz);
    return m;
}

inline bool anticoherence_order1(const PureState& s, double tolerance = 1e-10) {
    for (const Axis& a : {Axis::x(), Axis::y(), Axis::z()})
        if (std::abs(expectation(angular_momentum_along(s.j, a), s)) > tolerance) return false;
    return true;
}

// Tight upper bound on the entropy sum over x/y/z outcomes for spin-1/2.
inline double halfspin_certainty_bound() {
    return (3.0 * std::log(6.0) - std::sqrt(3.0) * std::log(2.0 + std::sqrt(3.0))) / 2.0;
}

inline PureState haar_state(HalfInt j, Rng& rng) {
    Vec a(j.dim());
    for (int i = 0; i < j.dim(); ++i) a(i) = cd(rng.normal(), rng.normal());
    return PureState::make_normalized(j, Axis::z(), std::move(a));
}

struct UncertaintyProfile {
    std::array<double, 3> shannon_per_axis{};            // x, y, z
    std::map<double, std::array<double, 3>> renyi;       // alpha -> per-axis
    std::array<double, 3> variances{};
    std::array<double, 3> first_moments{};
    PythagoreanMeans means;
    double entropy_sum = 0.0;
};

inline UncertaintyProfile uncertainty_profile(const PureState& s, const std::vector<double>& alphas = {0.5, 2.0}) {
    UncertaintyProfile out;
    const std::array<Axis, 3> axes{Axis::x(), Axis::y(), Axis::z()};
    for (int k = 0; k < 3; ++k) {
        const RVec p = axis_distribution(s, axes[k]);
        out.shannon_per_axis[k] = shannon_entropy(p);
        for (double a : alphas) out.renyi[a][k] = renyi_entropy(p, a);
        const Mat jop = angular_momentum_along(s.j, axes[k]);
        out.first_moments[k] = expectation(jop, s);
        out.variances[k] = expectation(jop * jop, s) - out.first_moments[k] * out.first_moments[k];
    }
    out.means = pythagorean_means(s);
    out.entropy_sum = out.shannon_per_axis[0] + out.shannon_per_axis[1] + out.shannon_per_axis[2];
    return out;
}

}  // namespace qprot
