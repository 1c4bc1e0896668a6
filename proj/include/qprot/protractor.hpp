#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "qprot/spin.hpp"

namespace qprot {

inline double wrap_angle(double x) {  // to (-pi, pi]
    double y = std::fmod(x + pi, 2.0 * pi);
    if (y <= 0.0) y += 2.0 * pi;
    return y - pi;
}

// Gauge entry: m = 0 for integer j, m = +j for half-integer j.
inline int gauge_index(HalfInt j) { return j.is_integer() ? j.twice / 2 : 0; }

// Phases of a uniform-modulus superposition, gauge entry pinned to exactly 0.
struct PhaseVector {
    HalfInt j;
    RVec phases;  // size 2j+1, m descending, entries in (-pi, pi]

    static PhaseVector make(HalfInt j, RVec raw) {
        if (raw.size() != j.dim()) throw ValidationError("phase count does not match 2j+1");
        const int g = gauge_index(j);
        RVec out(raw.size());
        for (int i = 0; i < raw.size(); ++i) out(i) = wrap_angle(raw(i) - raw(g));
        out(g) = 0.0;
        return {j, std::move(out)};
    }
};

inline PureState uniform_phase_state(const PhaseVector& pv) {
    const int d = pv.j.dim();
    Vec a(d);
    for (int i = 0; i < d; ++i) a(i) = std::polar(1.0 / std::sqrt(double(d)), pv.phases(i));
    return PureState::make(pv.j, Axis::z(), std::move(a));
}

inline RVec axis_distribution(const PureState& s, const Axis& axis) {
    const Vec c = eigenbasis_matrix(s.j, axis).adjoint() * s.to_z();
    return c.cwiseAbs2();
}

inline double max_uniformity_deviation(const RVec& p) {
    const double u = 1.0 / static_cast<double>(p.size());
    return (p.array() - u).abs().maxCoeff();
}

inline bool is_optimal(const PureState& s, const Axis& axis, double tolerance) {
    return max_uniformity_deviation(axis_distribution(s, axis)) <= tolerance;
}

struct OrthogonalFamily {
    std::vector<PureState> states;
    double gram_residual = 0.0;  // max |G - I|, G_kl = <s_k|s_l>
};

// The d rotated copies at theta_k = 2 pi k / d about the axis. For an optimal state
// these are mutually orthogonal; the Gram residual carries the verdict either way.
inline OrthogonalFamily orthogonal_family(const PureState& s, const Axis& axis) {
    const int d = s.j.dim();
    OrthogonalFamily fam;
    fam.states.reserve(d);
    for (int k = 0; k < d; ++k) {
        const Mat r = rotation(s.j, axis, 2.0 * pi * k / d);
        fam.states.push_back(PureState::make(s.j, Axis::z(), r * s.to_z(), 1e-9));
    }
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const cd g = inner(fam.states[k], fam.states[l]);
            const cd target = (k == l) ? cd(1.0, 0.0) : cd(0.0, 0.0);
            fam.gram_residual = std::max(fam.gram_residual, std::abs(g - target));
        }
    return fam;
}

struct AxisVerdict {
    RVec distribution;
    double max_prob_deviation = 0.0;
    bool optimal = false;
    double gram_residual = 0.0;
};

struct ProtractorReport {
    HalfInt j;
    std::array<AxisVerdict, 3> per_axis;  // x, y, z
    int rank = 0;
    bool perfect = false;
};

inline ProtractorReport protractor_rank(const PureState& s, double tolerance = 1e-9) {
    ProtractorReport rep;
    rep.j = s.j;
    const std::array<Axis, 3> axes{Axis::x(), Axis::y(), Axis::z()};
    for (int k = 0; k < 3; ++k) {
        AxisVerdict& v = rep.per_axis[k];
        v.distribution = axis_distribution(s, axes[k]);
        v.max_prob_deviation = max_uniformity_deviation(v.distribution);
        v.optimal = v.max_prob_deviation <= tolerance;
        v.gram_residual = orthogonal_family(s, axes[k]).gram_residual;
        if (v.optimal) ++rep.rank;
    }
    rep.perfect = rep.rank == 3;
    return rep;
}

// Multiply by a global phase so the gauge-entry amplitude is real non-negative.
inline PureState canonicalize(const PureState& s) {
    const Vec z = s.to_z();
    const cd g = z(gauge_index(s.j));
    if (std::abs(g) < 1e-14) return PureState::make(s.j, Axis::z(), z, 1e-9);
    return PureState::make(s.j, Axis::z(), z * std::polar(1.0, -std::arg(g)), 1e-9);
}

inline int catalogue_size(HalfInt j) {
    switch (j.twice) {
        case 2: return 4;
        case 3: return 8;
        case 6: return 1;
        case 7: return 1;
    }
    return 0;
}

// Catalogued perfect protractors, canonical gauge, z basis.
inline PureState known_protractor(HalfInt j, int variant = 0) {
    require_spin(j);
    if (j.twice == 1 || j.twice == 4 || j.twice == 5)
        throw NonexistenceProven("no perfect quantum protractor exists for j = " + j.str());
    const int count = catalogue_size(j);
    if (count == 0) throw NotCatalogued("no catalogued perfect protractor for j = " + j.str());
    if (variant < 0 || variant >= count)
        throw ValidationError("variant " + std::to_string(variant) + " out of range (catalogue holds " +
                              std::to_string(count) + ")");
    RVec ph(j.dim());
    if (j.twice == 2) {
        static constexpr std::array<std::array<double, 2>, 4> pairs{{
            {pi / 4, 3 * pi / 4}, {-pi / 4, -3 * pi / 4}, {3 * pi / 4, pi / 4}, {-3 * pi / 4, -pi / 4}}};
        ph << pairs[variant][0], 0.0, pairs[variant][1];
    } else if (j.twice == 3) {
        static const double s = std::asin(1.0 / std::sqrt(3.0));
        static const std::array<double, 4> rows{pi / 4, -3 * pi / 4, -pi / 4, 3 * pi / 4};
        const double phi_dd = rows[variant / 2];
        const bool first_col = variant % 2 == 0;
        const double phi_d = (variant < 4) ? (first_col ? s : pi - s) : (first_col ? -s : s - pi);
        const double phi_u = wrap_angle(phi_dd + phi_d + pi);
        ph << 0.0, phi_u, phi_d, phi_dd;
    } else if (j.twice == 6) {
        const double th = 0.5 * std::atan(std::sqrt(15.0));
        ph << -th - pi / 4, pi / 4, th + 3 * pi / 4, 0.0, -th + pi / 4, -pi / 4, th - 3 * pi / 4;
    } else {  // j = 7/2, numerically known phases
        const double p32 = -2.30181413, pm32 = -0.60467766, pm52 = -1.46074545, pm72 = -0.57982923;
        const double theta = -std::asin(std::sqrt(7.0 / 15.0) * std::sin(pm52 + (pm32 - p32 - pm72) / 2.0));
        const double p52 = pm32 - p32 + pm52 + pi;
        const double p12 = theta + (p32 + pm32 + pm72) / 2.0;
        const double pm12 = theta + (p32 + pm32 - pm72) / 2.0 + pi;
        ph << 0.0, p52, p32, p12, pm12, pm32, pm52, pm72;
    }
    return uniform_phase_state(PhaseVector::make(j, std::move(ph)));
}

// F(phi) = |<psi| R(phi n) |psi>|^2 = |sum_m p_m e^{-im phi}|^2 with p from the axis basis.
inline std::vector<double> overlap_curve(const PureState& s, const Axis& axis, const std::vector<double>& phis) {
    const RVec p = axis_distribution(s, axis);
    const int d = s.j.dim();
    std::vector<double> out;
    out.reserve(phis.size());
    for (double phi : phis) {
        cd acc = 0.0;
        for (int i = 0; i < d; ++i) acc += p(i) * std::polar(1.0, -m_of_index(s.j, i) * phi);
        out.push_back(std::norm(acc));
    }
    return out;
}

}  // namespace qprot
