#pragma once

#include <json.hpp>
#include <string>

#include "qprot/entangle.hpp"
#include "qprot/metrology.hpp"
#include "qprot/protractor.hpp"
#include "qprot/search.hpp"
#include "qprot/spin.hpp"
#include "qprot/uncertainty.hpp"

namespace qprot::io {

using json = nlohmann::json;

inline json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

inline json vector_json(const Vec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

inline json real_vector_json(const RVec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline json matrix_json(const Mat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

inline json axis_json(const Axis& a) {
    if (a.label != 0) return std::string(1, a.label);
    return json::array({a.nx, a.ny, a.nz});
}

// Interchange schema: {"twice_j": int, "basis": "z", "amplitudes": [[re, im], ...]},
// amplitudes m-descending. States are always emitted in the z basis.
inline json pure_state_json(const PureState& s) {
    return {{"twice_j", s.j.twice}, {"basis", "z"}, {"amplitudes", vector_json(s.to_z())}};
}

inline Axis axis_from_json(const json& in) {
    if (in.is_string()) {
        const std::string s = in.get<std::string>();
        if (s.size() != 1) throw ValidationError("axis must be x, y, z, or a unit 3-vector");
        return Axis::of_label(s[0]);
    }
    if (in.is_array() && in.size() == 3 && in[0].is_number() && in[1].is_number() && in[2].is_number())
        return Axis::of(in[0].get<double>(), in[1].get<double>(), in[2].get<double>());
    throw ValidationError("axis must be x, y, z, or a unit 3-vector");
}

inline PureState pure_state_from_json(const json& in) {
    if (!in.is_object()) throw ValidationError("state JSON must be an object");
    if (!in.contains("twice_j") || !in["twice_j"].is_number_integer())
        throw ValidationError("state JSON needs integer field \"twice_j\"");
    const HalfInt j{in["twice_j"].get<int>()};
    require_spin(j);
    const Axis basis = in.contains("basis") ? axis_from_json(in["basis"]) : Axis::z();
    if (!in.contains("amplitudes") || !in["amplitudes"].is_array())
        throw ValidationError("state JSON needs array field \"amplitudes\"");
    const json& amps = in["amplitudes"];
    if (static_cast<int>(amps.size()) != j.dim())
        throw ValidationError("amplitude count does not match 2j+1");
    Vec a(j.dim());
    for (int i = 0; i < j.dim(); ++i) {
        const json& entry = amps[i];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
            throw ValidationError("each amplitude must be a [re, im] pair");
        a(i) = cd(entry[0].get<double>(), entry[1].get<double>());
    }
    const double norm = a.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        throw ValidationError("state is not normalized (norm " + std::to_string(norm) + ")");
    return PureState::make_normalized(j, basis, std::move(a));
}

inline json phase_vector_json(const PhaseVector& pv) {
    return {{"twice_j", pv.j.twice}, {"phases", real_vector_json(pv.phases)}};
}

inline json axis_verdict_json(const AxisVerdict& v) {
    return {{"distribution", real_vector_json(v.distribution)},
            {"max_prob_deviation", v.max_prob_deviation},
            {"optimal", v.optimal},
            {"gram_residual", v.gram_residual}};
}

inline json protractor_report_json(const ProtractorReport& r) {
    return {{"j", r.j.str()},
            {"twice_j", r.j.twice},
            {"per_axis",
             {{"x", axis_verdict_json(r.per_axis[0])},
              {"y", axis_verdict_json(r.per_axis[1])},
              {"z", axis_verdict_json(r.per_axis[2])}}},
            {"rank", r.rank},
            {"perfect", r.perfect}};
}

inline json per_axis_json(const std::array<double, 3>& v) {
    return {{"x", v[0]}, {"y", v[1]}, {"z", v[2]}};
}

inline json uncertainty_profile_json(const UncertaintyProfile& p) {
    json renyi = json::object();
    for (const auto& [alpha, values] : p.renyi) renyi[json(alpha).dump()] = per_axis_json(values);
    json means = {{"arithmetic", p.means.arithmetic}, {"geometric", p.means.geometric}};
    if (p.means.harmonic)
        means["harmonic"] = *p.means.harmonic;
    else
        means["harmonic"] = nullptr;
    return {{"shannon_per_axis", per_axis_json(p.shannon_per_axis)},
            {"renyi", std::move(renyi)},
            {"variances", per_axis_json(p.variances)},
            {"first_moments", per_axis_json(p.first_moments)},
            {"means", std::move(means)},
            {"entropy_sum", p.entropy_sum}};
}

inline json search_result_json(const SearchResult& r) {
    return {{"best_phases", phase_vector_json(r.best_phases)},
            {"best_objective", r.best_objective},
            {"converged_starts", r.converged_starts},
            {"is_perfect_candidate", r.is_perfect_candidate},
            {"trace", r.trace},
            {"seed", r.seed}};
}

inline json density_matrix_json(const DensityMatrix& dm) {
    return {{"dim", dm.dim()}, {"entries", matrix_json(dm.rho)}};
}

inline json game_report_json(const GameReport& g) {
    return {{"p_success", g.p_success}, {"per_angle", g.per_angle}};
}

inline json game_sample_json(const GameSample& g) {
    return {{"trials", g.trials},
            {"successes", g.successes},
            {"frequency", g.frequency},
            {"expected", g.expected},
            {"binomial_sigma", g.binomial_sigma}};
}

inline json m_vector_json(const MVector& m) { return {{"m1", m.m1}, {"m2", m.m2}, {"m3", m.m3}}; }

inline json fitted_m_vector_json(const FittedMVector& f) {
    return {{"m1", f.m.m1},
            {"m2", f.m.m2},
            {"m3", f.m.m3},
            {"stderr1", f.stderr1},
            {"stderr2", f.stderr2},
            {"stderr3", f.stderr3},
            {"rss", f.rss}};
}

// Top-level envelope shared by every command. elapsed_ms is wall-clock and is the
// only field excluded from the byte-determinism guarantee.
inline json command_result(const std::string& command, json inputs_echo, json payload, double elapsed_ms) {
    return {{"command", command},
            {"inputs_echo", std::move(inputs_echo)},
            {"payload", std::move(payload)},
            {"elapsed_ms", elapsed_ms}};
}

}  // namespace qprot::io
