#pragma once

#include <cstdint>
#include <vector>

#include "qprot/protractor.hpp"
#include "qprot/rng.hpp"
#include "qprot/uncertainty.hpp"

namespace qprot {

struct SearchConfig {
    HalfInt j;
    int starts = 64;
    int max_iterations = 2000;
    double objective_tolerance = 1e-9;
    double step_tolerance = 1e-12;
    std::uint64_t seed = 0;
};

struct SearchResult {
    PhaseVector best_phases;
    double best_objective = 0.0;
    int converged_starts = 0;
    bool is_perfect_candidate = false;
    std::vector<double> trace;  // final objective of every start, in start order
    std::uint64_t seed = 0;
};

namespace detail {

// Shared per-j tables for the phase-search objective.
struct SearchSpace {
    HalfInt j;
    Mat ux_adj, uy_adj;
    int gauge;

    explicit SearchSpace(HalfInt j_)
        : j(j_),
          ux_adj(eigenbasis_matrix(j_, Axis::x()).adjoint()),
          uy_adj(eigenbasis_matrix(j_, Axis::y()).adjoint()),
          gauge(gauge_index(j_)) {}

    Vec amplitudes(const RVec& phases) const {
        const int d = j.dim();
        Vec a(d);
        const double inv = 1.0 / std::sqrt(static_cast<double>(d));
        for (int i = 0; i < d; ++i) a(i) = std::polar(inv, phases(i));
        return a;
    }

    // f = H(p^x) + H(p^y) - 2 ln d  (<= 0, = 0 only for perfect protractors)
    double objective(const RVec& phases) const {
        const Vec a = amplitudes(phases);
        double h = 0.0;
        for (const Mat* u : {&ux_adj, &uy_adj}) {
            const Vec proj = (*u) * a;
            for (int m = 0; m < proj.size(); ++m) {
                const double p = std::norm(proj(m));
                if (p > 0.0) h -= p * std::log(p);
            }
        }
        return h - 2.0 * std::log(static_cast<double>(j.dim()));
    }

    // Analytic d f / d phases (gauge entry forced to 0).
    RVec gradient(const RVec& phases) const {
        const int d = j.dim();
        const Vec a = amplitudes(phases);
        RVec g = RVec::Zero(d);
        for (const Mat* u : {&ux_adj, &uy_adj}) {
            const Vec proj = (*u) * a;
            for (int m = 0; m < d; ++m) {
                const double p = std::max(std::norm(proj(m)), 1e-300);
                const double w = -(std::log(p) + 1.0);
                for (int k = 0; k < d; ++k) {
                    const double dp = -2.0 * std::imag(std::conj(proj(m)) * (*u)(m, k) * a(k));
                    g(k) += w * dp;
                }
            }
        }
        g(gauge) = 0.0;
        return g;
    }
};

struct AscentOutcome {
    RVec phases;
    double objective;
    bool gradient_converged;
};

// Near a maximum the objective is flat to machine precision once |g| ~ 1e-8,
// so a start counts as converged when its terminal point is stationary at
// this scale rather than at the (unreachable) in-loop exit threshold.
constexpr double stationary_gradient_norm = 1e-6;

// Gradient ascent with Armijo backtracking; monotone in f by construction.
inline AscentOutcome ascend(const SearchSpace& space, RVec phases, const SearchConfig& cfg) {
    double f = space.objective(phases);
    double alpha = 1.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const RVec g = space.gradient(phases);
        const double gn2 = g.squaredNorm();
        if (std::sqrt(gn2) < 1e-10) break;
        alpha = std::min(alpha * 2.0, 1.0);
        bool stepped = false;
        while (alpha >= cfg.step_tolerance) {
            const RVec trial = phases + alpha * g;
            const double ft = space.objective(trial);
            if (ft >= f + 1e-4 * alpha * gn2) {
                phases = trial;
                f = ft;
                stepped = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!stepped) break;  // step underflow: no representable improving step left
    }
    const bool converged = space.gradient(phases).norm() < stationary_gradient_norm;
    return {std::move(phases), f, converged};
}

}  // namespace detail

inline double objective(HalfInt j, const PhaseVector& pv) {
    return detail::SearchSpace(j).objective(pv.phases);
}

inline RVec objective_gradient(HalfInt j, const PhaseVector& pv) {
    return detail::SearchSpace(j).gradient(pv.phases);
}

// Multi-start gradient ascent over the 2j free phases. Deterministic in the seed:
// every start draws from its own substream and the best is picked by (objective,
// then start index), so any execution order gives the same result.
inline SearchResult search_perfect(const SearchConfig& cfg) {
    require_spin(cfg.j);
    if (cfg.starts < 1) throw ValidationError("starts must be >= 1");
    if (cfg.objective_tolerance <= 0.0 || cfg.step_tolerance <= 0.0)
        throw ValidationError("tolerances must be positive");
    const detail::SearchSpace space(cfg.j);
    const int d = cfg.j.dim();

    SearchResult res;
    res.seed = cfg.seed;
    res.trace.reserve(cfg.starts);
    double best = -std::numeric_limits<double>::infinity();
    RVec best_phases = RVec::Zero(d);
    for (int s = 0; s < cfg.starts; ++s) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(s));
        RVec start(d);
        for (int i = 0; i < d; ++i) start(i) = rng.uniform(-pi, pi);
        start(space.gauge) = 0.0;
        const auto out = detail::ascend(space, std::move(start), cfg);
        res.trace.push_back(out.objective);
        if (out.gradient_converged) ++res.converged_starts;
        if (out.objective > best) {
            best = out.objective;
            best_phases = out.phases;
        }
    }
    res.best_objective = best;
    res.best_phases = PhaseVector::make(cfg.j, best_phases);
    res.is_perfect_candidate = best >= -cfg.objective_tolerance;
    return res;
}

// Positive when the search cannot reach f = 0; corroborates nonexistence, proves nothing.
inline double nonexistence_margin(HalfInt j, SearchConfig cfg) {
    cfg.j = j;
    return -search_perfect(cfg).best_objective;
}

// Dense lattice over the free phases (resolution points per dimension). Returns the
// lattice maximum of f; one-time oracle for freezing nonexistence margins.
inline double grid_envelope(HalfInt j, int resolution) {
    const detail::SearchSpace space(j);
    const int d = j.dim();
    const int free_dims = d - 1;
    std::vector<double> grid(resolution);
    for (int i = 0; i < resolution; ++i) grid[i] = -pi + 2.0 * pi * i / resolution;
    RVec phases = RVec::Zero(d);
    std::vector<int> idx(free_dims, 0);
    std::vector<int> slot;  // phase positions that vary
    for (int i = 0; i < d; ++i)
        if (i != space.gauge) slot.push_back(i);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        for (int k = 0; k < free_dims; ++k) phases(slot[k]) = grid[idx[k]];
        best = std::max(best, space.objective(phases));
        int k = 0;
        while (k < free_dims && ++idx[k] == resolution) idx[k++] = 0;
        if (k == free_dims) break;
    }
    return best;
}

}  // namespace qprot
