// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qprot/entangle.hpp"
#include "qprot/json_io.hpp"
#include "qprot/metrology.hpp"
#include "qprot/protractor.hpp"
#include "qprot/search.hpp"
#include "qprot/spin.hpp"
#include "qprot/uncertainty.hpp"
#include "reference_tables.hpp"

using namespace qprot;

namespace {

struct Criterion {
    bool pass = true;
    double worst = 0.0;      // largest residual seen against the tightest bound
    std::string note;

    void residual(double value, double bound, const std::string& label) {
        worst = std::max(worst, value);
        if (!(value <= bound)) {
            pass = false;
            if (!note.empty()) note += "; ";
            note += label + " = " + std::to_string(value) + " > " + std::to_string(bound);
        }
    }

    void require(bool ok, const std::string& label) {
        if (!ok) {
            pass = false;
            if (!note.empty()) note += "; ";
            note += label;
        }
    }
};

double phase_aligned_diff(const Vec& a, const Vec& b) {
    int pivot = 0;
    a.cwiseAbs().maxCoeff(&pivot);
    const cd ratio = a(pivot) / b(pivot);
    return (a - b * (ratio / std::abs(ratio))).cwiseAbs().maxCoeff();
}

std::vector<double> jx_superdiagonal(int twice_j) {
    const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
    switch (twice_j) {
        case 1: return {0.5};
        case 2: return {1.0 / s2, 1.0 / s2};
        case 3: return {s3 / 2, 1.0, s3 / 2};
        case 4: return {1.0, std::sqrt(1.5), std::sqrt(1.5), 1.0};
        case 5: return {std::sqrt(5.0) / 2, s2, 1.5, s2, std::sqrt(5.0) / 2};
        case 6:
            return {std::sqrt(6.0) / 2, std::sqrt(10.0) / 2, s3, s3, std::sqrt(10.0) / 2,
                    std::sqrt(6.0) / 2};
        default:
            return {std::sqrt(7.0) / 2, s3, std::sqrt(15.0) / 2, 2.0, std::sqrt(15.0) / 2, s3,
                    std::sqrt(7.0) / 2};
    }
}

// 1. Operator algebra: commutators, Casimir, and the frozen eigenbasis
//    expansions, all entrywise within 1e-10.
Criterion criterion_operator_algebra() {
    Criterion c;
    const cd i1(0, 1);
    for (int tj = 1; tj <= 7; ++tj) {
        const HalfInt j{tj};
        const int d = j.dim();
        const Mat jx = angular_momentum(j, 'x');
        const Mat jy = angular_momentum(j, 'y');
        const Mat jz = angular_momentum(j, 'z');

        c.residual(max_abs_diff(jx * jy - jy * jx, i1 * jz), 1e-10, "[Jx,Jy]");
        c.residual(max_abs_diff(jy * jz - jz * jy, i1 * jx), 1e-10, "[Jy,Jz]");
        c.residual(max_abs_diff(jz * jx - jx * jz, i1 * jy), 1e-10, "[Jz,Jx]");
        const double jj = j.value() * (j.value() + 1.0);
        c.residual(max_abs_diff(jx * jx + jy * jy + jz * jz, jj * Mat::Identity(d, d)), 1e-10,
                   "Casimir");

        // Written-out operator matrices.
        const auto coeffs = jx_superdiagonal(tj);
        Mat ex = Mat::Zero(d, d), ey = Mat::Zero(d, d), ez = Mat::Zero(d, d);
        for (int i = 0; i + 1 < d; ++i) {
            ex(i, i + 1) = ex(i + 1, i) = coeffs[static_cast<std::size_t>(i)];
            ey(i, i + 1) = cd(0, -coeffs[static_cast<std::size_t>(i)]);
            ey(i + 1, i) = cd(0, coeffs[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < d; ++i) ez(i, i) = m_of_index(j, i);
        c.residual(max_abs_diff(jx, ex), 1e-10, "Jx entries");
        c.residual(max_abs_diff(jy, ey), 1e-10, "Jy entries");
        c.residual(max_abs_diff(jz, ez), 1e-10, "Jz entries");
    }

    // Frozen x/y eigenstate expansions, entrywise after the per-state global
    // phase is aligned (the only freedom the convention leaves).
    for (const auto& table : reference_tables::axis_tables()) {
        const HalfInt j{table.twice_j};
        const Mat u = eigenbasis_matrix(j, Axis::of_label(table.axis));
        for (int i = 0; i < j.dim(); ++i) {
            const auto& row = table.rows[static_cast<std::size_t>(i)];
            Vec v(j.dim());
            for (int k = 0; k < j.dim(); ++k) v(k) = row[static_cast<std::size_t>(k)];
            c.residual(phase_aligned_diff(u.col(i), v), 1e-10, "eigenstate expansion");
        }
    }
    return c;
}

// 2. Catalogue verification at the documented tolerances.
Criterion criterion_catalogue() {
    Criterion c;
    for (int tj : {2, 3, 6}) {
        const HalfInt j{tj};
        for (int v = 0; v < catalogue_size(j); ++v) {
            const ProtractorReport rep = protractor_rank(known_protractor(j, v), 1e-9);
            c.require(rep.rank == 3 && rep.perfect,
                      "rank 3 for twice_j=" + std::to_string(tj) + " variant " + std::to_string(v));
            for (const AxisVerdict& verdict : rep.per_axis) {
                c.residual(verdict.max_prob_deviation, 1e-10, "uniformity deviation");
                c.residual(verdict.gram_residual, 1e-9, "Gram residual");
            }
        }
    }
    const PureState s72 = known_protractor(HalfInt{7});
    RVec ph(8);
    for (int i = 0; i < 8; ++i) ph(i) = std::arg(s72.amps(i));
    const double f = objective(HalfInt{7}, PhaseVector::make(HalfInt{7}, ph));
    c.require(f >= -1e-6, "spin-7/2 objective " + std::to_string(f) + " >= -1e-6");
    c.require(protractor_rank(s72, 1e-3).rank == 3, "spin-7/2 rank 3 at tol 1e-3");
    return c;
}

// 3. Search recovery and regression-locked nonexistence margins.
Criterion criterion_search() {
    Criterion c;
    for (int tj : {2, 3, 6}) {
        for (std::uint64_t seed : {0u, 1u, 2u}) {
            SearchConfig cfg;
            cfg.j = HalfInt{tj};
            cfg.starts = 256;
            cfg.seed = seed;
            const SearchResult res = search_perfect(cfg);
            c.require(res.best_objective >= -1e-9,
                      "recovery twice_j=" + std::to_string(tj) + " seed " + std::to_string(seed) +
                          " best " + std::to_string(res.best_objective));
        }
    }
    const double margins[3] = {0.553303299721, 0.211331803454, 0.053994862885};
    const int spins[3] = {1, 4, 5};
    for (int k = 0; k < 3; ++k) {
        for (std::uint64_t seed : {0u, 1u, 2u}) {
            SearchConfig cfg;
            cfg.j = HalfInt{spins[k]};
            cfg.starts = 1024;
            cfg.seed = seed;
            const SearchResult res = search_perfect(cfg);
            double max_trace = -1e300;
            for (double t : res.trace) max_trace = std::max(max_trace, t);
            c.require(max_trace <= -margins[k] / 2.0,
                      "margin twice_j=" + std::to_string(spins[k]) + " seed " +
                          std::to_string(seed) + " best " + std::to_string(max_trace));
        }
    }
    return c;
}

// 4. Entropy saturation, variance means, and the mean bounds on Haar states.
Criterion criterion_uncertainty() {
    Criterion c;
    for (int tj : {2, 3, 6, 7}) {
        const HalfInt j{tj};
        for (int v = 0; v < catalogue_size(j); ++v) {
            const PureState s = known_protractor(j, v);
            const double target = 3.0 * std::log(static_cast<double>(j.dim()));
            c.residual(std::abs(entropy_sum(s) - target), 1e-9, "entropy sum");
            const PythagoreanMeans m = pythagorean_means(s);
            const double cap = j.value() * (j.value() + 1.0) / 3.0;
            c.residual(std::abs(m.arithmetic - cap), 1e-10, "arithmetic mean");
            c.residual(std::abs(m.geometric - cap), 1e-10, "geometric mean");
            c.require(m.harmonic.has_value(), "harmonic mean defined");
            if (m.harmonic) c.residual(std::abs(*m.harmonic - cap), 1e-10, "harmonic mean");
        }
    }
    for (int tj = 1; tj <= 6; ++tj) {
        const HalfInt j{tj};
        const double cap = j.value() * (j.value() + 1.0) / 3.0;
        Rng rng = Rng::substream(2024, static_cast<std::uint64_t>(tj));
        for (int i = 0; i < 10000; ++i) {
            const PureState s = haar_state(j, rng);
            const PythagoreanMeans m = pythagorean_means(s);
            c.residual(m.arithmetic - cap, 1e-8, "arithmetic bound");
            c.residual(m.geometric - cap, 1e-8, "geometric bound");
            if (m.harmonic) c.residual(*m.harmonic - cap, 1e-8, "harmonic bound");
        }
    }
    return c;
}

// 5. Spin-1/2 certainty relation on 1e5 Haar states.
Criterion criterion_certainty() {
    Criterion c;
    const double bound = halfspin_certainty_bound();
    Rng rng(99);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i)
        worst = std::max(worst, entropy_sum(haar_state(HalfInt{1}, rng)));
    c.residual(worst - bound, 1e-9, "entropy sum excess");
    return c;
}

// 6. Entanglement structure of the embedded protractors.
Criterion criterion_entanglement() {
    Criterion c;
    const HalfInt half{1};
    const Mat half_eye = 0.5 * Mat::Identity(2, 2);

    const CompositeState two = embed(known_protractor(HalfInt{2}, 0), {half, half});
    for (int k : {0, 1})
        c.residual(max_abs_diff(partial_trace(two, {k}).rho, half_eye), 1e-10,
                   "two-qubit reduction");

    for (int v = 0; v < 8; ++v) {
        const CompositeState three = embed(known_protractor(HalfInt{3}, v), {half, half, half});
        for (int k : {0, 1, 2})
            c.residual(max_abs_diff(partial_trace(three, {k}).rho, half_eye), 1e-10,
                       "three-qubit reduction");
    }

    const CompositeState pair = embed(known_protractor(HalfInt{6}), {HalfInt{3}, HalfInt{3}});
    const double a = (3 * std::sqrt(6.0) + 2 * std::sqrt(10.0)) / 70.0;
    Mat expected = 0.25 * Mat::Identity(4, 4);
    expected(0, 1) = a * std::polar(1.0, -3 * pi / 4);
    expected(0, 2) = cd(0, a / std::sqrt(2.0));
    expected(1, 3) = cd(0, a / std::sqrt(2.0));
    expected(2, 3) = a * std::polar(1.0, pi / 4);
    expected(1, 0) = std::conj(expected(0, 1));
    expected(2, 0) = std::conj(expected(0, 2));
    expected(3, 1) = std::conj(expected(1, 3));
    expected(3, 2) = std::conj(expected(2, 3));
    c.residual(max_abs_diff(partial_trace(pair, {0}).rho, expected), 1e-10,
               "spin-3/2 pair reduction");
    return c;
}

// 7. Discrete angle discrimination: exact rates, flat per-angle terms, and a
//    seeded Monte-Carlo within 3 binomial sigma.
Criterion criterion_discrimination() {
    Criterion c;
    const PureState p1 = known_protractor(HalfInt{2}, 0);
    const PureState p3 = known_protractor(HalfInt{6});
    struct Pair {
        const PureState* s;
        int n;
    };
    const Pair pairs[5] = {{&p1, 3}, {&p1, 4}, {&p1, 6}, {&p3, 7}, {&p3, 14}};
    for (const Pair& pr : pairs) {
        const double d = pr.s->j.dim();
        const GameReport rep = discrete_success_probability(*pr.s, Axis::z(), pr.n);
        c.residual(std::abs(rep.p_success - d / pr.n), 1e-10, "success probability");
        for (double term : rep.per_angle)
            c.residual(std::abs(term - d / pr.n), 1e-10, "per-angle term");

        const GameSample mc = run_discrete_game(*pr.s, Axis::z(), pr.n, 100000, 0);
        c.require(std::abs(mc.frequency - mc.expected) <= 3.0 * mc.binomial_sigma,
                  "Monte-Carlo n=" + std::to_string(pr.n) + " off by " +
                      std::to_string(std::abs(mc.frequency - mc.expected)) + " (3 sigma = " +
                      std::to_string(3.0 * mc.binomial_sigma) + ")");
    }
    return c;
}

// 8. Experiment model: preparation, rotation circles, fit inversion, and the
//    closed-form overlap curves.
Criterion criterion_experiment() {
    Criterion c;

    const PureState prep = prepare_protractor_sequence();
    const double r3 = 1.0 / std::sqrt(3.0);
    Vec target(3);
    target << std::polar(r3, 3 * pi / 4), cd(r3, 0), std::polar(r3, pi / 4);
    const PureState want = PureState::make(HalfInt{2}, Axis::z(), target);
    c.require(std::abs(inner(want, prep)) > 1.0 - 1e-10, "preparation fidelity");

    for (const auto& row : rotation_sweep(prep, 34)) {
        c.residual(std::abs(std::hypot(row.m.m1, row.m.m2) - 2.0 / 3.0), 1e-9, "circle radius");
        c.residual(std::abs(row.m.m3), 1e-10, "m3 drift");
    }

    SignalParams p;
    p.eta = 0.9;
    p.zeta = 1.1;
    p.gamma1 = 0.2;
    p.gamma2 = 0.05;
    p.omega_L = 3.0;
    for (int i = 0; i < 128; ++i) p.times.push_back(2.0 * i / 127.0);
    const MVector truth{0.3, -0.5, 0.4};
    const FittedMVector fit = fit_signal(synthesize_signal(truth, p, 0), p);
    c.residual(std::abs(fit.m.m1 - truth.m1), 1e-9, "fit m1");
    c.residual(std::abs(fit.m.m2 - truth.m2), 1e-9, "fit m2");
    c.residual(std::abs(fit.m.m3 - truth.m3), 1e-9, "fit m3");

    std::vector<double> grid(1000);
    for (int i = 0; i < 1000; ++i) grid[static_cast<std::size_t>(i)] = 2 * pi * i / 999.0;

    Vec anti = Vec::Zero(7);
    anti(1) = cd(1.0 / std::sqrt(2.0), 0);
    anti(5) = cd(-1.0 / std::sqrt(2.0), 0);
    const auto anti_curve =
        overlap_curve(PureState::make(HalfInt{6}, Axis::z(), anti), Axis::z(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = std::cos(2 * grid[i]) * std::cos(2 * grid[i]);
        c.residual(std::abs(anti_curve[i] - expected), 1e-10, "anticoherent curve");
    }

    const auto prot_curve = overlap_curve(known_protractor(HalfInt{6}), Axis::z(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 1.0;
        for (int m = 1; m <= 3; ++m) sum += 2.0 * std::cos(m * grid[i]);
        const double expected = (sum / 7.0) * (sum / 7.0);
        c.residual(std::abs(prot_curve[i] - expected), 1e-10, "protractor curve");
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        Criterion (*run)();
    };
    const Entry entries[8] = {
        {"1 operator algebra and eigenbasis tables", criterion_operator_algebra},
        {"2 catalogue yields perfect protractors", criterion_catalogue},
        {"3 search recovery and nonexistence margins", criterion_search},
        {"4 entropy saturation and variance-mean bounds", criterion_uncertainty},
        {"5 spin-1/2 certainty relation", criterion_certainty},
        {"6 embedded protractor reductions", criterion_entanglement},
        {"7 discrete angle discrimination", criterion_discrimination},
        {"8 experiment signal model", criterion_experiment},
    };

    bool all = true;
    for (const Entry& e : entries) {
        const Criterion c = e.run();
        all = all && c.pass;
        if (c.pass) {
            std::printf("PASS  criterion %s (worst residual %.3g)\n", e.label, c.worst);
        } else {
            std::printf("FAIL  criterion %s: %s\n", e.label, c.note.c_str());
        }
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
