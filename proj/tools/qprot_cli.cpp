#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qprot/entangle.hpp"
#include "qprot/json_io.hpp"
#include "qprot/metrology.hpp"
#include "qprot/protractor.hpp"
#include "qprot/search.hpp"
#include "qprot/spin.hpp"
#include "qprot/uncertainty.hpp"

namespace {

using qprot::io::json;
using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw qprot::ValidationError("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    return buf.str();
}

json parse_json(const std::string& text) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw qprot::ValidationError("input is not valid JSON");
    return parsed;
}

// Accepts a bare PureState object or a command envelope that nests one under
// "payload"/"state", so any state-emitting command can be piped straight back in.
json unwrap_state_json(json in) {
    for (int depth = 0; depth < 4; ++depth) {
        if (!in.is_object()) break;
        if (in.contains("twice_j")) return in;
        if (in.contains("state")) {
            in = in["state"];
            continue;
        }
        if (in.contains("payload")) {
            in = in["payload"];
            continue;
        }
        break;
    }
    throw qprot::ValidationError("no PureState object found in input JSON");
}

qprot::PureState load_state(const std::string& path) {
    return qprot::io::pure_state_from_json(unwrap_state_json(parse_json(slurp(path))));
}

qprot::Axis parse_axis(const std::string& text) {
    if (text.size() == 1 && (text[0] == 'x' || text[0] == 'y' || text[0] == 'z'))
        return qprot::Axis::of_label(text[0]);
    std::istringstream in(text);
    double c[3];
    char sep1 = 0, sep2 = 0;
    if ((in >> c[0] >> sep1 >> c[1] >> sep2 >> c[2]) && sep1 == ',' && sep2 == ',' && (in >> std::ws).eof())
        return qprot::Axis::of(c[0], c[1], c[2]);
    throw qprot::ValidationError("axis must be x, y, z, or nx,ny,nz");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const std::string& command, json inputs_echo, json payload, Clock::time_point start) {
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    std::cout << qprot::io::command_result(command, std::move(inputs_echo), std::move(payload), ms).dump(2)
              << "\n";
}

std::vector<std::pair<double, double>> parse_trace_csv(const std::string& text) {
    std::vector<std::pair<double, double>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw qprot::ValidationError("trace CSV needs two comma-separated columns");
        try {
            std::size_t used = 0;
            const double t = std::stod(line.substr(0, comma), &used);
            const double v = std::stod(line.substr(comma + 1));
            rows.emplace_back(t, v);
        } catch (const std::exception&) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw qprot::ValidationError("cannot parse trace CSV row: " + line);
        }
        first = false;
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-j angular momentum toolkit: protractor verification, search, "
                 "entanglement structure, and rotation-estimation games",
                 "qprot"};
    app.require_subcommand(1);

    // catalogue
    std::string cat_j;
    int cat_variant = 0;
    auto* cat = app.add_subcommand("catalogue", "Emit a catalogued perfect protractor as PureState JSON");
    cat->add_option("--j", cat_j, "total spin, e.g. 1 or 3/2")->required();
    cat->add_option("--variant", cat_variant, "catalogue row index")->capture_default_str();
    cat->callback([&] {
        const auto start = Clock::now();
        const qprot::HalfInt j = qprot::HalfInt::parse(cat_j);
        const qprot::PureState s = qprot::known_protractor(j, cat_variant);
        emit("catalogue", {{"j", j.str()}, {"variant", cat_variant}},
             {{"state", qprot::io::pure_state_json(s)},
              {"variant", cat_variant},
              {"catalogue_size", qprot::catalogue_size(j)}},
             start);
    });

    // ops
    std::string ops_j, ops_axis = "z";
    double ops_theta = 0.0;
    auto* ops = app.add_subcommand("ops", "Emit J_x, J_y, J_z, an axis eigenbasis, and optionally a rotation");
    ops->add_option("--j", ops_j, "total spin, e.g. 1 or 3/2")->required();
    ops->add_option("--axis", ops_axis, "x, y, z, or nx,ny,nz")->capture_default_str();
    auto* ops_theta_opt = ops->add_option("--theta", ops_theta, "rotation angle (radians) about --axis");
    ops->callback([&] {
        const auto start = Clock::now();
        const qprot::HalfInt j = qprot::HalfInt::parse(ops_j);
        qprot::require_spin(j);
        const qprot::Axis axis = parse_axis(ops_axis);
        json payload = {{"twice_j", j.twice},
                        {"dim", j.dim()},
                        {"operators",
                         {{"x", qprot::io::matrix_json(qprot::angular_momentum(j, 'x'))},
                          {"y", qprot::io::matrix_json(qprot::angular_momentum(j, 'y'))},
                          {"z", qprot::io::matrix_json(qprot::angular_momentum(j, 'z'))}}},
                        {"along", qprot::io::matrix_json(qprot::angular_momentum_along(j, axis))},
                        {"eigenbasis", qprot::io::matrix_json(qprot::eigenbasis_matrix(j, axis))}};
        json echo = {{"j", j.str()}, {"axis", qprot::io::axis_json(axis)}};
        if (ops_theta_opt->count() > 0) {
            payload["rotation"] = qprot::io::matrix_json(qprot::rotation(j, axis, ops_theta));
            payload["theta"] = ops_theta;
            echo["theta"] = ops_theta;
        }
        emit("ops", std::move(echo), std::move(payload), start);
    });

    // verify
    std::string verify_state = "-";
    double verify_tol = 1e-9;
    auto* verify = app.add_subcommand("verify", "Protractor report (per-axis optimality, rank) for a state");
    verify->add_option("--state", verify_state, "PureState JSON file, or - for stdin")->capture_default_str();
    verify->add_option("--tol", verify_tol, "uniformity tolerance")->capture_default_str();
    verify->callback([&] {
        const auto start = Clock::now();
        const qprot::PureState s = load_state(verify_state);
        emit("verify", {{"state", verify_state}, {"tol", verify_tol}, {"j", s.j.str()}},
             qprot::io::protractor_report_json(qprot::protractor_rank(s, verify_tol)), start);
    });

    // curve
    std::string curve_state = "-", curve_axis = "z", curve_format = "csv";
    int curve_points = 1000;
    double curve_phi_max = 2.0 * qprot::pi;
    auto* curve = app.add_subcommand("curve", "Rotation overlap F(phi) = |<psi|R(phi)|psi>|^2 as CSV (phi, F)");
    curve->add_option("--state", curve_state, "PureState JSON file, or - for stdin")->capture_default_str();
    curve->add_option("--axis", curve_axis, "x, y, z, or nx,ny,nz")->capture_default_str();
    curve->add_option("--points", curve_points, "grid size")->capture_default_str();
    curve->add_option("--phi-max", curve_phi_max, "grid endpoint (radians)")->capture_default_str();
    curve->add_option("--format", curve_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    curve->callback([&] {
        const auto start = Clock::now();
        if (curve_points < 2) throw qprot::ValidationError("--points must be at least 2");
        const qprot::PureState s = load_state(curve_state);
        const qprot::Axis axis = parse_axis(curve_axis);
        std::vector<double> phis(curve_points);
        for (int i = 0; i < curve_points; ++i) phis[i] = curve_phi_max * i / (curve_points - 1);
        const std::vector<double> values = qprot::overlap_curve(s, axis, phis);
        if (curve_format == "csv") {
            std::cout << "phi,F\n";
            for (int i = 0; i < curve_points; ++i) std::cout << fmt(phis[i]) << "," << fmt(values[i]) << "\n";
        } else {
            emit("curve",
                 {{"state", curve_state}, {"axis", qprot::io::axis_json(axis)}, {"points", curve_points},
                  {"phi_max", curve_phi_max}},
                 {{"phi", phis}, {"F", values}}, start);
        }
    });

    // search
    std::string search_j, search_emit;
    qprot::SearchConfig search_cfg;
    auto* search = app.add_subcommand("search", "Multi-start gradient ascent for perfect protractor phases");
    search->add_option("--j", search_j, "total spin, e.g. 1 or 3/2")->required();
    search->add_option("--starts", search_cfg.starts, "number of random restarts")->capture_default_str();
    search->add_option("--seed", search_cfg.seed, "RNG seed")->capture_default_str();
    search->add_option("--max-iterations", search_cfg.max_iterations, "ascent iteration cap")->capture_default_str();
    search->add_option("--objective-tolerance", search_cfg.objective_tolerance, "perfect-candidate threshold")
        ->capture_default_str();
    search->add_option("--step-tolerance", search_cfg.step_tolerance, "line-search stop")->capture_default_str();
    search->add_option("--emit-state", search_emit, "also write the best candidate as PureState JSON to this file");
    search->callback([&] {
        const auto start = Clock::now();
        search_cfg.j = qprot::HalfInt::parse(search_j);
        const qprot::SearchResult res = qprot::search_perfect(search_cfg);
        if (!search_emit.empty()) {
            if (search_emit == "-") throw qprot::ValidationError("--emit-state needs a file path");
            std::ofstream out(search_emit);
            if (!out) throw qprot::ValidationError("cannot write '" + search_emit + "'");
            out << qprot::io::pure_state_json(qprot::uniform_phase_state(res.best_phases)).dump(2) << "\n";
        }
        emit("search",
             {{"j", search_cfg.j.str()},
              {"starts", search_cfg.starts},
              {"seed", search_cfg.seed},
              {"max_iterations", search_cfg.max_iterations},
              {"objective_tolerance", search_cfg.objective_tolerance},
              {"step_tolerance", search_cfg.step_tolerance}},
             qprot::io::search_result_json(res), start);
    });

    // metrics
    std::string metrics_state = "-";
    std::vector<double> metrics_alphas{0.5, 2.0};
    auto* metrics = app.add_subcommand("metrics", "Uncertainty profile: axis entropies, variances, moments, means");
    metrics->add_option("--state", metrics_state, "PureState JSON file, or - for stdin")->capture_default_str();
    metrics->add_option("--alpha", metrics_alphas, "Renyi orders")->delimiter(',')->capture_default_str();
    metrics->callback([&] {
        const auto start = Clock::now();
        const qprot::PureState s = load_state(metrics_state);
        emit("metrics", {{"state", metrics_state}, {"alpha", metrics_alphas}, {"j", s.j.str()}},
             qprot::io::uncertainty_profile_json(qprot::uncertainty_profile(s, metrics_alphas)), start);
    });

    // entangle
    std::string entangle_state = "-";
    std::vector<std::string> entangle_parts;
    std::vector<int> entangle_keep{0};
    auto* entangle = app.add_subcommand("entangle", "Embed into a tensor product and reduce to kept subsystems");
    entangle->add_option("--state", entangle_state, "PureState JSON file, or - for stdin")->capture_default_str();
    entangle->add_option("--parts", entangle_parts, "part spins, e.g. 1/2,1/2,1/2")->delimiter(',')->required();
    entangle->add_option("--keep", entangle_keep, "subsystem indices to keep")->delimiter(',')->capture_default_str();
    entangle->callback([&] {
        const auto start = Clock::now();
        const qprot::PureState s = load_state(entangle_state);
        std::vector<qprot::HalfInt> parts;
        for (const std::string& p : entangle_parts) parts.push_back(qprot::HalfInt::parse(p));
        for (std::size_t i = 1; i < entangle_keep.size(); ++i)
            if (entangle_keep[i] <= entangle_keep[i - 1])
                throw qprot::ValidationError("--keep indices must be strictly increasing");
        const qprot::CompositeState composite = qprot::embed(s, parts);
        const qprot::DensityMatrix reduced = qprot::partial_trace(composite, entangle_keep);
        emit("entangle",
             {{"state", entangle_state}, {"parts", entangle_parts}, {"keep", entangle_keep}, {"j", s.j.str()}},
             {{"reduced", qprot::io::density_matrix_json(reduced)},
              {"entropy", qprot::entanglement_entropy(reduced)}},
             start);
    });

    // estimate
    std::string estimate_state = "-", estimate_axis = "z";
    int estimate_n = 0;
    long estimate_trials = 10000;
    std::uint64_t estimate_seed = 0;
    auto* estimate = app.add_subcommand("estimate", "Covariant-POVM angle discrimination game");
    estimate->add_option("--state", estimate_state, "PureState JSON file, or - for stdin")->capture_default_str();
    estimate->add_option("--axis", estimate_axis, "x, y, z, or nx,ny,nz")->capture_default_str();
    estimate->add_option("--n", estimate_n, "number of candidate angles")->required();
    estimate->add_option("--trials", estimate_trials, "Monte-Carlo trials (0 = exact only)")->capture_default_str();
    estimate->add_option("--seed", estimate_seed, "RNG seed")->capture_default_str();
    estimate->callback([&] {
        const auto start = Clock::now();
        const qprot::PureState s = load_state(estimate_state);
        const qprot::Axis axis = parse_axis(estimate_axis);
        json payload = {{"exact", qprot::io::game_report_json(qprot::discrete_success_probability(s, axis, estimate_n))}};
        payload["sample"] = estimate_trials > 0
                                ? qprot::io::game_sample_json(
                                      qprot::run_discrete_game(s, axis, estimate_n, estimate_trials, estimate_seed))
                                : json(nullptr);
        emit("estimate",
             {{"state", estimate_state},
              {"axis", qprot::io::axis_json(axis)},
              {"n", estimate_n},
              {"trials", estimate_trials},
              {"seed", estimate_seed}},
             std::move(payload), start);
    });

    // signal synth / signal fit
    auto* signal = app.add_subcommand("signal", "Larmor signal synthesis and linear fitting");
    signal->require_subcommand(1);

    std::string synth_state = "-", synth_axis = "z", synth_format = "csv";
    double synth_m[3] = {0.0, 0.0, 0.0};
    qprot::SignalParams synth_params;
    double synth_t_max = 1.0;
    int synth_points = 2000;
    std::uint64_t synth_seed = 0;
    auto* synth = signal->add_subcommand("synth", "Synthesize delta_alpha(t) as CSV (t, delta_alpha)");
    synth->add_option("--state", synth_state, "probe PureState JSON (ignored when --m1/--m2/--m3 given)")
        ->capture_default_str();
    synth->add_option("--axis", synth_axis, "observable axis label")->capture_default_str();
    auto* m1_opt = synth->add_option("--m1", synth_m[0], "signal amplitude <J_a^2 - J_b^2>");
    auto* m2_opt = synth->add_option("--m2", synth_m[1], "signal amplitude <J_aJ_b + J_bJ_a>");
    auto* m3_opt = synth->add_option("--m3", synth_m[2], "offset <J_k>");
    synth->add_option("--eta", synth_params.eta, "oscillatory scale")->capture_default_str();
    synth->add_option("--zeta", synth_params.zeta, "offset scale")->capture_default_str();
    synth->add_option("--gamma1", synth_params.gamma1, "oscillatory decay rate (1/s)")->capture_default_str();
    synth->add_option("--gamma2", synth_params.gamma2, "offset decay rate (1/s)")->capture_default_str();
    synth->add_option("--omega-l", synth_params.omega_L, "Larmor frequency (rad/s)")->capture_default_str();
    synth->add_option("--noise-sigma", synth_params.noise_sigma, "Gaussian noise std")->capture_default_str();
    synth->add_option("--t-max", synth_t_max, "trace end time (s)")->capture_default_str();
    synth->add_option("--points", synth_points, "samples from 0 to t-max")->capture_default_str();
    synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
    synth->add_option("--format", synth_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    synth->callback([&] {
        const auto start = Clock::now();
        if (synth_points < 2) throw qprot::ValidationError("--points must be at least 2");
        const int given = (m1_opt->count() > 0) + (m2_opt->count() > 0) + (m3_opt->count() > 0);
        if (given > 0 && given < 3) throw qprot::ValidationError("give all of --m1 --m2 --m3 or none");
        qprot::MVector m{synth_m[0], synth_m[1], synth_m[2]};
        json m_echo;
        if (given == 0) {
            const qprot::PureState s = load_state(synth_state);
            m = qprot::m_vector(s, parse_axis(synth_axis).label);
            m_echo = {{"state", synth_state}, {"axis", synth_axis}};
        } else {
            m_echo = {{"m1", m.m1}, {"m2", m.m2}, {"m3", m.m3}};
        }
        synth_params.times.resize(synth_points);
        for (int i = 0; i < synth_points; ++i) synth_params.times[i] = synth_t_max * i / (synth_points - 1);
        const auto trace = qprot::synthesize_signal(m, synth_params, synth_seed);
        if (synth_format == "csv") {
            std::cout << "t,delta_alpha\n";
            for (const auto& [t, v] : trace) std::cout << fmt(t) << "," << fmt(v) << "\n";
        } else {
            json times = json::array(), values = json::array();
            for (const auto& [t, v] : trace) {
                times.push_back(t);
                values.push_back(v);
            }
            json echo = {{"m_source", m_echo},   {"eta", synth_params.eta},
                         {"zeta", synth_params.zeta}, {"gamma1", synth_params.gamma1},
                         {"gamma2", synth_params.gamma2}, {"omega_l", synth_params.omega_L},
                         {"noise_sigma", synth_params.noise_sigma}, {"points", synth_points},
                         {"t_max", synth_t_max}, {"seed", synth_seed}};
            emit("signal synth", std::move(echo),
                 {{"t", std::move(times)}, {"delta_alpha", std::move(values)}, {"m", qprot::io::m_vector_json(m)}},
                 start);
        }
    });

    std::string fit_trace = "-";
    qprot::SignalParams fit_params;
    auto* fit = signal->add_subcommand("fit", "Least-squares (m1, m2, m3) from a CSV trace");
    fit->add_option("--trace", fit_trace, "CSV file of (t, delta_alpha), or - for stdin")->capture_default_str();
    fit->add_option("--eta", fit_params.eta, "known oscillatory scale")->capture_default_str();
    fit->add_option("--zeta", fit_params.zeta, "known offset scale")->capture_default_str();
    fit->add_option("--gamma1", fit_params.gamma1, "known oscillatory decay rate (1/s)")->capture_default_str();
    fit->add_option("--gamma2", fit_params.gamma2, "known offset decay rate (1/s)")->capture_default_str();
    fit->add_option("--omega-l", fit_params.omega_L, "known Larmor frequency (rad/s)")->capture_default_str();
    fit->callback([&] {
        const auto start = Clock::now();
        const auto trace = parse_trace_csv(slurp(fit_trace));
        const qprot::FittedMVector fitted = qprot::fit_signal(trace, fit_params);
        emit("signal fit",
             {{"trace", fit_trace},
              {"eta", fit_params.eta},
              {"zeta", fit_params.zeta},
              {"gamma1", fit_params.gamma1},
              {"gamma2", fit_params.gamma2},
              {"omega_l", fit_params.omega_L},
              {"samples", trace.size()}},
             qprot::io::fitted_m_vector_json(fitted), start);
    });

    // sweep
    std::string sweep_state = "-", sweep_format = "csv";
    int sweep_count = 34;
    auto* sweep = app.add_subcommand("sweep", "Rotate about each axis and tabulate (m1, m2, m3) per angle");
    sweep->add_option("--state", sweep_state, "probe PureState JSON file, or - for stdin")->capture_default_str();
    sweep->add_option("--count", sweep_count, "angles per axis (theta = pi l / count)")->capture_default_str();
    sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep->callback([&] {
        const auto start = Clock::now();
        const qprot::PureState s = load_state(sweep_state);
        const auto rows = qprot::rotation_sweep(s, sweep_count);
        if (sweep_format == "csv") {
            std::cout << "axis,theta,m1,m2,m3\n";
            for (const auto& row : rows)
                std::cout << row.axis << "," << fmt(row.theta) << "," << fmt(row.m.m1) << "," << fmt(row.m.m2)
                          << "," << fmt(row.m.m3) << "\n";
        } else {
            json out = json::array();
            for (const auto& row : rows)
                out.push_back({{"axis", std::string(1, row.axis)},
                               {"theta", row.theta},
                               {"m1", row.m.m1},
                               {"m2", row.m.m2},
                               {"m3", row.m.m3}});
            emit("sweep", {{"state", sweep_state}, {"count", sweep_count}}, {{"rows", std::move(out)}}, start);
        }
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qprot::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qprot::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
