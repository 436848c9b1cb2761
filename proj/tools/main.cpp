// Command-line front end: run Monte Carlo experiments, dump single
// trajectories, or execute the theory-verification suite.
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "greedy/csv.hpp"
#include "greedy/experiments.hpp"
#include "greedy/process.hpp"
#include "greedy/theory.hpp"

namespace {

constexpr const char* kVersion = "greedy-lab 1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

greedy::EngineSpec resolve_engine(const std::string& name, greedy::Preset preset, double alpha,
                                  double epsilon, std::size_t sample_size) {
    greedy::EngineSpec spec;
    try {
        spec = greedy::EngineSpec::parse(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    spec.alpha = alpha;
    spec.epsilon = epsilon;
    spec.sample_size = sample_size != 0 ? sample_size : greedy::preset_sample_size(preset);
    return spec;
}

json engine_json(const greedy::EngineSpec& spec) {
    json j;
    j["kind"] = spec.name();
    if (spec.kind == greedy::EngineSpec::Kind::rpdm) {
        j["alpha"] = spec.alpha;
        j["epsilon"] = spec.epsilon;
    }
    if (spec.kind == greedy::EngineSpec::Kind::weak_greedy) j["sample_size"] = spec.sample_size;
    return j;
}

json config_json(const greedy::ExperimentConfig& cfg) {
    json j;
    j["preset"] = greedy::preset_name(cfg.preset);
    j["engines"] = json::array();
    for (const auto& spec : cfg.engines) j["engines"].push_back(engine_json(spec));
    j["runs"] = cfg.runs;
    j["grid_size"] = cfg.grid_size;
    j["tolerance"] = cfg.tolerance;
    j["base_seed"] = cfg.base_seed;
    j["clock"] = cfg.clock == greedy::ClockKind::node ? "node" : "ctmc";
    j["stopping"] = cfg.stopping == greedy::StoppingMode::per_run ? "per_run" : "aggregate";
    j["max_steps"] = cfg.max_steps;
    j["max_time"] = cfg.max_time;
    return j;
}

// ---- run ------------------------------------------------------------------

struct RunFlags {
    std::string example;
    std::string engines = "rpdm,uniform,weak-greedy";
    std::size_t k = 200;
    std::size_t l = 500;
    double alpha = 500.0;
    double epsilon = 0.01;
    std::size_t sample_size = 0;  // 0: preset default
    double tol = 1e-2;
    std::uint64_t seed = 1;
    std::string clock = "node";
    std::string stopping = "aggregate";
    std::size_t max_steps = 400;
    double max_time = 20.0;
    std::string out = "out";
    std::string config_path;
    bool full_scale = false;
};

void apply_json_config(const std::string& path, RunFlags& f, const CLI::App* sub) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    // Flags given on the command line keep priority over the file.
    auto unset = [sub](const std::string& flag) { return sub->count(flag) == 0; };
    try {
        if (j.contains("preset") && unset("--example")) f.example = j["preset"].get<std::string>();
        if (j.contains("engines") && unset("--engines")) {
            std::string list;
            for (const auto& e : j["engines"]) {
                if (!list.empty()) list += ',';
                list += e.is_string() ? e.get<std::string>() : e.at("kind").get<std::string>();
            }
            f.engines = list;
        }
        if (j.contains("runs") && unset("--k")) f.k = j["runs"].get<std::size_t>();
        if (j.contains("grid_size") && unset("--l")) f.l = j["grid_size"].get<std::size_t>();
        if (j.contains("tolerance") && unset("--tol")) f.tol = j["tolerance"].get<double>();
        if (j.contains("base_seed") && unset("--seed")) f.seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("clock") && unset("--clock")) f.clock = j["clock"].get<std::string>();
        if (j.contains("stopping") && unset("--stopping"))
            f.stopping = j["stopping"].get<std::string>();
        if (j.contains("max_steps") && unset("--max-steps"))
            f.max_steps = j["max_steps"].get<std::size_t>();
        if (j.contains("max_time") && unset("--max-time")) f.max_time = j["max_time"].get<double>();
        if (j.contains("alpha") && unset("--alpha")) f.alpha = j["alpha"].get<double>();
        if (j.contains("epsilon") && unset("--epsilon")) f.epsilon = j["epsilon"].get<double>();
        if (j.contains("sample_size") && unset("--sample-size"))
            f.sample_size = j["sample_size"].get<std::size_t>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("config field has the wrong type: ") + e.what());
    }
}

greedy::ExperimentConfig resolve_run_config(const RunFlags& f) {
    if (f.example.empty())
        throw UsageError("missing --example (1 | 2 | 3, or a preset name in --config)");
    greedy::ExperimentConfig cfg;
    try {
        cfg.preset = greedy::parse_preset(f.example);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (cfg.preset == greedy::Preset::custom)
        throw UsageError("the CLI drives the built-in presets; custom problems go through the library");
    for (const std::string& name : split_list(f.engines))
        cfg.engines.push_back(resolve_engine(name, cfg.preset, f.alpha, f.epsilon, f.sample_size));
    if (cfg.engines.empty()) throw UsageError("no engines selected");
    cfg.runs = f.full_scale ? 1000 : f.k;
    cfg.grid_size = f.l;
    cfg.tolerance = f.tol;
    cfg.base_seed = f.seed;
    if (f.clock == "node")
        cfg.clock = greedy::ClockKind::node;
    else if (f.clock == "ctmc")
        cfg.clock = greedy::ClockKind::ctmc;
    else
        throw UsageError("unknown clock '" + f.clock + "' (node | ctmc)");
    if (f.stopping == "per_run")
        cfg.stopping = greedy::StoppingMode::per_run;
    else if (f.stopping == "aggregate")
        cfg.stopping = greedy::StoppingMode::aggregate;
    else
        throw UsageError("unknown stopping mode '" + f.stopping + "' (per_run | aggregate)");
    cfg.max_steps = f.max_steps;
    cfg.max_time = f.max_time;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int cmd_run(const RunFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const greedy::ExperimentConfig cfg = resolve_run_config(flags);
    const greedy::ExperimentStats stats = greedy::run_experiment(cfg);
    greedy::export_csv(stats, flags.out);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();

    json manifest;
    manifest["command"] = "run";
    manifest["version"] = kVersion;
    manifest["config"] = config_json(cfg);
    manifest["outputs"] = {flags.out + "/decay.csv", flags.out + "/pointwise.csv",
                           flags.out + "/meta.csv"};
    manifest["duration_ms"] = ms;
    json summary = json::array();
    for (const auto& st : stats.engines) {
        json row;
        row["engine"] = st.engine;
        row["stop_nodes_mean"] = st.stop_nodes_mean;
        row["final_E"] = st.e_t.back();
        row["final_V"] = st.v_t.back();
        row["selection_evals_mean"] = st.selection_evals_mean;
        row["total_evals_mean"] = st.total_evals_mean;
        summary.push_back(row);
    }
    manifest["summary"] = summary;
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateFlags {
    std::string engine = "rpdm";
    std::string example;
    std::string clock = "node";
    std::uint64_t seed = 1;
    std::size_t max_nodes = 0;
    double max_time = 0.0;
    double tol = 0.0;
    std::size_t l = 500;
    double alpha = 500.0;
    double epsilon = 0.01;
    std::size_t sample_size = 0;
    std::string out = "trajectory.csv";
};

int cmd_simulate(const SimulateFlags& f) {
    const auto start = std::chrono::steady_clock::now();
    if (f.example.empty()) throw UsageError("missing --example (1 | 2 | 3)");
    greedy::Preset preset;
    try {
        preset = greedy::parse_preset(f.example);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const greedy::Cop cop = greedy::preset_cop(preset);
    const greedy::EngineSpec spec = resolve_engine(f.engine, preset, f.alpha, f.epsilon, f.sample_size);
    const greedy::QuadratureGrid grid(cop.domain, f.l);

    auto engine = greedy::make_engine(spec, cop);
    greedy::Rng rng = greedy::make_rng(f.seed);
    const greedy::Configuration eta0 = engine->initial_config(rng);

    greedy::Trajectory traj;
    if (f.clock == "ctmc") {
        if (!(f.max_time > 0.0)) throw UsageError("--clock ctmc needs --max-time");
        greedy::Rng clock = greedy::make_clock_rng(f.seed);
        traj = greedy::run_ctmc(*engine, eta0, cop, f.max_time, grid, rng, clock);
    } else if (f.clock == "node") {
        if (f.max_nodes == 0 && !(f.tol > 0.0))
            throw UsageError("node clock needs --max-nodes or --tol");
        const greedy::StoppingRule stop =
            f.max_nodes > 0 ? greedy::StoppingRule::max_nodes(f.max_nodes)
                            : greedy::StoppingRule::error_below(f.tol, grid);
        traj = greedy::run_discrete(*engine, eta0, cop, stop, grid, rng);
    } else {
        throw UsageError("unknown clock '" + f.clock + "' (node | ctmc)");
    }
    traj.seed = f.seed;

    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + f.out + "'");
    out << "run_id,step,jump_time,n_nodes,g_estimate,evals_cumulative\n";
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
        const auto& ev = traj.events[i];
        out << "0," << greedy::fmt_num(i) << ',' << greedy::fmt_num(ev.jump_time) << ','
            << greedy::fmt_num(ev.config.count()) << ',' << greedy::fmt_num(ev.g_estimate) << ','
            << greedy::fmt_num(ev.evals_cumulative) << "\n";
    }
    out.close();

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = kVersion;
    manifest["engine"] = engine_json(spec);
    manifest["preset"] = greedy::preset_name(preset);
    manifest["clock"] = f.clock;
    manifest["seed"] = f.seed;
    manifest["grid_size"] = f.l;
    manifest["events"] = traj.events.size();
    manifest["final_nodes"] = traj.final_config().count();
    manifest["final_g_estimate"] = traj.events.back().g_estimate;
    manifest["selection_evals"] = engine->selection_evals();
    manifest["total_evals"] = engine->eval_count();
    manifest["outputs"] = {f.out};
    manifest["duration_ms"] = ms;
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyFlags {
    std::string checks = "mass,bounds,rates,c2,synthetic";
    std::uint64_t seed = 1;
    std::size_t runs = 0;  // 0: per-check default
    double mu = 0.25;
    double beta = -1.0;  // <0: all of {0, 0.5, 1}
    std::string out;
};

greedy::RateParams synthetic_params(double beta) {
    greedy::RateParams p;
    p.gamma = 0.5;
    p.delta = 0.5;
    p.beta = beta;
    p.c0 = 1.0;
    p.e0 = 1.0;
    return p;
}

int cmd_verify(const VerifyFlags& f) {
    const auto start = std::chrono::steady_clock::now();
    greedy::CheckReport report;
    std::string curves_csv = "check,t,mean,std_error,bound\n";
    auto note_curve = [&curves_csv](const std::string& name,
                                    const std::vector<greedy::CurvePoint>& curve) {
        for (const auto& p : curve)
            curves_csv += name + "," + greedy::fmt_num(p.t) + "," + greedy::fmt_num(p.mean) + "," +
                          greedy::fmt_num(p.std_error) + "," + greedy::fmt_num(p.bound) + "\n";
    };

    for (const std::string& check : split_list(f.checks)) {
        if (check == "mass") {
            const greedy::Cop cop = greedy::example1();
            const std::size_t trials = f.runs != 0 ? f.runs : 50;
            for (const double mu : {0.05, 0.1, 0.25, 0.4}) {
                report.merge(
                    greedy::verify_mass_lemma(greedy::KernelKind::uniform, trials, mu, cop, f.seed));
                report.merge(
                    greedy::verify_mass_lemma(greedy::KernelKind::rpdm, trials, mu, cop, f.seed));
            }
        } else if (check == "bounds") {
            for (const double beta : {0.0, 0.5, 1.0}) {
                greedy::RateParams p = synthetic_params(beta);
                const double at0 = greedy::expectation_bound(p, 0.0);
                report.add("bound beta=" + greedy::fmt_num(beta) + " t=0",
                           std::fabs(at0 - p.e0) <= 1e-12,
                           "bound(0) = " + greedy::fmt_num(at0) + ", e0 = " + greedy::fmt_num(p.e0));
                bool monotone = true;
                double prev = at0;
                for (double t = 0.5; t <= 50.0; t += 0.5) {
                    const double b = greedy::expectation_bound(p, t);
                    if (b > prev + 1e-12) monotone = false;
                    prev = b;
                }
                report.add("bound beta=" + greedy::fmt_num(beta) + " monotone", monotone,
                           "non-increasing on [0, 50]");
            }
            {
                greedy::RateParams p = synthetic_params(0.0);
                p.gamma = 0.2;
                p.delta = 0.5;
                p.e0 = 2.0;  // gamma*delta = 0.1
                const double b = greedy::expectation_bound(p, 10.0);
                report.add("bound beta=0 spot value", std::fabs(b - 2.0 * std::exp(-1.0)) <= 1e-12,
                           greedy::fmt_num(b) + " vs 2e^{-1}");
            }
        } else if (check == "rates") {
            const greedy::RateParams p = synthetic_params(0.0);
            std::vector<double> times;
            for (double t = 2.0; t <= 20.0; t += 2.0) times.push_back(t);
            const auto curve = greedy::run_synthetic(p, times, f.runs != 0 ? f.runs : 2000, f.seed);
            note_curve("rates_beta0", curve);
            const double slope = greedy::fitted_log_slope(curve, 2.0, 20.0);
            report.add("rates beta=0 log-slope", slope <= -0.8 * p.mu(),
                       "fitted " + greedy::fmt_num(slope) + " vs -0.8*gamma*delta = " +
                           greedy::fmt_num(-0.8 * p.mu()));
        } else if (check == "synthetic") {
            const std::vector<double> times{2.0, 5.0, 10.0, 20.0, 50.0};
            std::vector<double> betas{0.0, 0.5, 1.0};
            if (f.beta >= 0.0) betas = {f.beta};
            for (const double beta : betas) {
                const greedy::RateParams p = synthetic_params(beta);
                const std::size_t runs = f.runs != 0 ? f.runs : 2000;
                note_curve("synthetic_beta" + greedy::fmt_num(beta),
                           greedy::run_synthetic(p, times, runs, f.seed));
                report.merge(greedy::check_synthetic(p, times, runs, f.seed));
            }
        } else if (check == "c2") {
            const std::size_t runs = f.runs != 0 ? f.runs : 300;
            const greedy::C2Report ex1 = greedy::verify_c2_convergence(
                greedy::example1(), greedy::KernelKind::uniform, f.mu, runs, {5.0, 10.0, 20.0},
                f.seed);
            note_curve("c2_example1", ex1.curve);
            report.merge(ex1.checks);
            const greedy::C2Report ex3 = greedy::verify_c2_convergence(
                greedy::example3(), greedy::KernelKind::uniform, f.mu, runs, {10.0, 30.0}, f.seed,
                8.0);
            note_curve("c2_example3", ex3.curve);
            report.merge(ex3.checks);
        } else {
            throw UsageError("unknown check '" + check +
                             "' (mass | bounds | rates | c2 | synthetic)");
        }
    }

    for (const auto& line : report.lines)
        std::cout << line.name << ": " << (line.pass ? "PASS" : "FAIL") << " (" << line.detail
                  << ")\n";

    if (!f.out.empty()) {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file '" + f.out + "'");
        out << curves_csv;
    }

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::size_t passed = 0;
    for (const auto& line : report.lines) passed += line.pass ? 1 : 0;
    json manifest;
    manifest["command"] = "verify";
    manifest["version"] = kVersion;
    manifest["checks"] = f.checks;
    manifest["seed"] = f.seed;
    manifest["passed"] = passed;
    manifest["total"] = report.lines.size();
    manifest["duration_ms"] = ms;
    if (!f.out.empty()) manifest["outputs"] = {f.out};
    std::cout << manifest.dump(2) << "\n";
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - stochastic greedy sampling for configuration optimization.\n"
                 "GREEDY_LAB_THREADS caps the worker pool."};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Monte Carlo experiment with CSV export");
    run->add_option("--example", run_flags.example, "preset: 1 | 2 | 3");
    run->add_option("--engines", run_flags.engines, "comma list: rpdm,uniform,weak-greedy");
    run->add_option("--k", run_flags.k, "number of runs (K)");
    run->add_option("--l", run_flags.l, "quadrature grid size (L)");
    run->add_option("--alpha", run_flags.alpha, "cell weight exponent");
    run->add_option("--epsilon", run_flags.epsilon, "probe resample tolerance");
    run->add_option("--sample-size", run_flags.sample_size, "weak greedy |S| (0: preset default)");
    run->add_option("--tol", run_flags.tol, "stopping tolerance on E_t");
    run->add_option("--seed", run_flags.seed, "base seed; run r uses seed + r");
    run->add_option("--clock", run_flags.clock, "node | ctmc");
    run->add_option("--stopping", run_flags.stopping, "per_run | aggregate");
    run->add_option("--max-steps", run_flags.max_steps, "per-run step guard");
    run->add_option("--max-time", run_flags.max_time, "ctmc horizon");
    run->add_option("--out", run_flags.out, "output directory");
    run->add_option("--config", run_flags.config_path, "JSON config (flags take precedence)");
    run->add_flag("--full-scale", run_flags.full_scale, "K=1000 (full study scale)");

    SimulateFlags sim_flags;
    CLI::App* sim = app.add_subcommand("simulate", "single-trajectory CSV dump");
    sim->add_option("--engine", sim_flags.engine, "uniform | rpdm | weak-greedy");
    sim->add_option("--example", sim_flags.example, "preset: 1 | 2 | 3");
    sim->add_option("--clock", sim_flags.clock, "node | ctmc");
    sim->add_option("--seed", sim_flags.seed, "seed");
    sim->add_option("--max-nodes", sim_flags.max_nodes, "stop at this many nodes (node clock)");
    sim->add_option("--max-time", sim_flags.max_time, "ctmc horizon");
    sim->add_option("--tol", sim_flags.tol, "stop when the grid-mean error drops below");
    sim->add_option("--l", sim_flags.l, "quadrature grid size");
    sim->add_option("--alpha", sim_flags.alpha, "cell weight exponent");
    sim->add_option("--epsilon", sim_flags.epsilon, "probe resample tolerance");
    sim->add_option("--sample-size", sim_flags.sample_size, "weak greedy |S| (0: preset default)");
    sim->add_option("--out", sim_flags.out, "output CSV path");

    VerifyFlags ver_flags;
    CLI::App* ver = app.add_subcommand("verify", "lemma/theorem verification suite");
    ver->add_option("--checks", ver_flags.checks, "comma list: mass,bounds,rates,c2,synthetic");
    ver->add_option("--seed", ver_flags.seed, "seed");
    ver->add_option("--runs", ver_flags.runs, "override per-check run counts");
    ver->add_option("--mu", ver_flags.mu, "shrink factor for mass/c2 checks");
    ver->add_option("--beta", ver_flags.beta, "restrict synthetic check to one beta");
    ver->add_option("--out", ver_flags.out, "write empirical-vs-bound curves CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            if (!run_flags.config_path.empty())
                apply_json_config(run_flags.config_path, run_flags, run);
            return cmd_run(run_flags);
        }
        if (sim->parsed()) return cmd_simulate(sim_flags);
        if (ver->parsed()) return cmd_verify(ver_flags);
        throw UsageError("no subcommand given (run | simulate | verify)");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
