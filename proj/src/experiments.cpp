#include "greedy/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "greedy/csv.hpp"
#include "greedy/parallel.hpp"
#include "greedy/process.hpp"

namespace greedy {

Preset parse_preset(const std::string& text) {
    if (text == "example1" || text == "1") return Preset::example1;
    if (text == "example2" || text == "2") return Preset::example2;
    if (text == "example3" || text == "3") return Preset::example3;
    if (text == "custom") return Preset::custom;
    throw std::invalid_argument("unknown preset '" + text + "'");
}

std::string preset_name(Preset preset) {
    switch (preset) {
        case Preset::example1: return "example1";
        case Preset::example2: return "example2";
        case Preset::example3: return "example3";
        case Preset::custom: return "custom";
    }
    return "?";
}

Cop preset_cop(Preset preset) {
    switch (preset) {
        case Preset::example1: return example1();
        case Preset::example2: return example2();
        case Preset::example3: return example3();
        case Preset::custom: break;
    }
    throw std::invalid_argument("preset_cop: custom preset needs an explicit problem");
}

std::size_t preset_sample_size(Preset preset) {
    return preset == Preset::example3 ? 120 : 90;
}

void ExperimentConfig::validate() const {
    if (engines.empty()) throw std::invalid_argument("ExperimentConfig: no engines");
    if (runs < 1) throw std::invalid_argument("ExperimentConfig: need at least one run");
    if (grid_size < 2) throw std::invalid_argument("ExperimentConfig: grid needs two points");
    if (!(tolerance > 0.0)) throw std::invalid_argument("ExperimentConfig: tolerance must be positive");
    if (max_steps == 0) throw std::invalid_argument("ExperimentConfig: step guard must be positive");
    if (clock == ClockKind::ctmc && !(max_time > 0.0))
        throw std::invalid_argument("ExperimentConfig: ctmc clock needs a positive horizon");
    if (preset == Preset::custom && !custom_cop)
        throw std::invalid_argument("ExperimentConfig: custom preset needs a problem instance");
}

Cop ExperimentConfig::cop() const {
    if (preset == Preset::custom) {
        if (!custom_cop) throw std::invalid_argument("ExperimentConfig: missing custom problem");
        return *custom_cop;
    }
    return preset_cop(preset);
}

std::pair<double, double> mean_and_population_variance(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_and_population_variance: empty sample");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, var};
}

namespace {

struct RunState {
    std::unique_ptr<SelectionEngine> engine;
    Rng rng{0};
    Configuration eta;
    std::vector<double> grid_means;  // index 0 = initial configuration
    bool stopped = false;
};

// (1/L) Σ_i J(y_i, ·) via a prebuilt interpolant.
double grid_mean_of(const Interpolant& itp, const QuadratureGrid& grid) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += itp.error(grid.point(i));
    return sum / static_cast<double>(grid.size());
}

EngineStats finalize_stats(const ExperimentConfig& cfg, const EngineSpec& spec, const Cop& cop,
                           const QuadratureGrid& grid, std::vector<RunState>& runs) {
    EngineStats st;
    st.engine = spec.name();
    const std::size_t k_runs = runs.size();

    std::size_t max_step = 0;
    for (const RunState& r : runs) max_step = std::max(max_step, r.grid_means.size() - 1);

    st.e_t.resize(max_step + 1);
    st.v_t.resize(max_step + 1);
    std::vector<double> column(k_runs);
    for (std::size_t s = 0; s <= max_step; ++s) {
        for (std::size_t k = 0; k < k_runs; ++k) {
            const auto& gm = runs[k].grid_means;
            column[k] = gm[std::min(s, gm.size() - 1)];  // carry stopped runs forward
        }
        const auto [mean, var] = mean_and_population_variance(column);
        st.e_t[s] = mean;
        st.v_t[s] = var;
    }

    // Pointwise statistics at the final configurations.
    const std::size_t L = grid.size();
    std::vector<std::vector<double>> j_final(k_runs);
    parallel_for(k_runs, [&](std::size_t k) {
        const Interpolant itp(cop.f, runs[k].eta, cop.domain);
        j_final[k].resize(L);
        for (std::size_t i = 0; i < L; ++i) j_final[k][i] = itp.error(grid.point(i));
    });
    st.pointwise_mean.assign(L, 0.0);
    st.pointwise_var.assign(L, 0.0);
    for (std::size_t k = 0; k < k_runs; ++k)
        for (std::size_t i = 0; i < L; ++i) st.pointwise_mean[i] += j_final[k][i];
    for (double& v : st.pointwise_mean) v /= static_cast<double>(k_runs);
    for (std::size_t k = 0; k < k_runs; ++k)
        for (std::size_t i = 0; i < L; ++i) {
            const double d = j_final[k][i] - st.pointwise_mean[i];
            st.pointwise_var[i] += d * d;
        }
    for (double& v : st.pointwise_var) v /= static_cast<double>(k_runs);

    std::vector<double> stop_steps(k_runs), sel(k_runs), tot(k_runs);
    for (std::size_t k = 0; k < k_runs; ++k) {
        stop_steps[k] = static_cast<double>(runs[k].grid_means.size() - 1);
        sel[k] = static_cast<double>(runs[k].engine->selection_evals());
        tot[k] = static_cast<double>(runs[k].engine->eval_count());
    }
    const auto [sm, sv] = mean_and_population_variance(stop_steps);
    st.stop_step_mean = sm;
    st.stop_step_std = std::sqrt(sv);
    st.stop_nodes_mean = sm + 1.0;
    st.selection_evals_mean = mean_and_population_variance(sel).first;
    st.total_evals_mean = mean_and_population_variance(tot).first;
    st.refresh_evals_mean = st.total_evals_mean - st.selection_evals_mean;
    (void)cfg;
    return st;
}

EngineStats run_engine_node_clock(const ExperimentConfig& cfg, const EngineSpec& spec, const Cop& cop,
                                  const QuadratureGrid& grid) {
    std::vector<RunState> runs(cfg.runs);
    parallel_for(cfg.runs, [&](std::size_t k) {
        RunState& r = runs[k];
        r.engine = make_engine(spec, cop);
        r.rng = make_rng(run_seed(cfg.base_seed, k));
        r.eta = r.engine->initial_config(r.rng);
        r.grid_means.push_back(grid_mean_of(Interpolant(cop.f, r.eta, cop.domain), grid));
    });

    if (cfg.stopping == StoppingMode::aggregate) {
        std::size_t step = 0;
        while (true) {
            double e = 0.0;
            for (const RunState& r : runs) e += r.grid_means[step];
            e /= static_cast<double>(cfg.runs);
            if (e <= cfg.tolerance) break;
            if (step >= cfg.max_steps)
                throw std::runtime_error(
                    "run_experiment: aggregate tolerance not reached within the step guard");
            parallel_for(cfg.runs, [&](std::size_t k) {
                RunState& r = runs[k];
                const Point y = r.engine->propose(r.eta, r.rng);
                r.eta = oplus(r.eta, y, cop.domain);
                r.grid_means.push_back(grid_mean_of(Interpolant(cop.f, r.eta, cop.domain), grid));
            });
            ++step;
        }
        EngineStats st = finalize_stats(cfg, spec, cop, grid, runs);
        st.aggregate_stop_step = step;
        return st;
    }

    // Per-run stopping: every run races its own estimate to the tolerance.
    parallel_for(cfg.runs, [&](std::size_t k) {
        RunState& r = runs[k];
        while (r.grid_means.back() > cfg.tolerance) {
            if (r.grid_means.size() > cfg.max_steps)
                throw std::runtime_error(
                    "run_experiment: per-run tolerance not reached within the step guard");
            const Point y = r.engine->propose(r.eta, r.rng);
            r.eta = oplus(r.eta, y, cop.domain);
            r.grid_means.push_back(grid_mean_of(Interpolant(cop.f, r.eta, cop.domain), grid));
        }
    });
    return finalize_stats(cfg, spec, cop, grid, runs);
}

EngineStats run_engine_ctmc_clock(const ExperimentConfig& cfg, const EngineSpec& spec, const Cop& cop,
                                  const QuadratureGrid& grid) {
    // Jump-chain statistics; the tolerance is not consulted, the horizon is.
    std::vector<RunState> runs(cfg.runs);
    parallel_for(cfg.runs, [&](std::size_t k) {
        RunState& r = runs[k];
        r.engine = make_engine(spec, cop);
        const std::uint64_t seed = run_seed(cfg.base_seed, k);
        r.rng = make_rng(seed);
        Rng clock = make_clock_rng(seed);
        Configuration eta0 = r.engine->initial_config(r.rng);
        Trajectory traj = run_ctmc(*r.engine, eta0, cop, cfg.max_time, grid, r.rng, clock);
        for (const TrajectoryEvent& ev : traj.events) r.grid_means.push_back(ev.grid_mean_error);
        r.eta = traj.final_config();
    });
    return finalize_stats(cfg, spec, cop, grid, runs);
}

}  // namespace

ExperimentStats run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Cop cop = cfg.cop();
    const QuadratureGrid grid(cop.domain, cfg.grid_size);

    ExperimentStats stats;
    stats.config = cfg;
    stats.grid_points = grid.points();
    for (const EngineSpec& spec : cfg.engines)
        stats.engines.push_back(cfg.clock == ClockKind::node
                                    ? run_engine_node_clock(cfg, spec, cop, grid)
                                    : run_engine_ctmc_clock(cfg, spec, cop, grid));
    return stats;
}

std::vector<ComparisonRow> compare_engines(const std::vector<ExperimentConfig>& cfgs) {
    if (cfgs.empty()) throw std::invalid_argument("compare_engines: no configs");
    for (const ExperimentConfig& c : cfgs)
        if (c.preset != cfgs.front().preset)
            throw std::invalid_argument("compare_engines: presets must match");
    std::vector<ComparisonRow> rows;
    for (const ExperimentConfig& c : cfgs) {
        const ExperimentStats stats = run_experiment(c);
        for (const EngineStats& st : stats.engines) {
            ComparisonRow row;
            row.engine = st.engine;
            row.final_e = st.e_t.back();
            row.final_v = st.v_t.back();
            row.stop_nodes = st.stop_nodes_mean;
            row.selection_evals = st.selection_evals_mean;
            row.total_evals = st.total_evals_mean;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path.string());
    out << body;
    if (!out) throw std::runtime_error("export_csv: write failed for " + path.string());
}

}  // namespace

void export_csv(const ExperimentStats& stats, const std::string& dir) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);

    std::string decay = "step,engine,E_t,V_t\n";
    for (const EngineStats& st : stats.engines)
        for (std::size_t s = 0; s < st.e_t.size(); ++s)
            decay += fmt_num(s) + "," + st.engine + "," + fmt_num(st.e_t[s]) + "," +
                     fmt_num(st.v_t[s]) + "\n";
    write_file(base / "decay.csv", decay);

    std::string pointwise = "y,engine,E_y,V_y\n";
    for (const EngineStats& st : stats.engines)
        for (std::size_t i = 0; i < stats.grid_points.size(); ++i)
            pointwise += fmt_num(stats.grid_points[i]) + "," + st.engine + "," +
                         fmt_num(st.pointwise_mean[i]) + "," + fmt_num(st.pointwise_var[i]) + "\n";
    write_file(base / "pointwise.csv", pointwise);

    const ExperimentConfig& cfg = stats.config;
    std::string meta = "key,value\n";
    auto kv = [&meta](const std::string& k, const std::string& v) { meta += k + "," + v + "\n"; };
    kv("preset", preset_name(cfg.preset));
    kv("runs", fmt_num(cfg.runs));
    kv("grid_size", fmt_num(cfg.grid_size));
    kv("tolerance", fmt_num(cfg.tolerance));
    kv("base_seed", fmt_num(cfg.base_seed));
    kv("clock", cfg.clock == ClockKind::node ? "node" : "ctmc");
    kv("stopping", cfg.stopping == StoppingMode::per_run ? "per_run" : "aggregate");
    kv("max_steps", fmt_num(cfg.max_steps));
    kv("max_time", fmt_num(cfg.max_time));
    std::string engines;
    for (const EngineSpec& spec : cfg.engines) {
        if (!engines.empty()) engines += ';';
        engines += spec.name();
    }
    kv("engines", engines);
    kv("node_axis", "total nodes including the initial point (plots may differ by one)");
    for (std::size_t i = 0; i < stats.engines.size(); ++i) {
        const EngineStats& st = stats.engines[i];
        const EngineSpec& spec = cfg.engines[i];
        const std::string p = "engine" + fmt_num(i) + "." + st.engine + ".";
        if (spec.kind == EngineSpec::Kind::rpdm) {
            kv(p + "alpha", fmt_num(spec.alpha));
            kv(p + "epsilon", fmt_num(spec.epsilon));
        }
        if (spec.kind == EngineSpec::Kind::weak_greedy)
            kv(p + "sample_size", fmt_num(spec.sample_size));
        kv(p + "stop_step_mean", fmt_num(st.stop_step_mean));
        kv(p + "stop_step_std", fmt_num(st.stop_step_std));
        kv(p + "stop_nodes_mean", fmt_num(st.stop_nodes_mean));
        if (cfg.stopping == StoppingMode::aggregate && cfg.clock == ClockKind::node)
            kv(p + "aggregate_stop_step", fmt_num(st.aggregate_stop_step));
        kv(p + "selection_evals_mean", fmt_num(st.selection_evals_mean));
        kv(p + "refresh_evals_mean", fmt_num(st.refresh_evals_mean));
        kv(p + "total_evals_mean", fmt_num(st.total_evals_mean));
        kv(p + "final_E", fmt_num(st.e_t.back()));
        kv(p + "final_V", fmt_num(st.v_t.back()));
    }
    write_file(base / "meta.csv", meta);
}

}  // namespace greedy
