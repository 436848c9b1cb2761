#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greedy/interpolation.hpp"
#include "greedy/kernels.hpp"

namespace greedy {

enum class Preset { example1, example2, example3, custom };
enum class StoppingMode { per_run, aggregate };
enum class ClockKind { node, ctmc };

Preset parse_preset(const std::string& text);
std::string preset_name(Preset preset);
Cop preset_cop(Preset preset);
std::size_t preset_sample_size(Preset preset);  // weak-greedy default |S|

struct ExperimentConfig {
    Preset preset = Preset::example1;
    std::vector<EngineSpec> engines;
    std::size_t runs = 200;       // K
    std::size_t grid_size = 500;  // L
    double tolerance = 1e-2;
    std::uint64_t base_seed = 1;
    ClockKind clock = ClockKind::node;
    StoppingMode stopping = StoppingMode::aggregate;
    std::size_t max_steps = 400;  // per-run step guard
    double max_time = 20.0;       // ctmc horizon
    std::optional<Cop> custom_cop;

    void validate() const;
    Cop cop() const;
};

struct EngineStats {
    std::string engine;
    // Index 0 is the initial configuration; early-stopped runs are carried
    // forward at their final configuration.
    std::vector<double> e_t;
    std::vector<double> v_t;
    std::vector<double> pointwise_mean;  // per grid point, final configurations
    std::vector<double> pointwise_var;
    double stop_step_mean = 0.0;
    double stop_step_std = 0.0;
    double stop_nodes_mean = 0.0;  // stop step + the initial node
    std::size_t aggregate_stop_step = 0;
    double selection_evals_mean = 0.0;
    double refresh_evals_mean = 0.0;
    double total_evals_mean = 0.0;
};

struct ExperimentStats {
    ExperimentConfig config;
    std::vector<double> grid_points;
    std::vector<EngineStats> engines;
};

ExperimentStats run_experiment(const ExperimentConfig& cfg);

struct ComparisonRow {
    std::string engine;
    double final_e = 0.0;
    double final_v = 0.0;
    double stop_nodes = 0.0;
    double selection_evals = 0.0;
    double total_evals = 0.0;
};

// Runs each config (all must share the preset) and lines their engines up.
std::vector<ComparisonRow> compare_engines(const std::vector<ExperimentConfig>& cfgs);

// Writes decay.csv, pointwise.csv, and meta.csv into the directory.
void export_csv(const ExperimentStats& stats, const std::string& dir);

// Order-insensitive mean and population variance, exposed so the
// permutation-invariance of the aggregates is testable.
std::pair<double, double> mean_and_population_variance(const std::vector<double>& xs);

}  // namespace greedy
