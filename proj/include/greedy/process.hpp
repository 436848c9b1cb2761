#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "greedy/config_space.hpp"
#include "greedy/interpolation.hpp"
#include "greedy/kernels.hpp"
#include "greedy/rng.hpp"

namespace greedy {

enum class ClockMode { discrete, ctmc };

struct TrajectoryEvent {
    double jump_time = 0.0;  // step index (discrete) or jump time (ctmc)
    Configuration config;
    double g_estimate = 0.0;       // trapezoid estimate of the global error
    double grid_mean_error = 0.0;  // (1/L) Σ_i J(y_i, ·), the stopping statistic
    std::uint64_t evals_cumulative = 0;
};

struct Trajectory {
    ClockMode mode = ClockMode::discrete;
    std::uint64_t seed = 0;
    std::vector<TrajectoryEvent> events;

    const Configuration& final_config() const { return events.back().config; }
    // Last event at or before t (the configuration is constant between jumps).
    const TrajectoryEvent& at_time(double t) const;
};

class StoppingRule {
public:
    enum class Kind { max_nodes, error_below, max_time };

    static StoppingRule max_nodes(std::size_t n);
    static StoppingRule error_below(double tol, QuadratureGrid estimator_grid);
    static StoppingRule max_time(double t);

    Kind kind() const { return kind_; }
    std::size_t node_limit() const { return node_limit_; }
    double tolerance() const { return tolerance_; }
    double time_limit() const { return time_limit_; }
    const QuadratureGrid& estimator_grid() const;

private:
    StoppingRule(Kind k) : kind_(k) {}

    Kind kind_;
    std::size_t node_limit_ = 0;
    double tolerance_ = 0.0;
    double time_limit_ = 0.0;
    std::vector<QuadratureGrid> grid_;  // empty unless error_below
};

// One node per step until the rule fires; the caller's stream drives the
// engine, so a run primed via initial_config(rng) continues seamlessly.
Trajectory run_discrete(SelectionEngine& engine, const Configuration& eta0, const Cop& cop,
                        const StoppingRule& stop, const QuadratureGrid& grid, Rng& rng,
                        std::size_t guard_cap = 100000);

// Convenience: selection stream = make_rng(seed).
Trajectory run_discrete(SelectionEngine& engine, const Configuration& eta0, const Cop& cop,
                        const StoppingRule& stop, const QuadratureGrid& grid, std::uint64_t seed,
                        std::size_t guard_cap = 100000);

// Unit-rate exponential holding times (the total jump rate is one). Holding
// times draw from clock_rng only, so a discrete run with the same selection
// stream visits exactly the same configurations.
Trajectory run_ctmc(SelectionEngine& engine, const Configuration& eta0, const Cop& cop, double T,
                    const QuadratureGrid& grid, Rng& rng, Rng& clock_rng);

// Convenience: selection stream = make_rng(seed), clocks = make_clock_rng(seed).
Trajectory run_ctmc(SelectionEngine& engine, const Configuration& eta0, const Cop& cop, double T,
                    const QuadratureGrid& grid, std::uint64_t seed);

using KernelSampler = std::function<Point(const Configuration&, Rng&)>;

// Monte Carlo estimate of the mean one-jump error drop at q: average over the
// snapshots of the inner-MC mean of J(q,η) − J(q,η⊕y), y drawn from the
// kernel. Nonnegative for error-decreasing problems; decays to zero as the
// snapshots come from later times.
double generator_residual(const KernelSampler& sampler, const Cop& cop,
                          const std::vector<Configuration>& etas, const Point& q,
                          std::size_t inner_samples, Rng& rng);

}  // namespace greedy
