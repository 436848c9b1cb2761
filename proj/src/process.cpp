#include "greedy/process.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace greedy {
namespace {

TrajectoryEvent make_event(double time, Configuration config, const Cop& cop,
                           const QuadratureGrid& grid, std::uint64_t evals) {
    const Interpolant itp(cop.f, config, cop.domain);
    double sum = 0.0, trap = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double j = itp.error(grid.point(i));
        sum += j;
        trap += (i == 0 || i + 1 == n) ? 0.5 * j : j;
    }
    TrajectoryEvent ev;
    ev.jump_time = time;
    ev.config = std::move(config);
    ev.g_estimate = trap * grid.spacing();
    ev.grid_mean_error = sum / static_cast<double>(n);
    ev.evals_cumulative = evals;
    return ev;
}

}  // namespace

const TrajectoryEvent& Trajectory::at_time(double t) const {
    if (events.empty()) throw std::logic_error("Trajectory: no events");
    const TrajectoryEvent* last = &events.front();
    for (const TrajectoryEvent& ev : events) {
        if (ev.jump_time > t) break;
        last = &ev;
    }
    return *last;
}

StoppingRule StoppingRule::max_nodes(std::size_t n) {
    if (n == 0) throw std::invalid_argument("StoppingRule: node limit must be positive");
    StoppingRule r(Kind::max_nodes);
    r.node_limit_ = n;
    return r;
}

StoppingRule StoppingRule::error_below(double tol, QuadratureGrid estimator_grid) {
    if (!(tol >= 0.0)) throw std::invalid_argument("StoppingRule: tolerance must be nonnegative");
    StoppingRule r(Kind::error_below);
    r.tolerance_ = tol;
    r.grid_.push_back(std::move(estimator_grid));
    return r;
}

StoppingRule StoppingRule::max_time(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("StoppingRule: time limit must be positive");
    StoppingRule r(Kind::max_time);
    r.time_limit_ = t;
    return r;
}

const QuadratureGrid& StoppingRule::estimator_grid() const {
    if (grid_.empty()) throw std::logic_error("StoppingRule: no estimator grid");
    return grid_.front();
}

Trajectory run_discrete(SelectionEngine& engine, const Configuration& eta0, const Cop& cop,
                        const StoppingRule& stop, const QuadratureGrid& grid, Rng& rng,
                        std::size_t guard_cap) {
    if (eta0.count() != 1)
        throw std::invalid_argument("run_discrete: initial configuration must hold one point");
    if (stop.kind() == StoppingRule::Kind::max_time)
        throw std::invalid_argument("run_discrete: max_time applies to the ctmc clock");

    engine.initialize(eta0, rng);

    std::size_t guard = guard_cap;
    if (stop.kind() == StoppingRule::Kind::max_nodes)
        guard = std::min<std::size_t>(guard_cap, 10 * stop.node_limit());

    Trajectory traj;
    traj.mode = ClockMode::discrete;
    Configuration eta = eta0;
    traj.events.push_back(make_event(0.0, eta, cop, grid, engine.eval_count()));

    for (std::size_t step = 1;; ++step) {
        if (stop.kind() == StoppingRule::Kind::max_nodes && eta.count() >= stop.node_limit()) break;
        if (step > guard)
            throw std::runtime_error("run_discrete: stopping rule not reached within the step guard");
        const Point y = engine.propose(eta, rng);
        eta = oplus(eta, y, cop.domain);
        traj.events.push_back(
            make_event(static_cast<double>(step), eta, cop, grid, engine.eval_count()));
        if (stop.kind() == StoppingRule::Kind::error_below) {
            const QuadratureGrid& sg = stop.estimator_grid();
            const double stat = sg.size() == grid.size()
                                    ? traj.events.back().grid_mean_error
                                    : grid_mean_error(cop.f, eta, sg, cop.domain);
            if (stat <= stop.tolerance()) break;
        }
    }
    return traj;
}

Trajectory run_discrete(SelectionEngine& engine, const Configuration& eta0, const Cop& cop,
                        const StoppingRule& stop, const QuadratureGrid& grid, std::uint64_t seed,
                        std::size_t guard_cap) {
    Rng rng = make_rng(seed);
    Trajectory traj = run_discrete(engine, eta0, cop, stop, grid, rng, guard_cap);
    traj.seed = seed;
    return traj;
}

Trajectory run_ctmc(SelectionEngine& engine, const Configuration& eta0, const Cop& cop, double T,
                    const QuadratureGrid& grid, Rng& rng, Rng& clock_rng) {
    if (eta0.count() != 1)
        throw std::invalid_argument("run_ctmc: initial configuration must hold one point");
    if (!(T > 0.0)) throw std::invalid_argument("run_ctmc: horizon must be positive");

    std::exponential_distribution<double> holding(1.0);
    engine.initialize(eta0, rng);

    Trajectory traj;
    traj.mode = ClockMode::ctmc;
    Configuration eta = eta0;
    traj.events.push_back(make_event(0.0, eta, cop, grid, engine.eval_count()));

    double t = 0.0;
    while (true) {
        t += holding(clock_rng);
        if (t > T) break;
        const Point y = engine.propose(eta, rng);
        eta = oplus(eta, y, cop.domain);
        traj.events.push_back(make_event(t, eta, cop, grid, engine.eval_count()));
    }
    return traj;
}

Trajectory run_ctmc(SelectionEngine& engine, const Configuration& eta0, const Cop& cop, double T,
                    const QuadratureGrid& grid, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    Rng clock = make_clock_rng(seed);
    Trajectory traj = run_ctmc(engine, eta0, cop, T, grid, rng, clock);
    traj.seed = seed;
    return traj;
}

double generator_residual(const KernelSampler& sampler, const Cop& cop,
                          const std::vector<Configuration>& etas, const Point& q,
                          std::size_t inner_samples, Rng& rng) {
    if (etas.empty()) throw std::invalid_argument("generator_residual: no snapshots");
    if (inner_samples == 0) throw std::invalid_argument("generator_residual: no inner samples");
    double outer = 0.0;
    for (const Configuration& eta : etas) {
        const double j_before = local_error(cop.f, eta, q.x(), cop.domain);
        double inner = 0.0;
        for (std::size_t s = 0; s < inner_samples; ++s) {
            const Point y = sampler(eta, rng);
            const Configuration next = oplus(eta, y, cop.domain);
            inner += j_before - local_error(cop.f, next, q.x(), cop.domain);
        }
        outer += inner / static_cast<double>(inner_samples);
    }
    return outer / static_cast<double>(etas.size());
}

}  // namespace greedy
