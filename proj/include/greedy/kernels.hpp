#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "greedy/config_space.hpp"
#include "greedy/geometry.hpp"
#include "greedy/interpolation.hpp"
#include "greedy/rng.hpp"

namespace greedy {

Point uniform_sample(const Domain& domain, Rng& rng);

// exp(alpha·j_i) normalized to sum 1, max-shifted so alpha of several
// hundred stays finite.
std::vector<double> shifted_exp_weights(const std::vector<double>& j_values, double alpha);

struct RpdmState {
    PolytopeDivision division;
    double alpha = 500.0;
    double epsilon = 0.01;
    std::uint64_t selection_evals = 0;  // per-iteration probe sweeps (the deterministic part)
    std::uint64_t refresh_evals = 0;    // post-transition probe checks

    std::uint64_t eval_count() const { return selection_evals + refresh_evals; }
};

RpdmState rpdm_init(const Point& p, const Domain& domain, double alpha, double epsilon);

// One iteration: evaluates every cell's probe against eta, samples a cell
// with probability ∝ exp(alpha·J), draws y uniformly in it, checks the other
// probes against eta⊕y (resampling those below epsilon), then splits the
// chosen cell with probes at the children's barycenters. Returns y; the
// caller forms eta⊕y (which equals the configuration used internally).
Point rpdm_step(RpdmState& state, const Configuration& eta, const Cop& cop, Rng& rng);

struct WeakGreedyState {
    std::vector<Point> samples;
    std::uint64_t eval_count = 0;
};

// |S| equally spaced interior points (neither endpoint included).
WeakGreedyState weak_greedy_init(const Domain& domain, std::size_t sample_size);

// argmax over S of the local error; ties resolve to the lowest index.
Point weak_greedy_select(WeakGreedyState& state, const Configuration& eta, const Cop& cop);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

enum class KernelKind { uniform, rpdm };

// Probability the selection kernel gives to a union of disjoint intervals
// (d=1). R-PDM weights cells by exp(alpha·Ĵ_D) where Ĵ_D is the midpoint-rule
// mean of J over quad_points_per_cell nodes, over the canonical gap division
// of eta.
double kernel_mass(KernelKind kind, const Configuration& eta, const std::vector<Interval>& set,
                   const Cop& cop, std::size_t quad_points_per_cell, double alpha);

// The division R-PDM holds at eta, reconstructed by replaying the splits in
// chronological order; probes sit at barycenters (probe-resampling history is
// not part of the configuration).
PolytopeDivision replay_division(const Configuration& eta, const Domain& domain);

// One kernel draw for a bare configuration, without engine history. R-PDM
// uses replay_division with barycenter probes.
Point kernel_draw(KernelKind kind, const Configuration& eta, const Cop& cop, double alpha, Rng& rng);

// Selection engine as the process driver sees it. propose() may advance
// internal bookkeeping under the promise that the caller applies eta⊕y next.
class SelectionEngine {
public:
    virtual ~SelectionEngine() = default;

    // Draws η₀ and primes internal state (weak greedy picks its first argmax
    // instead of drawing, and is fully deterministic).
    virtual Configuration initial_config(Rng& rng) = 0;

    // Primes state for an externally supplied configuration.
    virtual void initialize(const Configuration& eta0, Rng& rng) = 0;

    virtual Point propose(const Configuration& eta, Rng& rng) = 0;

    virtual std::uint64_t eval_count() const = 0;       // all error evaluations
    virtual std::uint64_t selection_evals() const = 0;  // deterministic part
    virtual std::string name() const = 0;
};

struct EngineSpec {
    enum class Kind { uniform, rpdm, weak_greedy };
    Kind kind = Kind::rpdm;
    double alpha = 500.0;
    double epsilon = 0.01;
    std::size_t sample_size = 90;

    static EngineSpec parse(const std::string& text);  // "uniform" | "rpdm" | "weak-greedy"
    std::string name() const;
};

std::unique_ptr<SelectionEngine> make_engine(const EngineSpec& spec, const Cop& cop);

}  // namespace greedy
