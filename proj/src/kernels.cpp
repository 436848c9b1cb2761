#include "greedy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greedy {
namespace {

constexpr int kBoundaryRetries = 64;

// Discrete draw from normalized weights.
std::size_t pick_index(const std::vector<double>& weights, Rng& rng) {
    double u = uniform_real(rng, 0.0, 1.0);
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return weights.size() - 1;
}

Point sample_strict_interior(const Polytope& poly, Rng& rng) {
    for (int t = 0; t < kBoundaryRetries; ++t) {
        Point y = sample_uniform(poly, rng);
        if (poly.strictly_contains(y)) return y;
    }
    throw std::runtime_error("sample_strict_interior: kept hitting the cell boundary");
}

}  // namespace

Point uniform_sample(const Domain& domain, Rng& rng) {
    if (domain.dim() == 1) return Point(uniform_real(rng, domain.a(), domain.b()));
    return Point(uniform_real(rng, domain.lower(0), domain.upper(0)),
                 uniform_real(rng, domain.lower(1), domain.upper(1)));
}

std::vector<double> shifted_exp_weights(const std::vector<double>& j_values, double alpha) {
    if (j_values.empty()) throw std::invalid_argument("shifted_exp_weights: no weights");
    const double top = *std::max_element(j_values.begin(), j_values.end());
    std::vector<double> w(j_values.size());
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(alpha * (j_values[i] - top));
        z += w[i];
    }
    for (double& x : w) x /= z;
    return w;
}

RpdmState rpdm_init(const Point& p, const Domain& domain, double alpha, double epsilon) {
    if (!(alpha > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("rpdm_init: alpha and epsilon must be positive");
    Polytope root = Polytope::from_domain(domain);
    std::vector<Polytope> parts = facet_linking(p, root);  // rejects boundary p
    std::vector<DivisionCell> cells;
    cells.reserve(parts.size());
    for (Polytope& part : parts) {
        Point b = part.barycenter();
        cells.push_back(DivisionCell{std::move(part), b, 0.0, true});
    }
    RpdmState state{PolytopeDivision(std::move(cells)), alpha, epsilon, 0, 0};
    return state;
}

Point rpdm_step(RpdmState& state, const Configuration& eta, const Cop& cop, Rng& rng) {
    PolytopeDivision& div = state.division;
    const std::size_t n_cells = div.size();

    // Evaluate every probe against the current configuration.
    const Interpolant itp(cop.f, eta, cop.domain);
    std::vector<double> j(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        j[i] = itp.error(div.cell(i).probe.x());
        div.cell(i).probe_error = j[i];
    }
    state.selection_evals += n_cells;

    const std::vector<double> w = shifted_exp_weights(j, state.alpha);
    const std::size_t chosen = pick_index(w, rng);
    const Point y = sample_strict_interior(div.cell(chosen).poly, rng);

    // Stale-probe sweep against the post-transition configuration.
    const Configuration eta_next = oplus(eta, y, cop.domain);
    const Interpolant itp_next(cop.f, eta_next, cop.domain);
    for (std::size_t i = 0; i < n_cells; ++i) {
        if (i == chosen) continue;
        DivisionCell& cell = div.cell(i);
        const double err = itp_next.error(cell.probe.x());
        ++state.refresh_evals;
        if (err < state.epsilon) {
            cell.probe = sample_uniform(cell.poly, rng);
            cell.probe_is_barycenter = false;
        }
    }

    div.split(chosen, y);  // children get barycenter probes
    return y;
}

WeakGreedyState weak_greedy_init(const Domain& domain, std::size_t sample_size) {
    if (domain.dim() != 1) throw std::invalid_argument("weak_greedy_init: needs a 1D domain");
    if (sample_size == 0) throw std::invalid_argument("weak_greedy_init: empty sample set");
    WeakGreedyState s;
    s.samples.reserve(sample_size);
    const double step = (domain.b() - domain.a()) / static_cast<double>(sample_size + 1);
    for (std::size_t i = 1; i <= sample_size; ++i)
        s.samples.emplace_back(domain.a() + step * static_cast<double>(i));
    return s;
}

Point weak_greedy_select(WeakGreedyState& state, const Configuration& eta, const Cop& cop) {
    if (state.samples.empty()) throw std::logic_error("weak_greedy_select: empty sample set");
    const Interpolant itp(cop.f, eta, cop.domain);
    std::size_t best = 0;
    double best_err = -1.0;
    for (std::size_t i = 0; i < state.samples.size(); ++i) {
        const double err = itp.error(state.samples[i].x());
        if (err > best_err) {  // strict: ties keep the lowest index
            best_err = err;
            best = i;
        }
    }
    state.eval_count += state.samples.size();
    return state.samples[best];
}

PolytopeDivision replay_division(const Configuration& eta, const Domain& domain) {
    if (eta.empty()) throw std::invalid_argument("replay_division: empty configuration");
    // Points are stored newest-first; replay runs oldest-first.
    const auto& pts = eta.points();
    Polytope root = Polytope::from_domain(domain);
    std::vector<Polytope> parts = facet_linking(pts.back(), root);
    std::vector<DivisionCell> cells;
    for (Polytope& part : parts) {
        Point b = part.barycenter();
        cells.push_back(DivisionCell{std::move(part), b, 0.0, true});
    }
    PolytopeDivision div{std::move(cells)};
    for (std::size_t k = pts.size() - 1; k-- > 0;) div.split(div.locate(pts[k]), pts[k]);
    return div;
}

double kernel_mass(KernelKind kind, const Configuration& eta, const std::vector<Interval>& set,
                   const Cop& cop, std::size_t quad_points_per_cell, double alpha) {
    const Domain& domain = cop.domain;
    if (domain.dim() != 1) throw std::invalid_argument("kernel_mass: needs a 1D domain");
    const double a = domain.a(), b = domain.b();
    const double tol = 1e-12 * (b - a);
    for (const Interval& iv : set) {
        if (iv.lo > iv.hi || iv.lo < a - tol || iv.hi > b + tol)
            throw std::domain_error("kernel_mass: interval outside [a,b]");
    }

    if (kind == KernelKind::uniform) {
        double len = 0.0;
        for (const Interval& iv : set) len += iv.length();
        return len / (b - a);
    }

    if (quad_points_per_cell == 0)
        throw std::invalid_argument("kernel_mass: need at least one quadrature point per cell");
    const PolytopeDivision div = replay_division(eta, domain);
    const Interpolant itp(cop.f, eta, domain);
    std::vector<double> j_hat(div.size());
    for (std::size_t i = 0; i < div.size(); ++i) {
        const double lo = div.cell(i).poly.lo(), hi = div.cell(i).poly.hi();
        const double h = (hi - lo) / static_cast<double>(quad_points_per_cell);
        double sum = 0.0;
        for (std::size_t q = 0; q < quad_points_per_cell; ++q)
            sum += itp.error(lo + h * (static_cast<double>(q) + 0.5));
        j_hat[i] = sum / static_cast<double>(quad_points_per_cell);
    }
    const std::vector<double> w = shifted_exp_weights(j_hat, alpha);
    double mass = 0.0;
    for (std::size_t i = 0; i < div.size(); ++i) {
        const double lo = div.cell(i).poly.lo(), hi = div.cell(i).poly.hi();
        double inter = 0.0;
        for (const Interval& iv : set)
            inter += std::max(0.0, std::min(hi, iv.hi) - std::max(lo, iv.lo));
        mass += w[i] * inter / (hi - lo);
    }
    return mass;
}

Point kernel_draw(KernelKind kind, const Configuration& eta, const Cop& cop, double alpha, Rng& rng) {
    if (kind == KernelKind::uniform) return uniform_sample(cop.domain, rng);
    const PolytopeDivision div = replay_division(eta, cop.domain);
    const Interpolant itp(cop.f, eta, cop.domain);
    std::vector<double> j(div.size());
    for (std::size_t i = 0; i < div.size(); ++i) j[i] = itp.error(div.cell(i).probe.x());
    const std::vector<double> w = shifted_exp_weights(j, alpha);
    return sample_uniform(div.cell(pick_index(w, rng)).poly, rng);
}

namespace {

class UniformEngine final : public SelectionEngine {
public:
    explicit UniformEngine(const Cop& cop) : cop_(cop) {}

    Configuration initial_config(Rng& rng) override {
        return Configuration({uniform_sample(cop_.domain, rng)});
    }
    void initialize(const Configuration&, Rng&) override {}
    Point propose(const Configuration&, Rng& rng) override {
        return uniform_sample(cop_.domain, rng);
    }
    std::uint64_t eval_count() const override { return 0; }
    std::uint64_t selection_evals() const override { return 0; }
    std::string name() const override { return "uniform"; }

private:
    Cop cop_;
};

class RpdmEngine final : public SelectionEngine {
public:
    RpdmEngine(const Cop& cop, double alpha, double epsilon)
        : cop_(cop), alpha_(alpha), epsilon_(epsilon) {}

    Configuration initial_config(Rng& rng) override {
        Polytope root = Polytope::from_domain(cop_.domain);
        const Point p = [&] {
            for (int t = 0; t < kBoundaryRetries; ++t) {
                Point c = uniform_sample(cop_.domain, rng);
                if (root.strictly_contains(c)) return c;
            }
            throw std::runtime_error("rpdm: could not draw an interior start point");
        }();
        state_ = rpdm_init(p, cop_.domain, alpha_, epsilon_);
        initialized_for_ = Configuration({p});
        return initialized_for_;
    }

    void initialize(const Configuration& eta0, Rng&) override {
        if (initialized_for_.count() == eta0.count() &&
            initialized_for_.points() == eta0.points())
            return;  // already primed by initial_config
        const std::uint64_t sel = state_ ? state_->selection_evals : 0;
        const std::uint64_t ref = state_ ? state_->refresh_evals : 0;
        state_ = RpdmState{replay_division(eta0, cop_.domain), alpha_, epsilon_, sel, ref};
        initialized_for_ = eta0;
    }

    Point propose(const Configuration& eta, Rng& rng) override {
        if (!state_) throw std::logic_error("rpdm: engine not initialized");
        return rpdm_step(*state_, eta, cop_, rng);
    }

    std::uint64_t eval_count() const override { return state_ ? state_->eval_count() : 0; }
    std::uint64_t selection_evals() const override { return state_ ? state_->selection_evals : 0; }
    std::string name() const override { return "rpdm"; }

    const RpdmState& state() const {
        if (!state_) throw std::logic_error("rpdm: engine not initialized");
        return *state_;
    }

private:
    Cop cop_;
    double alpha_;
    double epsilon_;
    std::optional<RpdmState> state_;
    Configuration initialized_for_;
};

class WeakGreedyEngine final : public SelectionEngine {
public:
    WeakGreedyEngine(const Cop& cop, std::size_t sample_size)
        : cop_(cop), state_(weak_greedy_init(cop.domain, sample_size)) {}

    Configuration initial_config(Rng&) override {
        return Configuration({weak_greedy_select(state_, Configuration{}, cop_)});
    }
    void initialize(const Configuration&, Rng&) override {}
    Point propose(const Configuration& eta, Rng&) override {
        return weak_greedy_select(state_, eta, cop_);
    }
    std::uint64_t eval_count() const override { return state_.eval_count; }
    std::uint64_t selection_evals() const override { return state_.eval_count; }
    std::string name() const override { return "weak-greedy"; }

private:
    Cop cop_;
    WeakGreedyState state_;
};

}  // namespace

EngineSpec EngineSpec::parse(const std::string& text) {
    EngineSpec spec;
    if (text == "uniform")
        spec.kind = Kind::uniform;
    else if (text == "rpdm")
        spec.kind = Kind::rpdm;
    else if (text == "weak-greedy")
        spec.kind = Kind::weak_greedy;
    else
        throw std::invalid_argument("unknown engine '" + text +
                                    "' (expected uniform | rpdm | weak-greedy)");
    return spec;
}

std::string EngineSpec::name() const {
    switch (kind) {
        case Kind::uniform: return "uniform";
        case Kind::rpdm: return "rpdm";
        case Kind::weak_greedy: return "weak-greedy";
    }
    return "?";
}

std::unique_ptr<SelectionEngine> make_engine(const EngineSpec& spec, const Cop& cop) {
    switch (spec.kind) {
        case EngineSpec::Kind::uniform: return std::make_unique<UniformEngine>(cop);
        case EngineSpec::Kind::rpdm:
            return std::make_unique<RpdmEngine>(cop, spec.alpha, spec.epsilon);
        case EngineSpec::Kind::weak_greedy:
            return std::make_unique<WeakGreedyEngine>(cop, spec.sample_size);
    }
    throw std::logic_error("make_engine: unreachable");
}

}  // namespace greedy
