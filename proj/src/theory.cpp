#include "greedy/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "greedy/csv.hpp"
#include "greedy/parallel.hpp"
#include "greedy/process.hpp"

namespace greedy {

void RateParams::validate() const {
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("RateParams: gamma in (0,1)");
    if (!(delta > 0.0)) throw std::invalid_argument("RateParams: delta > 0");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("RateParams: beta in [0,1]");
    if (c0 < 0.0) throw std::invalid_argument("RateParams: c0 >= 0");
    if (!(e0 > 0.0)) throw std::invalid_argument("RateParams: e0 > 0");
    if (beta > 0.0 && !(c0 > 0.0))
        throw std::invalid_argument("RateParams: beta > 0 needs a positive error bound c0");
}

std::vector<Interval> b_mu_set(const Configuration& eta, double mu, const Domain& domain) {
    if (domain.dim() != 1) throw std::invalid_argument("b_mu_set: needs a 1D domain");
    if (!(mu > 0.0) || !(mu < 0.5)) throw std::invalid_argument("b_mu_set: mu must lie in (0, 1/2)");
    std::vector<double> xs;
    xs.reserve(eta.count() + 2);
    xs.push_back(domain.a());
    for (const Point& p : eta) xs.push_back(p.x());
    xs.push_back(domain.b());
    std::sort(xs.begin(), xs.end());
    std::vector<Interval> out;
    out.reserve(xs.size() - 1);
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double gap = xs[k + 1] - xs[k];
        if (gap <= 0.0) continue;  // coincident nodes leave no room
        out.push_back(Interval{xs[k] + mu * gap, xs[k + 1] - mu * gap});
    }
    return out;
}

bool CheckReport::all_pass() const {
    for (const CheckLine& l : lines)
        if (!l.pass) return false;
    return true;
}

void CheckReport::add(std::string name, bool pass, std::string detail) {
    lines.push_back(CheckLine{std::move(name), pass, std::move(detail)});
}

void CheckReport::merge(const CheckReport& other) {
    lines.insert(lines.end(), other.lines.begin(), other.lines.end());
}

CheckReport verify_mass_lemma(KernelKind kind, std::size_t trials, double mu, const Cop& cop,
                              std::uint64_t seed) {
    const double expected = 1.0 - 2.0 * mu;
    const double tol = kind == KernelKind::uniform ? 1e-10 : 1e-9;
    Rng rng = make_rng(seed);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform_real(rng, 0.0, 10.0));
        std::vector<Point> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pts.emplace_back(uniform_real(rng, cop.domain.a(), cop.domain.b()));
        const Configuration eta(std::move(pts));
        const double mass = kernel_mass(kind, eta, b_mu_set(eta, mu, cop.domain), cop, 3, 500.0);
        worst = std::max(worst, std::fabs(mass - expected));
    }
    CheckReport report;
    const std::string kind_name = kind == KernelKind::uniform ? "uniform" : "rpdm";
    report.add("mass_lemma " + kind_name + " mu=" + fmt_num(mu), worst <= tol,
               "max |mass - (1-2mu)| = " + fmt_num(worst) + " over " + fmt_num(trials) +
                   " configurations (tol " + fmt_num(tol) + ")");
    return report;
}

double theta(double beta, double t, const RateParams& params) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("theta: beta in [0,1]");
    if (!(t >= 1.0)) throw std::invalid_argument("theta: defined for t >= 1");
    if (beta == 0.0) return std::exp(-params.mu() * t);
    if (beta == 1.0) return 1.0 / std::log(1.0 + t);
    return std::pow(t, 1.0 - 1.0 / beta);
}

double expectation_bound(const RateParams& params, double t) {
    params.validate();
    if (t < 0.0) throw std::invalid_argument("expectation_bound: t >= 0");
    const double mu = params.mu();
    const double e0 = params.e0;
    const double beta = params.beta;
    if (beta == 0.0) return e0 * std::exp(-mu * t);
    if (beta == 1.0) {
        const double a1 = mu / (4.0 * params.c0);
        return e0 / (1.0 + a1 * e0 * std::log(1.0 + t));
    }
    const double a_beta = mu * std::pow(params.c0, -beta) / (1.0 + beta) *
                          std::pow(beta / (1.0 + beta), beta);
    const double inner =
        1.0 + a_beta * std::pow(e0, beta) * (beta / (1.0 - beta)) * (std::pow(1.0 + t, 1.0 - beta) - 1.0);
    return e0 * std::pow(inner, -1.0 / beta);
}

void SyntheticCop::jump(Rng& rng) {
    if (uniform_real(rng, 0.0, 1.0) < params.delta)
        g *= 1.0 - params.gamma / std::pow(static_cast<double>(n), params.beta);
    ++n;
}

std::vector<CurvePoint> run_synthetic(const RateParams& params, const std::vector<double>& times,
                                      std::size_t runs, std::uint64_t seed) {
    params.validate();
    if (times.empty()) throw std::invalid_argument("run_synthetic: no checkpoints");
    if (runs == 0) throw std::invalid_argument("run_synthetic: no runs");
    std::vector<double> ts = times;
    std::sort(ts.begin(), ts.end());

    std::vector<double> sums(ts.size(), 0.0), sq_sums(ts.size(), 0.0);
    for (std::size_t k = 0; k < runs; ++k) {
        Rng rng = make_rng(run_seed(seed, k));
        std::exponential_distribution<double> holding(1.0);
        SyntheticCop cop{params.e0, 1, params};
        double t = 0.0;
        std::size_t idx = 0;
        while (idx < ts.size()) {
            const double t_next = t + holding(rng);
            while (idx < ts.size() && ts[idx] < t_next) {
                sums[idx] += cop.g;
                sq_sums[idx] += cop.g * cop.g;
                ++idx;
            }
            cop.jump(rng);
            t = t_next;
        }
    }

    std::vector<CurvePoint> curve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double mean = sums[i] / static_cast<double>(runs);
        const double var = std::max(0.0, sq_sums[i] / static_cast<double>(runs) - mean * mean);
        curve[i] = CurvePoint{ts[i], mean, std::sqrt(var / static_cast<double>(runs)),
                              expectation_bound(params, ts[i])};
    }
    return curve;
}

CheckReport check_synthetic(const RateParams& params, const std::vector<double>& times,
                            std::size_t runs, std::uint64_t seed, double slack) {
    CheckReport report;
    const std::vector<CurvePoint> curve = run_synthetic(params, times, runs, seed);
    for (const CurvePoint& p : curve) {
        const bool ok = p.mean <= slack * p.bound;
        report.add("synthetic beta=" + fmt_num(params.beta) + " t=" + fmt_num(p.t), ok,
                   "mean " + fmt_num(p.mean) + " vs " + fmt_num(slack) + " x bound " +
                       fmt_num(p.bound));
    }
    return report;
}

double fitted_log_slope(const std::vector<CurvePoint>& curve, double t_min, double t_max) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const CurvePoint& p : curve) {
        if (p.t < t_min || p.t > t_max || p.mean <= 0.0) continue;
        const double y = std::log(p.mean);
        sx += p.t;
        sy += y;
        sxx += p.t * p.t;
        sxy += p.t * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fitted_log_slope: need two points in the window");
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

RateParams c2_rate_params(const TargetFunction& f, double mu, double alpha_shift) {
    if (!(mu > 0.0) || !(mu < 0.5)) throw std::invalid_argument("c2_rate_params: mu in (0, 1/2)");
    if (!f.sup_second_derivative)
        throw std::invalid_argument("c2_rate_params: target lacks a second-derivative sup bound");
    const double cf = *f.sup_second_derivative;
    if (!(alpha_shift > cf))
        throw std::invalid_argument("c2_rate_params: the shift must exceed the curvature bound");
    RateParams p;
    p.gamma = mu * (alpha_shift - cf) / (alpha_shift + cf);
    p.delta = 1.0 - 2.0 * mu;
    p.beta = 0.0;
    return p;
}

RateParams direct_rate_params(const TargetFunction& f, double mu) {
    if (!(mu > 0.0) || !(mu < 0.5)) throw std::invalid_argument("direct_rate_params: mu in (0, 1/2)");
    if (!f.second_derivative_bounds)
        throw std::invalid_argument("direct_rate_params: target is not strongly convex");
    RateParams p;
    p.gamma = mu * f.second_derivative_bounds->m / f.second_derivative_bounds->M;
    p.delta = 1.0 - 2.0 * mu;
    p.beta = 0.0;
    return p;
}

namespace {

// sup_x |interpolant − g| over a dense grid, for the split diagnostics.
double sup_interpolation_error(const std::function<double(double)>& g, const Configuration& eta,
                               const Domain& domain, std::size_t dense) {
    TargetFunction t;
    t.name = "split";
    t.f = g;
    const Interpolant itp(t, eta, domain);
    double worst = 0.0;
    for (std::size_t i = 0; i < dense; ++i) {
        const double x =
            domain.a() + (domain.b() - domain.a()) * static_cast<double>(i) / static_cast<double>(dense - 1);
        worst = std::max(worst, itp.error(x));
    }
    return worst;
}

}  // namespace

C2Report verify_c2_convergence(const Cop& cop, KernelKind kind, double mu, std::size_t runs,
                               const std::vector<double>& checkpoints, std::uint64_t seed,
                               std::optional<double> alpha_shift) {
    if (checkpoints.empty()) throw std::invalid_argument("verify_c2_convergence: no checkpoints");
    if (runs == 0) throw std::invalid_argument("verify_c2_convergence: no runs");

    C2Report report;
    const bool direct = cop.f.strongly_convex() && !alpha_shift;
    report.params = direct ? direct_rate_params(cop.f, mu)
                           : c2_rate_params(cop.f, mu,
                                            alpha_shift.value_or(
                                                2.0 * cop.f.sup_second_derivative.value_or(1.0)));

    std::vector<double> ts = checkpoints;
    std::sort(ts.begin(), ts.end());
    const double horizon = ts.back();
    const QuadratureGrid grid(cop.domain, 500);

    EngineSpec spec;
    spec.kind = kind == KernelKind::uniform ? EngineSpec::Kind::uniform : EngineSpec::Kind::rpdm;

    std::vector<double> init_g(runs);
    std::vector<std::vector<double>> g_at(runs);
    parallel_for(runs, [&](std::size_t k) {
        auto engine = make_engine(spec, cop);
        const std::uint64_t s = run_seed(seed, k);
        Rng rng = make_rng(s);
        Rng clock = make_clock_rng(s);
        Configuration eta0 = engine->initial_config(rng);
        const Trajectory traj = run_ctmc(*engine, eta0, cop, horizon, grid, rng, clock);
        init_g[k] = traj.events.front().g_estimate;
        g_at[k].resize(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) g_at[k][i] = traj.at_time(ts[i]).g_estimate;
    });

    double e0 = 0.0;
    for (double g : init_g) e0 += g;
    e0 /= static_cast<double>(runs);
    report.e0 = e0;

    report.curve.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t k = 0; k < runs; ++k) {
            sum += g_at[k][i];
            sq += g_at[k][i] * g_at[k][i];
        }
        const double mean = sum / static_cast<double>(runs);
        const double var = std::max(0.0, sq / static_cast<double>(runs) - mean * mean);
        const double se = std::sqrt(var / static_cast<double>(runs));
        const double envelope = e0 * std::exp(-report.params.mu() * ts[i]);
        report.curve[i] = CurvePoint{ts[i], mean, se, envelope};
        const double slack = mean > 0.0 ? 1.0 + 3.0 * se / mean : 1.0;
        report.checks.add(
            "c2 " + cop.f.name + " t=" + fmt_num(ts[i]), mean <= envelope * slack,
            "mean " + fmt_num(mean) + " vs envelope " + fmt_num(envelope) + " (slack x" +
                fmt_num(slack) + ", gamma*delta=" + fmt_num(report.params.mu()) + ")");
    }

    if (!direct && cop.f.sup_second_derivative) {
        // Split diagnostics f = f_α − h_α with h_α = α x² / 2 at a midpoint start.
        const double alpha = alpha_shift.value_or(2.0 * *cop.f.sup_second_derivative);
        const Configuration eta0({Point(0.5 * (cop.domain.a() + cop.domain.b()))});
        const auto base = cop.f.f;
        report.split_error_f = sup_interpolation_error(
            [base, alpha](double x) { return base(x) + 0.5 * alpha * x * x; }, eta0, cop.domain, 2001);
        report.split_error_h = sup_interpolation_error(
            [alpha](double x) { return 0.5 * alpha * x * x; }, eta0, cop.domain, 2001);
        report.m_g = 4.0 * std::max(report.split_error_f, report.split_error_h);
    }
    return report;
}

}  // namespace greedy
