#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "greedy/config_space.hpp"
#include "greedy/interpolation.hpp"
#include "greedy/kernels.hpp"
#include "greedy/rng.hpp"

namespace greedy {

// Drift parameters of the average-error assumption: the expected one-jump
// improvement is at least (gamma·delta / n^beta) times the current error.
struct RateParams {
    double gamma = 0.1;  // ∈ (0,1)
    double delta = 0.5;  // > 0
    double beta = 0.0;   // ∈ [0,1]
    double c0 = 1.0;     // ≥ 0, uniform bound on the error
    double e0 = 1.0;     // initial expected error

    double mu() const { return gamma * delta; }  // the drift coefficient γδ
    void validate() const;
};

// The centrally shrunken node gaps: one open interval per gap of the sorted
// node set (with a, b as outer fence posts); total length (1−2μ)(b−a).
std::vector<Interval> b_mu_set(const Configuration& eta, double mu, const Domain& domain);

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckLine> lines;

    bool all_pass() const;
    void add(std::string name, bool pass, std::string detail);
    void merge(const CheckReport& other);
};

// Asserts kernel_mass(η, B_μ(η)) = 1−2μ on random configurations.
CheckReport verify_mass_lemma(KernelKind kind, std::size_t trials, double mu, const Cop& cop,
                              std::uint64_t seed);

// Decay envelope θ_β(t): e^{−γδt} (β=0), t^{1−1/β} (β∈(0,1)), 1/log(1+t) (β=1).
double theta(double beta, double t, const RateParams& params);

// Closed-form upper bound on the expected error at time t.
double expectation_bound(const RateParams& params, double t);

// Error level that drops by the assumption's exact factor: on each jump, with
// probability delta, G ← G·(1 − gamma/n^beta); n grows by one either way.
struct SyntheticCop {
    double g = 1.0;
    std::size_t n = 1;
    RateParams params;

    void jump(Rng& rng);
};

struct CurvePoint {
    double t = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
};

// Empirical mean error of the synthetic CTMC at the requested times, with the
// closed-form bound alongside.
std::vector<CurvePoint> run_synthetic(const RateParams& params, const std::vector<double>& times,
                                      std::size_t runs, std::uint64_t seed);

// PASS when the empirical mean stays within slack × bound at every time.
CheckReport check_synthetic(const RateParams& params, const std::vector<double>& times,
                            std::size_t runs, std::uint64_t seed, double slack = 1.1);

// Least-squares slope of log(mean) against t over [t_min, t_max].
double fitted_log_slope(const std::vector<CurvePoint>& curve, double t_min, double t_max);

// Decomposition parameters: gamma = μ(α−c_f)/(α+c_f), delta = 1−2μ.
RateParams c2_rate_params(const TargetFunction& f, double mu, double alpha_shift);

// Strongly convex shortcut: gamma = μ·m/M, delta = 1−2μ.
RateParams direct_rate_params(const TargetFunction& f, double mu);

struct C2Report {
    CheckReport checks;
    std::vector<CurvePoint> curve;
    RateParams params;
    double e0 = 0.0;
    // Diagnostics of the convex/concave split f = f_α − h_α at the initial
    // configuration (zero when the direct parameters were used).
    double split_error_f = 0.0;
    double split_error_h = 0.0;
    double m_g = 0.0;
};

// CTMC runs on the problem; the empirical mean error must stay under
// e0·e^{−γδt} at each checkpoint, up to three standard errors.
C2Report verify_c2_convergence(const Cop& cop, KernelKind kind, double mu, std::size_t runs,
                               const std::vector<double>& checkpoints, std::uint64_t seed,
                               std::optional<double> alpha_shift = std::nullopt);

}  // namespace greedy
