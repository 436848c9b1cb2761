#include "greedy/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greedy {

void TargetFunction::validate() const {
    if (!f) throw std::invalid_argument("TargetFunction: missing evaluator");
    if (second_derivative_bounds) {
        const auto& b = *second_derivative_bounds;
        if (!(b.m > 0.0) || !(b.m <= b.M))
            throw std::invalid_argument("TargetFunction: need 0 < m <= M");
    }
    if (sup_second_derivative && *sup_second_derivative < 0.0)
        throw std::invalid_argument("TargetFunction: c_f must be nonnegative");
}

QuadratureGrid::QuadratureGrid(const Domain& domain, std::size_t count) {
    if (domain.dim() != 1) throw std::invalid_argument("QuadratureGrid: needs a 1D domain");
    if (count < 2) throw std::invalid_argument("QuadratureGrid: need at least two points");
    points_.resize(count);
    spacing_ = (domain.b() - domain.a()) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        points_[i] = domain.a() + spacing_ * static_cast<double>(i);
    points_.back() = domain.b();
}

Interpolant::Interpolant(const TargetFunction& f, const Configuration& eta, const Domain& domain)
    : f_(&f), a_(domain.a()), b_(domain.b()) {
    if (domain.dim() != 1) throw std::invalid_argument("Interpolant: needs a 1D domain");
    std::vector<double> xs;
    xs.reserve(eta.count() + 2);
    for (const Point& p : eta) {
        if (p.dim != 1 || !domain.contains(p))
            throw std::domain_error("Interpolant: node " + to_string(p) + " outside [a,b]");
        xs.push_back(p.x());
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());  // duplicates add nothing
    knots_.reserve(xs.size() + 2);
    knots_.push_back(a_);
    for (double x : xs)
        if (x > a_ && x < b_) knots_.push_back(x);  // endpoints are knots already
    knots_.push_back(b_);
    values_.reserve(knots_.size());
    for (double x : knots_) values_.push_back(f(x));
}

double Interpolant::value(double x) const {
    if (x < a_ || x > b_)
        throw std::domain_error("Interpolant: evaluation point outside [a,b]");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    if (k == 0) k = 1;
    if (k >= knots_.size()) k = knots_.size() - 1;
    const double x0 = knots_[k - 1], x1 = knots_[k];
    const double t = (x - x0) / (x1 - x0);
    return values_[k - 1] + t * (values_[k] - values_[k - 1]);
}

double Interpolant::error(double x) const { return std::fabs(value(x) - (*f_)(x)); }

double interpolate(const TargetFunction& f, const Configuration& eta, double x, const Domain& domain) {
    return Interpolant(f, eta, domain).value(x);
}

double local_error(const TargetFunction& f, const Configuration& eta, double x, const Domain& domain) {
    return Interpolant(f, eta, domain).error(x);
}

double global_error(const TargetFunction& f, const Configuration& eta, const QuadratureGrid& grid,
                    const Domain& domain) {
    const Interpolant itp(f, eta, domain);
    double sum = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double j = itp.error(grid.point(i));
        sum += (i == 0 || i + 1 == n) ? 0.5 * j : j;
    }
    return sum * grid.spacing();
}

double grid_mean_error(const TargetFunction& f, const Configuration& eta, const QuadratureGrid& grid,
                       const Domain& domain) {
    const Interpolant itp(f, eta, domain);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += itp.error(grid.point(i));
    return sum / static_cast<double>(grid.size());
}

double global_error_exact(const TargetFunction& f, const Configuration& eta, const Domain& domain) {
    if (!f.antiderivative)
        throw std::invalid_argument("global_error_exact: target has no antiderivative");
    if (!f.strongly_convex())
        throw std::invalid_argument("global_error_exact: only valid for convex targets");
    const Interpolant itp(f, eta, domain);
    const auto& ks = itp.knots();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < ks.size(); ++k) {
        const double u = ks[k], v = ks[k + 1];
        const double chord = 0.5 * (f(u) + f(v)) * (v - u);
        total += chord - (f.antiderivative(v) - f.antiderivative(u));
    }
    return total;
}

Cop example1() {
    TargetFunction t;
    t.name = "example1";
    t.f = [](double x) { return x * x + x * x * x * x / 30.0; };
    t.second_derivative_bounds = ConvexityBounds{2.0, 12.0};  // f'' = 2 + 0.4x² on [0,5]
    t.sup_second_derivative = 12.0;
    t.antiderivative = [](double x) { return x * x * x / 3.0 + std::pow(x, 5) / 150.0; };
    return Cop{std::move(t), Domain::interval(0.0, 5.0)};
}

Cop example2() {
    TargetFunction t;
    t.name = "example2";
    t.f = [](double x) {
        const double u = x - 6.0, v = x - 2.0;
        return (u * u * u * u + v * v + 2.0) / 200.0;
    };
    // f'' = (12(x−6)² + 2)/200 on [0,10]
    t.second_derivative_bounds = ConvexityBounds{0.01, 2.17};
    t.sup_second_derivative = 2.17;
    t.antiderivative = [](double x) {
        const double u = x - 6.0, v = x - 2.0;
        return (std::pow(u, 5) / 5.0 + v * v * v / 3.0 + 2.0 * x) / 200.0;
    };
    return Cop{std::move(t), Domain::interval(0.0, 10.0)};
}

Cop example3() {
    TargetFunction t;
    t.name = "example3";
    t.f = [](double x) { return std::sin(2.0 * x); };
    t.sup_second_derivative = 4.0;  // f'' = −4 sin(2x); not convex
    t.antiderivative = [](double x) { return -0.5 * std::cos(2.0 * x); };
    return Cop{std::move(t), Domain::interval(0.0, 10.0)};
}

TargetFunction quadratic_target() {
    TargetFunction t;
    t.name = "quadratic";
    t.f = [](double x) { return x * x; };
    t.second_derivative_bounds = ConvexityBounds{2.0, 2.0};
    t.sup_second_derivative = 2.0;
    t.antiderivative = [](double x) { return x * x * x / 3.0; };
    return t;
}

TargetFunction affine_target(double slope, double intercept) {
    TargetFunction t;
    t.name = "affine";
    t.f = [slope, intercept](double x) { return slope * x + intercept; };
    t.sup_second_derivative = 0.0;
    t.antiderivative = [slope, intercept](double x) { return 0.5 * slope * x * x + intercept * x; };
    return t;
}

}  // namespace greedy
