#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "greedy/config_space.hpp"

namespace greedy {

struct ConvexityBounds {
    double m = 0.0;  // 0 < m ≤ f''
    double M = 0.0;  // f'' ≤ M
};

// C² target of the interpolation problem, with whatever curvature data the
// rate theory needs (absent for non-convex targets).
struct TargetFunction {
    std::string name;
    std::function<double(double)> f;
    std::optional<ConvexityBounds> second_derivative_bounds;
    std::optional<double> sup_second_derivative;        // c_f = ‖f''‖_sup
    std::function<double(double)> antiderivative;       // optional, enables exact integrals

    double operator()(double x) const { return f(x); }
    bool strongly_convex() const { return second_derivative_bounds.has_value(); }
    void validate() const;
};

// L equally spaced evaluation points spanning [a,b], shared by the error
// quadrature and the pointwise statistics.
class QuadratureGrid {
public:
    QuadratureGrid(const Domain& domain, std::size_t count);

    std::size_t size() const { return points_.size(); }
    double point(std::size_t i) const { return points_[i]; }
    double spacing() const { return spacing_; }
    const std::vector<double>& points() const { return points_; }

private:
    std::vector<double> points_;
    double spacing_;
};

// Piecewise-linear interpolant of f through (a, f(a)), the sorted interior
// nodes of eta, and (b, f(b)). Built once per configuration; evaluation is a
// binary search.
class Interpolant {
public:
    Interpolant(const TargetFunction& f, const Configuration& eta, const Domain& domain);

    double value(double x) const;
    double error(double x) const;  // |value(x) − f(x)|
    const std::vector<double>& knots() const { return knots_; }

private:
    const TargetFunction* f_;
    double a_, b_;
    std::vector<double> knots_;
    std::vector<double> values_;
};

double interpolate(const TargetFunction& f, const Configuration& eta, double x, const Domain& domain);
double local_error(const TargetFunction& f, const Configuration& eta, double x, const Domain& domain);

// Composite-trapezoid estimate of ∫ |interpolant − f| over the grid.
double global_error(const TargetFunction& f, const Configuration& eta, const QuadratureGrid& grid,
                    const Domain& domain);

// (1/L) Σ_i J(y_i, eta): the statistic averaged into E_t and compared against
// stopping tolerances.
double grid_mean_error(const TargetFunction& f, const Configuration& eta, const QuadratureGrid& grid,
                       const Domain& domain);

// Analytic ∫ (interpolant − f); valid for convex f (chord above graph) with a
// supplied antiderivative. Serves as the brute-force oracle for the
// quadrature estimate.
double global_error_exact(const TargetFunction& f, const Configuration& eta, const Domain& domain);

// A target plus its domain: one configuration-optimization problem instance.
struct Cop {
    TargetFunction f;
    Domain domain;
};

Cop example1();  // x² + x⁴/30 on [0,5]
Cop example2();  // ((x−6)⁴ + (x−2)² + 2)/200 on [0,10]
Cop example3();  // sin(2x) on [0,10]

TargetFunction quadratic_target();                            // x², m = M = 2
TargetFunction affine_target(double slope, double intercept);

}  // namespace greedy
