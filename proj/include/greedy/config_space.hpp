#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace greedy {

// Point in the parameter set P, d = 1 or 2. Fixed storage keeps
// configuration snapshots allocation-light.
struct Point {
    std::array<double, 2> coord{0.0, 0.0};
    int dim = 1;

    Point() = default;
    explicit Point(double x) : coord{x, 0.0}, dim(1) {}
    Point(double x, double y) : coord{x, y}, dim(2) {}

    double x() const { return coord[0]; }
    double y() const { return coord[1]; }
    double operator[](std::size_t i) const { return coord[i]; }
};

bool operator==(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

// Hyperrectangle parameter set P.
class Domain {
public:
    static Domain interval(double a, double b);
    static Domain rectangle(double ax, double bx, double ay, double by);

    int dim() const { return dim_; }
    double lower(std::size_t i) const { return lower_[i]; }
    double upper(std::size_t i) const { return upper_[i]; }

    // 1D conveniences.
    double a() const { return lower_[0]; }
    double b() const { return upper_[0]; }

    double diameter() const;
    bool contains(const Point& p) const;

private:
    Domain(int dim, std::array<double, 2> lo, std::array<double, 2> hi);

    int dim_ = 1;
    std::array<double, 2> lower_{0.0, 0.0};
    std::array<double, 2> upper_{1.0, 0.0};
};

// Finite ordered point sequence; the graveyard tail is implicit. Stored
// newest-first so that prepending is index-stable with the formalism.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Point> points) : points_(std::move(points)) {}

    std::size_t count() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& at(std::size_t i) const { return points_.at(i); }
    const std::vector<Point>& points() const { return points_; }

    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

private:
    std::vector<Point> points_;
};

// eta ⊕ y: new configuration with y prepended; throws if y lies outside P.
Configuration oplus(const Configuration& eta, const Point& y, const Domain& domain);

std::size_t count(const Configuration& eta);

// Σ_{i≥1} 2^{-i} d̄(η_i, σ_i); d̄ = Euclidean between points, diam(P) when
// exactly one side has run off into the graveyard.
double metric(const Configuration& eta, const Configuration& sigma, const Domain& domain);

// Ascending stable sort of the points; only defined for d = 1.
Configuration order(const Configuration& eta);

}  // namespace greedy
