#pragma once

#include <cstddef>
#include <vector>

#include "greedy/config_space.hpp"
#include "greedy/rng.hpp"

namespace greedy {

// Convex polytope, d = 1 (interval) or d = 2 (CCW convex polygon).
// Facets are implicit: endpoints for an interval, consecutive vertex
// pairs for a polygon.
class Polytope {
public:
    static Polytope interval(double lo, double hi);
    static Polytope polygon(std::vector<Point> ccw_vertices);
    static Polytope from_domain(const Domain& domain);

    int dim() const { return dim_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t facet_count() const;

    double volume() const;
    Point barycenter() const;
    bool contains(const Point& p) const;          // boundary inclusive
    bool strictly_contains(const Point& p) const; // interior only

    // 1D conveniences.
    double lo() const;
    double hi() const;

private:
    Polytope(int dim, std::vector<Point> vertices);

    int dim_ = 1;
    std::vector<Point> vertices_;
};

// Conv(p ∪ F) for every facet F; the pieces partition P.
std::vector<Polytope> facet_linking(const Point& p, const Polytope& poly);

Point barycenter(const Polytope& poly);
double volume(const Polytope& poly);

// Uniform point in the polytope. d=2 fan-triangulates from the centroid,
// picks a triangle proportional to area, and samples it by reflection.
Point sample_uniform(const Polytope& poly, Rng& rng);

struct DivisionCell {
    Polytope poly;
    Point probe;                       // p_D
    double probe_error = 0.0;          // cached J(p_D, eta), engine-maintained
    bool probe_is_barycenter = true;
};

// The evolving partition 𝒟(η) of the parameter set.
class PolytopeDivision {
public:
    explicit PolytopeDivision(Polytope root);
    explicit PolytopeDivision(std::vector<DivisionCell> cells);

    std::size_t size() const { return cells_.size(); }
    const DivisionCell& cell(std::size_t i) const { return cells_.at(i); }
    DivisionCell& cell(std::size_t i) { return cells_.at(i); }
    const std::vector<DivisionCell>& cells() const { return cells_; }

    // Lowest-index cell containing y; throws if the partition lost y.
    std::size_t locate(const Point& y) const;

    // Replace cell by its facet-linked children (probes at barycenters).
    // Children are inserted at the cell's position. Throws when y is not
    // strictly inside, so the caller can resample.
    void split(std::size_t cell_index, const Point& y);

    double total_volume() const;

private:
    std::vector<DivisionCell> cells_;
};

PolytopeDivision division_update(const PolytopeDivision& division, std::size_t cell_index,
                                 const Point& y);

}  // namespace greedy
