#include "greedy/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace greedy {
namespace {

constexpr double kGeomTol = 1e-12;

// Twice the signed area of (a,b,c); positive when CCW.
double cross2(const Point& a, const Point& b, const Point& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double scale_of(const Polytope& poly) {
    double s = 1.0;
    for (const Point& v : poly.vertices())
        for (int i = 0; i < v.dim; ++i) s = std::max(s, std::fabs(v.coord[i]));
    return s;
}

}  // namespace

Polytope::Polytope(int dim, std::vector<Point> vertices) : dim_(dim), vertices_(std::move(vertices)) {
    if (dim_ == 1) {
        if (vertices_.size() != 2 || vertices_[0].dim != 1 || vertices_[1].dim != 1)
            throw std::invalid_argument("Polytope: interval needs exactly two 1D endpoints");
        if (!(vertices_[0].x() < vertices_[1].x()))
            throw std::invalid_argument("Polytope: degenerate interval");
    } else if (dim_ == 2) {
        if (vertices_.size() < 3)
            throw std::invalid_argument("Polytope: polygon needs at least three vertices");
        for (const Point& v : vertices_)
            if (v.dim != 2) throw std::invalid_argument("Polytope: mixed-dimension vertices");
        const double tol = kGeomTol * scale_of(*this) * scale_of(*this);
        const std::size_t n = vertices_.size();
        double area2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = vertices_[i];
            const Point& b = vertices_[(i + 1) % n];
            const Point& c = vertices_[(i + 2) % n];
            if (cross2(a, b, c) < -tol)
                throw std::invalid_argument("Polytope: vertices not in convex CCW position");
            area2 += a.x() * b.y() - b.x() * a.y();
        }
        if (area2 <= tol) throw std::invalid_argument("Polytope: degenerate polygon");
    } else {
        throw std::invalid_argument("Polytope: only dimensions 1 and 2 are supported");
    }
}

Polytope Polytope::interval(double lo, double hi) { return Polytope(1, {Point(lo), Point(hi)}); }

Polytope Polytope::polygon(std::vector<Point> ccw_vertices) {
    return Polytope(2, std::move(ccw_vertices));
}

Polytope Polytope::from_domain(const Domain& domain) {
    if (domain.dim() == 1) return interval(domain.a(), domain.b());
    return polygon({Point(domain.lower(0), domain.lower(1)), Point(domain.upper(0), domain.lower(1)),
                    Point(domain.upper(0), domain.upper(1)), Point(domain.lower(0), domain.upper(1))});
}

std::size_t Polytope::facet_count() const { return dim_ == 1 ? 2 : vertices_.size(); }

double Polytope::volume() const {
    if (dim_ == 1) {
        const double len = vertices_[1].x() - vertices_[0].x();
        if (len <= 0.0) throw std::domain_error("volume: degenerate interval");
        return len;
    }
    const std::size_t n = vertices_.size();
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    const double area = 0.5 * area2;
    if (area <= 0.0) throw std::domain_error("volume: degenerate polygon");
    return area;
}

Point Polytope::barycenter() const {
    if (dim_ == 1) return Point(0.5 * (vertices_[0].x() + vertices_[1].x()));
    // Area centroid via the shoelace decomposition.
    const std::size_t n = vertices_.size();
    double area2 = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        const double w = a.x() * b.y() - b.x() * a.y();
        area2 += w;
        cx += (a.x() + b.x()) * w;
        cy += (a.y() + b.y()) * w;
    }
    return Point(cx / (3.0 * area2), cy / (3.0 * area2));
}

bool Polytope::contains(const Point& p) const {
    if (p.dim != dim_) return false;
    if (dim_ == 1) return p.x() >= vertices_[0].x() - kGeomTol && p.x() <= vertices_[1].x() + kGeomTol;
    const double tol = kGeomTol * scale_of(*this);
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (cross2(vertices_[i], vertices_[(i + 1) % n], p) < -tol) return false;
    return true;
}

bool Polytope::strictly_contains(const Point& p) const {
    if (p.dim != dim_) return false;
    if (dim_ == 1) return p.x() > vertices_[0].x() + kGeomTol && p.x() < vertices_[1].x() - kGeomTol;
    const double tol = kGeomTol * scale_of(*this);
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (cross2(vertices_[i], vertices_[(i + 1) % n], p) <= tol) return false;
    return true;
}

double Polytope::lo() const {
    if (dim_ != 1) throw std::logic_error("lo: not an interval");
    return vertices_[0].x();
}

double Polytope::hi() const {
    if (dim_ != 1) throw std::logic_error("hi: not an interval");
    return vertices_[1].x();
}

std::vector<Polytope> facet_linking(const Point& p, const Polytope& poly) {
    if (!poly.strictly_contains(p))
        throw std::invalid_argument("facet_linking: point " + to_string(p) +
                                    " not strictly inside the polytope");
    std::vector<Polytope> parts;
    if (poly.dim() == 1) {
        parts.push_back(Polytope::interval(poly.lo(), p.x()));
        parts.push_back(Polytope::interval(p.x(), poly.hi()));
        return parts;
    }
    const auto& vs = poly.vertices();
    const std::size_t n = vs.size();
    parts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)  // edge (v_i, v_{i+1}) plus p stays CCW
        parts.push_back(Polytope::polygon({p, vs[i], vs[(i + 1) % n]}));
    return parts;
}

Point barycenter(const Polytope& poly) { return poly.barycenter(); }
double volume(const Polytope& poly) { return poly.volume(); }

Point sample_uniform(const Polytope& poly, Rng& rng) {
    if (poly.dim() == 1) return Point(uniform_real(rng, poly.lo(), poly.hi()));
    // Fan triangulation from the centroid; triangle choice weighted by area.
    const Point c = poly.barycenter();
    const auto& vs = poly.vertices();
    const std::size_t n = vs.size();
    std::vector<double> areas(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        areas[i] = 0.5 * cross2(c, vs[i], vs[(i + 1) % n]);
        total += areas[i];
    }
    double u = uniform_real(rng, 0.0, total);
    std::size_t tri = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (u <= areas[i]) {
            tri = i;
            break;
        }
        u -= areas[i];
    }
    const Point& a = c;
    const Point& b = vs[tri];
    const Point& d = vs[(tri + 1) % n];
    double s = uniform_real(rng, 0.0, 1.0);
    double t = uniform_real(rng, 0.0, 1.0);
    if (s + t > 1.0) {  // reflect into the lower simplex half
        s = 1.0 - s;
        t = 1.0 - t;
    }
    return Point(a.x() + s * (b.x() - a.x()) + t * (d.x() - a.x()),
                 a.y() + s * (b.y() - a.y()) + t * (d.y() - a.y()));
}

PolytopeDivision::PolytopeDivision(Polytope root) {
    DivisionCell c{root, root.barycenter(), 0.0, true};
    cells_.push_back(std::move(c));
}

PolytopeDivision::PolytopeDivision(std::vector<DivisionCell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw std::invalid_argument("PolytopeDivision: no cells");
    for (const DivisionCell& c : cells_)
        if (!c.poly.contains(c.probe))
            throw std::invalid_argument("PolytopeDivision: probe outside its cell");
}

std::size_t PolytopeDivision::locate(const Point& y) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i].poly.contains(y)) return i;
    throw std::runtime_error("locate: point " + to_string(y) + " not covered by the division");
}

void PolytopeDivision::split(std::size_t cell_index, const Point& y) {
    const Polytope& target = cells_.at(cell_index).poly;
    std::vector<Polytope> parts = facet_linking(y, target);  // throws on boundary y
    std::vector<DivisionCell> children;
    children.reserve(parts.size());
    for (Polytope& part : parts) {
        Point b = part.barycenter();
        children.push_back(DivisionCell{std::move(part), b, 0.0, true});
    }
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(cell_index));
    cells_.insert(cells_.begin() + static_cast<std::ptrdiff_t>(cell_index),
                  std::make_move_iterator(children.begin()), std::make_move_iterator(children.end()));
}

double PolytopeDivision::total_volume() const {
    double v = 0.0;
    for (const DivisionCell& c : cells_) v += c.poly.volume();
    return v;
}

PolytopeDivision division_update(const PolytopeDivision& division, std::size_t cell_index,
                                 const Point& y) {
    PolytopeDivision next = division;
    next.split(cell_index, y);
    return next;
}

}  // namespace greedy
