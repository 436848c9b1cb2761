#include "greedy/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace greedy {

bool operator==(const Point& a, const Point& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
        if (a.coord[i] != b.coord[i]) return false;
    return true;
}

double distance(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        const double d = a.coord[i] - b.coord[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::string to_string(const Point& p) {
    std::ostringstream os;
    os << '(' << p.coord[0];
    if (p.dim == 2) os << ", " << p.coord[1];
    os << ')';
    return os.str();
}

Domain::Domain(int dim, std::array<double, 2> lo, std::array<double, 2> hi)
    : dim_(dim), lower_(lo), upper_(hi) {
    for (int i = 0; i < dim_; ++i)
        if (!(lower_[i] < upper_[i]))
            throw std::invalid_argument("Domain: lower bound must be below upper bound");
}

Domain Domain::interval(double a, double b) { return Domain(1, {a, 0.0}, {b, 0.0}); }

Domain Domain::rectangle(double ax, double bx, double ay, double by) {
    return Domain(2, {ax, ay}, {bx, by});
}

double Domain::diameter() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double d = upper_[i] - lower_[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool Domain::contains(const Point& p) const {
    if (p.dim != dim_) return false;
    for (int i = 0; i < dim_; ++i)
        if (p.coord[i] < lower_[i] || p.coord[i] > upper_[i]) return false;
    return true;
}

Configuration oplus(const Configuration& eta, const Point& y, const Domain& domain) {
    if (!domain.contains(y))
        throw std::domain_error("oplus: point " + to_string(y) + " outside the parameter set");
    std::vector<Point> pts;
    pts.reserve(eta.count() + 1);
    pts.push_back(y);
    pts.insert(pts.end(), eta.begin(), eta.end());
    return Configuration(std::move(pts));
}

std::size_t count(const Configuration& eta) { return eta.count(); }

double metric(const Configuration& eta, const Configuration& sigma, const Domain& domain) {
    const std::size_t n = std::max(eta.count(), sigma.count());
    double total = 0.0;
    double weight = 0.5;  // 2^{-i}, i starting at 1
    for (std::size_t i = 0; i < n; ++i, weight *= 0.5) {
        const bool has_e = i < eta.count();
        const bool has_s = i < sigma.count();
        double d;
        if (has_e && has_s)
            d = distance(eta.at(i), sigma.at(i));
        else  // exactly one side is the graveyard
            d = domain.diameter();
        total += weight * d;
    }
    return total;
}

Configuration order(const Configuration& eta) {
    for (const Point& p : eta)
        if (p.dim != 1) throw std::invalid_argument("order: only defined in one dimension");
    std::vector<Point> pts(eta.begin(), eta.end());
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Point& a, const Point& b) { return a.x() < b.x(); });
    return Configuration(std::move(pts));
}

}  // namespace greedy
