#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "greedy/config_space.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

Configuration random_config(Rng& rng, const Domain& dom, std::size_t max_n) {
    const std::size_t n = static_cast<std::size_t>(uniform_real(rng, 0.0, double(max_n) + 1.0));
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(uniform_real(rng, dom.a(), dom.b()));
    return Configuration(std::move(pts));
}

}  // namespace

TEST_SUITE("config_space") {

TEST_CASE("prepend shifts indices and keeps the source intact") {
    const Domain dom = Domain::interval(0.0, 1.0);
    const Configuration base({Point(0.5)});
    const Configuration one = oplus(base, Point(0.2), dom);
    CHECK(one.count() == 2);
    CHECK(one.at(0).x() == 0.2);
    CHECK(one.at(1).x() == 0.5);
    CHECK(base.count() == 1);  // value semantics

    const Configuration from_empty = oplus(Configuration{}, Point(0.7), dom);
    CHECK(from_empty.count() == 1);
    CHECK(from_empty.at(0).x() == 0.7);

    const Configuration two({Point(0.2), Point(0.5)});
    const Configuration three = oplus(two, Point(0.9), dom);
    REQUIRE(three.count() == 3);
    CHECK(three.at(0).x() == 0.9);
    CHECK(three.at(1).x() == 0.2);
    CHECK(three.at(2).x() == 0.5);
}

TEST_CASE("prepending a point outside the domain fails") {
    const Domain dom = Domain::interval(0.0, 1.0);
    CHECK_THROWS_AS(oplus(Configuration{}, Point(1.5), dom), std::domain_error);
    CHECK_THROWS_AS(oplus(Configuration{}, Point(-0.1), dom), std::domain_error);
    CHECK_NOTHROW(oplus(Configuration{}, Point(0.0), dom));  // bounds are inclusive
    CHECK_NOTHROW(oplus(Configuration{}, Point(1.0), dom));
}

TEST_CASE("count") {
    const Domain dom = Domain::interval(0.0, 1.0);
    CHECK(count(Configuration{}) == 0);
    CHECK(count(Configuration({Point(0.5)})) == 1);
    Rng rng = make_rng(11);
    for (int i = 0; i < 50; ++i) {
        const Configuration eta = random_config(rng, dom, 8);
        const Point y(uniform_real(rng, 0.0, 1.0));
        CHECK(count(oplus(eta, y, dom)) == count(eta) + 1);
    }
}

TEST_CASE("metric hand values") {
    const Domain dom = Domain::interval(0.0, 1.0);
    const Configuration half({Point(0.5)});
    CHECK(metric(half, half, dom) == 0.0);
    // one side runs into the graveyard: first term is diam(P)/2
    CHECK(metric(half, Configuration{}, dom) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(metric(Configuration({Point(0.0)}), Configuration({Point(1.0)}), dom) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("metric axioms on random triples") {
    const Domain dom = Domain::interval(-2.0, 3.0);
    Rng rng = make_rng(42);
    for (int i = 0; i < 1000; ++i) {
        const Configuration x = random_config(rng, dom, 6);
        const Configuration y = random_config(rng, dom, 6);
        const Configuration z = random_config(rng, dom, 6);
        const double dxy = metric(x, y, dom);
        const double dyx = metric(y, x, dom);
        CHECK(dxy == doctest::Approx(dyx).epsilon(1e-14));
        CHECK(metric(x, x, dom) == 0.0);
        CHECK(dxy >= 0.0);
        CHECK(dxy <= metric(x, z, dom) + metric(z, y, dom) + 1e-12);
    }
}

TEST_CASE("shared prefix halves the distance of the new heads") {
    const Domain dom = Domain::interval(0.0, 1.0);
    Rng rng = make_rng(7);
    for (int i = 0; i < 500; ++i) {
        const Configuration eta = random_config(rng, dom, 6);
        const Point y(uniform_real(rng, 0.0, 1.0));
        const Point z(uniform_real(rng, 0.0, 1.0));
        const double d = metric(oplus(eta, y, dom), oplus(eta, z, dom), dom);
        CHECK(d <= std::fabs(y.x() - z.x()) / 2.0 + 1e-14);
    }
}

TEST_CASE("order sorts ascending and is idempotent") {
    const Configuration eta({Point(0.7), Point(0.2), Point(0.9)});
    const Configuration sorted = order(eta);
    REQUIRE(sorted.count() == 3);
    CHECK(sorted.at(0).x() == 0.2);
    CHECK(sorted.at(1).x() == 0.7);
    CHECK(sorted.at(2).x() == 0.9);

    const Configuration single({Point(0.5)});
    CHECK(order(single).at(0).x() == 0.5);

    const Configuration twice = order(sorted);
    for (std::size_t i = 0; i < 3; ++i) CHECK(twice.at(i).x() == sorted.at(i).x());
}

TEST_CASE("order rejects 2D points") {
    const Configuration eta({Point(0.5, 0.5)});
    CHECK_THROWS_AS(order(eta), std::invalid_argument);
}

TEST_CASE("small perturbations keep the sorting permutation") {
    const Domain dom = Domain::interval(0.0, 1.0);
    Rng rng = make_rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        // distinct points with a known minimal gap
        std::vector<Point> pts;
        for (int i = 0; i < 5; ++i) pts.emplace_back(uniform_real(rng, 0.0, 1.0));
        double d_min = 1.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                d_min = std::min(d_min, std::fabs(pts[i].x() - pts[j].x()));
        if (d_min <= 0.0) continue;
        const Configuration eta{pts};
        const Configuration before = order(eta);
        const double radius = d_min / std::pow(2.0, double(pts.size()) + 1.0);
        std::vector<Point> moved;
        for (const Point& p : pts) {
            double x = p.x() + uniform_real(rng, -radius, radius) * 0.999;
            x = std::min(1.0, std::max(0.0, x));
            moved.emplace_back(x);
        }
        const Configuration after = order(Configuration{moved});
        // same permutation: the k-th sorted point stays within the radius of
        // the k-th sorted original
        for (std::size_t k = 0; k < pts.size(); ++k)
            CHECK(std::fabs(after.at(k).x() - before.at(k).x()) <= radius);
    }
}

TEST_CASE("domain accessors and containment") {
    const Domain iv = Domain::interval(-1.0, 3.0);
    CHECK(iv.dim() == 1);
    CHECK(iv.a() == -1.0);
    CHECK(iv.b() == 3.0);
    CHECK(iv.diameter() == doctest::Approx(4.0));
    CHECK(iv.contains(Point(0.0)));
    CHECK(!iv.contains(Point(3.5)));
    CHECK(!iv.contains(Point(0.0, 0.0)));  // dimension mismatch

    const Domain sq = Domain::rectangle(0.0, 2.0, 0.0, 1.0);
    CHECK(sq.dim() == 2);
    CHECK(sq.diameter() == doctest::Approx(std::sqrt(5.0)));
    CHECK(sq.contains(Point(1.0, 0.5)));
    CHECK(!sq.contains(Point(1.0, 1.5)));

    CHECK_THROWS_AS(Domain::interval(1.0, 1.0), std::invalid_argument);
}

}  // TEST_SUITE
