#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gwk/error.hpp"
#include "gwk/geometry.hpp"
#include "gwk/random.hpp"
#include "oracles.hpp"

using namespace gwk;

namespace {

LocationSet random_set(std::size_t n, std::uint64_t seed, int d = 2) {
    RandomStream rs(seed, 0);
    std::vector<double> c(n * d);
    for (double& v : c) v = rs.uniform();
    return LocationSet(std::move(c), d);
}

std::vector<std::size_t> brute_force(const LocationSet& s, std::span<const double> c, double radius) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (oracle::dist(s[i], c) < radius) out.push_back(i);
    return out;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("distance examples") {
    CHECK(distance(Point{0, 0}, Point{0, 0}) == 0.0);
    CHECK(distance(Point{0, 0}, Point{3, 4}) == 5.0);
    CHECK(distance(Point{0.26, 0.48}, Point{0.26, 0.58}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(distance(Point{0, 0}, Point{1, 2, 3}), InvalidArgument);
}

TEST_CASE("triangle inequality and symmetry on random triples") {
    RandomStream rs(77, 1);
    for (int t = 0; t < 10000; ++t) {
        Point a{rs.uniform(-2, 2), rs.uniform(-2, 2), rs.uniform(-2, 2)};
        Point b{rs.uniform(-2, 2), rs.uniform(-2, 2), rs.uniform(-2, 2)};
        Point c{rs.uniform(-2, 2), rs.uniform(-2, 2), rs.uniform(-2, 2)};
        REQUIRE(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-15);
        REQUIRE(distance(a, b) == distance(b, a));
    }
}

TEST_CASE("perturbed grid sizes") {
    CHECK(perturbed_grid(0.03, 0.01, 1).size() == 1156);
    CHECK(grid_axis(0.03).size() == 34);
    const auto g = perturbed_grid(0.5, 0.0, 3);
    REQUIRE(g.size() == 9);
    std::set<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g.size(); ++i) pts.insert({g[i][0], g[i][1]});
    std::set<std::pair<double, double>> expect;
    for (double x : {0.0, 0.5, 1.0})
        for (double y : {0.0, 0.5, 1.0}) expect.insert({x, y});
    CHECK(pts == expect);
}

TEST_CASE("perturbed grid is deterministic and jitter bounded") {
    const auto a = perturbed_grid(0.03, 0.01, 42);
    CHECK(a == perturbed_grid(0.03, 0.01, 42));
    CHECK_FALSE(a == perturbed_grid(0.03, 0.01, 43));
    // Every point lies within the jitter of some grid node on each axis.
    const auto axis = grid_axis(0.03);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            double best = 1.0;
            for (double v : axis) best = std::min(best, std::fabs(a[i][k] - v));
            REQUIRE(best <= 0.01);
        }
    CHECK(a.all_distinct());
}

TEST_CASE("neighbors_within trivial radii") {
    const auto s = random_set(100, 5);
    CHECK(neighbors_within(s, s.point(3), 0.0).empty());
    const auto all = neighbors_within(s, Point{0.5, 0.5}, 10.0);
    CHECK(all.size() == 100);
}

TEST_CASE("neighbors_within matches brute-force scan") {
    const auto s = random_set(200, 9);
    const auto fixed = neighbors_within(s, Point{0.4, 0.6}, 0.1);
    CHECK(fixed == brute_force(s, Point{0.4, 0.6}.coords(), 0.1));
    RandomStream rs(10, 0);
    for (int q = 0; q < 100; ++q) {
        Point c{rs.uniform(-0.2, 1.2), rs.uniform(-0.2, 1.2)};
        const double radius = rs.uniform(0.001, 0.5);
        REQUIRE(neighbors_within(s, c, radius) == brute_force(s, c.coords(), radius));
    }
}

TEST_CASE("radius index excludes ties at the radius") {
    LocationSet s(std::vector<Point>{{0.0, 0.0}, {0.5, 0.0}, {0.25, 0.0}});
    CHECK(neighbors_within(s, Point{0.0, 0.0}, 0.5) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("subsample") {
    const auto g = perturbed_grid(0.03, 0.01, 1);
    const auto a = subsample(g, 50, 17);
    CHECK(a.size() == 50);
    CHECK(a == subsample(g, 50, 17));
    CHECK(a.all_distinct());
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < g.size() && !found; ++j) found = std::equal(a[i].begin(), a[i].end(), g[j].begin());
        REQUIRE(found);
    }
    const auto full = subsample(g, g.size(), 4);
    CHECK(full.size() == g.size());
    CHECK(full.all_distinct());
    CHECK(subsample(g, 1, 8).size() == 1);
    CHECK_THROWS_AS(subsample(g, g.size() + 1, 1), InvalidArgument);
}

TEST_CASE("csv round trip is exact") {
    const auto g = perturbed_grid(0.1, 0.01, 2);
    std::stringstream ss;
    write_locations_csv(g, ss);
    CHECK(ss.str().rfind("x,y\n", 0) == 0);
    CHECK(read_locations_csv(ss) == g);
}

TEST_CASE("location set validation") {
    CHECK_THROWS_AS(LocationSet(std::vector<double>{0, 0, 1}, 2), InvalidArgument);
    CHECK_THROWS_AS(LocationSet(std::vector<double>{0, 0, 0, 0}, 4), InvalidArgument);
    LocationSet dup(std::vector<Point>{{0.1, 0.1}, {0.1, 0.1}});
    CHECK_FALSE(dup.all_distinct());
}

}
