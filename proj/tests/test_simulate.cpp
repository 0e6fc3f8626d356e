#include <cmath>

#include "doctest.h"
#include "gwk/error.hpp"
#include "gwk/random.hpp"
#include "gwk/simulate.hpp"

using namespace gwk;

TEST_SUITE("simulate") {

TEST_CASE("scalar variance") {
    SimConfig cfg{CovarianceModel(GWParams{2, 0, 0.3, 4, 2}), LocationSet(std::vector<Point>{{0.5, 0.5}}), 10000, 3};
    const auto z = simulate(cfg);
    double s = 0;
    for (const auto& v : z) s += v[0] * v[0];
    CHECK(std::fabs(s / z.size() / 4.0 - 1.0) < 0.05);
}

TEST_CASE("sample covariance matches the model") {
    RandomStream rs(1, 0);
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({rs.uniform(0, 0.5), rs.uniform(0, 0.5)});
    const CovarianceModel m(GWParams{3.5, 1, 0.6, 1, 2});
    SimConfig cfg{m, LocationSet(pts), 10000, 11};
    const auto z = simulate(cfg);
    const auto target = assemble_dense(m, cfg.locs, false);
    const double bound = 5.0 / std::sqrt(10000.0);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0;
            for (const auto& v : z) s += v[i] * v[j];
            REQUIRE(std::fabs(s / z.size() - target(i, j)) < bound);
        }
}

TEST_CASE("independence beyond the support") {
    const CovarianceModel m(GWParams{2, 0, 0.2, 1.5, 2});
    SimConfig cfg{m, LocationSet(std::vector<Point>{{0, 0}, {0.5, 0}}), 20000, 12};
    double v = 0;
    for (const auto& z : simulate(cfg)) v += (z[0] - z[1]) * (z[0] - z[1]);
    CHECK(v / 20000.0 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("determinism and affine scaling") {
    const LocationSet locs(std::vector<Point>{{0, 0}, {0.1, 0}, {0.2, 0.1}, {0.05, 0.3}});
    SimConfig a{CovarianceModel(GWParams{3.5, 1, 0.5, 1, 2}), locs, 5, 99};
    SimConfig b{CovarianceModel(GWParams{3.5, 1, 0.5, 9, 2}), locs, 5, 99};
    const auto za = simulate(a), zb = simulate(b);
    CHECK(za == simulate(a));
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 4; ++i) CHECK(zb[j][i] == doctest::Approx(3.0 * za[j][i]).epsilon(1e-14));
    // Replicate j can be regenerated alone.
    const auto f = cholesky(assemble_dense(a.model, locs, false));
    CHECK(simulate_with_factor(f, 99, replicate_stream(3)) == za[3]);
    SimConfig c = a;
    c.seed = 100;
    CHECK(simulate(c) != za);
    c.replicates = 0;
    CHECK_THROWS_AS(simulate(c), InvalidArgument);
}

TEST_CASE("non positive definite input fails") {
    const LocationSet dup(std::vector<Point>{{0.1, 0.1}, {0.1, 0.1}});
    SimConfig cfg{CovarianceModel(GWParams{2, 0, 0.5, 1, 2}), dup, 1, 1};
    CHECK_THROWS_AS(simulate(cfg), NotPositiveDefinite);
}

}
