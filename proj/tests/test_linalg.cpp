#include <cmath>

#include "doctest.h"
#include "gwk/error.hpp"
#include "gwk/linalg.hpp"
#include "gwk/random.hpp"
#include "oracles.hpp"

using namespace gwk;

namespace {

LocationSet uniform_points(std::size_t n, std::uint64_t seed) {
    RandomStream rs(seed, 0);
    std::vector<double> c(2 * n);
    for (double& v : c) v = rs.uniform();
    return LocationSet(std::move(c), 2);
}

SymMatrix from_rows(const oracle::Mat& a) {
    SymMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) m.set(i, j, a[i][j]);
    return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("dense assembly") {
    const CovarianceModel gw(GWParams{3.5, 1, 0.5, 2, 2});
    const LocationSet one(std::vector<Point>{{0.3, 0.3}});
    CHECK(assemble_dense(gw, one, true)(0, 0) == 1.0);
    const LocationSet far(std::vector<Point>{{0, 0}, {0.6, 0}});
    const auto m = assemble_dense(gw, far, true);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 0) == 0.0);
    CHECK(m(0, 1) == 0.0);
    const auto locs = uniform_points(5, 1);
    const auto c = assemble_dense(gw, locs, false);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const double r = oracle::dist(locs[i], locs[j]);
            const double expect = r >= 0.5 ? 0.0 : 2.0 * std::pow(1 - r / 0.5, 4.5) * (1 + 4.5 * r / 0.5);
            CHECK(c(i, j) == doctest::Approx(expect).epsilon(1e-12).scale(1e-300));
        }
    const CovarianceModel g3(GWParams{3, 0, 1, 1, 3});
    CHECK_THROWS_AS(assemble_dense(g3, locs, true), InvalidArgument);
}

TEST_CASE("sparse assembly matches dense on the support") {
    const auto locs = uniform_points(150, 2);
    const CovarianceModel gw(GWParams{2.5, 0.5, 0.15, 1, 2});
    const auto dense = assemble_dense(gw, locs, false);
    const auto sp = assemble_sparse(gw, locs, false);
    const auto back = densify(sp);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < locs.size(); ++i)
        for (std::size_t j = 0; j < locs.size(); ++j) {
            const bool inside = oracle::dist(locs[i], locs[j]) < 0.15;
            if (i != j && inside) ++pairs;
            REQUIRE(back(i, j) == (inside || i == j ? dense(i, j) : 0.0));
        }
    CHECK(sp.nnz() == pairs + locs.size());
    const auto full = assemble_sparse(CovarianceModel(GWParams{2.5, 0.5, 2.0, 1, 2}), locs, true);
    CHECK(full.nnz() == locs.size() * locs.size());
    CHECK_THROWS_AS(assemble_sparse(CovarianceModel(MaternParams{0.5, 0.1, 1, 2}), locs, true), InvalidArgument);
}

TEST_CASE("nonzero fraction on the full grid") {
    const auto g = perturbed_grid(0.03, 0.01, 1);
    const auto sp = assemble_sparse(CovarianceModel(GWParams{2, 0, 0.1, 1, 2}), g, true);
    CHECK(sp.nonzero_fraction() > 0.028);
    CHECK(sp.nonzero_fraction() < 0.032);
}

TEST_CASE("cholesky examples") {
    const auto f = cholesky(from_rows({{4, 2}, {2, 3}}));
    CHECK(f.L(0, 0) == doctest::Approx(2).epsilon(1e-15));
    CHECK(f.L(1, 0) == doctest::Approx(1).epsilon(1e-15));
    CHECK(f.L(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(f.L(0, 1) == 0.0);
    CHECK(f.logdet() == doctest::Approx(std::log(8.0)).epsilon(1e-15));

    const auto id = cholesky(from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(id.logdet() == 0.0);
    const std::vector<double> b{1, -2, 3};
    CHECK(id.solve(b) == b);
    CHECK(id.quad_form(b) == 14.0);

    const auto d4 = cholesky(from_rows({{4, 0}, {0, 4}}));
    CHECK(d4.logdet() == doctest::Approx(std::log(16.0)).epsilon(1e-15));
    CHECK(d4.quad_form(std::vector<double>{2, 2}) == doctest::Approx(2).epsilon(1e-15));
}

TEST_CASE("cholesky reconstruction and failure") {
    const auto locs = uniform_points(50, 3);
    const auto r = assemble_dense(CovarianceModel(GWParams{3.5, 1, 0.4, 1, 2}), locs, true);
    const auto f = cholesky(r);
    double err = 0.0;
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += f.L(i, k) * f.L(j, k);
            err = std::max(err, std::fabs(s - r(i, j)));
        }
    CHECK(err < 1e-10 * r.max_abs());
    CHECK_THROWS_AS(cholesky(from_rows({{1, 2}, {2, 1}})), NotPositiveDefinite);
    try {
        cholesky(from_rows({{1, 0, 0}, {0, 1, 1}, {0, 1, 1}}));
        FAIL("expected failure");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot() == 2);
    }
    CHECK_NOTHROW(cholesky(from_rows({{1, 1}, {1, 1}}), 1e-8));
}

TEST_CASE("solves and quadratic forms match an explicit inverse") {
    const auto locs = uniform_points(20, 4);
    const CovarianceModel gw(GWParams{3.5, 1, 0.5, 1.3, 2});
    const auto r = assemble_dense(gw, locs, false);
    oracle::Mat a(20, std::vector<double>(20));
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 20; ++j) a[i][j] = r(i, j);
    double ld = 0;
    const auto inv = oracle::inverse(a, &ld);
    RandomStream rs(5, 5);
    std::vector<double> z(20);
    for (double& v : z) v = rs.normal();
    const auto f = cholesky(r);
    CHECK(f.quad_form(z) == doctest::Approx(oracle::dot(z, oracle::matvec(inv, z))).epsilon(1e-9));
    CHECK(f.logdet() == doctest::Approx(ld).epsilon(1e-10));
    const auto x = f.solve(z);
    const auto xo = oracle::matvec(inv, z);
    for (std::size_t i = 0; i < 20; ++i) CHECK(x[i] == doctest::Approx(xo[i]).epsilon(1e-9));
    CHECK(f.quad_form(std::vector<double>(20, 0.0)) == 0.0);
    CHECK(f.quad_form(z) > 0.0);
    CHECK_THROWS_AS(f.solve(std::vector<double>(3, 1.0)), InvalidArgument);
}

TEST_CASE("conjugate gradients") {
    const LocationSet far(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}});
    const auto id = assemble_sparse(CovarianceModel(GWParams{2, 0, 0.5, 1, 2}), far, true);
    const std::vector<double> b{1.5, -2, 0.25};
    const auto x = cg_solve(id, b);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-14));
    CHECK(cg_solve(id, std::vector<double>(3, 0.0)) == std::vector<double>(3, 0.0));

    const auto locs = uniform_points(200, 6);
    const CovarianceModel gw(GWParams{3.5, 1, 0.2, 1, 2});
    RandomStream rs(6, 1);
    std::vector<double> rhs(200);
    for (double& v : rhs) v = rs.normal();
    const auto rep = cg_solve_report(assemble_sparse(gw, locs, true), rhs, 1e-10);
    CHECK(rep.relative_residual <= 1e-10);
    const auto dense = cholesky(assemble_dense(gw, locs, true)).solve(rhs);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        num = std::max(num, std::fabs(rep.x[i] - dense[i]));
        den = std::max(den, std::fabs(dense[i]));
    }
    CHECK(num / den < 1e-8);
    CHECK_THROWS_AS(cg_solve(assemble_sparse(gw, locs, true), rhs, 1e-14, 1), NumericalError);
}

TEST_CASE("distance matrix packing") {
    const auto locs = uniform_points(17, 7);
    const DistanceMatrix d(locs);
    for (std::size_t i = 0; i < 17; ++i)
        for (std::size_t j = 0; j < 17; ++j) REQUIRE(d(i, j) == (i == j ? 0.0 : locs.distance(i, j)));
    const CovarianceModel gw(GWParams{3.5, 1, 0.5, 1, 2});
    const auto a = assemble_dense(gw, d, true), b = assemble_dense(gw, locs, true);
    for (std::size_t i = 0; i < 17; ++i)
        for (std::size_t j = 0; j < 17; ++j) REQUIRE(a(i, j) == b(i, j));
}

}
