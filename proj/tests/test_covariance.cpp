#include <cmath>

#include "doctest.h"
#include "gwk/covariance.hpp"
#include "gwk/error.hpp"
#include "gwk/linalg.hpp"
#include "gwk/random.hpp"
#include "gwk/special.hpp"
#include "oracles.hpp"

using namespace gwk;

TEST_SUITE("covariance") {

TEST_CASE("closed-form examples") {
    CHECK(gw_correlation(4, 1, 0.5) == doctest::Approx(0.109375).epsilon(1e-14));
    for (double kappa : {0.0, 0.5, 1.0, 1.7, 3.0}) CHECK(gw_correlation(kappa + 3, kappa, 0.0) == 1.0);
    CHECK(gw_cov({3, 0, 2, 1, 2}, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(gw_cov({3, 0, 2, 1.7, 2}, 0.0) == 1.7);
    CHECK(gw_cov({4, 1, 0.3, 2, 2}, 0.3) == 0.0);
    CHECK(gw_cov({4, 1, 0.3, 2, 2}, 0.31) == 0.0);
    CHECK(gw_correlation(4, 2.5, 1.0) == 0.0);
}

TEST_CASE("general kappa agrees with a dense trapezoid oracle") {
    const double v = gw_correlation(4, 0.5, 0.3);
    CHECK(std::fabs(v - oracle::gw_trapezoid(4, 0.5, 0.3, 1000000)) < 1e-10);
    for (double kappa : {0.25, 1.5, 2.25})
        for (double r : {0.05, 0.4, 0.85}) {
            const double mu = gw_lambda(2, kappa) + 1.0;
            CHECK(std::fabs(gw_correlation(mu, kappa, r) - oracle::gw_trapezoid(mu, kappa, r, 200000)) < 1e-9);
        }
}

TEST_CASE("closed forms agree with quadrature") {
    for (double kappa : {0.0, 1.0, 2.0, 3.0})
        for (double mu : {gw_lambda(2, kappa), gw_lambda(2, kappa) + 2.3})
            for (int i = 1; i <= 99; i += 7) {
                const double r = i / 100.0;
                REQUIRE(std::fabs(gw_correlation(mu, kappa, r) - gw_correlation_quadrature(mu, kappa, r)) < 1e-9);
            }
}

TEST_CASE("quadrature matches the singular-kernel definition for kappa >= 1") {
    // phi(r) = B(2k, mu+1)^{-1} int_r^1 u (u^2-r^2)^{k-1} (1-u)^mu du has a bounded integrand once k >= 1.
    for (double kappa : {1.0, 1.5, 2.0}) {
        const double mu = gw_lambda(2, kappa) + 0.5;
        const double b = std::tgamma(2 * kappa) * std::tgamma(mu + 1) / std::tgamma(2 * kappa + mu + 1);
        for (double r : {0.1, 0.5, 0.9}) {
            auto f = [&](double u) { return u * std::pow(u * u - r * r, kappa - 1) * std::pow(1 - u, mu); };
            CHECK(gw_correlation(mu, kappa, r) == doctest::Approx(oracle::simpson(f, r, 1.0, 400000) / b).epsilon(1e-8));
        }
    }
}

TEST_CASE("gw correlation is nonincreasing") {
    for (double kappa : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double mu = gw_lambda(2, kappa);
        double prev = 1.0;
        for (int i = 1; i <= 1000; ++i) {
            const double v = gw_correlation(mu, kappa, i / 1000.0);
            REQUIRE(v <= prev + 1e-15);
            REQUIRE(v >= 0.0);
            prev = v;
        }
    }
}

TEST_CASE("slope at the origin") {
    const double h = 1e-6;
    CHECK((gw_correlation(3, 0, h) - 1.0) / h == doctest::Approx(-3.0).epsilon(1e-5));
    for (double kappa : {1.0, 2.0, 3.0}) CHECK(std::fabs((gw_correlation(kappa + 3, kappa, h) - 1.0) / h) < 1e-4);
}

TEST_CASE("matern examples") {
    CHECK(matern_cov({0.5, 1, 1, 2}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(matern_cov({0.5, 1, 1, 2}, 1.0) == doctest::Approx(0.3678794).epsilon(1e-7));
    CHECK(matern_cov({1.5, 1, 1, 2}, 1.0) == doctest::Approx(0.7357589).epsilon(1e-7));
    CHECK(matern_cov({1.3, 0.2, 2.5, 2}, 0.0) == 2.5);
}

TEST_CASE("matern half-integer closed forms match the bessel path") {
    for (double nu : {0.5, 1.5, 2.5})
        for (double r : {0.01, 0.3, 1.0, 4.0}) {
            const double x = r / 0.7;
            const double generic = 1.3 * std::pow(2.0, 1 - nu) / std::tgamma(nu) * std::pow(x, nu) * bessel_k(nu, x);
            CHECK(matern_cov({nu, 0.7, 1.3, 2}, r) == doctest::Approx(generic).epsilon(1e-10));
        }
}

TEST_CASE("tapered matern") {
    TaperedMaternParams p{{0.5, 1, 1, 2}, {2, 0, 0.5, 1, 2}};
    CHECK(tapered_matern_cov(p, 0.25) == doctest::Approx(0.1947002).epsilon(1e-6));
    CHECK(tapered_matern_cov(p, 0.25) == doctest::Approx(std::exp(-0.25) * 0.25).epsilon(1e-14));
    CHECK(tapered_matern_cov(p, 0.0) == 1.0);
    CHECK(tapered_matern_cov(p, 0.5) == 0.0);
    CHECK(tapered_matern_cov(p, 0.7) == 0.0);
    CHECK(CovarianceModel(p).support() == 0.5);
}

TEST_CASE("validation bounds") {
    CHECK_FALSE(validate(GWParams{2.5, 1, 1, 1, 2}).has_value());
    CHECK(validate(GWParams{2.4, 1, 1, 1, 2}).has_value());
    CHECK(validate(GWParams{1, 0, 1, 1, 2}).has_value());
    CHECK_FALSE(validate(GWParams{1.5, 0, 1, 1, 2}).has_value());
    CHECK_FALSE(validate(MaternParams{0.3, 1, 1, 2}).has_value());
    CHECK(validate(MaternParams{0.0, 1, 1, 2}).has_value());
    CHECK(validate(GWParams{3, 0, -1, 1, 2}).has_value());
    CHECK(validate(GWParams{3, 0, 1, 0, 2}).has_value());
    CHECK(validate(TaperedMaternParams{{0.5, 1, 1, 2}, {2, 0, 0.5, 2, 2}}).has_value());
    CHECK_THROWS_AS(CovarianceModel(GWParams{1, 0, 1, 1, 2}), InvalidArgument);
    CHECK_THROWS_AS(gw_correlation(3, -0.5, 0.2), InvalidArgument);
    CHECK_THROWS_AS(gw_correlation(3, 0, -0.1), InvalidArgument);
}

TEST_CASE("covariance matrices on random points are positive definite") {
    RandomStream rs(31, 0);
    std::vector<double> c(2 * 200);
    for (double& v : c) v = rs.uniform();
    const LocationSet locs(c, 2);
    const std::vector<ModelParams> models{
        GWParams{1.5, 0, 0.3, 1, 2},         GWParams{2.5, 1, 0.3, 1, 2},    GWParams{2.0, 0.5, 0.5, 2, 2},
        GWParams{4.5, 3, 0.2, 1, 2},         MaternParams{0.5, 0.1, 1, 2},   MaternParams{1.0, 0.05, 1, 2},
        TaperedMaternParams{{1.5, 0.05, 1, 2}, {4, 2, 0.3, 1, 2}}};
    for (const auto& p : models) {
        const CovarianceModel m(p);
        CHECK_NOTHROW(cholesky(assemble_dense(m, locs, false)));
    }
}

TEST_CASE("model json round trip") {
    const std::vector<ModelParams> models{GWParams{3.5, 0.5, 0.2, 1.5, 2}, GWParams{3, 0, 0.4, 1, 2},
                                          MaternParams{1, 0.03, 2, 3},
                                          TaperedMaternParams{{0.5, 0.1, 1, 2}, {2, 0, 0.2, 1, 2}}};
    for (const auto& p : models) {
        const CovarianceModel m(p);
        CHECK(model_from_json(to_json(m)) == m);
    }
    CHECK(CovarianceModel(GWParams{3, 0, 0.4, 1, 2}).family() == Family::Askey);
    CHECK_THROWS_AS(model_from_json("{"), ConfigError);
    CHECK_THROWS_AS(model_from_json(R"({"family":"spherical","params":{},"dim":2})"), ConfigError);
    CHECK_THROWS_AS(model_from_json(R"({"family":"gw","params":{"mu":1,"kappa":0,"beta":1,"sigma2":1},"dim":2})"),
                    InvalidArgument);
}

TEST_CASE("cached table matches direct evaluation") {
    for (double kappa : {0.0, 0.5, 1.0, 1.5, 2.5}) {
        const CovarianceModel m(GWParams{gw_lambda(2, kappa) + 1.5, kappa, 0.3, 1, 2});
        for (int i = 0; i <= 600; ++i) {
            const double r = i * 0.0005;
            REQUIRE(std::fabs(m.corr(r) - gw_correlation(gw_lambda(2, kappa) + 1.5, kappa, r / 0.3)) < 1e-12);
        }
    }
}

}
