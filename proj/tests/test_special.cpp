#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gwk/error.hpp"
#include "gwk/special.hpp"
#include "oracles.hpp"

using namespace gwk;

TEST_SUITE("special") {

TEST_CASE("bessel_k examples") {
    CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2) * std::exp(-1.0)).epsilon(1e-13));
    CHECK(bessel_k(0.5, 1.0) == doctest::Approx(0.4610685).epsilon(1e-7));
    CHECK(bessel_k(1.5, 2.0) == doctest::Approx(0.1799066).epsilon(1e-6));
    CHECK(std::fabs(bessel_k(1.0, 1.0) - oracle::bessel_k_integral(1.0, 1.0)) < 1e-10);
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), InvalidArgument);
}

TEST_CASE("bessel_k across its accuracy range") {
    for (double nu : {0.1, 0.5, 1.0, 1.37, 2.5, 5.0})
        for (double x : {1e-6, 1e-3, 0.1, 0.9, 1.99, 2.01, 7.5, 30.0, 50.0}) {
            const double ref = std::cyl_bessel_k(nu, x);
            REQUIRE(bessel_k(nu, x) == doctest::Approx(ref).epsilon(1e-10));
        }
    for (double nu : {0.3, 1.0, 2.2})
        for (double x : {0.05, 1.0, 5.0}) CHECK(bessel_k(nu, x) == doctest::Approx(oracle::bessel_k_integral(nu, x)).epsilon(1e-10));
}

TEST_CASE("gamma and beta") {
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(beta_fn(2.0, 4.0) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("hyp1f2") {
    CHECK(hyp1f2(1.7, 2.3, 3.1, 0.0) == 1.0);
    // 1F2(1; 1.5, 2; -z^2/4) closed forms reduce to elementary functions; compare to 50-digit sums instead.
    for (double z : {-0.5, -10.0, -100.0, -900.0, -4000.0, 3.0}) {
        const double ref = oracle::hyp1f2(2.5, 4.0, 4.5, z, 2000);
        REQUIRE(hyp1f2(2.5, 4.0, 4.5, z) == doctest::Approx(ref).epsilon(1e-11).scale(1e-300));
    }
    const auto t = hyp1f2_traced(2.0, 3.5, 4.0, -2500.0);
    CHECK(t.extended_precision);
    CHECK(t.value == doctest::Approx(oracle::hyp1f2(2.0, 3.5, 4.0, -2500.0, 2000)).epsilon(1e-10));
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) == doctest::Approx(2.0 / 3).epsilon(1e-11));
    const double br[] = {0.0, 0.5, 1.0, 2.0};
    CHECK(integrate([](double x) { return std::fabs(x - 0.5); }, br) == doctest::Approx(0.125 + 1.125).epsilon(1e-14));
}

TEST_CASE("bessel_j for the three dimensions") {
    for (double x : {0.1, 1.0, 7.3}) {
        CHECK(bessel_j_half_dim(1, x) == doctest::Approx(std::sqrt(2 / (std::numbers::pi * x)) * std::cos(x)).epsilon(1e-13));
        CHECK(bessel_j_half_dim(2, x) == doctest::Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-13));
        CHECK(bessel_j_half_dim(3, x) == doctest::Approx(std::cyl_bessel_j(0.5, x)).epsilon(1e-13));
    }
}

}
