#include <cmath>

#include "doctest.h"
#include "gwk/equivalence.hpp"
#include "gwk/error.hpp"
#include "gwk/random.hpp"

using namespace gwk;

TEST_SUITE("equivalence") {

TEST_CASE("microergodic values") {
    CHECK(microergodic_gw({3, 0, 1, 2, 2}).value == 2.0);
    CHECK(microergodic_gw({4, 0.5, 2, 1, 2}).value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(microergodic_matern({0.5, 1, 1, 2}).value == 1.0);
    CHECK(microergodic_matern({0.5, 2, 4, 2}).value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(microergodic_matern({0.5, 0.2003, 1, 2}).value == doctest::Approx(4.9925).epsilon(1e-4));
}

TEST_CASE("microergodic orbit invariance") {
    RandomStream rs(8, 0);
    for (int i = 0; i < 200; ++i) {
        const double kappa = rs.uniform(0, 3), t = rs.uniform(0.05, 20);
        const GWParams p{gw_lambda(2, kappa) + 1, kappa, rs.uniform(0.1, 2), rs.uniform(0.1, 3), 2};
        GWParams q = p;
        q.beta *= t;
        q.sigma2 *= std::pow(t, 1 + 2 * kappa);
        REQUIRE(microergodic_gw(q).value == doctest::Approx(microergodic_gw(p).value).epsilon(1e-12));
    }
}

TEST_CASE("gw against gw") {
    const GWParams p0{5, 0.5, 1, 1, 2}, p1{5, 0.5, 2, 4, 2};
    CHECK(gw_gw_equivalent(p0, p1).equivalent);
    CHECK(gw_gw_equivalent(p1, p0).equivalent);
    GWParams p2 = p1;
    p2.sigma2 = 3;
    CHECK_FALSE(gw_gw_equivalent(p0, p2).equivalent);
    CHECK(gw_gw_equivalent(p0, p2).mu_bound_ok);
    // lambda + d/2 = 3 for kappa = 0.5, d = 2.
    const GWParams b0{3, 0.5, 1, 1, 2}, b1{3, 0.5, 1, 1, 2};
    CHECK_FALSE(gw_gw_equivalent(b0, b1).mu_bound_ok);
    CHECK_FALSE(gw_gw_equivalent(b0, b1).equivalent);
    CHECK_THROWS_AS(gw_gw_equivalent(p0, GWParams{5, 1, 1, 1, 2}), Inapplicable);
    CHECK_THROWS_AS(gw_gw_equivalent(p0, GWParams{6, 0.5, 1, 1, 2}), Inapplicable);
    CHECK_THROWS_AS(gw_gw_equivalent(p0, GWParams{5, 0.5, 1, 1, 3}), Inapplicable);
}

TEST_CASE("gw against gw is symmetric") {
    RandomStream rs(81, 0);
    for (int i = 0; i < 100; ++i) {
        const double kappa = rs.uniform(0, 2), mu = gw_lambda(2, kappa) + rs.uniform(0, 3);
        const GWParams a{mu, kappa, rs.uniform(0.1, 2), rs.uniform(0.1, 2), 2};
        GWParams b{mu, kappa, rs.uniform(0.1, 2), 0, 2};
        b.sigma2 = i % 2 ? a.sigma2 * std::pow(b.beta / a.beta, 1 + 2 * kappa) : rs.uniform(0.1, 2);
        REQUIRE(gw_gw_equivalent(a, b).equivalent == gw_gw_equivalent(b, a).equivalent);
    }
}

TEST_CASE("constants") {
    CHECK(matern_gw_constant(0, 3) == 3.0);
    CHECK(matern_gw_constant(0, 4.37) == 4.37);
    CHECK(matern_gw_constant(1, 3) == doctest::Approx(60).epsilon(1e-13));
    CHECK(matern_gw_constant(0.5, 4) == doctest::Approx(20).epsilon(1e-13));
    for (double kappa : {0.5, 1.0, 2.0})
        for (double mu : {3.5, 5.0}) {
            CHECK(matern_gw_constant_general(kappa + 0.5, kappa, mu, 2) ==
                  doctest::Approx(matern_gw_constant(kappa, mu)).epsilon(1e-11));
        }
}

TEST_CASE("matern against gw") {
    auto r = matern_gw_equivalent({0.5, 0.2, 1, 2}, {3, 0, 0.6, 1, 2});
    CHECK(r.equivalent);
    CHECK(r.lhs == doctest::Approx(5).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(5).epsilon(1e-14));
    r = matern_gw_equivalent({1, 0.2, 1, 2}, {3, 0, 0.6, 1, 2});
    CHECK_FALSE(r.smoothness_match_ok);
    CHECK_FALSE(r.equivalent);
    r = matern_gw_equivalent({0.5, 0.2, 1, 2}, {1.4, 0, 0.6, 1, 2});
    CHECK_FALSE(r.mu_bound_ok);
    CHECK_FALSE(r.equivalent);
}

TEST_CASE("equivalent support examples") {
    CHECK(equivalent_support({0.5, 0.6 / std::log(20.0), 1, 2}, 0, 3, 1) == doctest::Approx(0.601).epsilon(0.002 / 0.601));
    for (double x : {0.1, 0.37, 2.0}) CHECK(equivalent_support({0.5, x / 3, 1, 2}, 0, 3, 1) == doctest::Approx(x).epsilon(1e-14));
    CHECK_THROWS_AS(equivalent_support({1.0, 0.1, 1, 2}, 0, 3, 1), Inapplicable);
    CHECK_THROWS_AS(equivalent_support({0.5, 0.1, 1, 2}, 0, 2.5, 1), Inapplicable);
}

TEST_CASE("equivalent support round trip") {
    RandomStream rs(4, 4);
    for (int i = 0; i < 100; ++i) {
        const double kappa = 0.5 * static_cast<double>(rs.below(5));
        const int d = 1 + static_cast<int>(rs.below(3));
        const double mu = gw_lambda(d, kappa) + 0.5 * d + rs.uniform(0.01, 4);
        const MaternParams pm{kappa + 0.5, rs.uniform(0.01, 1), rs.uniform(0.1, 5), d};
        const double s1 = rs.uniform(0.1, 5);
        const double beta = equivalent_support(pm, kappa, mu, s1);
        REQUIRE(matern_gw_equivalent(pm, {mu, kappa, beta, s1, d}, 1e-12).equivalent);
    }
}

TEST_CASE("equivalence integral diagnostic") {
    const SpectralDensity a(CovarianceModel(GWParams{5, 0.5, 1, 1, 2}));
    const auto same = equivalence_integral(a, a, 1, 20);
    CHECK(same.value == 0.0);
    CHECK(same.value_doubled == 0.0);
    const SpectralDensity b(CovarianceModel(GWParams{5, 0.5, 2, 4, 2}));
    const auto eq = equivalence_integral(a, b, 10, 40);
    CHECK(eq.relative_growth < 0.05);
    const SpectralDensity c(CovarianceModel(GWParams{5, 0.5, 2, 3, 2}));
    const auto ne = equivalence_integral(a, c, 10, 40);
    // Density ratio tends to 3/4, so the integrand grows like z and the doubled range adds about three times the value.
    CHECK(ne.relative_growth > 2.0);
}

}
