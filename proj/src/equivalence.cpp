#include "gwk/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "gwk/error.hpp"
#include "gwk/special.hpp"

namespace gwk {

Microergodic microergodic_gw(const GWParams& p) {
    if (auto e = validate(p)) throw InvalidArgument("microergodic_gw: " + *e);
    return {p.sigma2 / std::pow(p.beta, 1.0 + 2.0 * p.kappa), MicroFamily::GW};
}

Microergodic microergodic_matern(const MaternParams& p) {
    if (auto e = validate(p)) throw InvalidArgument("microergodic_matern: " + *e);
    return {p.sigma2 / std::pow(p.alpha, 2.0 * p.nu), MicroFamily::Matern};
}

std::string to_json(const CompatibilityReport& r) {
    nlohmann::json j{{"equivalent", r.equivalent},
                     {"condition_checked", r.condition_checked},
                     {"mu_bound_ok", r.mu_bound_ok},
                     {"smoothness_match_ok", r.smoothness_match_ok},
                     {"constant", r.constant},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs}};
    return j.dump(2);
}

namespace {

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

bool mu_bound(double mu, double kappa, int d) { return mu > gw_lambda(d, kappa) + 0.5 * d; }

bool smoothness_matches(double nu, double kappa) { return std::fabs(nu - (kappa + 0.5)) <= 1e-12; }

}  // namespace

CompatibilityReport gw_gw_equivalent(const GWParams& p0, const GWParams& p1, double tol) {
    if (p0.kappa != p1.kappa || p0.mu != p1.mu || p0.d != p1.d)
        throw Inapplicable("GW equivalence criterion needs equal kappa, mu and d");
    const auto m0 = microergodic_gw(p0).value;
    const auto m1 = microergodic_gw(p1).value;
    CompatibilityReport r;
    r.condition_checked = "sigma0^2/beta0^(1+2kappa) = sigma1^2/beta1^(1+2kappa) and mu > lambda + d/2";
    r.smoothness_match_ok = true;
    r.mu_bound_ok = mu_bound(p0.mu, p0.kappa, p0.d);
    r.constant = 1.0;
    r.lhs = m0;
    r.rhs = m1;
    r.equivalent = r.mu_bound_ok && close_rel(m0, m1, tol);
    return r;
}

double matern_gw_constant(double kappa, double mu) {
    if (!(mu > 0.0)) throw InvalidArgument("matern_gw_constant: mu must be > 0");
    if (!(kappa >= 0.0)) throw InvalidArgument("matern_gw_constant: kappa must be >= 0");
    if (kappa == 0.0) return mu;
    return mu * std::exp(log_gamma(2.0 * kappa + mu + 1.0) - log_gamma(mu + 1.0));
}

double matern_gw_constant_general(double nu, double kappa, double mu, int d) {
    if (!(kappa > 0.0)) throw InvalidArgument("matern_gw_constant_general: kappa must be > 0");
    const double lg = log_gamma(nu) + log_gamma(kappa) + log_gamma(2.0 * kappa + d) - log_gamma(nu + 0.5 * d) -
                      log_gamma(kappa + 0.5 * d) - std::log(beta_fn(2.0 * kappa, mu + 1.0));
    return mu * std::ldexp(1.0, -d) * std::exp(lg);
}

CompatibilityReport matern_gw_equivalent(const MaternParams& pm, const GWParams& pg, double tol) {
    if (auto e = validate(pm)) throw InvalidArgument("matern_gw_equivalent: " + *e);
    if (!(pg.beta > 0.0) || !(pg.sigma2 > 0.0) || !(pg.kappa >= 0.0) || !(pg.mu > 0.0))
        throw InvalidArgument("matern_gw_equivalent: GW parameters must be positive");
    if (pm.d != pg.d) throw InvalidArgument("matern_gw_equivalent: dimensions differ");
    CompatibilityReport r;
    r.condition_checked =
        "nu = kappa + 1/2, mu > lambda + d/2 and sigma0^2 alpha^(-2nu) = C sigma1^2 beta^(-(1+2kappa))";
    r.smoothness_match_ok = smoothness_matches(pm.nu, pg.kappa);
    r.mu_bound_ok = mu_bound(pg.mu, pg.kappa, pg.d);
    r.constant = matern_gw_constant(pg.kappa, pg.mu);
    r.lhs = microergodic_matern(pm).value;
    r.rhs = r.constant * pg.sigma2 / std::pow(pg.beta, 1.0 + 2.0 * pg.kappa);
    r.equivalent = r.smoothness_match_ok && r.mu_bound_ok && close_rel(r.lhs, r.rhs, tol);
    return r;
}

double equivalent_support(const MaternParams& pm, double kappa, double mu, double sigma1sq) {
    if (auto e = validate(pm)) throw InvalidArgument("equivalent_support: " + *e);
    if (!(sigma1sq > 0.0)) throw InvalidArgument("equivalent_support: sigma1sq must be > 0");
    if (!smoothness_matches(pm.nu, kappa)) throw Inapplicable("equivalent_support: needs nu = kappa + 1/2");
    if (!mu_bound(mu, kappa, pm.d)) throw Inapplicable("equivalent_support: needs mu > lambda + d/2");
    const double c = matern_gw_constant(kappa, mu);
    const double log_b = std::log(c) + std::log(sigma1sq) + 2.0 * pm.nu * std::log(pm.alpha) - std::log(pm.sigma2);
    return std::exp(log_b / (1.0 + 2.0 * kappa));
}

EquivalenceIntegral equivalence_integral(const SpectralDensity& sd0, const SpectralDensity& sd1, double c,
                                         double z_max) {
    if (!(c > 0.0) || !(z_max > c)) throw InvalidArgument("equivalence_integral: need 0 < c < z_max");
    const int d = sd0.model().dim();
    if (sd1.model().dim() != d) throw InvalidArgument("equivalence_integral: dimensions differ");
    auto f = [&](double z) {
        const double f0 = sd0(z);
        const double q = (sd1(z) - f0) / f0;
        return std::pow(z, d - 1) * q * q;
    };
    // Unit pieces resolve the oscillation of compactly supported densities (period 2 pi / beta).
    auto breaks_for = [](double lo, double hi) {
        const std::size_t n = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(hi - lo)));
        std::vector<double> b(n + 1);
        for (std::size_t i = 0; i <= n; ++i) b[i] = lo + (hi - lo) * static_cast<double>(i) / n;
        return b;
    };
    EquivalenceIntegral out;
    out.c = c;
    out.z_max = z_max;
    const auto b1 = breaks_for(c, z_max);
    const auto b2 = breaks_for(z_max, 2.0 * z_max);
    out.value = integrate(f, b1, 1e-8);
    out.value_doubled = out.value + integrate(f, b2, 1e-8);
    out.relative_growth = out.value > 0.0 ? (out.value_doubled - out.value) / out.value : 0.0;
    return out;
}

}  // namespace gwk
