#pragma once

#include <string>

#include "gwk/covariance.hpp"
#include "gwk/spectral.hpp"

namespace gwk {

enum class MicroFamily { Matern, GW };

/// The consistently estimable combination: sigma^2/alpha^{2 nu} or sigma^2/beta^{1+2 kappa}.
struct Microergodic {
    double value = 0.0;
    MicroFamily family = MicroFamily::GW;
};

Microergodic microergodic_gw(const GWParams& p);
Microergodic microergodic_matern(const MaternParams& p);

struct CompatibilityReport {
    bool equivalent = false;
    std::string condition_checked;
    bool mu_bound_ok = false;
    bool smoothness_match_ok = false;
    /// C_{nu,kappa,mu} (Matérn against GW) or 1 (GW against GW).
    double constant = 1.0;
    /// The two sides of the equality that was compared.
    double lhs = 0.0;
    double rhs = 0.0;
};

std::string to_json(const CompatibilityReport& r);

/// Equivalence of two GW measures sharing mu, kappa and d.
/// Throws Inapplicable when mu, kappa or d differ: the criterion says nothing there.
CompatibilityReport gw_gw_equivalent(const GWParams& p0, const GWParams& p1, double tol = 1e-9);

/// mu Gamma(2 kappa + mu + 1) / Gamma(mu + 1); equals mu at kappa = 0.
double matern_gw_constant(double kappa, double mu);

/// The general constant mu 2^{-d} Gamma(nu) Gamma(kappa) Gamma(2 kappa + d) /
/// (Gamma(nu + d/2) Gamma(kappa + d/2) B(2 kappa, mu + 1)), kappa > 0.
double matern_gw_constant_general(double nu, double kappa, double mu, int d);

/// Matérn against GW: requires nu = kappa + 1/2, mu > lambda + d/2 and
/// sigma_0^2 alpha^{-2 nu} = C sigma_1^2 beta^{-(1+2 kappa)} within tol (relative).
CompatibilityReport matern_gw_equivalent(const MaternParams& pm, const GWParams& pg, double tol = 1e-9);

/// The GW support making GW(kappa, mu, beta, sigma1sq) equivalent to the Matérn model:
/// [C sigma1sq alpha^{2 nu} / sigma_0^2]^{1/(1+2 kappa)}.
/// Throws Inapplicable when nu != kappa + 1/2 or mu <= lambda + d/2.
double equivalent_support(const MaternParams& pm, double kappa, double mu, double sigma1sq);

struct EquivalenceIntegral {
    double c = 0.0;
    double z_max = 0.0;
    double value = 0.0;          ///< int_c^{z_max}
    double value_doubled = 0.0;  ///< int_c^{2 z_max}
    /// (value_doubled - value) / value; small growth suggests convergence.
    double relative_growth = 0.0;
};

/// Truncated int z^{d-1} ((f1 - f0)/f0)^2 dz, a numerical convergence diagnostic only.
EquivalenceIntegral equivalence_integral(const SpectralDensity& sd0, const SpectralDensity& sd1, double c,
                                         double z_max);

}  // namespace gwk
