#include "gwk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gwk/error.hpp"
#include "gwk/special.hpp"

namespace gwk {

SpectralConstants spectral_constants(double mu, double kappa, int d) {
    if (d < 1 || d > 3) throw InvalidArgument("spectral_constants: d must be 1, 2 or 3");
    if (!(kappa >= 0.0)) throw InvalidArgument("spectral_constants: kappa must be >= 0");
    SpectralConstants c;
    c.mu = mu;
    c.kappa = kappa;
    c.d = d;
    c.lambda = gw_lambda(d, kappa);
    const double lam = c.lambda;
    const double log_k = (-kappa - d + 1.0) * std::numbers::ln2 - 0.5 * d * std::log(std::numbers::pi) +
                         log_gamma(mu + 1.0) + log_gamma(2.0 * kappa + d) - log_gamma(kappa + 0.5 * d) -
                         log_gamma(mu + 2.0 * lam);
    c.K = std::exp(log_k);
    // K Gamma(kappa) / (2^{1-kappa} B(2 kappa, mu+1)) rewritten with the duplication formula,
    // which keeps the kappa -> 0 limit (L = K) finite.
    const double log_l = log_k + 0.5 * std::log(std::numbers::pi) - kappa * std::numbers::ln2 +
                         log_gamma(2.0 * kappa + mu + 1.0) - log_gamma(kappa + 0.5) - log_gamma(mu + 1.0);
    c.L = std::exp(log_l);
    c.c3 = std::exp(log_gamma(mu + 2.0 * lam) - log_gamma(mu));
    c.c4 = std::exp(log_gamma(mu + 2.0 * lam) - log_gamma(lam) - (lam - 1.0) * std::numbers::ln2);
    c.c5 = 0.5 * std::numbers::pi * (mu + lam);
    return c;
}

double matern_sd(const MaternParams& p, double z) {
    if (auto e = validate(p)) throw InvalidArgument("matern_sd: " + *e);
    if (!(z >= 0.0)) throw InvalidArgument("matern_sd: z must be >= 0");
    const double h = 0.5 * p.d;
    const double log_c = log_gamma(p.nu + h) - h * std::log(std::numbers::pi) - log_gamma(p.nu);
    const double az = p.alpha * z;
    return std::exp(log_c) * p.sigma2 * std::pow(p.alpha, p.d) * std::pow(1.0 + az * az, -(p.nu + h));
}

namespace {

double gw_sd_with(const GWParams& p, const SpectralConstants& c, double z) {
    if (!(z >= 0.0)) throw InvalidArgument("gw_sd: z must be >= 0");
    const double zb = z * p.beta;
    const double a = c.lambda;
    const double b = c.lambda + 0.5 * p.mu;
    const double f = hyp1f2(a, b, b + 0.5, -0.25 * zb * zb);
    return p.sigma2 * c.L * std::pow(p.beta, p.d) * f;
}

}  // namespace

double gw_sd(const GWParams& p, double z) {
    if (auto e = validate(p)) throw InvalidArgument("gw_sd: " + *e);
    return gw_sd_with(p, spectral_constants(p.mu, p.kappa, p.d), z);
}

double gw_sd_asymptotic(const GWParams& p, double z) {
    if (auto e = validate(p)) throw InvalidArgument("gw_sd_asymptotic: " + *e);
    if (!(z > 0.0)) throw InvalidArgument("gw_sd_asymptotic: z must be > 0");
    const auto c = spectral_constants(p.mu, p.kappa, p.d);
    const double zb = z * p.beta;
    const double main = c.c3 * std::pow(zb, -2.0 * c.lambda);
    const double wave = c.c4 * std::pow(zb, -(p.mu + c.lambda)) * std::cos(zb - c.c5);
    return p.sigma2 * c.L * std::pow(p.beta, p.d) * (main + wave);
}

SpectralDensity::SpectralDensity(const CovarianceModel& model) : model_(model) {
    if (auto g = model.as_gw()) constants_ = spectral_constants(g->mu, g->kappa, g->d);
    else if (!model.as_matern())
        throw InvalidArgument("spectral density is available for GW, Askey and Matérn models only");
}

double SpectralDensity::operator()(double z) const {
    if (auto g = model_.as_gw()) return gw_sd_with(*g, *constants_, z);
    return matern_sd(*model_.as_matern(), z);
}

namespace {

double matern_cutoff(const CovarianceModel& model) {
    double r = model.as_matern()->alpha;
    while (model.corr(r) >= 1e-14) r *= 2.0;
    return r;
}

}  // namespace

double hankel_oracle(const CovarianceModel& model, double z) {
    if (!(z > 0.0)) throw InvalidArgument("hankel_oracle: z must be > 0");
    const int d = model.dim();
    const double upper = model.support() ? *model.support() : matern_cutoff(model);
    const double h = 0.5 * d;
    auto f = [&](double u) { return std::pow(u, h) * bessel_j_half_dim(d, u * z) * model.cov(u); };
    // One piece per half period of the Bessel factor, so no panel straddles many sign changes.
    const double step = std::numbers::pi / z;
    const std::size_t pieces = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(upper / step)));
    std::vector<double> breaks(pieces + 1);
    for (std::size_t i = 0; i <= pieces; ++i) breaks[i] = upper * static_cast<double>(i) / pieces;
    const double integral = integrate(f, breaks, 1e-13);
    return std::pow(z, 1.0 - h) * std::pow(2.0 * std::numbers::pi, -h) * integral;
}

double inverse_hankel_at_zero(const SpectralDensity& sd) {
    const int d = sd.model().dim();
    const double h = 0.5 * d;
    auto f = [&](double z) { return std::pow(z, d - 1) * sd(z); };
    // Geometric pieces carry the algebraic tail out to 2^40.
    std::vector<double> breaks{0.0};
    for (int j = -10; j <= 40; ++j) breaks.push_back(std::ldexp(1.0, j));
    const double integral = integrate(f, breaks, 1e-12);
    return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h) * integral;
}

double tail_slope(const GWParams& p, double z_lo, double z_hi) {
    if (!(z_lo > 0.0) || !(z_hi > z_lo)) throw InvalidArgument("tail_slope: need 0 < z_lo < z_hi");
    if (auto e = validate(p)) throw InvalidArgument("tail_slope: " + *e);
    const auto c = spectral_constants(p.mu, p.kappa, p.d);
    constexpr int n = 50;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(z_lo) + (std::log(z_hi) - std::log(z_lo)) * i / (n - 1);
        const double v = gw_sd_with(p, c, std::exp(x));
        if (!(v > 0.0)) throw NumericalError("tail_slope: nonpositive density value");
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gwk
