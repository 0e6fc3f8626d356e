#include "gwk/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gwk/error.hpp"

namespace gwk {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

bool all_zero(std::span<const double> z) {
    return std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; });
}

}  // namespace

double loglik(const CholFactor& corr_factor, std::span<const double> z, double sigma2) {
    if (!(sigma2 > 0.0)) throw InvalidArgument("loglik: sigma2 must be > 0");
    const double n = static_cast<double>(z.size());
    return -0.5 * (n * (kLog2Pi + std::log(sigma2)) + corr_factor.logdet() + corr_factor.quad_form(z) / sigma2);
}

ProfileLikelihood::ProfileLikelihood(const LocationSet& locs, std::vector<double> z, double mu, double kappa)
    : dist_(locs), z_(std::move(z)), mu_(mu), kappa_(kappa), d_(locs.dim()) {
    if (z_.size() != locs.size()) throw InvalidArgument("ProfileLikelihood: data and locations differ in length");
    if (z_.empty()) throw InvalidArgument("ProfileLikelihood: no data");
    if (all_zero(z_)) throw InvalidArgument("ProfileLikelihood: data vector is identically zero");
    // Validates (mu, kappa, d) once.
    (void)correlation_model(1.0);
}

CovarianceModel ProfileLikelihood::correlation_model(double beta) const {
    return CovarianceModel(GWParams{mu_, kappa_, beta, 1.0, d_});
}

ProfileLikelihood::Point ProfileLikelihood::at(double beta) const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("profile likelihood: beta must be > 0");
    const auto f = cholesky(assemble_dense(correlation_model(beta), dist_, true));
    Point p;
    p.beta = beta;
    const double n = static_cast<double>(z_.size());
    p.sigma2_hat = f.quad_form(z_) / n;
    p.logdet = f.logdet();
    p.profile = -0.5 * (n * kLog2Pi + n * std::log(p.sigma2_hat) + p.logdet + n);
    return p;
}

double ProfileLikelihood::loglik(double sigma2, double beta) const {
    const auto f = cholesky(assemble_dense(correlation_model(beta), dist_, true));
    return gwk::loglik(f, z_, sigma2);
}

double loglik(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double sigma2,
              double beta) {
    if (z.size() != locs.size()) throw InvalidArgument("loglik: data and locations differ in length");
    const CovarianceModel m(GWParams{mu, kappa, beta, 1.0, locs.dim()});
    return loglik(cholesky(assemble_dense(m, locs, true)), z, sigma2);
}

double sigma2_hat(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double beta) {
    return ProfileLikelihood(locs, {z.begin(), z.end()}, mu, kappa).sigma2_hat(beta);
}

double profile_loglik(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double beta) {
    return ProfileLikelihood(locs, {z.begin(), z.end()}, mu, kappa).profile(beta);
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw InvalidArgument("maximize_scalar: need 0 < lo <= hi");
    if (!(tol > 0.0)) throw InvalidArgument("maximize_scalar: tol must be > 0");
    ScalarMax out;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    auto eval = [&](double x) {
        double v = neg_inf;
        try {
            v = f(x);
            if (std::isnan(v)) v = neg_inf;
        } catch (const NumericalError&) {
        }
        ++out.evaluations;
        out.trace.emplace_back(x, v);
        return v;
    };
    if (lo == hi) {
        out.x = lo;
        out.fx = eval(lo);
        if (out.fx == neg_inf) throw NumericalError("maximize_scalar: objective fails at the only point");
        return out;
    }
    constexpr int kGrid = 32;
    std::vector<double> xs(kGrid), fs(kGrid);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < kGrid; ++i) {
        xs[i] = i == 0 ? lo : i == kGrid - 1 ? hi : std::exp(llo + (lhi - llo) * i / (kGrid - 1));
        fs[i] = eval(xs[i]);
    }
    const int best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    if (fs[best] == neg_inf) throw NumericalError("maximize_scalar: objective failed at every grid point");
    double a = xs[std::max(best - 1, 0)];
    double b = xs[std::min(best + 1, kGrid - 1)];
    double bx = xs[best], bf = fs[best];

    // Golden section on [a, b].
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = eval(c), fd = eval(d);
    auto keep = [&](double x, double v) {
        if (v > bf) {
            bf = v;
            bx = x;
        }
    };
    keep(c, fc);
    keep(d, fd);
    for (int it = 0; it < 200 && b - a > tol * bx; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c);
            keep(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d);
            keep(d, fd);
        }
    }
    // Parabola through the best point and its two nearest evaluated neighbours.
    {
        double xl = -1.0, xr = -1.0, fl = neg_inf, fr = neg_inf;
        for (const auto& [x, v] : out.trace) {
            if (x < bx && (xl < 0.0 || x > xl) && v > neg_inf) {
                xl = x;
                fl = v;
            }
            if (x > bx && (xr < 0.0 || x < xr) && v > neg_inf) {
                xr = x;
                fr = v;
            }
        }
        if (xl > 0.0 && xr > 0.0) {
            const double p = (bx - xl) * (bx - xl) * (bf - fr) - (bx - xr) * (bx - xr) * (bf - fl);
            const double q = (bx - xl) * (bf - fr) - (bx - xr) * (bf - fl);
            if (q != 0.0) {
                const double xp = bx - 0.5 * p / q;
                if (xp > xl && xp < xr && xp != bx) keep(xp, eval(xp));
            }
        }
    }
    out.x = bx;
    out.fx = bf;
    return out;
}

FitResult fit_profile(const ProfileLikelihood& pl, double beta_lo, double beta_hi, double tol) {
    const auto m = maximize_scalar([&](double beta) { return pl.profile(beta); }, beta_lo, beta_hi, tol);
    FitResult r;
    r.beta_hat = m.x;
    r.sigma2_hat = pl.sigma2_hat(m.x);
    r.microergodic_hat = r.sigma2_hat / std::pow(r.beta_hat, 1.0 + 2.0 * pl.kappa());
    r.loglik = m.fx;
    r.evaluations = m.evaluations;
    r.interval = {beta_lo, beta_hi};
    r.trace = m.trace;
    return r;
}

double microergodic_stat(double sigma2_hat_x, double x, double sigma0sq, double beta0, double kappa,
                         std::size_t n) {
    if (!(sigma2_hat_x > 0.0) || !(x > 0.0) || !(sigma0sq > 0.0) || !(beta0 > 0.0) || n == 0)
        throw InvalidArgument("microergodic_stat: inputs must be positive");
    const double e = 1.0 + 2.0 * kappa;
    const double ratio = sigma2_hat_x * std::pow(beta0 / x, e) / sigma0sq;
    return std::sqrt(0.5 * static_cast<double>(n)) * (ratio - 1.0);
}

}  // namespace gwk
