#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gwk/covariance.hpp"
#include "gwk/geometry.hpp"
#include "gwk/linalg.hpp"

namespace gwk {

/// Gaussian log-likelihood of z under sigma2 R, given the Cholesky factor of R:
/// -1/2 (n log(2 pi sigma2) + log|R| + z^T R^{-1} z / sigma2).
double loglik(const CholFactor& corr_factor, std::span<const double> z, double sigma2);

/// Likelihood of zero-mean data under GW correlation with fixed (mu, kappa) as a
/// function of the support beta. Pairwise distances are computed once.
class ProfileLikelihood {
public:
    ProfileLikelihood(const LocationSet& locs, std::vector<double> z, double mu, double kappa);

    struct Point {
        double beta = 0.0;
        double sigma2_hat = 0.0;  ///< z^T R(beta)^{-1} z / n
        double logdet = 0.0;      ///< log |R(beta)|
        double profile = 0.0;     ///< -1/2 (n log 2 pi + n log sigma2_hat + log|R| + n)
    };

    /// Throws NotPositiveDefinite when R(beta) cannot be factorized.
    Point at(double beta) const;
    double loglik(double sigma2, double beta) const;
    double sigma2_hat(double beta) const { return at(beta).sigma2_hat; }
    double profile(double beta) const { return at(beta).profile; }

    std::size_t n() const noexcept { return z_.size(); }
    double mu() const noexcept { return mu_; }
    double kappa() const noexcept { return kappa_; }
    const std::vector<double>& data() const noexcept { return z_; }
    CovarianceModel correlation_model(double beta) const;

private:
    DistanceMatrix dist_;
    std::vector<double> z_;
    double mu_, kappa_;
    int d_;
};

/// Convenience forms over a one-off ProfileLikelihood.
double loglik(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double sigma2,
              double beta);
double sigma2_hat(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double beta);
double profile_loglik(const LocationSet& locs, std::span<const double> z, double mu, double kappa, double beta);

struct ScalarMax {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
    std::vector<std::pair<double, double>> trace;
};

/// Maximizes f on [lo, hi]: 32 log-spaced grid points, golden section inside
/// the bracket around the best one until the bracket is below tol * x, then one
/// parabolic step kept only if it improves. f may throw NumericalError; such
/// points count as -infinity. Throws NumericalError if every grid point fails.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-6);

struct FitResult {
    double sigma2_hat = 0.0;
    double beta_hat = 0.0;
    double microergodic_hat = 0.0;
    double loglik = 0.0;
    int evaluations = 0;
    std::pair<double, double> interval{0.0, 0.0};
    std::vector<std::pair<double, double>> trace;
};

/// Maximum likelihood for (sigma2, beta) with beta restricted to [beta_lo, beta_hi].
FitResult fit_profile(const ProfileLikelihood& pl, double beta_lo, double beta_hi, double tol = 1e-6);

/// sqrt(n/2) (sigma2_hat beta0^{1+2 kappa} / (sigma0sq x^{1+2 kappa}) - 1).
double microergodic_stat(double sigma2_hat_x, double x, double sigma0sq, double beta0, double kappa, std::size_t n);

}  // namespace gwk
