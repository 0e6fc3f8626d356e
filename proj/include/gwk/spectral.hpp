#pragma once

#include <optional>

#include "gwk/covariance.hpp"

namespace gwk {

/// Constants of the closed-form GW spectral density for varsigma = (mu, kappa, d).
struct SpectralConstants {
    double mu = 0.0, kappa = 0.0;
    int d = 0;
    double lambda = 0.0;
    double L = 0.0;
    double K = 0.0;
    double c3 = 0.0, c4 = 0.0, c5 = 0.0;
};

SpectralConstants spectral_constants(double mu, double kappa, int d);

/// Matérn spectral density Gamma(nu+d/2)/(pi^{d/2} Gamma(nu)) sigma^2 alpha^d (1+alpha^2 z^2)^{-(nu+d/2)}.
double matern_sd(const MaternParams& p, double z);

/// GW spectral density sigma^2 L beta^d 1F2(lambda; lambda+mu/2, lambda+mu/2+1/2; -(z beta)^2/4).
/// For kappa = 0, L equals K. Throws NumericalError where the series gives up.
double gw_sd(const GWParams& p, double z);

/// Leading large-z behaviour of gw_sd: the algebraic c3 term plus the oscillating c4 term.
double gw_sd_asymptotic(const GWParams& p, double z);

/// Spectral density of a GW, Askey or Matérn model with its constants precomputed.
class SpectralDensity {
public:
    explicit SpectralDensity(const CovarianceModel& model);
    double operator()(double z) const;
    const CovarianceModel& model() const noexcept { return model_; }
    /// Present for the GW family only.
    const std::optional<SpectralConstants>& constants() const noexcept { return constants_; }

private:
    CovarianceModel model_;
    std::optional<SpectralConstants> constants_;
};

/// Isotropic Fourier transform by direct quadrature of the Hankel integral
/// z^{1-d/2} (2 pi)^{-d/2} int_0^inf u^{d/2} J_{d/2-1}(u z) phi(u) du.
/// Compactly supported models integrate over [0, beta]; Matérn is cut where phi < 1e-14.
double hankel_oracle(const CovarianceModel& model, double z);

/// phi(0) recovered from a spectral density: 2 pi^{d/2}/Gamma(d/2) int_0^inf z^{d-1} f(z) dz.
double inverse_hankel_at_zero(const SpectralDensity& sd);

/// Least-squares slope of log gw_sd against log z on 50 log-spaced points of [z_lo, z_hi].
double tail_slope(const GWParams& p, double z_lo, double z_hi);

}  // namespace gwk
