#pragma once

#include <functional>
#include <span>

namespace gwk {

// Gamma family. Thin wrappers over <cmath> so every caller shares one entry point.
double gamma_fn(double x);
double log_gamma(double x);
/// Beta function via log-gamma differences (positive arguments).
double beta_fn(double a, double b);

/// Modified Bessel function of the second kind K_nu(x), nu real, x > 0.
///
/// Temme's series for x < 2 and Steed's continued fraction otherwise, both
/// for the reduced order |mu| <= 1/2, followed by upward recurrence.
/// Throws InvalidArgument for x <= 0.
double bessel_k(double nu, double x);

/// Bessel J of order d/2 - 1 for d in {1, 2, 3}: cos/sin closed forms for the
/// half-integer orders and std::cyl_bessel_j for J_0.
double bessel_j_half_dim(int d, double x);

/// Generalized hypergeometric 1F2(a; b, c; z).
///
/// Power series with Kahan-compensated summation in double precision. When the
/// largest term exceeds the sum by more than ~10^3 (large negative z), the sum is
/// redone in MPFR with enough extra bits to absorb the cancellation.
/// Throws NumericalError if the series has not converged within `max_terms`.
double hyp1f2(double a, double b, double c, double z, long max_terms = 100000);

struct Hyp1F2Trace {
    double value = 0.0;
    long terms = 0;
    double max_term = 0.0;
    bool extended_precision = false;
    long precision_bits = 53;
};
Hyp1F2Trace hyp1f2_traced(double a, double b, double c, double z, long max_terms = 100000);

/// Adaptive Gauss-Legendre quadrature on [a, b].
///
/// A 16-point rule on each panel is compared with the sum over its two halves;
/// panels are split until the two agree to `rel_tol` relative to the running
/// estimate of the whole integral (or `abs_tol`, whichever is looser).
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 0.0, int max_depth = 60);

/// Same rule applied piecewise over consecutive breakpoints, with one tolerance
/// shared across all pieces. Breakpoints must be increasing.
double integrate(const std::function<double(double)>& f, std::span<const double> breaks, double rel_tol = 1e-12,
                 double abs_tol = 0.0, int max_depth = 60);

}  // namespace gwk
