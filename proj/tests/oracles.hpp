#pragma once

// Reference computations used only by the tests. Each one avoids the library code
// path it is compared against.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gwk/geometry.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

/// Composite trapezoid rule with `panels` equal panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long panels) {
    const double h = (b - a) / static_cast<double>(panels);
    long double s = 0.5L * (f(a) + f(b));
    for (long i = 1; i < panels; ++i) s += f(a + h * static_cast<double>(i));
    return static_cast<double>(s * h);
}

/// Composite Simpson rule, `panels` even.
inline double simpson(const std::function<double(double)>& f, double a, double b, long panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    long double s = f(a) + f(b);
    for (long i = 1; i < panels; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(i));
    return static_cast<double>(s * h / 3.0L);
}

/// 1F2 by plain term recursion in 100-digit arithmetic.
inline double hyp1f2(double a, double b, double c, double z, int terms = 400) {
    big term = 1, sum = 1;
    for (int k = 0; k < terms; ++k) {
        term *= (big(a) + k) * big(z) / ((big(b) + k) * (big(c) + k) * (k + 1));
        sum += term;
    }
    return static_cast<double>(sum);
}

/// Dense matrix as row-major vector of rows.
using Mat = std::vector<std::vector<double>>;

/// Gauss-Jordan inverse with partial pivoting; also returns log|det|.
inline Mat inverse(Mat a, double* logdet = nullptr) {
    const std::size_t n = a.size();
    Mat inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    double ld = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (a[p][c] == 0.0) throw std::runtime_error("singular");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const double piv = a[c][c];
        ld += std::log(std::fabs(piv));
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    if (logdet) *logdet = ld;
    return inv;
}

inline std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Pairwise Euclidean distance without the library helpers.
inline double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

/// Matrix of f(distance) over a location set.
inline Mat kernel_matrix(const gwk::LocationSet& locs, const std::function<double(double)>& f) {
    Mat m(locs.size(), std::vector<double>(locs.size()));
    for (std::size_t i = 0; i < locs.size(); ++i)
        for (std::size_t j = 0; j < locs.size(); ++j) m[i][j] = i == j ? f(0.0) : f(dist(locs[i], locs[j]));
    return m;
}

/// GW correlation from the integrated-by-parts representation by trapezoid rule
/// after u = r + (1 - r) s^2, which smooths the (u^2 - r^2)^kappa endpoint.
inline double gw_trapezoid(double mu, double kappa, double r, long panels) {
    if (r >= 1.0) return 0.0;
    const double norm = std::tgamma(1.0 + 2.0 * kappa) * std::tgamma(mu) / std::tgamma(1.0 + 2.0 * kappa + mu);
    auto f = [&](double s) {
        const double u = r + (1.0 - r) * s * s;
        return std::pow(u * u - r * r, kappa) * std::pow(1.0 - u, mu - 1.0) * 2.0 * (1.0 - r) * s;
    };
    return trapezoid(f, 0.0, 1.0, panels) / norm;
}

/// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, trapezoid on a truncated range.
inline double bessel_k_integral(double nu, double x) {
    double tmax = 1.0;
    while (x * std::cosh(tmax) - nu * tmax < 800.0) tmax += 0.5;
    auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); };
    return trapezoid(f, 0.0, tmax, 200000);
}

}  // namespace oracle
