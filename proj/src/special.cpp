#include "gwk/special.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gwk/error.hpp"

namespace gwk {

double gamma_fn(double x) { return std::tgamma(x); }

double log_gamma(double x) { return std::lgamma(x); }

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("beta: arguments must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

// Taylor coefficients of 1/Gamma(z) around 0 (Abramowitz & Stegun 6.1.34), c_1 .. c_19.
constexpr std::array<double, 19> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
};

// Temme's auxiliary functions for |mu| <= 1/2:
// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    const double m2 = mu * mu;
    double even = 0.0, odd = 0.0, p = 1.0;
    // c_{2j+1} feed gam2, c_{2j+2} feed -gam1.
    for (std::size_t j = 0; 2 * j < kRecipGamma.size(); ++j) {
        odd += kRecipGamma[2 * j] * p;
        if (2 * j + 1 < kRecipGamma.size()) even += kRecipGamma[2 * j + 1] * p;
        p *= m2;
    }
    gam1 = -even;
    gam2 = odd;
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
}

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 100000;

}  // namespace

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw InvalidArgument("bessel_k: x must be positive");
    if (!std::isfinite(nu) || !std::isfinite(x)) throw InvalidArgument("bessel_k: non-finite argument");
    nu = std::fabs(nu);  // K_{-nu} = K_nu
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu, rk1;
    if (x < 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = std::numbers::pi * xmu;
        const double fact = std::fabs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fact2 = std::fabs(e) < 1e-15 ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i <= kMaxIter; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
            c *= d / i;
            p /= i - xmu;
            q /= i + xmu;
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::fabs(del) < std::fabs(sum) * kEps) break;
        }
        if (i > kMaxIter) throw NumericalError("bessel_k: series did not converge");
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        // Steed's method for the continued fraction CF2.
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d, delh = d;
        double q1 = 0.0, q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1, c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int i = 2;
        for (; i <= kMaxIter; ++i) {
            a -= 2 * (i - 1);
            c = -a * c / i;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::fabs(dels / s) < kEps) break;
        }
        if (i > kMaxIter) throw NumericalError("bessel_k: continued fraction did not converge");
        h = a1 * h;
        rkmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for (int i = 1; i <= nl; ++i) {
        const double next = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    return rkmu;
}

double bessel_j_half_dim(int d, double x) {
    switch (d) {
        case 1: return std::sqrt(2.0 / (std::numbers::pi * x)) * std::cos(x);
        case 2: return std::cyl_bessel_j(0.0, x);
        case 3: return x == 0.0 ? 0.0 : std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
        default: throw InvalidArgument("bessel_j_half_dim: dimension must be 1, 2 or 3");
    }
}

namespace {

bool nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

class Mpfr {
public:
    explicit Mpfr(long prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    operator mpfr_ptr() { return v_; }

private:
    mpfr_t v_;
};

struct SeriesOutcome {
    double value;
    long terms;
    bool ok;
    bool accurate;
};

SeriesOutcome hyp1f2_mpfr(double a, double b, double c, double z, long max_terms, long prec, double max_term) {
    Mpfr sum(prec), term(prec), num(prec), den(prec), ak(prec), bk(prec), ck(prec), zz(prec), tmp(prec);
    mpfr_set_ui(sum, 1, MPFR_RNDN);
    mpfr_set_ui(term, 1, MPFR_RNDN);
    mpfr_set_d(ak, a, MPFR_RNDN);
    mpfr_set_d(bk, b, MPFR_RNDN);
    mpfr_set_d(ck, c, MPFR_RNDN);
    mpfr_set_d(zz, z, MPFR_RNDN);
    bool past_peak = false;
    long k = 0;
    for (; k < max_terms; ++k) {
        // term_{k+1} = term_k (a+k) z / ((b+k)(c+k)(k+1))
        mpfr_mul(num, ak, zz, MPFR_RNDN);
        mpfr_mul(den, bk, ck, MPFR_RNDN);
        mpfr_mul_ui(den, den, static_cast<unsigned long>(k + 1), MPFR_RNDN);
        mpfr_mul(term, term, num, MPFR_RNDN);
        mpfr_div(term, term, den, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        mpfr_add_ui(ak, ak, 1, MPFR_RNDN);
        mpfr_add_ui(bk, bk, 1, MPFR_RNDN);
        mpfr_add_ui(ck, ck, 1, MPFR_RNDN);
        // Ratio magnitude below one means the terms are now shrinking for good.
        mpfr_abs(tmp, num, MPFR_RNDN);
        mpfr_abs(den, den, MPFR_RNDN);
        if (mpfr_cmp(tmp, den) < 0) past_peak = true;
        if (past_peak) {
            mpfr_abs(tmp, sum, MPFR_RNDN);
            mpfr_mul_d(tmp, tmp, 1e-17, MPFR_RNDN);
            if (mpfr_cmpabs(term, tmp) < 0) {
                ++k;
                break;
            }
        }
    }
    if (k >= max_terms) return {0.0, k, false, false};
    const double value = mpfr_get_d(sum, MPFR_RNDN);
    // Surviving bits after cancellation: prec - log2(max_term / |sum|); demand a safe margin.
    const double lost = std::log2(std::max(max_term, 1.0)) - std::log2(std::fabs(value));
    const bool accurate = value != 0.0 && static_cast<double>(prec) - lost > 60.0;
    return {value, k, true, accurate};
}

}  // namespace

Hyp1F2Trace hyp1f2_traced(double a, double b, double c, double z, long max_terms) {
    if (nonpositive_integer(b) || nonpositive_integer(c))
        throw InvalidArgument("hyp1f2: b and c must not be nonpositive integers");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw InvalidArgument("hyp1f2: non-finite argument");
    Hyp1F2Trace out;
    if (z == 0.0) {
        out.value = 1.0;
        out.max_term = 1.0;
        return out;
    }
    // Double-precision pass with Kahan summation; also measures the largest term.
    double sum = 1.0, comp = 0.0, term = 1.0, max_term = 1.0;
    bool past_peak = false, converged = false, overflow = false;
    long k = 0;
    for (; k < max_terms; ++k) {
        const double num = (a + k) * z;
        const double den = (b + k) * (c + k) * (k + 1);
        term *= num / den;
        if (!std::isfinite(term)) {
            overflow = true;
            break;
        }
        max_term = std::max(max_term, std::fabs(term));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::fabs(num) < std::fabs(den)) past_peak = true;
        if (past_peak && std::fabs(term) < 1e-16 * std::fabs(sum)) {
            ++k;
            converged = true;
            break;
        }
    }
    out.terms = k;
    out.max_term = max_term;
    if (!overflow && !converged)
        throw NumericalError("hyp1f2: series did not converge within " + std::to_string(max_terms) + " terms");
    if (!overflow && max_term <= 64.0 * std::fabs(sum)) {
        out.value = sum;
        return out;
    }
    if (overflow) max_term = std::numeric_limits<double>::max();
    long prec = 64 + static_cast<long>(std::ceil(std::log2(max_term))) + 64;
    for (int attempt = 0; attempt < 8; ++attempt, prec *= 2) {
        const auto r = hyp1f2_mpfr(a, b, c, z, max_terms, prec, max_term);
        if (!r.ok)
            throw NumericalError("hyp1f2: series did not converge within " + std::to_string(max_terms) + " terms");
        out.terms = r.terms;
        out.value = r.value;
        out.extended_precision = true;
        out.precision_bits = prec;
        if (r.accurate) return out;
    }
    throw NumericalError("hyp1f2: cancellation could not be resolved");
}

double hyp1f2(double a, double b, double c, double z, long max_terms) {
    return hyp1f2_traced(a, b, c, z, max_terms).value;
}

namespace {

struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};
    GaussLegendre16() {
        const int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double r = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = r;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (r * p1 - p0) / (r * r - 1.0);
                const double dr = p1 / dp;
                r -= dr;
                if (std::fabs(dr) < 1e-16) break;
            }
            {
                double p0 = 1.0, p1 = r;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (r * p1 - p0) / (r * r - 1.0);
            }
            x[i] = -r;
            x[n - 1 - i] = r;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - r * r) * dp * dp);
        }
    }
};

const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule;
    return rule;
}

double panel(const std::function<double(double)>& f, double a, double b) {
    const auto& g = gl16();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.w[i] * f(m + h * g.x[i]);
    return s * h;
}

constexpr long kPanelBudget = 200000;

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth,
             long& budget) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m);
    const double right = panel(f, m, b);
    budget -= 2;
    const double refined = left + right;
    if (depth <= 0 || budget <= 0 || std::fabs(refined - whole) <= tol || m <= a || m >= b) return refined;
    return adapt(f, a, m, left, tol, depth - 1, budget) + adapt(f, m, b, right, tol, depth - 1, budget);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("integrate: limits must be finite");
    const double whole = panel(f, a, b);
    // Scale from a first refinement so the tolerance tracks the integral rather than one panel.
    const double m = 0.5 * (a + b);
    const double scale = std::fabs(panel(f, a, m) + panel(f, m, b));
    const double tol = std::max({abs_tol, rel_tol * scale, std::numeric_limits<double>::min()});
    long budget = kPanelBudget;
    return adapt(f, a, b, whole, tol, max_depth, budget);
}

double integrate(const std::function<double(double)>& f, std::span<const double> breaks, double rel_tol,
                 double abs_tol, int max_depth) {
    if (breaks.size() < 2) return 0.0;
    std::vector<double> whole(breaks.size() - 1);
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] >= breaks[i])) throw InvalidArgument("integrate: breakpoints must increase");
        whole[i] = panel(f, breaks[i], breaks[i + 1]);
        scale += std::fabs(whole[i]);
    }
    const double tol = std::max({abs_tol, rel_tol * scale / static_cast<double>(whole.size()),
                                 std::numeric_limits<double>::min()});
    long budget = kPanelBudget;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) sum += adapt(f, breaks[i], breaks[i + 1], whole[i], tol, max_depth, budget);
    return sum;
}

}  // namespace gwk
