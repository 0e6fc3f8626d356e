#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace gwk {

/// Generalized Wendland parameters. kappa = 0 is the Askey function.
struct GWParams {
    double mu = 0.0;
    double kappa = 0.0;
    double beta = 1.0;
    double sigma2 = 1.0;
    int d = 2;

    friend bool operator==(const GWParams&, const GWParams&) = default;
};

struct MaternParams {
    double nu = 0.5;
    double alpha = 1.0;
    double sigma2 = 1.0;
    int d = 2;

    friend bool operator==(const MaternParams&, const MaternParams&) = default;
};

/// Matérn covariance multiplied by a GW taper (taper.sigma2 must be 1).
struct TaperedMaternParams {
    MaternParams matern;
    GWParams taper;

    friend bool operator==(const TaperedMaternParams&, const TaperedMaternParams&) = default;
};

using ModelParams = std::variant<GWParams, MaternParams, TaperedMaternParams>;

enum class Family { GW, Askey, Matern, TaperedMatern };

const char* family_name(Family f) noexcept;

/// lambda(d, kappa) = (d + 1)/2 + kappa, the smallest admissible mu.
double gw_lambda(int d, double kappa) noexcept;

/// Empty when the parameters describe a positive definite model on R^d,
/// otherwise a sentence naming the violated bound.
std::optional<std::string> validate(const GWParams& p);
std::optional<std::string> validate(const MaternParams& p);
std::optional<std::string> validate(const TaperedMaternParams& p);
std::optional<std::string> validate(const ModelParams& p);

/// GW correlation phi_{mu,kappa}(r) on the unit support.
///
/// kappa = 0 gives (1 - r)^mu, kappa in {1, 2, 3} the polynomial closed forms,
/// anything else adaptive quadrature of the integrated-by-parts representation.
/// Exactly 0 for r >= 1. Throws InvalidArgument for r < 0 or kappa < 0.
double gw_correlation(double mu, double kappa, double r);

/// Always integrates, whatever kappa is. Used to cross-check the closed forms.
double gw_correlation_quadrature(double mu, double kappa, double r);

/// Piecewise Chebyshev table of phi_{mu,kappa} for fast repeated evaluation.
/// Panels are graded geometrically toward r = 0 and r = 1. Instances are shared
/// through a process-wide cache keyed by (mu, kappa).
class GWTable {
public:
    static const GWTable& get(double mu, double kappa);
    double operator()(double r) const;
    double mu() const noexcept { return mu_; }
    double kappa() const noexcept { return kappa_; }

private:
    GWTable(double mu, double kappa);
    double mu_, kappa_;
    struct Panel {
        double lo, hi;
        double coef[21];
    };
    Panel left_[46];   // [2^-(k+1), 2^-k] for k = 1..46 measured from 0
    Panel right_[46];  // same widths measured back from 1
};

double gw_cov(const GWParams& p, double r);
double matern_cov(const MaternParams& p, double r);
double tapered_matern_cov(const TaperedMaternParams& p, double r);

/// Parametric covariance model, validated at construction.
class CovarianceModel {
public:
    explicit CovarianceModel(ModelParams params);
    static CovarianceModel gw(const GWParams& p) { return CovarianceModel(p); }
    static CovarianceModel matern(const MaternParams& p) { return CovarianceModel(p); }
    static CovarianceModel tapered_matern(const TaperedMaternParams& p) { return CovarianceModel(p); }

    Family family() const noexcept;
    int dim() const noexcept;
    double variance() const noexcept;
    /// Radius beyond which the covariance vanishes; empty for Matérn.
    std::optional<double> support() const noexcept;

    double cov(double r) const;
    double corr(double r) const;

    const ModelParams& params() const noexcept { return params_; }
    const GWParams* as_gw() const noexcept { return std::get_if<GWParams>(&params_); }
    const MaternParams* as_matern() const noexcept { return std::get_if<MaternParams>(&params_); }
    const TaperedMaternParams* as_tapered() const noexcept { return std::get_if<TaperedMaternParams>(&params_); }

    /// Same model with the variance replaced.
    CovarianceModel with_variance(double sigma2) const;

    friend bool operator==(const CovarianceModel& a, const CovarianceModel& b) { return a.params_ == b.params_; }

private:
    ModelParams params_;
    const GWTable* table_ = nullptr;
};

/// {"family": ..., "params": {...}, "dim": d}
std::string to_json(const CovarianceModel& m);
/// Throws ConfigError on malformed JSON and InvalidArgument on invalid parameters.
CovarianceModel model_from_json(std::string_view text);

}  // namespace gwk
