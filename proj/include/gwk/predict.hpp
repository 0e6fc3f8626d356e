#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gwk/covariance.hpp"
#include "gwk/geometry.hpp"
#include "gwk/linalg.hpp"

namespace gwk {

enum class Solver { Dense, SparseCG };

/// Correlations between s0 and every location under `model`.
std::vector<double> cross_correlation(const CovarianceModel& model, const LocationSet& locs, const Point& s0);

/// Index of a location equal to s0, if any.
std::optional<std::size_t> find_site(const LocationSet& locs, const Point& s0);

/// w = R^{-1} c at correlation level. When s0 is an observed site the weights are
/// the unit vector on that site, so prediction there interpolates exactly.
/// Solver::SparseCG requires a compactly supported model.
std::vector<double> kriging_weights(const CovarianceModel& model, const LocationSet& locs, const Point& s0,
                                    Solver solver = Solver::Dense, double cg_tol = 1e-12);

struct Blup {
    double value = 0.0;
    std::vector<double> weights;
};

/// c' R^{-1} z under `model` (zero-mean field).
Blup blup(std::span<const double> z, const LocationSet& locs, const Point& s0, const CovarianceModel& model,
          Solver solver = Solver::Dense);

/// Second moments of a data-generating model at (locs, s0), factorized once so that
/// several candidate predictors can be scored against it.
class TruthSystem {
public:
    TruthSystem(const CovarianceModel& truth, const LocationSet& locs, const Point& s0);

    const CovarianceModel& model() const noexcept { return truth_; }
    const std::vector<double>& cross() const noexcept { return c0_; }
    /// sigma0^2 (1 - 2 w'c0 + w'R0 w) for a predictor with weights w.
    double mse_of(std::span<const double> w) const;
    /// MSE of the predictor built from the truth itself: sigma0^2 (1 - c0'R0^{-1}c0).
    double optimal_mse() const;
    const std::vector<double>& optimal_weights() const;

private:
    CovarianceModel truth_;
    SymMatrix r0_;
    std::vector<double> c0_;
    std::optional<std::size_t> site_;
    mutable std::vector<double> w0_;
};

struct PredictionResult {
    double predicted = 0.0;
    std::vector<double> weights;
    double mse_true_model = 0.0;
    double mse_assumed_model = 0.0;
};

/// BLUP under `assumed`, scored under both models.
PredictionResult predict(std::span<const double> z, const LocationSet& locs, const Point& s0,
                         const CovarianceModel& true_model, const CovarianceModel& assumed_model);

/// MSE under `true_model` of the BLUP built from `assumed_model`.
double mse_true(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model);

/// sigma1^2 (1 - c'R^{-1}c) under the assumed model; sigma1^2 when there are no data.
double mse_assumed(const LocationSet& locs, const Point& s0, const CovarianceModel& assumed_model);

struct RatioPair {
    double u1 = 1.0;  ///< MSE of the assumed BLUP over MSE of the optimal BLUP, both under the truth
    double u2 = 1.0;  ///< MSE claimed by the assumed model over its actual MSE under the truth
};

/// Both ratios in one pass. Throws NumericalError when a denominator vanishes
/// (s0 observed).
RatioPair ratios(const TruthSystem& truth, const LocationSet& locs, const Point& s0, const CovarianceModel& assumed,
                 Solver solver = Solver::Dense);

double ratio_u1(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model);
double ratio_u2(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model);

struct PlugInRatios {
    double sigma2_hat = 0.0;  ///< z'R^{-1}z / n under the assumed correlation
    double vs_gw = 0.0;       ///< claimed MSE with sigma2_hat over actual MSE under the GW truth
    double vs_matern = 0.0;   ///< the same under the Matérn truth
};

/// Ratios with the assumed variance replaced by its estimate from z.
PlugInRatios plug_in_ratios(std::span<const double> z, const LocationSet& locs, const Point& s0,
                            const CovarianceModel& gw_truth, const CovarianceModel& matern_truth,
                            const CovarianceModel& assumed_gw);

/// Taper paired with a Matérn smoothness for the tapered benchmark:
/// nu = 0.5 -> (mu 2, kappa 0), nu = 1 -> (3, 1), nu = 1.5 -> (4, 2).
/// Throws InvalidArgument for other nu.
GWParams taper_for(double nu, double support, int d = 2);

}  // namespace gwk
