#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwk/geometry.hpp"

namespace gwk {

struct GridConfig {
    double increment = 0.03;
    double jitter = 0.01;
    std::uint64_t seed = 1;
};

/// One x at which sigma2_hat(x) is evaluated: the joint ML estimate of beta, or a
/// fixed multiple of beta0.
struct XVariant {
    bool beta_hat = false;
    double multiplier = 1.0;
    std::string label() const;
};

struct MicroergodicStudyConfig {
    double beta0 = 0.4;
    std::vector<double> kappas{0.0};
    std::vector<std::size_t> ns{500};
    int replicates = 200;
    double sigma0sq = 1.0;
    double mu_offset = 3.0;  ///< mu = lambda(2, kappa) + mu_offset
    std::vector<XVariant> x_variants;
    double beta_lo = 1e-6;
    double beta_hi_factor = 15.0;  ///< upper end of the search interval, in units of beta0
    double tol = 1e-6;
    GridConfig grid;
    std::uint64_t seed = 20180101;
    int threads = 1;
    /// Largest tolerated fraction of failed replicates per cell.
    double max_failure_fraction = 0.01;
};

struct RatioStudyConfig {
    std::vector<double> nus{0.5};
    /// Practical ranges per entry of nus.
    std::vector<std::vector<double>> ys{{0.1}};
    std::vector<std::size_t> ns{50, 250};
    int subsets = 100;
    std::array<double, 2> s0{0.26, 0.48};
    double mu_offset = 1.5;  ///< mu = lambda(2, kappa) + mu_offset, kappa = nu - 1/2
    std::vector<double> multipliers{1.0, 0.5, 2.0};
    double sigma2 = 1.0;
    GridConfig grid;
    std::uint64_t seed = 20180202;
    int threads = 1;
    double max_failure_fraction = 0.01;
};

/// Throws ConfigError on malformed or inconsistent input.
MicroergodicStudyConfig parse_microergodic_config(const std::string& json_text);
RatioStudyConfig parse_ratio_config(const std::string& json_text);
std::string to_json(const MicroergodicStudyConfig& cfg);
std::string to_json(const RatioStudyConfig& cfg);

/// Sample quantiles at 5, 25, 50, 75, 95 %, mean and unbiased variance.
struct Summary {
    std::array<double, 5> quantiles{};
    double mean = 0.0;
    double variance = 0.0;
    std::size_t count = 0;

    friend bool operator==(const Summary&, const Summary&) = default;
};

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
double quantile_type7(const std::vector<double>& sorted, double p);
/// Variance is 0 for fewer than two values.
Summary summarize(std::vector<double> values);
/// The N(0, 1) row the statistics are compared against.
Summary standard_normal_summary();
double normal_cdf(double x);
double normal_quantile(double p);

/// Distance c at which the unit Matérn correlation with smoothness nu drops to 0.05.
double practical_range_constant(double nu);

struct MicroergodicCell {
    double kappa = 0.0;
    double mu = 0.0;
    std::size_t n = 0;
    std::string x;
    int replicates = 0;
    int failures = 0;
    Summary summary;
    std::vector<double> sorted_stats;

    friend bool operator==(const MicroergodicCell&, const MicroergodicCell&) = default;
};

struct RatioCell {
    double nu = 0.0;
    double y = 0.0;
    double alpha = 0.0;
    double beta_star = 0.0;
    double mu = 0.0;
    std::size_t n = 0;
    double multiplier = 1.0;
    int subsets = 0;
    int failures = 0;
    double u1 = 0.0;
    double u2 = 0.0;
    double u1_taper = 0.0;
    double u2_taper = 0.0;
    /// Mean percentage of nonzero covariance entries at support multiplier * beta_star, diagonal included.
    double nonzero_pct = 0.0;

    friend bool operator==(const RatioCell&, const RatioCell&) = default;
};

struct StudyReport {
    std::string kind;  ///< "microergodic" or "ratios"
    std::vector<MicroergodicCell> micro;
    std::vector<RatioCell> ratio;
    double runtime_seconds = 0.0;
    int threads = 1;
    std::string config_json;
};

using Progress = std::function<void(const std::string&)>;

/// Cells are ordered kappa, n, x as listed in the config. Replicate r of sample size n
/// uses the same subset and the same normal draws for every kappa.
/// Throws NumericalError when a cell loses more than the tolerated fraction of replicates.
StudyReport run_microergodic_study(const MicroergodicStudyConfig& cfg, const Progress& progress = {});

/// Cells are ordered nu, y, n, multiplier. Subset j of size n is shared by every model
/// variant and every (nu, y).
StudyReport run_ratio_study(const RatioStudyConfig& cfg, const Progress& progress = {});

/// Writes <prefix>.csv (one row per cell), <prefix>_cdf.csv (sorted statistics with
/// empirical and N(0,1) CDF, microergodic studies only) and <prefix>.json (metadata).
void emit_report(const StudyReport& r, const std::string& prefix);
/// Reads back what emit_report wrote.
StudyReport parse_report(const std::string& prefix);

}  // namespace gwk
