#include "gwk/predict.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwk/error.hpp"

namespace gwk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_dims(const CovarianceModel& model, const LocationSet& locs, const Point& s0) {
    if (s0.dim() != model.dim()) throw InvalidArgument("prediction point and model differ in dimension");
    if (locs.size() > 0 && locs.dim() != model.dim())
        throw InvalidArgument("locations and model differ in dimension");
}

std::vector<double> unit(std::size_t n, std::size_t i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    return e;
}

double claimed_mse(std::span<const double> c, std::span<const double> w, double sigma2) {
    return std::max(sigma2 * (1.0 - dot(c, w)), 0.0);
}

}  // namespace

std::vector<double> cross_correlation(const CovarianceModel& model, const LocationSet& locs, const Point& s0) {
    check_dims(model, locs, s0);
    std::vector<double> c(locs.size());
    for (std::size_t i = 0; i < locs.size(); ++i) c[i] = model.corr(distance(locs[i], s0.coords()));
    return c;
}

std::optional<std::size_t> find_site(const LocationSet& locs, const Point& s0) {
    for (std::size_t i = 0; i < locs.size(); ++i)
        if (std::equal(locs[i].begin(), locs[i].end(), s0.coords().begin(), s0.coords().end())) return i;
    return std::nullopt;
}

std::vector<double> kriging_weights(const CovarianceModel& model, const LocationSet& locs, const Point& s0,
                                    Solver solver, double cg_tol) {
    check_dims(model, locs, s0);
    const std::size_t n = locs.size();
    if (n == 0) return {};
    if (const auto i = find_site(locs, s0)) return unit(n, *i);
    const auto c = cross_correlation(model, locs, s0);
    if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) return std::vector<double>(n, 0.0);
    if (solver == Solver::SparseCG) return cg_solve(assemble_sparse(model, locs, true), c, cg_tol);
    return cholesky(assemble_dense(model, locs, true)).solve(c);
}

Blup blup(std::span<const double> z, const LocationSet& locs, const Point& s0, const CovarianceModel& model,
          Solver solver) {
    if (z.size() != locs.size()) throw InvalidArgument("blup: data and locations differ in length");
    Blup b;
    if (const auto i = find_site(locs, s0)) {
        check_dims(model, locs, s0);
        b.weights = unit(locs.size(), *i);
        b.value = z[*i];
        return b;
    }
    b.weights = kriging_weights(model, locs, s0, solver);
    b.value = dot(b.weights, z);
    return b;
}

TruthSystem::TruthSystem(const CovarianceModel& truth, const LocationSet& locs, const Point& s0)
    : truth_(truth), r0_(assemble_dense(truth, locs, true)), c0_(cross_correlation(truth, locs, s0)),
      site_(find_site(locs, s0)) {}

double TruthSystem::mse_of(std::span<const double> w) const {
    if (w.size() != c0_.size()) throw InvalidArgument("mse: weight vector has the wrong length");
    const auto r0w = r0_.multiply(w);
    const double v = truth_.variance() * (1.0 - 2.0 * dot(w, c0_) + dot(w, r0w));
    return std::max(v, 0.0);
}

const std::vector<double>& TruthSystem::optimal_weights() const {
    if (w0_.size() != c0_.size()) {
        if (site_) w0_ = unit(c0_.size(), *site_);
        else if (c0_.empty()) w0_.clear();
        else w0_ = cholesky(r0_).solve(c0_);
    }
    return w0_;
}

double TruthSystem::optimal_mse() const {
    if (site_) return 0.0;
    const auto& w = optimal_weights();
    return std::max(truth_.variance() * (1.0 - dot(w, c0_)), 0.0);
}

double mse_true(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model) {
    return TruthSystem(true_model, locs, s0).mse_of(kriging_weights(assumed_model, locs, s0));
}

double mse_assumed(const LocationSet& locs, const Point& s0, const CovarianceModel& assumed_model) {
    if (find_site(locs, s0)) return 0.0;
    const auto w = kriging_weights(assumed_model, locs, s0);
    return claimed_mse(cross_correlation(assumed_model, locs, s0), w, assumed_model.variance());
}

PredictionResult predict(std::span<const double> z, const LocationSet& locs, const Point& s0,
                         const CovarianceModel& true_model, const CovarianceModel& assumed_model) {
    const auto b = blup(z, locs, s0, assumed_model);
    PredictionResult r;
    r.predicted = b.value;
    r.weights = b.weights;
    r.mse_true_model = TruthSystem(true_model, locs, s0).mse_of(b.weights);
    r.mse_assumed_model = find_site(locs, s0) ? 0.0
                                              : claimed_mse(cross_correlation(assumed_model, locs, s0),
                                                            b.weights, assumed_model.variance());
    return r;
}

RatioPair ratios(const TruthSystem& truth, const LocationSet& locs, const Point& s0, const CovarianceModel& assumed,
                 Solver solver) {
    const auto w = kriging_weights(assumed, locs, s0, solver);
    const double actual = truth.mse_of(w);
    const double best = truth.optimal_mse();
    const double claimed = claimed_mse(cross_correlation(assumed, locs, s0), w, assumed.variance());
    if (!(best > 0.0) || !(actual > 0.0))
        throw NumericalError("prediction ratios: zero mean squared error in a denominator (is s0 observed?)");
    return {actual / best, claimed / actual};
}

double ratio_u1(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model) {
    return ratios(TruthSystem(true_model, locs, s0), locs, s0, assumed_model).u1;
}

double ratio_u2(const LocationSet& locs, const Point& s0, const CovarianceModel& true_model,
                const CovarianceModel& assumed_model) {
    return ratios(TruthSystem(true_model, locs, s0), locs, s0, assumed_model).u2;
}

PlugInRatios plug_in_ratios(std::span<const double> z, const LocationSet& locs, const Point& s0,
                            const CovarianceModel& gw_truth, const CovarianceModel& matern_truth,
                            const CovarianceModel& assumed_gw) {
    if (z.size() != locs.size() || z.empty()) throw InvalidArgument("plug_in_ratios: data and locations differ in length");
    const auto factor = cholesky(assemble_dense(assumed_gw, locs, true));
    PlugInRatios out;
    out.sigma2_hat = factor.quad_form(z) / static_cast<double>(z.size());
    if (!(out.sigma2_hat > 0.0)) throw InvalidArgument("plug_in_ratios: data vector is identically zero");
    const auto w = kriging_weights(assumed_gw, locs, s0);
    const double claimed = claimed_mse(cross_correlation(assumed_gw, locs, s0), w, out.sigma2_hat);
    const double a_gw = TruthSystem(gw_truth, locs, s0).mse_of(w);
    const double a_m = TruthSystem(matern_truth, locs, s0).mse_of(w);
    if (!(a_gw > 0.0) || !(a_m > 0.0)) throw NumericalError("plug_in_ratios: zero mean squared error (is s0 observed?)");
    out.vs_gw = claimed / a_gw;
    out.vs_matern = claimed / a_m;
    return out;
}

GWParams taper_for(double nu, double support, int d) {
    GWParams t;
    t.beta = support;
    t.sigma2 = 1.0;
    t.d = d;
    if (nu == 0.5) t.mu = 2.0, t.kappa = 0.0;
    else if (nu == 1.0) t.mu = 3.0, t.kappa = 1.0;
    else if (nu == 1.5) t.mu = 4.0, t.kappa = 2.0;
    else throw InvalidArgument("taper_for: no taper listed for nu = " + std::to_string(nu));
    return t;
}

}  // namespace gwk
