#include "gwk/covariance.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gwk/error.hpp"
#include "gwk/special.hpp"

namespace gwk {

const char* family_name(Family f) noexcept {
    switch (f) {
        case Family::GW: return "gw";
        case Family::Askey: return "askey";
        case Family::Matern: return "matern";
        case Family::TaperedMatern: return "tapered_matern";
    }
    return "unknown";
}

double gw_lambda(int d, double kappa) noexcept { return 0.5 * (d + 1) + kappa; }

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::optional<std::string> validate(const GWParams& p) {
    if (p.d < 1 || p.d > 3) return "dimension d = " + std::to_string(p.d) + " is not 1, 2 or 3";
    if (!(p.kappa >= 0.0) || !std::isfinite(p.kappa)) return "kappa = " + num(p.kappa) + " must be >= 0";
    if (!positive_finite(p.beta)) return "beta = " + num(p.beta) + " must be > 0";
    if (!positive_finite(p.sigma2)) return "sigma2 = " + num(p.sigma2) + " must be > 0";
    const double lambda = gw_lambda(p.d, p.kappa);
    if (!(p.mu >= lambda) || !std::isfinite(p.mu)) {
        if (p.kappa == 0.0)
            return "mu = " + num(p.mu) + " violates the Askey bound mu >= (d+1)/2 = " + num(lambda);
        return "mu = " + num(p.mu) + " violates mu >= lambda(d, kappa) = (d+1)/2 + kappa = " + num(lambda);
    }
    return std::nullopt;
}

std::optional<std::string> validate(const MaternParams& p) {
    if (p.d < 1 || p.d > 3) return "dimension d = " + std::to_string(p.d) + " is not 1, 2 or 3";
    if (!positive_finite(p.nu)) return "nu = " + num(p.nu) + " must be > 0";
    if (!positive_finite(p.alpha)) return "alpha = " + num(p.alpha) + " must be > 0";
    if (!positive_finite(p.sigma2)) return "sigma2 = " + num(p.sigma2) + " must be > 0";
    return std::nullopt;
}

std::optional<std::string> validate(const TaperedMaternParams& p) {
    if (auto e = validate(p.matern)) return "matern: " + *e;
    if (auto e = validate(p.taper)) return "taper: " + *e;
    if (p.taper.sigma2 != 1.0) return "taper sigma2 must be 1";
    if (p.taper.d != p.matern.d) return "taper and matern dimensions differ";
    return std::nullopt;
}

std::optional<std::string> validate(const ModelParams& p) {
    return std::visit([](const auto& v) { return validate(v); }, p);
}

namespace {

double askey(double mu, double r) { return std::pow(1.0 - r, mu); }

double closed_form(double mu, int kappa, double r) {
    const double s = 1.0 - r;
    switch (kappa) {
        case 0: return std::pow(s, mu);
        case 1: return std::pow(s, mu + 1.0) * (1.0 + (mu + 1.0) * r);
        case 2:
            return std::pow(s, mu + 2.0) * (1.0 + (mu + 2.0) * r + (mu * mu + 4.0 * mu + 3.0) * r * r / 3.0);
        case 3: {
            const double c2 = (2.0 * mu * mu + 12.0 * mu + 15.0) / 5.0;
            const double c3 = (mu * mu * mu + 9.0 * mu * mu + 23.0 * mu + 15.0) / 15.0;
            return std::pow(s, mu + 3.0) * (1.0 + r * ((mu + 3.0) + r * (c2 + r * c3)));
        }
        default: return std::nan("");
    }
}

int closed_kappa(double kappa) {
    if (kappa == 0.0 || kappa == 1.0 || kappa == 2.0 || kappa == 3.0) return static_cast<int>(kappa);
    return -1;
}

void check_args(double kappa, double r) {
    if (!(r >= 0.0)) throw InvalidArgument("gw_correlation: r must be >= 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidArgument("gw_correlation: kappa must be >= 0");
}

}  // namespace

double gw_correlation_quadrature(double mu, double kappa, double r) {
    check_args(kappa, r);
    if (r >= 1.0) return 0.0;
    const double s = 1.0 - r;
    // u = r + (1 - r) t^2 removes the (u - r)^kappa endpoint behaviour.
    auto f = [&](double t) {
        const double t2 = t * t;
        const double u = r + s * t2;
        const double a = s * t2 * (u + r);
        const double b = s * (1.0 - t2);
        return std::pow(a, kappa) * std::pow(b, mu - 1.0) * 2.0 * s * t;
    };
    // Graded breakpoints: toward t = 0 down to the scale sqrt(2r/s) of the nearby
    // branch point of (u + r)^kappa, and toward t = 1 for the (1 - u)^(mu-1) factor.
    std::vector<double> breaks{0.0};
    const double floor_t = std::max(0.25 * std::sqrt(2.0 * r / s), 0x1p-60);
    std::vector<double> low;
    for (double t = 0.25; t > floor_t; t *= 0.5) low.push_back(t);
    breaks.insert(breaks.end(), low.rbegin(), low.rend());
    breaks.push_back(0.5);
    for (int j = 2; j <= 40; ++j) breaks.push_back(1.0 - std::ldexp(1.0, -j));
    breaks.push_back(1.0);
    const double integral = integrate(f, breaks, 1e-14);
    const double log_b = log_gamma(1.0 + 2.0 * kappa) + log_gamma(mu) - log_gamma(1.0 + 2.0 * kappa + mu);
    return integral * std::exp(-log_b);
}

double gw_correlation(double mu, double kappa, double r) {
    check_args(kappa, r);
    if (r >= 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    const int k = closed_kappa(kappa);
    if (k == 0) return askey(mu, r);
    if (k > 0) return closed_form(mu, k, r);
    return gw_correlation_quadrature(mu, kappa, r);
}

namespace {

constexpr int kDeg = 20;
constexpr int kPanels = 46;

template <class F>
void chebyshev_fit(F&& f, double lo, double hi, double* coef) {
    double values[kDeg + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int j = 0; j <= kDeg; ++j) {
        const double x = std::cos(std::numbers::pi * (j + 0.5) / (kDeg + 1));
        values[j] = f(mid + half * x);
    }
    for (int k = 0; k <= kDeg; ++k) {
        double s = 0.0;
        for (int j = 0; j <= kDeg; ++j) s += values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / (kDeg + 1));
        coef[k] = s * 2.0 / (kDeg + 1);
    }
    coef[0] *= 0.5;
}

double clenshaw(const double* coef, double lo, double hi, double r) {
    const double x = (2.0 * r - lo - hi) / (hi - lo);
    double b1 = 0.0, b2 = 0.0;
    for (int k = kDeg; k >= 1; --k) {
        const double b0 = 2.0 * x * b1 - b2 + coef[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + coef[0];
}

}  // namespace

GWTable::GWTable(double mu, double kappa) : mu_(mu), kappa_(kappa) {
    auto f = [&](double r) { return gw_correlation_quadrature(mu, kappa, r); };
    for (int k = 1; k <= kPanels; ++k) {
        const double hi = std::ldexp(1.0, -k), lo = std::ldexp(1.0, -k - 1);
        left_[k - 1].lo = lo;
        left_[k - 1].hi = hi;
        chebyshev_fit(f, lo, hi, left_[k - 1].coef);
        right_[k - 1].lo = 1.0 - hi;
        right_[k - 1].hi = 1.0 - lo;
        chebyshev_fit(f, 1.0 - hi, 1.0 - lo, right_[k - 1].coef);
    }
}

const GWTable& GWTable::get(double mu, double kappa) {
    static std::mutex mtx;
    static std::map<std::pair<double, double>, std::unique_ptr<GWTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{mu, kappa}];
    if (!slot) slot.reset(new GWTable(mu, kappa));
    return *slot;
}

double GWTable::operator()(double r) const {
    if (r >= 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    int e = 0;
    if (r < 0.5) {
        std::frexp(r, &e);  // r in [2^(e-1), 2^e)
        const int k = -e;   // panel [2^-(k+1), 2^-k]
        if (k < 1 || k > kPanels) return gw_correlation_quadrature(mu_, kappa_, r);
        const Panel& p = left_[k - 1];
        return clenshaw(p.coef, p.lo, p.hi, r);
    }
    const double s = 1.0 - r;
    std::frexp(s, &e);
    const int k = -e;
    if (k < 1 || k > kPanels) return gw_correlation_quadrature(mu_, kappa_, r);
    const Panel& p = right_[k - 1];
    return clenshaw(p.coef, p.lo, p.hi, r);
}

double gw_cov(const GWParams& p, double r) {
    if (auto e = validate(p)) throw InvalidArgument("gw_cov: " + *e);
    return p.sigma2 * gw_correlation(p.mu, p.kappa, r / p.beta);
}

namespace {

double matern_corr(double nu, double alpha, double r) {
    if (r == 0.0) return 1.0;
    const double x = r / alpha;
    const double m = nu - 0.5;
    if (m >= 0.0 && m == std::floor(m) && m <= 20.0) {
        // e^{-x} sum_k m!/(2m)! (m+k)!/(k!(m-k)!) (2x)^{m-k}
        const int mi = static_cast<int>(m);
        double coef = std::exp(std::lgamma(mi + 1.0) - std::lgamma(2.0 * mi + 1.0));
        double sum = 0.0;
        for (int k = 0; k <= mi; ++k) {
            const double c =
                std::exp(std::lgamma(mi + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(mi - k + 1.0));
            sum += c * std::pow(2.0 * x, mi - k);
        }
        return std::exp(-x) * coef * sum;
    }
    const double k = bessel_k(nu, x);
    const double v = std::exp((1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) + nu * std::log(x)) * k;
    return std::isfinite(v) ? std::min(v, 1.0) : 1.0;
}

}  // namespace

double matern_cov(const MaternParams& p, double r) {
    if (auto e = validate(p)) throw InvalidArgument("matern_cov: " + *e);
    if (!(r >= 0.0)) throw InvalidArgument("matern_cov: r must be >= 0");
    return p.sigma2 * matern_corr(p.nu, p.alpha, r);
}

double tapered_matern_cov(const TaperedMaternParams& p, double r) {
    if (auto e = validate(p)) throw InvalidArgument("tapered_matern_cov: " + *e);
    if (!(r >= 0.0)) throw InvalidArgument("tapered_matern_cov: r must be >= 0");
    if (r >= p.taper.beta) return 0.0;
    return matern_cov(p.matern, r) * gw_correlation(p.taper.mu, p.taper.kappa, r / p.taper.beta);
}

CovarianceModel::CovarianceModel(ModelParams params) : params_(std::move(params)) {
    if (auto e = validate(params_)) throw InvalidArgument("invalid covariance model: " + *e);
    const GWParams* g = nullptr;
    if (auto p = std::get_if<GWParams>(&params_)) g = p;
    if (auto p = std::get_if<TaperedMaternParams>(&params_)) g = &p->taper;
    if (g && closed_kappa(g->kappa) < 0) table_ = &GWTable::get(g->mu, g->kappa);
}

Family CovarianceModel::family() const noexcept {
    if (auto p = as_gw()) return p->kappa == 0.0 ? Family::Askey : Family::GW;
    if (as_matern()) return Family::Matern;
    return Family::TaperedMatern;
}

int CovarianceModel::dim() const noexcept {
    if (auto p = as_gw()) return p->d;
    if (auto p = as_matern()) return p->d;
    return as_tapered()->matern.d;
}

double CovarianceModel::variance() const noexcept {
    if (auto p = as_gw()) return p->sigma2;
    if (auto p = as_matern()) return p->sigma2;
    return as_tapered()->matern.sigma2;
}

std::optional<double> CovarianceModel::support() const noexcept {
    if (auto p = as_gw()) return p->beta;
    if (auto p = as_tapered()) return p->taper.beta;
    return std::nullopt;
}

double CovarianceModel::corr(double r) const {
    auto gw_part = [&](const GWParams& g, double rr) {
        const double s = rr / g.beta;
        if (s >= 1.0) return 0.0;
        if (table_) return (*table_)(s);
        return gw_correlation(g.mu, g.kappa, s);
    };
    if (auto p = as_gw()) return gw_part(*p, r);
    if (auto p = as_matern()) return matern_corr(p->nu, p->alpha, r);
    const auto& t = *as_tapered();
    if (r >= t.taper.beta) return 0.0;
    return matern_corr(t.matern.nu, t.matern.alpha, r) * gw_part(t.taper, r);
}

double CovarianceModel::cov(double r) const { return variance() * corr(r); }

CovarianceModel CovarianceModel::with_variance(double sigma2) const {
    ModelParams p = params_;
    if (auto g = std::get_if<GWParams>(&p)) g->sigma2 = sigma2;
    if (auto m = std::get_if<MaternParams>(&p)) m->sigma2 = sigma2;
    if (auto t = std::get_if<TaperedMaternParams>(&p)) t->matern.sigma2 = sigma2;
    return CovarianceModel(std::move(p));
}

namespace {

using nlohmann::json;

json gw_json(const GWParams& p) {
    return json{{"mu", p.mu}, {"kappa", p.kappa}, {"beta", p.beta}, {"sigma2", p.sigma2}};
}
json matern_json(const MaternParams& p) { return json{{"nu", p.nu}, {"alpha", p.alpha}, {"sigma2", p.sigma2}}; }

double field(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("model params missing \"") + key + "\"");
    if (!j.at(key).is_number()) throw ConfigError(std::string("model param \"") + key + "\" is not a number");
    return j.at(key).get<double>();
}

double field_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? field(j, key) : fallback;
}

GWParams gw_from(const json& j, int d) {
    return GWParams{field(j, "mu"), field_or(j, "kappa", 0.0), field(j, "beta"), field_or(j, "sigma2", 1.0), d};
}
MaternParams matern_from(const json& j, int d) {
    return MaternParams{field(j, "nu"), field(j, "alpha"), field_or(j, "sigma2", 1.0), d};
}

}  // namespace

std::string to_json(const CovarianceModel& m) {
    json j;
    j["family"] = family_name(m.family());
    if (auto p = m.as_gw()) j["params"] = gw_json(*p);
    if (auto p = m.as_matern()) j["params"] = matern_json(*p);
    if (auto p = m.as_tapered()) j["params"] = json{{"matern", matern_json(p->matern)}, {"taper", gw_json(p->taper)}};
    j["dim"] = m.dim();
    return j.dump();
}

CovarianceModel model_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw ConfigError("model JSON needs a string \"family\"");
    if (!j.contains("params") || !j["params"].is_object()) throw ConfigError("model JSON needs an object \"params\"");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ConfigError("model JSON needs an integer \"dim\"");
    const std::string fam = j["family"];
    const int d = j["dim"];
    const json& p = j["params"];
    if (fam == "gw") return CovarianceModel(gw_from(p, d));
    if (fam == "askey") {
        auto g = gw_from(p, d);
        if (g.kappa != 0.0) throw ConfigError("askey model must have kappa = 0");
        return CovarianceModel(g);
    }
    if (fam == "matern") return CovarianceModel(matern_from(p, d));
    if (fam == "tapered_matern") {
        if (!p.contains("matern") || !p.contains("taper"))
            throw ConfigError("tapered_matern params need \"matern\" and \"taper\"");
        return CovarianceModel(TaperedMaternParams{matern_from(p["matern"], d), gw_from(p["taper"], d)});
    }
    throw ConfigError("unknown model family \"" + fam + "\"");
}

}  // namespace gwk
