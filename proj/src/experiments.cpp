#include "gwk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gwk/covariance.hpp"
#include "gwk/equivalence.hpp"
#include "gwk/error.hpp"
#include "gwk/estimate.hpp"
#include "gwk/linalg.hpp"
#include "gwk/predict.hpp"
#include "gwk/random.hpp"
#include "gwk/simulate.hpp"

namespace gwk {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSubsetTag = 0x737562736574ULL;  // "subset"
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;     // "noise"

// ---------------------------------------------------------------- config parsing

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError(what); }

json parse_object(const std::string& text, const char* what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        config_fail(std::string(what) + ": " + e.what());
    }
    if (!j.is_object()) config_fail(std::string(what) + ": expected a JSON object");
    return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
            config_fail(where + ": unknown key '" + k + "'");
    }
}

template <class T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        config_fail(where + ": key '" + key + "' has the wrong type");
    }
}

GridConfig parse_grid(const json& j) {
    GridConfig g;
    if (!j.is_object()) config_fail("grid: expected an object");
    reject_unknown(j, {"increment", "jitter", "seed"}, "grid");
    g.increment = get(j, "increment", g.increment, "grid");
    g.jitter = get(j, "jitter", g.jitter, "grid");
    g.seed = get(j, "seed", g.seed, "grid");
    if (!(g.increment > 0.0) || !(g.increment <= 1.0)) config_fail("grid: increment must be in (0, 1]");
    if (!(g.jitter >= 0.0)) config_fail("grid: jitter must be >= 0");
    return g;
}

json grid_json(const GridConfig& g) { return {{"increment", g.increment}, {"jitter", g.jitter}, {"seed", g.seed}}; }

void check_common(int threads, double max_fail, const std::string& where) {
    if (threads < 1) config_fail(where + ": threads must be >= 1");
    if (!(max_fail >= 0.0) || !(max_fail < 1.0)) config_fail(where + ": max_failure_fraction must be in [0, 1)");
}

// ---------------------------------------------------------------- parallel map

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

void check_sizes(const std::vector<std::size_t>& ns, const LocationSet& grid) {
    for (std::size_t n : ns)
        if (n > grid.size())
            throw ConfigError("sample size " + std::to_string(n) + " exceeds the " + std::to_string(grid.size()) +
                              " grid points");
}

LocationSet draw_subset(const LocationSet& grid, std::size_t n, std::uint64_t seed, std::size_t index) {
    return subsample(grid, n, stream_id(seed ^ kSubsetTag, n, index));
}

void check_failures(int failures, int total, double max_fraction, const std::string& cell) {
    if (failures > 0 && static_cast<double>(failures) > max_fraction * total)
        throw NumericalError(cell + ": " + std::to_string(failures) + " of " + std::to_string(total) +
                             " replicates failed");
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::string XVariant::label() const {
    if (beta_hat) return "beta_hat";
    if (multiplier == 1.0) return "beta0";
    return fmt(multiplier) + "beta0";
}

MicroergodicStudyConfig parse_microergodic_config(const std::string& text) {
    const std::string w = "microergodic config";
    const json j = parse_object(text, w.c_str());
    reject_unknown(j,
                   {"study", "beta0", "kappas", "ns", "replicates", "sigma0sq", "mu_offset", "x_variants", "beta_lo",
                    "beta_hi_factor", "tol", "grid", "seed", "threads", "max_failure_fraction"},
                   w);
    if (j.contains("study") && j["study"] != "microergodic") config_fail(w + ": study must be \"microergodic\"");
    MicroergodicStudyConfig c;
    c.beta0 = get(j, "beta0", c.beta0, w);
    c.kappas = get(j, "kappas", c.kappas, w);
    c.ns = get(j, "ns", c.ns, w);
    c.replicates = get(j, "replicates", c.replicates, w);
    c.sigma0sq = get(j, "sigma0sq", c.sigma0sq, w);
    c.mu_offset = get(j, "mu_offset", c.mu_offset, w);
    c.beta_lo = get(j, "beta_lo", c.beta_lo, w);
    c.beta_hi_factor = get(j, "beta_hi_factor", c.beta_hi_factor, w);
    c.tol = get(j, "tol", c.tol, w);
    c.seed = get(j, "seed", c.seed, w);
    c.threads = get(j, "threads", c.threads, w);
    c.max_failure_fraction = get(j, "max_failure_fraction", c.max_failure_fraction, w);
    if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
    if (j.contains("x_variants")) {
        if (!j["x_variants"].is_array()) config_fail(w + ": x_variants must be an array");
        for (const auto& v : j["x_variants"]) {
            if (v.is_string() && v == "beta_hat") c.x_variants.push_back({true, 1.0});
            else if (v.is_number() && v.get<double>() > 0.0) c.x_variants.push_back({false, v.get<double>()});
            else config_fail(w + ": x_variants entries are \"beta_hat\" or a positive multiple of beta0");
        }
    } else {
        c.x_variants = {{true, 1.0}, {false, 1.0}, {false, 0.5}, {false, 2.0}};
    }
    if (!(c.beta0 > 0.0)) config_fail(w + ": beta0 must be > 0");
    if (!(c.sigma0sq > 0.0)) config_fail(w + ": sigma0sq must be > 0");
    if (c.kappas.empty() || std::any_of(c.kappas.begin(), c.kappas.end(), [](double k) { return !(k >= 0.0); }))
        config_fail(w + ": kappas must be a nonempty list of values >= 0");
    if (c.ns.empty() || std::count(c.ns.begin(), c.ns.end(), 0u)) config_fail(w + ": ns must be positive");
    if (c.replicates < 1) config_fail(w + ": replicates must be >= 1");
    if (!(c.mu_offset >= 0.0)) config_fail(w + ": mu_offset must be >= 0");
    if (c.x_variants.empty()) config_fail(w + ": x_variants is empty");
    if (!(c.beta_lo > 0.0) || !(c.beta_hi_factor * c.beta0 >= c.beta_lo))
        config_fail(w + ": need 0 < beta_lo <= beta_hi_factor * beta0");
    if (!(c.tol > 0.0)) config_fail(w + ": tol must be > 0");
    check_common(c.threads, c.max_failure_fraction, w);
    return c;
}

RatioStudyConfig parse_ratio_config(const std::string& text) {
    const std::string w = "ratio config";
    const json j = parse_object(text, w.c_str());
    reject_unknown(j,
                   {"study", "nus", "practical_ranges", "ns", "subsets", "s0", "mu_offset", "multipliers", "sigma2",
                    "grid", "seed", "threads", "max_failure_fraction"},
                   w);
    if (j.contains("study") && j["study"] != "ratios") config_fail(w + ": study must be \"ratios\"");
    RatioStudyConfig c;
    c.nus = get(j, "nus", c.nus, w);
    c.ys = get(j, "practical_ranges", c.ys, w);
    c.ns = get(j, "ns", c.ns, w);
    c.subsets = get(j, "subsets", c.subsets, w);
    c.s0 = get(j, "s0", c.s0, w);
    c.mu_offset = get(j, "mu_offset", c.mu_offset, w);
    c.multipliers = get(j, "multipliers", c.multipliers, w);
    c.sigma2 = get(j, "sigma2", c.sigma2, w);
    c.seed = get(j, "seed", c.seed, w);
    c.threads = get(j, "threads", c.threads, w);
    c.max_failure_fraction = get(j, "max_failure_fraction", c.max_failure_fraction, w);
    if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
    if (c.nus.empty()) config_fail(w + ": nus is empty");
    for (double nu : c.nus)
        if (nu != 0.5 && nu != 1.0 && nu != 1.5) config_fail(w + ": nu must be one of 0.5, 1, 1.5 (taper table)");
    if (c.ys.size() != c.nus.size()) config_fail(w + ": practical_ranges needs one list per nu");
    for (const auto& row : c.ys)
        if (row.empty() || std::any_of(row.begin(), row.end(), [](double y) { return !(y > 0.0); }))
            config_fail(w + ": practical ranges must be nonempty lists of positive values");
    if (c.ns.empty() || std::count(c.ns.begin(), c.ns.end(), 0u)) config_fail(w + ": ns must be positive");
    if (c.subsets < 1) config_fail(w + ": subsets must be >= 1");
    if (!(c.mu_offset > 1.0)) config_fail(w + ": mu_offset must exceed d/2 = 1 for equivalence");
    if (c.multipliers.empty() ||
        std::any_of(c.multipliers.begin(), c.multipliers.end(), [](double m) { return !(m > 0.0); }))
        config_fail(w + ": multipliers must be positive");
    if (!(c.sigma2 > 0.0)) config_fail(w + ": sigma2 must be > 0");
    check_common(c.threads, c.max_failure_fraction, w);
    return c;
}

std::string to_json(const MicroergodicStudyConfig& c) {
    json xs = json::array();
    for (const auto& x : c.x_variants) {
        if (x.beta_hat) xs.push_back("beta_hat");
        else xs.push_back(x.multiplier);
    }
    return json{{"study", "microergodic"},
                {"beta0", c.beta0},
                {"kappas", c.kappas},
                {"ns", c.ns},
                {"replicates", c.replicates},
                {"sigma0sq", c.sigma0sq},
                {"mu_offset", c.mu_offset},
                {"x_variants", xs},
                {"beta_lo", c.beta_lo},
                {"beta_hi_factor", c.beta_hi_factor},
                {"tol", c.tol},
                {"grid", grid_json(c.grid)},
                {"seed", c.seed},
                {"threads", c.threads},
                {"max_failure_fraction", c.max_failure_fraction}}
        .dump();
}

std::string to_json(const RatioStudyConfig& c) {
    return json{{"study", "ratios"},
                {"nus", c.nus},
                {"practical_ranges", c.ys},
                {"ns", c.ns},
                {"subsets", c.subsets},
                {"s0", c.s0},
                {"mu_offset", c.mu_offset},
                {"multipliers", c.multipliers},
                {"sigma2", c.sigma2},
                {"grid", grid_json(c.grid)},
                {"seed", c.seed},
                {"threads", c.threads},
                {"max_failure_fraction", c.max_failure_fraction}}
        .dump();
}

// ---------------------------------------------------------------- summaries

double quantile_type7(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InvalidArgument("quantile: no data");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile: level outside [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Summary summarize(std::vector<double> v) {
    Summary s;
    s.count = v.size();
    if (v.empty()) {
        s.quantiles.fill(std::nan(""));
        s.mean = s.variance = std::nan("");
        return s;
    }
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) s.quantiles[i] = quantile_type7(v, kQuantileLevels[i]);
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / static_cast<double>(v.size() - 1);
    }
    return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("normal_quantile: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Summary standard_normal_summary() {
    Summary s;
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) s.quantiles[i] = normal_quantile(kQuantileLevels[i]);
    s.mean = 0.0;
    s.variance = 1.0;
    return s;
}

double practical_range_constant(double nu) {
    const CovarianceModel m(MaternParams{nu, 1.0, 1.0, 2});
    double lo = 1e-6, hi = 50.0;
    if (!(m.corr(lo) > 0.05) || !(m.corr(hi) < 0.05))
        throw NumericalError("practical_range_constant: 0.05 not bracketed on [1e-6, 50]");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (m.corr(mid) > 0.05 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- studies

StudyReport run_microergodic_study(const MicroergodicStudyConfig& cfg, const Progress& progress) {
    const auto t0 = std::chrono::steady_clock::now();
    StudyReport rep;
    rep.kind = "microergodic";
    rep.threads = cfg.threads;
    rep.config_json = to_json(cfg);
    const LocationSet grid = perturbed_grid(cfg.grid.increment, cfg.grid.jitter, cfg.grid.seed);
    check_sizes(cfg.ns, grid);
    const std::size_t nx = cfg.x_variants.size();

    for (double kappa : cfg.kappas) {
        const double mu = gw_lambda(2, kappa) + cfg.mu_offset;
        const CovarianceModel truth(GWParams{mu, kappa, cfg.beta0, cfg.sigma0sq, 2});
        for (std::size_t n : cfg.ns) {
            const auto R = static_cast<std::size_t>(cfg.replicates);
            std::vector<std::vector<double>> stats(R);
            std::vector<std::string> errors(R);
            parallel_for(R, cfg.threads, [&](std::size_t r) {
                try {
                    const LocationSet locs = draw_subset(grid, n, cfg.seed, r);
                    const auto factor = cholesky(assemble_dense(truth, locs, false));
                    auto z = simulate_with_factor(factor, cfg.seed, stream_id(kNoiseTag, n, r));
                    const ProfileLikelihood pl(locs, std::move(z), mu, kappa);
                    std::vector<double> out(nx);
                    for (std::size_t k = 0; k < nx; ++k) {
                        const auto& xv = cfg.x_variants[k];
                        if (xv.beta_hat) {
                            const auto fit = fit_profile(pl, cfg.beta_lo, cfg.beta_hi_factor * cfg.beta0, cfg.tol);
                            out[k] = microergodic_stat(fit.sigma2_hat, fit.beta_hat, cfg.sigma0sq, cfg.beta0, kappa, n);
                        } else {
                            const double x = xv.multiplier * cfg.beta0;
                            out[k] = microergodic_stat(pl.sigma2_hat(x), x, cfg.sigma0sq, cfg.beta0, kappa, n);
                        }
                        if (!std::isfinite(out[k])) throw NumericalError("non-finite statistic");
                    }
                    stats[r] = std::move(out);
                } catch (const std::exception& e) {
                    errors[r] = e.what();
                }
            });
            int failures = 0;
            for (const auto& e : errors) failures += !e.empty();
            const std::string cell = "kappa=" + fmt(kappa) + " n=" + std::to_string(n);
            check_failures(failures, cfg.replicates, cfg.max_failure_fraction, cell);
            for (std::size_t k = 0; k < nx; ++k) {
                MicroergodicCell c;
                c.kappa = kappa;
                c.mu = mu;
                c.n = n;
                c.x = cfg.x_variants[k].label();
                c.replicates = cfg.replicates;
                c.failures = failures;
                for (std::size_t r = 0; r < R; ++r)
                    if (errors[r].empty()) c.sorted_stats.push_back(stats[r][k]);
                std::sort(c.sorted_stats.begin(), c.sorted_stats.end());
                c.summary = summarize(c.sorted_stats);
                rep.micro.push_back(std::move(c));
            }
            if (progress) progress(cell + " done");
        }
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

StudyReport run_ratio_study(const RatioStudyConfig& cfg, const Progress& progress) {
    const auto t0 = std::chrono::steady_clock::now();
    StudyReport rep;
    rep.kind = "ratios";
    rep.threads = cfg.threads;
    rep.config_json = to_json(cfg);
    const LocationSet grid = perturbed_grid(cfg.grid.increment, cfg.grid.jitter, cfg.grid.seed);
    const Point s0{cfg.s0[0], cfg.s0[1]};
    check_sizes(cfg.ns, grid);
    const std::size_t nm = cfg.multipliers.size();

    for (std::size_t a = 0; a < cfg.nus.size(); ++a) {
        const double nu = cfg.nus[a];
        const double kappa = nu - 0.5;
        const double mu = gw_lambda(2, kappa) + cfg.mu_offset;
        const double c_nu = practical_range_constant(nu);
        for (double y : cfg.ys[a]) {
            const MaternParams mp{nu, y / c_nu, cfg.sigma2, 2};
            const CovarianceModel truth(mp);
            const double beta_star = equivalent_support(mp, kappa, mu, cfg.sigma2);
            for (std::size_t n : cfg.ns) {
                const auto S = static_cast<std::size_t>(cfg.subsets);
                // Per subset and multiplier: u1, u2, u1 taper, u2 taper, nonzero %.
                std::vector<std::vector<std::array<double, 5>>> vals(S);
                std::vector<std::string> errors(S);
                parallel_for(S, cfg.threads, [&](std::size_t j) {
                    try {
                        const LocationSet locs = draw_subset(grid, n, cfg.seed, j);
                        const TruthSystem ts(truth, locs, s0);
                        std::vector<std::array<double, 5>> out(nm);
                        for (std::size_t m = 0; m < nm; ++m) {
                            const double b = cfg.multipliers[m] * beta_star;
                            const CovarianceModel gw(GWParams{mu, kappa, b, cfg.sigma2, 2});
                            const CovarianceModel tap(TaperedMaternParams{mp, taper_for(nu, b)});
                            const auto r = ratios(ts, locs, s0, gw);
                            const auto rt = ratios(ts, locs, s0, tap);
                            const RadiusIndex index(locs, b);
                            std::size_t nnz = 0;
                            for (std::size_t i = 0; i < locs.size(); ++i) nnz += index.query(locs[i]).size();
                            const double pct = 100.0 * static_cast<double>(nnz) / (static_cast<double>(n) * n);
                            out[m] = {r.u1, r.u2, rt.u1, rt.u2, pct};
                        }
                        vals[j] = std::move(out);
                    } catch (const std::exception& e) {
                        errors[j] = e.what();
                    }
                });
                int failures = 0;
                for (const auto& e : errors) failures += !e.empty();
                const std::string cell = "nu=" + fmt(nu) + " y=" + fmt(y) + " n=" + std::to_string(n);
                check_failures(failures, cfg.subsets, cfg.max_failure_fraction, cell);
                const double used = static_cast<double>(cfg.subsets - failures);
                for (std::size_t m = 0; m < nm; ++m) {
                    std::array<double, 5> sum{};
                    for (std::size_t j = 0; j < S; ++j)
                        if (errors[j].empty())
                            for (int k = 0; k < 5; ++k) sum[k] += vals[j][m][k];
                    RatioCell c;
                    c.nu = nu;
                    c.y = y;
                    c.alpha = mp.alpha;
                    c.beta_star = beta_star;
                    c.mu = mu;
                    c.n = n;
                    c.multiplier = cfg.multipliers[m];
                    c.subsets = cfg.subsets;
                    c.failures = failures;
                    c.u1 = sum[0] / used;
                    c.u2 = sum[1] / used;
                    c.u1_taper = sum[2] / used;
                    c.u2_taper = sum[3] / used;
                    c.nonzero_pct = sum[4] / used;
                    rep.ratio.push_back(c);
                }
                if (progress) progress(cell + " done");
            }
        }
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------- report I/O

namespace {

const char* kMicroHeader = "kappa,mu,n,x,replicates,failures,q05,q25,q50,q75,q95,mean,variance";
const char* kCdfHeader = "kappa,n,x,rank,stat,ecdf,normal_cdf";
const char* kRatioHeader = "nu,y,alpha,beta_star,mu,n,multiplier,subsets,failures,u1,u2,u1_taper,u2_taper,nonzero_pct";

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    return f;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double num(const std::string& s) {
    if (s == "nan") return std::nan("");
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw IoError("report: bad number '" + s + "'");
    return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, const char* header, std::size_t width) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line != header) throw IoError(path + ": unexpected header");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != width) throw IoError(path + ": wrong number of columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string fmt_or_nan(double v) { return std::isnan(v) ? "nan" : fmt(v); }

}  // namespace

void emit_report(const StudyReport& r, const std::string& prefix) {
    json meta{{"kind", r.kind}, {"runtime_seconds", r.runtime_seconds}, {"threads", r.threads}};
    meta["config"] = r.config_json.empty() ? json(nullptr) : json::parse(r.config_json);
    if (r.kind == "microergodic") {
        auto f = open_out(prefix + ".csv");
        f << kMicroHeader << '\n';
        for (const auto& c : r.micro) {
            f << fmt(c.kappa) << ',' << fmt(c.mu) << ',' << c.n << ',' << c.x << ',' << c.replicates << ','
              << c.failures;
            for (double q : c.summary.quantiles) f << ',' << fmt_or_nan(q);
            f << ',' << fmt_or_nan(c.summary.mean) << ',' << fmt_or_nan(c.summary.variance) << '\n';
        }
        auto g = open_out(prefix + "_cdf.csv");
        g << kCdfHeader << '\n';
        for (const auto& c : r.micro) {
            const double m = static_cast<double>(c.sorted_stats.size());
            for (std::size_t i = 0; i < c.sorted_stats.size(); ++i)
                g << fmt(c.kappa) << ',' << c.n << ',' << c.x << ',' << i + 1 << ',' << fmt(c.sorted_stats[i]) << ','
                  << fmt(static_cast<double>(i + 1) / m) << ',' << fmt(normal_cdf(c.sorted_stats[i])) << '\n';
        }
        meta["columns"] = kMicroHeader;
        meta["cdf_columns"] = kCdfHeader;
        meta["files"] = {prefix + ".csv", prefix + "_cdf.csv"};
        if (!f || !g) throw IoError("failed writing " + prefix + " report");
    } else if (r.kind == "ratios") {
        auto f = open_out(prefix + ".csv");
        f << kRatioHeader << '\n';
        for (const auto& c : r.ratio)
            f << fmt(c.nu) << ',' << fmt(c.y) << ',' << fmt(c.alpha) << ',' << fmt(c.beta_star) << ',' << fmt(c.mu)
              << ',' << c.n << ',' << fmt(c.multiplier) << ',' << c.subsets << ',' << c.failures << ','
              << fmt_or_nan(c.u1) << ',' << fmt_or_nan(c.u2) << ',' << fmt_or_nan(c.u1_taper) << ','
              << fmt_or_nan(c.u2_taper) << ',' << fmt_or_nan(c.nonzero_pct) << '\n';
        meta["columns"] = kRatioHeader;
        meta["files"] = {prefix + ".csv"};
        if (!f) throw IoError("failed writing " + prefix + " report");
    } else {
        throw InvalidArgument("emit_report: unknown report kind '" + r.kind + "'");
    }
    auto m = open_out(prefix + ".json");
    m << meta.dump(2) << '\n';
}

StudyReport parse_report(const std::string& prefix) {
    StudyReport r;
    json meta;
    try {
        auto f = open_in(prefix + ".json");
        meta = json::parse(f);
        r.kind = meta.at("kind").get<std::string>();
        r.runtime_seconds = meta.at("runtime_seconds").get<double>();
        r.threads = meta.at("threads").get<int>();
        if (!meta.at("config").is_null()) r.config_json = meta["config"].dump();
    } catch (const json::exception& e) {
        throw IoError(prefix + ".json: " + e.what());
    }
    if (r.kind == "microergodic") {
        for (const auto& row : read_rows(prefix + ".csv", kMicroHeader, 13)) {
            MicroergodicCell c;
            c.kappa = num(row[0]);
            c.mu = num(row[1]);
            c.n = static_cast<std::size_t>(num(row[2]));
            c.x = row[3];
            c.replicates = static_cast<int>(num(row[4]));
            c.failures = static_cast<int>(num(row[5]));
            for (int i = 0; i < 5; ++i) c.summary.quantiles[i] = num(row[6 + i]);
            c.summary.mean = num(row[11]);
            c.summary.variance = num(row[12]);
            r.micro.push_back(std::move(c));
        }
        for (const auto& row : read_rows(prefix + "_cdf.csv", kCdfHeader, 7)) {
            const double kappa = num(row[0]);
            const auto n = static_cast<std::size_t>(num(row[1]));
            auto it = std::find_if(r.micro.begin(), r.micro.end(), [&](const MicroergodicCell& c) {
                return c.kappa == kappa && c.n == n && c.x == row[2];
            });
            if (it == r.micro.end()) throw IoError(prefix + "_cdf.csv: row without a matching cell");
            it->sorted_stats.push_back(num(row[4]));
        }
        for (auto& c : r.micro) c.summary.count = c.sorted_stats.size();
    } else if (r.kind == "ratios") {
        for (const auto& row : read_rows(prefix + ".csv", kRatioHeader, 14)) {
            RatioCell c;
            c.nu = num(row[0]);
            c.y = num(row[1]);
            c.alpha = num(row[2]);
            c.beta_star = num(row[3]);
            c.mu = num(row[4]);
            c.n = static_cast<std::size_t>(num(row[5]));
            c.multiplier = num(row[6]);
            c.subsets = static_cast<int>(num(row[7]));
            c.failures = static_cast<int>(num(row[8]));
            c.u1 = num(row[9]);
            c.u2 = num(row[10]);
            c.u1_taper = num(row[11]);
            c.u2_taper = num(row[12]);
            c.nonzero_pct = num(row[13]);
            r.ratio.push_back(c);
        }
    } else {
        throw IoError(prefix + ".json: unknown report kind '" + r.kind + "'");
    }
    return r;
}

}  // namespace gwk
