#include "gwk/gwk.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "gwk/covariance.hpp"
#include "gwk/equivalence.hpp"
#include "gwk/error.hpp"
#include "gwk/estimate.hpp"
#include "gwk/experiments.hpp"
#include "gwk/geometry.hpp"
#include "gwk/predict.hpp"
#include "gwk/simulate.hpp"
#include "gwk/spectral.hpp"

struct gwk_model {
    gwk::CovarianceModel model;
};

struct gwk_locations {
    gwk::LocationSet locs;
};

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

gwk_status fail(gwk_status s, const char* what) {
    g_last_error = what;
    return s;
}

template <class Fn>
gwk_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return GWK_OK;
    } catch (const gwk::ConfigError& e) {
        return fail(GWK_CONFIG, e.what());
    } catch (const gwk::InvalidArgument& e) {
        return fail(GWK_INVALID_ARGUMENT, e.what());
    } catch (const gwk::Inapplicable& e) {
        return fail(GWK_INAPPLICABLE, e.what());
    } catch (const gwk::NumericalError& e) {
        return fail(GWK_NUMERICAL, e.what());
    } catch (const gwk::IoError& e) {
        return fail(GWK_IO, e.what());
    } catch (const json::exception& e) {
        return fail(GWK_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(GWK_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GWK_INTERNAL, e.what());
    } catch (...) {
        return fail(GWK_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw gwk::InvalidArgument(what);
}

char* dup_string(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

json summary_json(const gwk::Summary& s) {
    return {{"quantiles", s.quantiles}, {"mean", s.mean}, {"variance", s.variance}, {"count", s.count}};
}

json report_json(const gwk::StudyReport& r) {
    json out{{"kind", r.kind}, {"runtime_seconds", r.runtime_seconds}, {"threads", r.threads}};
    json cells = json::array();
    if (r.kind == "microergodic") {
        for (const auto& c : r.micro)
            cells.push_back({{"kappa", c.kappa},
                             {"mu", c.mu},
                             {"n", c.n},
                             {"x", c.x},
                             {"replicates", c.replicates},
                             {"failures", c.failures},
                             {"summary", summary_json(c.summary)}});
        out["normal_reference"] = summary_json(gwk::standard_normal_summary());
    } else {
        for (const auto& c : r.ratio)
            cells.push_back({{"nu", c.nu},
                             {"y", c.y},
                             {"alpha", c.alpha},
                             {"beta_star", c.beta_star},
                             {"mu", c.mu},
                             {"n", c.n},
                             {"multiplier", c.multiplier},
                             {"subsets", c.subsets},
                             {"failures", c.failures},
                             {"u1", c.u1},
                             {"u2", c.u2},
                             {"u1_taper", c.u1_taper},
                             {"u2_taper", c.u2_taper},
                             {"nonzero_pct", c.nonzero_pct}});
    }
    out["cells"] = std::move(cells);
    return out;
}

}  // namespace

extern "C" {

const char* gwk_last_error(void) { return g_last_error.c_str(); }

const char* gwk_status_name(gwk_status s) {
    switch (s) {
        case GWK_OK: return "ok";
        case GWK_INVALID_ARGUMENT: return "invalid argument";
        case GWK_CONFIG: return "configuration error";
        case GWK_NUMERICAL: return "numerical failure";
        case GWK_IO: return "i/o error";
        case GWK_INAPPLICABLE: return "inapplicable";
        case GWK_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* gwk_version(void) { return "1.0.0"; }

void gwk_string_free(char* s) { delete[] s; }

gwk_status gwk_model_from_json(const char* text, gwk_model** out) {
    return guarded([&] {
        require(text && out, "gwk_model_from_json: null argument");
        *out = new gwk_model{gwk::model_from_json(text)};
    });
}

gwk_status gwk_model_to_json(const gwk_model* m, char** out) {
    return guarded([&] {
        require(m && out, "gwk_model_to_json: null argument");
        *out = dup_string(gwk::to_json(m->model));
    });
}

void gwk_model_free(gwk_model* m) { delete m; }

gwk_status gwk_model_eval(const gwk_model* m, const double* r, size_t count, int correlation, double* out) {
    return guarded([&] {
        require(m && (count == 0 || (r && out)), "gwk_model_eval: null argument");
        for (size_t i = 0; i < count; ++i) out[i] = correlation ? m->model.corr(r[i]) : m->model.cov(r[i]);
    });
}

gwk_status gwk_model_support(const gwk_model* m, double* support, int* has_support) {
    return guarded([&] {
        require(m && support && has_support, "gwk_model_support: null argument");
        const auto s = m->model.support();
        *has_support = s.has_value();
        *support = s.value_or(0.0);
    });
}

gwk_status gwk_spectral_density(const gwk_model* m, const double* z, size_t count, double* out) {
    return guarded([&] {
        require(m && (count == 0 || (z && out)), "gwk_spectral_density: null argument");
        const gwk::SpectralDensity sd(m->model);
        for (size_t i = 0; i < count; ++i) out[i] = sd(z[i]);
    });
}

gwk_status gwk_gw_correlation(double mu, double kappa, double r, double* out) {
    return guarded([&] {
        require(out, "gwk_gw_correlation: null argument");
        *out = gwk::gw_correlation(mu, kappa, r);
    });
}

gwk_status gwk_equivalence(const gwk_model* a, const gwk_model* b, double tol, char** report_json) {
    return guarded([&] {
        require(a && b && report_json, "gwk_equivalence: null argument");
        const auto* ga = a->model.as_gw();
        const auto* gb = b->model.as_gw();
        const auto* ma = a->model.as_matern();
        const auto* mb = b->model.as_matern();
        gwk::CompatibilityReport rep;
        if (ga && gb) rep = gwk::gw_gw_equivalent(*ga, *gb, tol);
        else if (ma && gb) rep = gwk::matern_gw_equivalent(*ma, *gb, tol);
        else if (ga && mb) rep = gwk::matern_gw_equivalent(*mb, *ga, tol);
        else throw gwk::Inapplicable("equivalence is decided for GW/GW and Matérn/GW pairs only");
        *report_json = dup_string(gwk::to_json(rep));
    });
}

gwk_status gwk_equivalent_support(const gwk_model* matern, double kappa, double mu, double sigma1sq, double* beta) {
    return guarded([&] {
        require(matern && beta, "gwk_equivalent_support: null argument");
        const auto* mp = matern->model.as_matern();
        if (!mp) throw gwk::InvalidArgument("gwk_equivalent_support: model is not Matérn");
        *beta = gwk::equivalent_support(*mp, kappa, mu, sigma1sq);
    });
}

gwk_status gwk_locations_create(const double* coords, size_t n, int dim, gwk_locations** out) {
    return guarded([&] {
        require(out && (n == 0 || coords), "gwk_locations_create: null argument");
        *out = new gwk_locations{gwk::LocationSet(std::vector<double>(coords, coords + n * dim), dim)};
    });
}

gwk_status gwk_locations_read_csv(const char* path, gwk_locations** out) {
    return guarded([&] {
        require(path && out, "gwk_locations_read_csv: null argument");
        *out = new gwk_locations{gwk::read_locations_csv(std::string(path))};
    });
}

gwk_status gwk_locations_write_csv(const gwk_locations* l, const char* path) {
    return guarded([&] {
        require(l && path, "gwk_locations_write_csv: null argument");
        gwk::write_locations_csv(l->locs, std::string(path));
    });
}

gwk_status gwk_locations_perturbed_grid(double increment, double jitter, uint64_t seed, gwk_locations** out) {
    return guarded([&] {
        require(out, "gwk_locations_perturbed_grid: null argument");
        *out = new gwk_locations{gwk::perturbed_grid(increment, jitter, seed)};
    });
}

gwk_status gwk_locations_subsample(const gwk_locations* l, size_t m, uint64_t seed, gwk_locations** out) {
    return guarded([&] {
        require(l && out, "gwk_locations_subsample: null argument");
        *out = new gwk_locations{gwk::subsample(l->locs, m, seed)};
    });
}

size_t gwk_locations_size(const gwk_locations* l) { return l ? l->locs.size() : 0; }

int gwk_locations_dim(const gwk_locations* l) { return l ? l->locs.dim() : 0; }

gwk_status gwk_locations_coords(const gwk_locations* l, double* out) {
    return guarded([&] {
        require(l && (l->locs.size() == 0 || out), "gwk_locations_coords: null argument");
        const auto raw = l->locs.raw();
        std::copy(raw.begin(), raw.end(), out);
    });
}

void gwk_locations_free(gwk_locations* l) { delete l; }

gwk_status gwk_simulate(const gwk_model* m, const gwk_locations* l, int replicates, uint64_t seed, double* out) {
    return guarded([&] {
        require(m && l && out, "gwk_simulate: null argument");
        const auto sims = gwk::simulate({m->model, l->locs, replicates, seed});
        for (const auto& z : sims) out = std::copy(z.begin(), z.end(), out);
    });
}

gwk_status gwk_fit(const gwk_locations* l, const double* z, size_t n, double mu, double kappa, double beta_lo,
                   double beta_hi, double tol, char** result_json) {
    return guarded([&] {
        require(l && z && result_json, "gwk_fit: null argument");
        const gwk::ProfileLikelihood pl(l->locs, std::vector<double>(z, z + n), mu, kappa);
        const auto r = gwk::fit_profile(pl, beta_lo, beta_hi, tol);
        const json j{{"sigma2_hat", r.sigma2_hat},
                     {"beta_hat", r.beta_hat},
                     {"microergodic_hat", r.microergodic_hat},
                     {"loglik", r.loglik},
                     {"evaluations", r.evaluations},
                     {"interval", {r.interval.first, r.interval.second}}};
        *result_json = dup_string(j.dump());
    });
}

gwk_status gwk_predict(const gwk_model* truth, const gwk_model* assumed, const gwk_locations* l, const double* s0,
                       const double* z, char** result_json) {
    return guarded([&] {
        require(truth && assumed && l && s0 && result_json, "gwk_predict: null argument");
        const int d = assumed->model.dim();
        const gwk::Point p(std::vector<double>(s0, s0 + d));
        const std::size_t n = l->locs.size();
        json j;
        if (z) {
            const auto r = gwk::predict(std::span<const double>(z, n), l->locs, p, truth->model, assumed->model);
            j = {{"predicted", r.predicted},
                 {"weights", r.weights},
                 {"mse_true_model", r.mse_true_model},
                 {"mse_assumed_model", r.mse_assumed_model}};
        } else {
            const auto w = gwk::kriging_weights(assumed->model, l->locs, p);
            j = {{"predicted", nullptr},
                 {"weights", w},
                 {"mse_true_model", gwk::TruthSystem(truth->model, l->locs, p).mse_of(w)},
                 {"mse_assumed_model", gwk::mse_assumed(l->locs, p, assumed->model)}};
        }
        *result_json = dup_string(j.dump());
    });
}

gwk_status gwk_run_experiment(const char* kind, const char* config_json, const char* out_prefix, int threads_override,
                              gwk_progress_fn progress, void* context, char** summary_json) {
    return guarded([&] {
        require(kind && config_json && summary_json, "gwk_run_experiment: null argument");
        const std::string k(kind);
        gwk::Progress cb;
        if (progress) cb = [&](const std::string& msg) { progress(msg.c_str(), context); };
        gwk::StudyReport rep;
        if (k == "microergodic") {
            auto cfg = gwk::parse_microergodic_config(config_json);
            if (threads_override > 0) cfg.threads = threads_override;
            rep = gwk::run_microergodic_study(cfg, cb);
        } else if (k == "ratios") {
            auto cfg = gwk::parse_ratio_config(config_json);
            if (threads_override > 0) cfg.threads = threads_override;
            rep = gwk::run_ratio_study(cfg, cb);
        } else {
            throw gwk::ConfigError("unknown experiment '" + k + "' (expected microergodic or ratios)");
        }
        if (out_prefix) gwk::emit_report(rep, out_prefix);
        *summary_json = dup_string(report_json(rep).dump());
    });
}

}  // extern "C"
