#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwk/gwk.h"

namespace {

using nlohmann::json;

struct Failure {
    gwk_status status;
    std::string message;
};

void check(gwk_status s) {
    if (s != GWK_OK) throw Failure{s, gwk_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{GWK_CONFIG, msg}; }

int exit_code(gwk_status s) {
    switch (s) {
        case GWK_OK: return 0;
        case GWK_NUMERICAL: return 3;
        case GWK_INTERNAL: return 1;
        default: return 2;
    }
}

struct ModelDel {
    void operator()(gwk_model* m) const { gwk_model_free(m); }
};
struct LocsDel {
    void operator()(gwk_locations* l) const { gwk_locations_free(l); }
};
using ModelPtr = std::unique_ptr<gwk_model, ModelDel>;
using LocsPtr = std::unique_ptr<gwk_locations, LocsDel>;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Failure{GWK_IO, "cannot read " + path};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
ModelPtr load_model(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_file(arg);
    gwk_model* m = nullptr;
    check(gwk_model_from_json(text.c_str(), &m));
    return ModelPtr(m);
}

LocsPtr load_locations(const std::string& path) {
    gwk_locations* l = nullptr;
    check(gwk_locations_read_csv(path.c_str(), &l));
    return LocsPtr(l);
}

std::string take(char* s) {
    std::string out(s);
    gwk_string_free(s);
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            usage_error("not a number: '" + item + "'");
        }
    }
    return v;
}

std::vector<double> points(const std::string& list, double from, double to, int count, bool log_spaced) {
    if (!list.empty()) return parse_list(list);
    if (count < 1) usage_error("--count must be >= 1");
    if (log_spaced && !(from > 0.0)) usage_error("--log needs --from > 0");
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        v[i] = log_spaced ? std::exp(std::log(from) + t * (std::log(to) - std::log(from))) : from + t * (to - from);
    }
    return v;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Failure{GWK_IO, "cannot write " + path};
    return file;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Data CSV as written by `simulate`: header z_1..z_n, one row per replicate.
std::vector<double> read_data_row(const std::string& path, int row) {
    std::ifstream f(path);
    if (!f) throw Failure{GWK_IO, "cannot read " + path};
    std::string line;
    if (!std::getline(f, line)) throw Failure{GWK_IO, path + ": empty file"};
    for (int r = 0; std::getline(f, line); ++r) {
        if (r == row) {
            try {
                return parse_list(line);
            } catch (const Failure& e) {
                throw Failure{GWK_IO, path + ": " + e.message};
            }
        }
    }
    throw Failure{GWK_IO, path + ": no data row " + std::to_string(row)};
}

void print_progress(const char* msg, void*) { std::cerr << msg << '\n'; }

void print_experiment_summary(const json& s) {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(3);
    if (s["kind"] == "microergodic") {
        std::cout << "kappa,n,x,q05,q25,q50,q75,q95,mean,variance,failures\n";
        for (const auto& c : s["cells"]) {
            std::cout << c["kappa"].get<double>() << ',' << c["n"].get<std::size_t>() << ','
                      << c["x"].get<std::string>();
            for (double q : c["summary"]["quantiles"]) std::cout << ',' << q;
            std::cout << ',' << c["summary"]["mean"].get<double>() << ',' << c["summary"]["variance"].get<double>()
                      << ',' << c["failures"].get<int>() << '\n';
        }
        const auto& ref = s["normal_reference"];
        std::cout << "N(0,1),,";
        for (double q : ref["quantiles"]) std::cout << ',' << q;
        std::cout << ',' << ref["mean"].get<double>() << ',' << ref["variance"].get<double>() << ",\n";
    } else {
        std::cout << "nu,y,beta_star,n,multiplier,u1,u2,u1_taper,u2_taper,nonzero_pct,failures\n";
        for (const auto& c : s["cells"])
            std::cout << c["nu"].get<double>() << ',' << c["y"].get<double>() << ',' << c["beta_star"].get<double>()
                      << ',' << c["n"].get<std::size_t>() << ',' << c["multiplier"].get<double>() << ','
                      << c["u1"].get<double>() << ',' << c["u2"].get<double>() << ',' << c["u1_taper"].get<double>()
                      << ',' << c["u2_taper"].get<double>() << ',' << c["nonzero_pct"].get<double>() << ','
                      << c["failures"].get<int>() << '\n';
    }
    std::cout << "runtime_seconds," << s["runtime_seconds"].get<double>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Wendland covariance toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(gwk_version()));

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a simulation study from a JSON config");
    std::string exp_kind, exp_config, exp_out;
    int exp_threads = 0;
    bool exp_quiet = false;
    exp->add_option("kind", exp_kind, "microergodic or ratios")->required()->check(CLI::IsMember({"microergodic", "ratios"}));
    exp->add_option("--config", exp_config, "Config JSON file")->required();
    exp->add_option("--out", exp_out, "Output prefix for <prefix>.csv, <prefix>.json and CDF dump");
    exp->add_option("--threads", exp_threads, "Worker threads (overrides the config)");
    exp->add_flag("--quiet", exp_quiet, "No progress messages");

    // cov eval
    auto* cov = app.add_subcommand("cov", "Covariance evaluation");
    cov->require_subcommand(1);
    auto* cov_eval = cov->add_subcommand("eval", "Evaluate a model at distances; CSV r,cov");
    std::string cov_model, cov_r;
    double cov_from = 0.0, cov_to = 1.0;
    int cov_count = 101;
    bool cov_corr = false;
    cov_eval->add_option("--model", cov_model, "Model JSON or file")->required();
    cov_eval->add_option("--r", cov_r, "Comma-separated distances");
    cov_eval->add_option("--from", cov_from, "First distance");
    cov_eval->add_option("--to", cov_to, "Last distance");
    cov_eval->add_option("--count", cov_count, "Number of distances");
    cov_eval->add_flag("--correlation", cov_corr, "Correlation instead of covariance");

    // spectral
    auto* spec = app.add_subcommand("spectral", "Isotropic spectral density; CSV z,sd");
    std::string sp_model, sp_z;
    double sp_from = 0.1, sp_to = 100.0;
    int sp_count = 200;
    bool sp_log = false;
    spec->add_option("--model", sp_model, "Model JSON or file")->required();
    spec->add_option("--z", sp_z, "Comma-separated frequencies");
    spec->add_option("--from", sp_from, "First frequency");
    spec->add_option("--to", sp_to, "Last frequency");
    spec->add_option("--count", sp_count, "Number of frequencies");
    spec->add_flag("--log", sp_log, "Log-spaced frequencies");

    // equiv
    auto* eq = app.add_subcommand("equiv", "Equivalence of Gaussian measures; JSON report");
    std::string eq_a, eq_b;
    double eq_tol = 1e-9, eq_kappa = -1.0, eq_mu = -1.0, eq_s1 = 1.0;
    eq->add_option("--a", eq_a, "First model JSON or file")->required();
    eq->add_option("--b", eq_b, "Second model JSON or file");
    eq->add_option("--tol", eq_tol, "Relative tolerance");
    eq->add_option("--kappa", eq_kappa, "With a Matérn --a and no --b: GW kappa of the equivalent support");
    eq->add_option("--mu", eq_mu, "With a Matérn --a and no --b: GW mu of the equivalent support");
    eq->add_option("--sigma1sq", eq_s1, "GW variance for the equivalent support");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate zero-mean Gaussian fields; CSV z_1..z_n per replicate");
    std::string sim_model, sim_locs, sim_out;
    int sim_reps = 1;
    std::uint64_t sim_seed = 1;
    sim->add_option("--model", sim_model, "Model JSON or file")->required();
    sim->add_option("--locs", sim_locs, "Locations CSV")->required();
    sim->add_option("--replicates", sim_reps, "Number of realizations");
    sim->add_option("--seed", sim_seed, "Random seed");
    sim->add_option("--out", sim_out, "Output CSV (stdout when absent)");

    // fit
    auto* fit = app.add_subcommand("fit", "Profile maximum likelihood for GW data; JSON");
    std::string fit_locs, fit_data;
    double fit_kappa = 0.0, fit_mu = -1.0, fit_lo = 1e-6, fit_hi = 1.0, fit_tol = 1e-6;
    int fit_row = 0;
    fit->add_option("--locs", fit_locs, "Locations CSV")->required();
    fit->add_option("--data", fit_data, "Data CSV as written by simulate")->required();
    fit->add_option("--replicate", fit_row, "Row of the data CSV");
    fit->add_option("--kappa", fit_kappa, "Smoothness kappa");
    fit->add_option("--mu", fit_mu, "Shape mu")->required();
    fit->add_option("--beta-lo", fit_lo, "Lower end of the support interval");
    fit->add_option("--beta-hi", fit_hi, "Upper end of the support interval");
    fit->add_option("--tol", fit_tol, "Relative tolerance on beta");

    // predict
    auto* pred = app.add_subcommand("predict", "Kriging under an assumed model, scored under the true one; JSON");
    std::string pr_true, pr_assumed, pr_locs, pr_s0, pr_data;
    int pr_row = 0;
    pred->add_option("--true-model", pr_true, "True model JSON or file")->required();
    pred->add_option("--assumed-model", pr_assumed, "Assumed model JSON or file")->required();
    pred->add_option("--locs", pr_locs, "Locations CSV")->required();
    pred->add_option("--s0", pr_s0, "Prediction point, comma-separated")->required();
    pred->add_option("--data", pr_data, "Data CSV as written by simulate");
    pred->add_option("--replicate", pr_row, "Row of the data CSV");

    // grid
    auto* grid = app.add_subcommand("grid", "Perturbed regular grid on the unit square; locations CSV");
    double gr_inc = 0.03, gr_jit = 0.01;
    std::uint64_t gr_seed = 1, gr_sub_seed = 1;
    std::size_t gr_sub = 0;
    std::string gr_out;
    grid->add_option("--increment", gr_inc, "Grid spacing");
    grid->add_option("--jitter", gr_jit, "Half-width of the uniform perturbation");
    grid->add_option("--seed", gr_seed, "Perturbation seed");
    grid->add_option("--subsample", gr_sub, "Keep this many points drawn without replacement");
    grid->add_option("--subsample-seed", gr_sub_seed, "Subsample seed");
    grid->add_option("--out", gr_out, "Output CSV (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*exp) {
            const std::string text = read_file(exp_config);
            char* summary = nullptr;
            check(gwk_run_experiment(exp_kind.c_str(), text.c_str(), exp_out.empty() ? nullptr : exp_out.c_str(),
                                     exp_threads, exp_quiet ? nullptr : print_progress, nullptr, &summary));
            print_experiment_summary(json::parse(take(summary)));
        } else if (*cov_eval) {
            const auto m = load_model(cov_model);
            const auto r = points(cov_r, cov_from, cov_to, cov_count, false);
            std::vector<double> v(r.size());
            check(gwk_model_eval(m.get(), r.data(), r.size(), cov_corr, v.data()));
            std::cout << "r," << (cov_corr ? "corr" : "cov") << '\n';
            for (std::size_t i = 0; i < r.size(); ++i) std::cout << g17(r[i]) << ',' << g17(v[i]) << '\n';
        } else if (*spec) {
            const auto m = load_model(sp_model);
            const auto z = points(sp_z, sp_from, sp_to, sp_count, sp_log);
            std::vector<double> v(z.size());
            check(gwk_spectral_density(m.get(), z.data(), z.size(), v.data()));
            std::cout << "z,sd\n";
            for (std::size_t i = 0; i < z.size(); ++i) std::cout << g17(z[i]) << ',' << g17(v[i]) << '\n';
        } else if (*eq) {
            const auto a = load_model(eq_a);
            if (!eq_b.empty()) {
                const auto b = load_model(eq_b);
                char* rep = nullptr;
                check(gwk_equivalence(a.get(), b.get(), eq_tol, &rep));
                std::cout << take(rep) << '\n';
            } else {
                if (eq_kappa < 0.0 || eq_mu < 0.0) usage_error("equiv: give --b, or --kappa and --mu");
                double beta = 0.0;
                check(gwk_equivalent_support(a.get(), eq_kappa, eq_mu, eq_s1, &beta));
                std::cout << json{{"beta_star", beta}, {"kappa", eq_kappa}, {"mu", eq_mu}, {"sigma1sq", eq_s1}}.dump()
                          << '\n';
            }
        } else if (*sim) {
            const auto m = load_model(sim_model);
            const auto l = load_locations(sim_locs);
            const std::size_t n = gwk_locations_size(l.get());
            if (sim_reps < 1) usage_error("--replicates must be >= 1");
            std::vector<double> z(n * static_cast<std::size_t>(sim_reps));
            check(gwk_simulate(m.get(), l.get(), sim_reps, sim_seed, z.data()));
            std::ofstream file;
            auto& out = open_out(sim_out, file);
            for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << "z_" << i + 1;
            out << '\n';
            for (int r = 0; r < sim_reps; ++r) {
                for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << g17(z[r * n + i]);
                out << '\n';
            }
        } else if (*fit) {
            const auto l = load_locations(fit_locs);
            const auto z = read_data_row(fit_data, fit_row);
            if (z.size() != gwk_locations_size(l.get())) usage_error("fit: data and locations differ in length");
            char* res = nullptr;
            check(gwk_fit(l.get(), z.data(), z.size(), fit_mu, fit_kappa, fit_lo, fit_hi, fit_tol, &res));
            std::cout << take(res) << '\n';
        } else if (*pred) {
            const auto t = load_model(pr_true);
            const auto a = load_model(pr_assumed);
            const auto l = load_locations(pr_locs);
            const auto s0 = parse_list(pr_s0);
            if (static_cast<int>(s0.size()) != gwk_locations_dim(l.get()))
                usage_error("predict: --s0 must have one value per coordinate");
            std::vector<double> z;
            if (!pr_data.empty()) {
                z = read_data_row(pr_data, pr_row);
                if (z.size() != gwk_locations_size(l.get())) usage_error("predict: data and locations differ in length");
            }
            char* res = nullptr;
            check(gwk_predict(t.get(), a.get(), l.get(), s0.data(), z.empty() ? nullptr : z.data(), &res));
            std::cout << take(res) << '\n';
        } else if (*grid) {
            gwk_locations* g = nullptr;
            check(gwk_locations_perturbed_grid(gr_inc, gr_jit, gr_seed, &g));
            LocsPtr l(g);
            if (gr_sub > 0) {
                gwk_locations* s = nullptr;
                check(gwk_locations_subsample(l.get(), gr_sub, gr_sub_seed, &s));
                l.reset(s);
            }
            if (gr_out.empty() || gr_out == "-") {
                const std::size_t n = gwk_locations_size(l.get());
                const int d = gwk_locations_dim(l.get());
                std::vector<double> c(n * d);
                check(gwk_locations_coords(l.get(), c.data()));
                std::cout << "x,y\n";
                for (std::size_t i = 0; i < n; ++i) std::cout << g17(c[2 * i]) << ',' << g17(c[2 * i + 1]) << '\n';
            } else {
                check(gwk_locations_write_csv(l.get(), gr_out.c_str()));
            }
        }
    } catch (const Failure& f) {
        std::cerr << "error (" << gwk_status_name(f.status) << "): " << f.message << '\n';
        return exit_code(f.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
