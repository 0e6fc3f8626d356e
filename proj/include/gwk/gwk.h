#ifndef GWK_H
#define GWK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GWK_API __declspec(dllexport)
#else
#define GWK_API __attribute__((visibility("default")))
#endif

typedef enum gwk_status {
    GWK_OK = 0,
    GWK_INVALID_ARGUMENT = 1,
    GWK_CONFIG = 2,
    GWK_NUMERICAL = 3,
    GWK_IO = 4,
    GWK_INAPPLICABLE = 5,
    GWK_INTERNAL = 6
} gwk_status;

typedef struct gwk_model gwk_model;
typedef struct gwk_locations gwk_locations;

/* Message of the last failing call on this thread; empty after a success. */
GWK_API const char* gwk_last_error(void);
GWK_API const char* gwk_status_name(gwk_status s);
GWK_API const char* gwk_version(void);
/* Frees strings returned through char** out-parameters. */
GWK_API void gwk_string_free(char* s);

/* Models: {"family": "gw"|"askey"|"matern"|"tapered_matern", "params": {...}, "dim": d} */
GWK_API gwk_status gwk_model_from_json(const char* json, gwk_model** out);
GWK_API gwk_status gwk_model_to_json(const gwk_model* m, char** out);
GWK_API void gwk_model_free(gwk_model* m);
/* out[i] = covariance (or correlation when correlation != 0) at distance r[i]. */
GWK_API gwk_status gwk_model_eval(const gwk_model* m, const double* r, size_t count, int correlation, double* out);
/* *has_support = 0 for models without compact support. */
GWK_API gwk_status gwk_model_support(const gwk_model* m, double* support, int* has_support);
GWK_API gwk_status gwk_spectral_density(const gwk_model* m, const double* z, size_t count, double* out);

/* GW correlation on the unit support. */
GWK_API gwk_status gwk_gw_correlation(double mu, double kappa, double r, double* out);

/* Compatibility report of two models as JSON (Matérn/GW in either order, or GW/GW). */
GWK_API gwk_status gwk_equivalence(const gwk_model* a, const gwk_model* b, double tol, char** report_json);
/* Support making GW(kappa, mu, beta, sigma1sq) equivalent to the given Matérn model. */
GWK_API gwk_status gwk_equivalent_support(const gwk_model* matern, double kappa, double mu, double sigma1sq,
                                          double* beta);

/* Locations: row-major coordinates, n * dim values. */
GWK_API gwk_status gwk_locations_create(const double* coords, size_t n, int dim, gwk_locations** out);
GWK_API gwk_status gwk_locations_read_csv(const char* path, gwk_locations** out);
GWK_API gwk_status gwk_locations_write_csv(const gwk_locations* l, const char* path);
GWK_API gwk_status gwk_locations_perturbed_grid(double increment, double jitter, uint64_t seed, gwk_locations** out);
GWK_API gwk_status gwk_locations_subsample(const gwk_locations* l, size_t m, uint64_t seed, gwk_locations** out);
GWK_API size_t gwk_locations_size(const gwk_locations* l);
GWK_API int gwk_locations_dim(const gwk_locations* l);
GWK_API gwk_status gwk_locations_coords(const gwk_locations* l, double* out);
GWK_API void gwk_locations_free(gwk_locations* l);

/* replicates * n values, replicate-major. */
GWK_API gwk_status gwk_simulate(const gwk_model* m, const gwk_locations* l, int replicates, uint64_t seed, double* out);

/* Profile ML fit of (sigma2, beta) for GW data with fixed mu, kappa; result as JSON. */
GWK_API gwk_status gwk_fit(const gwk_locations* l, const double* z, size_t n, double mu, double kappa, double beta_lo,
                           double beta_hi, double tol, char** result_json);

/* Kriging at s0 under `assumed`, MSE under both models. z may be NULL (no predicted value). */
GWK_API gwk_status gwk_predict(const gwk_model* truth, const gwk_model* assumed, const gwk_locations* l,
                               const double* s0, const double* z, char** result_json);

typedef void (*gwk_progress_fn)(const char* message, void* context);

/* kind is "microergodic" or "ratios". Writes the report files under out_prefix when it
   is not NULL and returns a JSON summary of every cell. */
GWK_API gwk_status gwk_run_experiment(const char* kind, const char* config_json, const char* out_prefix,
                                      int threads_override, gwk_progress_fn progress, void* context,
                                      char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
