/*
 * C interface to the spatial research-leadership library.
 *
 * Objects are opaque handles created by the open, build, fit and rank calls and
 * released with the matching *_free. Every fallible call returns an
 * slr_status; on failure a human-readable message is available from
 * slr_last_error() on the calling thread until the next failing call.
 *
 * Strings returned through `char** out` are heap-allocated and must be
 * released with slr_string_free().
 */
#ifndef SLR_SLR_H
#define SLR_SLR_H

#include <stddef.h>

#if defined(_WIN32)
#  define SLR_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define SLR_API __attribute__((visibility("default")))
#else
#  define SLR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slr_status {
  SLR_OK = 0,
  SLR_ERR_INPUT = 1,     /* malformed or inconsistent input, unreadable file */
  SLR_ERR_NUMERIC = 2,   /* rank-deficient fit, vanishing coefficient, ... */
  SLR_ERR_ARGUMENT = 3,  /* null handle/pointer or out-of-range parameter */
  SLR_ERR_INTERNAL = 4
} slr_status;

typedef enum slr_format { SLR_FORMAT_CSV = 0, SLR_FORMAT_JSON = 1 } slr_format;

typedef struct slr_corpus slr_corpus;
typedef struct slr_network slr_network;
typedef struct slr_gravity_fit slr_gravity_fit;
typedef struct slr_ranking slr_ranking;

typedef struct slr_rank_params {
  double tol;            /* L1 convergence threshold, default 1e-10 */
  unsigned max_iter;     /* default 10000 */
  double damping;        /* PageRank only, default 0.85 */
} slr_rank_params;

typedef struct slr_eval_params {
  slr_rank_params rank;
  double fraction;          /* top fraction labelled positive, default 0.05 */
  const unsigned* ksim_k;   /* NULL selects 5,10,20,50,100,200,500 */
  size_t ksim_k_count;
} slr_eval_params;

typedef struct slr_kde_params {
  double bandwidth_km;   /* default 100 */
  double lat_min, lat_max, lon_min, lon_max;
  unsigned rows, cols;   /* default 180 x 360 over the whole globe */
} slr_kde_params;

SLR_API const char* slr_version(void);
SLR_API const char* slr_last_error(void);
SLR_API void slr_string_free(char* s);

SLR_API void slr_rank_params_default(slr_rank_params* p);
SLR_API void slr_eval_params_default(slr_eval_params* p);
SLR_API void slr_kde_params_default(slr_kde_params* p);

/* Metric names accepted by slr_rank, NULL past the end. */
SLR_API const char* slr_metric_name(size_t i);

/* ---- corpus ---------------------------------------------------------- */

SLR_API slr_status slr_corpus_open(const char* publications_path, const char* institutions_path,
                                   slr_corpus** out);
SLR_API slr_status slr_corpus_from_text(const char* publications_text, const char* institutions_text,
                                        slr_corpus** out);
/* Keeps records with year in [year_min, year_max] when has_years is non-zero
 * and with the given field when `field` is non-NULL, then re-validates. */
SLR_API slr_status slr_corpus_filter(const slr_corpus* corpus, int has_years, long year_min, long year_max,
                                     const char* field, slr_corpus** out);
SLR_API void slr_corpus_free(slr_corpus* corpus);

SLR_API size_t slr_corpus_record_count(const slr_corpus* corpus);
SLR_API size_t slr_corpus_accepted_count(const slr_corpus* corpus);
SLR_API size_t slr_corpus_dropped_count(const slr_corpus* corpus);
SLR_API size_t slr_corpus_parse_error_count(const slr_corpus* corpus);
/* Distinct record years in ascending order; returns how many exist and
 * copies at most `capacity` of them. */
SLR_API size_t slr_corpus_years(const slr_corpus* corpus, long* years, size_t capacity);
SLR_API slr_status slr_corpus_report(const slr_corpus* corpus, slr_format format, char** out);

/* ---- gravity model ---------------------------------------------------- */

SLR_API slr_status slr_gravity_fit_corpus(const slr_corpus* corpus, int log_response, slr_gravity_fit** out);
SLR_API void slr_gravity_fit_free(slr_gravity_fit* fit);
/* SLR_ERR_NUMERIC when the distance coefficient vanishes. */
SLR_API slr_status slr_gravity_lambda(const slr_gravity_fit* fit, double* lambda);
SLR_API slr_status slr_gravity_report(const slr_gravity_fit* fit, slr_format format, char** out);
/* Per-year fits over the given years (all corpus years when years == NULL). */
SLR_API slr_status slr_lambda_series(const slr_corpus* corpus, const long* years, size_t count, int log_response,
                                     slr_format format, char** out);

/* ---- network ---------------------------------------------------------- */

SLR_API slr_status slr_network_build(const slr_corpus* corpus, double lambda, slr_network** out);
SLR_API void slr_network_free(slr_network* network);
SLR_API size_t slr_network_node_count(const slr_network* network);
SLR_API size_t slr_network_edge_count(const slr_network* network);
SLR_API double slr_network_lambda(const slr_network* network);
SLR_API slr_status slr_network_export(const slr_network* network, slr_format format, char** out);
SLR_API slr_status slr_network_mass_export(const slr_network* network, slr_format format, char** out);

/* ---- ranking ---------------------------------------------------------- */

/* `params` may be NULL for defaults. The corpus must be the one the network
 * was built from (used by the "publication" metric). */
SLR_API slr_status slr_rank(const slr_corpus* corpus, const slr_network* network, const char* metric,
                            const slr_rank_params* params, slr_ranking** out);
SLR_API void slr_ranking_free(slr_ranking* ranking);
SLR_API size_t slr_ranking_size(const slr_ranking* ranking);
SLR_API int slr_ranking_converged(const slr_ranking* ranking);
/* i-th entry in ranked order (descending score, ascending id). The id stays
 * valid while the ranking lives. */
SLR_API slr_status slr_ranking_entry(const slr_ranking* ranking, size_t i, const char** id, double* score);
SLR_API slr_status slr_ranking_export(const slr_ranking* ranking, slr_format format, char** out);

/* ---- evaluation ------------------------------------------------------- */

SLR_API slr_status slr_evaluate(const slr_corpus* corpus, const slr_network* network, const slr_eval_params* params,
                                slr_format format, char** out);
/* x_min <= 0 selects the smallest positive flow distance. */
SLR_API slr_status slr_powerlaw(const slr_corpus* corpus, double x_min, slr_format format, char** fit_report,
                                char** distance_summary);
SLR_API slr_status slr_kde(const slr_corpus* corpus, const slr_network* network, const slr_kde_params* params,
                           char** out);

#ifdef __cplusplus
}
#endif

#endif /* SLR_SLR_H */
