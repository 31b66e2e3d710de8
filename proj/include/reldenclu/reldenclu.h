/* C interface to the RelDenClu biclustering library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an rdc_status; on failure rdc_last_error() describes
 * the problem for the calling thread. Indices crossing this boundary are
 * 0-based. Strings returned through a char** are owned by the caller and must
 * be released with rdc_string_free. */
#ifndef RELDENCLU_H
#define RELDENCLU_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RDC_BUILDING_LIBRARY)
#    define RDC_API __declspec(dllexport)
#  else
#    define RDC_API __declspec(dllimport)
#  endif
#else
#  define RDC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdc_status {
  RDC_OK = 0,
  RDC_ERR_INVALID_ARGUMENT = 1,
  RDC_ERR_IO = 2,
  RDC_ERR_PARSE = 3,
  RDC_ERR_NON_FINITE = 4,
  RDC_ERR_TOO_FEW_FEATURES = 5,
  RDC_ERR_INVALID_BICLUSTER = 6,
  RDC_ERR_DIMENSION_MISMATCH = 7,
  RDC_ERR_INSUFFICIENT_DATA = 8,
  RDC_ERR_ZERO_SEPARATION = 9,
  RDC_ERR_DEGENERATE_COLUMN = 10,
  RDC_ERR_DEGENERATE_TEST = 11,
  RDC_ERR_NO_RESULT = 12,
  RDC_ERR_UNKNOWN_FAMILY = 13,
  RDC_ERR_INVALID_PARAMETERS = 14,
  RDC_ERR_OUT_OF_MEMORY = 15,
  RDC_ERR_INTERNAL = 16
} rdc_status;

typedef struct rdc_matrix rdc_matrix;
typedef struct rdc_params rdc_params;
typedef struct rdc_result rdc_result;
typedef struct rdc_dataset rdc_dataset;

RDC_API const char* rdc_version(void);
RDC_API const char* rdc_status_string(rdc_status status);
/* Message for the last failed call on this thread; empty when none. */
RDC_API const char* rdc_last_error(void);
RDC_API void rdc_string_free(char* s);

/* Matrices */
RDC_API rdc_status rdc_matrix_from_rows(size_t rows, size_t cols,
                                        const double* values,
                                        rdc_matrix** out);
RDC_API rdc_status rdc_matrix_read_csv(const char* path, rdc_matrix** out);
RDC_API rdc_status rdc_matrix_write_csv(const rdc_matrix* m, const char* path);
RDC_API size_t rdc_matrix_rows(const rdc_matrix* m);
RDC_API size_t rdc_matrix_cols(const rdc_matrix* m);
RDC_API rdc_status rdc_matrix_get(const rdc_matrix* m, size_t row, size_t col,
                                  double* out);
/* Header name of a column, or NULL when the source had no header. */
RDC_API const char* rdc_matrix_col_name(const rdc_matrix* m, size_t col);
RDC_API void rdc_matrix_free(rdc_matrix* m);

/* Parameters. Defaults are the simulated-data settings. */
RDC_API rdc_status rdc_params_create(rdc_params** out);
RDC_API rdc_status rdc_params_read_config(const char* path, rdc_params** out);
RDC_API rdc_status rdc_params_parse_config(const char* text, rdc_params** out);
/* `key` takes the config file names, `value` the config file syntax. */
RDC_API rdc_status rdc_params_set(rdc_params* p, const char* key,
                                  const char* value);
RDC_API rdc_status rdc_params_to_config(const rdc_params* p, char** out);
RDC_API void rdc_params_free(rdc_params* p);

/* Running */
RDC_API rdc_status rdc_run(const rdc_matrix* m, const rdc_params* p,
                           rdc_result** out);

/* Results: a list of biclusters plus, for runs, diagnostics. */
RDC_API size_t rdc_result_count(const rdc_result* r);
RDC_API rdc_status rdc_result_observations(const rdc_result* r, size_t k,
                                           const uint32_t** data, size_t* n);
RDC_API rdc_status rdc_result_features(const rdc_result* r, size_t k,
                                       const uint32_t** data, size_t* n);
/* Observation membership (0/1) of bicluster k over n rows. */
RDC_API rdc_status rdc_result_membership(const rdc_result* r, size_t k,
                                         size_t n, uint8_t* out);
/* 1 when the grid estimator was used, 0 otherwise. */
RDC_API int rdc_result_large_method(const rdc_result* r);
RDC_API size_t rdc_result_seed_count(const rdc_result* r);
/* Seconds for stage "normalize", "density", "seeds" or "growth". */
RDC_API double rdc_result_seconds(const rdc_result* r, const char* stage);
RDC_API size_t rdc_result_warning_count(const rdc_result* r);
RDC_API const char* rdc_result_warning(const rdc_result* r, size_t i);
/* JSON list with 1-based indices; names from `m` are added when present. */
RDC_API rdc_status rdc_result_to_json(const rdc_result* r, const rdc_matrix* m,
                                      char** out);
/* Accepts a bicluster list or a truth file. */
RDC_API rdc_status rdc_result_read_json(const char* path, rdc_result** out);
RDC_API void rdc_result_free(rdc_result* r);

/* Simulated data */
RDC_API rdc_status rdc_generate(const char* family, uint64_t seed,
                                rdc_dataset** out);
/* Borrowed views, valid while the dataset lives. */
RDC_API const rdc_matrix* rdc_dataset_matrix(const rdc_dataset* d);
RDC_API const rdc_result* rdc_dataset_truth(const rdc_dataset* d);
RDC_API rdc_status rdc_dataset_truth_json(const rdc_dataset* d, char** out);
/* Parameters the family is evaluated with. */
RDC_API rdc_status rdc_dataset_params(const rdc_dataset* d, rdc_params** out);
RDC_API void rdc_dataset_free(rdc_dataset* d);

/* Evaluation */
/* Best estimate for truth bicluster `truth_index` over a rows x cols matrix. */
RDC_API rdc_status rdc_best_match(const rdc_result* estimates,
                                  const rdc_result* truth, size_t truth_index,
                                  size_t rows, size_t cols, size_t* index,
                                  double* score);

typedef struct rdc_class_scores {
  int has_precision;
  int has_recall;
  int has_gscore;
  double precision;
  double recall;
  double gscore;
} rdc_class_scores;

typedef struct rdc_class_report {
  double accuracy;
  int flipped;
  rdc_class_scores classes[2];
} rdc_class_report;

RDC_API rdc_status rdc_class_report_compute(const uint8_t* membership,
                                            const uint8_t* labels, size_t n,
                                            rdc_class_report* out);
RDC_API rdc_status rdc_paired_t_test(const double* a, const double* b,
                                     size_t n, double* t, double* p);
RDC_API rdc_status rdc_percentile_match(const rdc_result* estimates,
                                        const double* indicator, size_t n,
                                        double percentile, size_t* index,
                                        double* match);

#ifdef __cplusplus
}
#endif

#endif
