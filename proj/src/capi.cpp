#include "reldenclu/reldenclu.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "reldenclu/assembly.hpp"
#include "reldenclu/datagen.hpp"
#include "reldenclu/evaluate.hpp"
#include "reldenclu/io.hpp"

struct rdc_matrix {
  reldenclu::DataMatrix m;
};

struct rdc_params {
  reldenclu::ParameterSet p;
};

struct rdc_result {
  std::vector<reldenclu::Bicluster> biclusters;
  reldenclu::RunReport report;
  bool from_run = false;
};

struct rdc_dataset {
  reldenclu::GeneratedDataset ds;
  rdc_matrix matrix;
  rdc_result truth;
};

namespace {

using namespace reldenclu;

thread_local std::string last_error;

rdc_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return RDC_ERR_INVALID_ARGUMENT;
    case ErrorCode::io: return RDC_ERR_IO;
    case ErrorCode::parse: return RDC_ERR_PARSE;
    case ErrorCode::non_finite: return RDC_ERR_NON_FINITE;
    case ErrorCode::too_few_features: return RDC_ERR_TOO_FEW_FEATURES;
    case ErrorCode::invalid_bicluster: return RDC_ERR_INVALID_BICLUSTER;
    case ErrorCode::dimension_mismatch: return RDC_ERR_DIMENSION_MISMATCH;
    case ErrorCode::insufficient_data: return RDC_ERR_INSUFFICIENT_DATA;
    case ErrorCode::zero_separation: return RDC_ERR_ZERO_SEPARATION;
    case ErrorCode::degenerate_column: return RDC_ERR_DEGENERATE_COLUMN;
    case ErrorCode::degenerate_test: return RDC_ERR_DEGENERATE_TEST;
    case ErrorCode::no_result: return RDC_ERR_NO_RESULT;
    case ErrorCode::unknown_family: return RDC_ERR_UNKNOWN_FAMILY;
    case ErrorCode::invalid_parameters: return RDC_ERR_INVALID_PARAMETERS;
  }
  return RDC_ERR_INTERNAL;
}

rdc_status fail(rdc_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
rdc_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RDC_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RDC_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(RDC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RDC_ERR_INTERNAL, "unknown failure");
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr)
    throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const Bicluster& bicluster_at(const rdc_result* r, size_t k) {
  require(r, "result");
  if (k >= r->biclusters.size())
    throw Error(ErrorCode::invalid_argument,
                "bicluster index " + std::to_string(k) + " out of range");
  return r->biclusters[k];
}

}  // namespace

extern "C" {

const char* rdc_version(void) { return "1.0.0"; }

const char* rdc_status_string(rdc_status status) {
  switch (status) {
    case RDC_OK: return "ok";
    case RDC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RDC_ERR_IO: return "i/o error";
    case RDC_ERR_PARSE: return "parse error";
    case RDC_ERR_NON_FINITE: return "non-finite value";
    case RDC_ERR_TOO_FEW_FEATURES: return "too few features";
    case RDC_ERR_INVALID_BICLUSTER: return "invalid bicluster";
    case RDC_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case RDC_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case RDC_ERR_ZERO_SEPARATION: return "zero separation";
    case RDC_ERR_DEGENERATE_COLUMN: return "degenerate column";
    case RDC_ERR_DEGENERATE_TEST: return "degenerate test";
    case RDC_ERR_NO_RESULT: return "no result";
    case RDC_ERR_UNKNOWN_FAMILY: return "unknown family";
    case RDC_ERR_INVALID_PARAMETERS: return "invalid parameters";
    case RDC_ERR_OUT_OF_MEMORY: return "out of memory";
    case RDC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rdc_last_error(void) { return last_error.c_str(); }

void rdc_string_free(char* s) { std::free(s); }

rdc_status rdc_matrix_from_rows(size_t rows, size_t cols, const double* values,
                                rdc_matrix** out) {
  return guarded([&] {
    require(out, "out");
    require(values, "values");
    *out = new rdc_matrix{
        DataMatrix::from_rows(rows, cols, {values, rows * cols})};
  });
}

rdc_status rdc_matrix_read_csv(const char* path, rdc_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rdc_matrix{read_csv(path)};
  });
}

rdc_status rdc_matrix_write_csv(const rdc_matrix* m, const char* path) {
  return guarded([&] {
    require(m, "matrix");
    require(path, "path");
    write_csv(path, m->m);
  });
}

size_t rdc_matrix_rows(const rdc_matrix* m) { return m ? m->m.rows() : 0; }
size_t rdc_matrix_cols(const rdc_matrix* m) { return m ? m->m.cols() : 0; }

rdc_status rdc_matrix_get(const rdc_matrix* m, size_t row, size_t col,
                          double* out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    if (row >= m->m.rows() || col >= m->m.cols())
      throw Error(ErrorCode::invalid_argument, "cell out of range");
    *out = m->m.at(row, col);
  });
}

const char* rdc_matrix_col_name(const rdc_matrix* m, size_t col) {
  if (m == nullptr || col >= m->m.col_ids().size()) return nullptr;
  return m->m.col_ids()[col].c_str();
}

void rdc_matrix_free(rdc_matrix* m) { delete m; }

rdc_status rdc_params_create(rdc_params** out) {
  return guarded([&] {
    require(out, "out");
    *out = new rdc_params{};
  });
}

rdc_status rdc_params_read_config(const char* path, rdc_params** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rdc_params{read_config(path)};
  });
}

rdc_status rdc_params_parse_config(const char* text, rdc_params** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new rdc_params{parse_config(text)};
  });
}

rdc_status rdc_params_set(rdc_params* p, const char* key, const char* value) {
  return guarded([&] {
    require(p, "params");
    require(key, "key");
    require(value, "value");
    // Reuse the config parser on the current settings plus one override.
    std::string text = format_config(p->p);
    const std::string prefix = std::string(key) + " = ";
    std::string merged;
    std::size_t start = 0;
    while (start < text.size()) {
      const auto end = text.find('\n', start);
      const std::string line = text.substr(start, end - start);
      if (line.rfind(prefix, 0) != 0) merged += line + '\n';
      start = end + 1;
    }
    merged += prefix + value + '\n';
    p->p = parse_config(merged);
  });
}

rdc_status rdc_params_to_config(const rdc_params* p, char** out) {
  return guarded([&] {
    require(p, "params");
    require(out, "out");
    *out = dup_string(format_config(p->p));
  });
}

void rdc_params_free(rdc_params* p) { delete p; }

rdc_status rdc_run(const rdc_matrix* m, const rdc_params* p, rdc_result** out) {
  return guarded([&] {
    require(m, "matrix");
    require(p, "params");
    require(out, "out");
    auto* r = new rdc_result{};
    try {
      r->report = run_reldenclu_detailed(m->m, p->p);
    } catch (...) {
      delete r;
      throw;
    }
    r->biclusters = r->report.biclusters;
    r->from_run = true;
    *out = r;
  });
}

size_t rdc_result_count(const rdc_result* r) {
  return r ? r->biclusters.size() : 0;
}

rdc_status rdc_result_observations(const rdc_result* r, size_t k,
                                   const uint32_t** data, size_t* n) {
  return guarded([&] {
    require(data, "data");
    require(n, "n");
    const auto& b = bicluster_at(r, k);
    *data = b.observations.data();
    *n = b.observations.size();
  });
}

rdc_status rdc_result_features(const rdc_result* r, size_t k,
                               const uint32_t** data, size_t* n) {
  return guarded([&] {
    require(data, "data");
    require(n, "n");
    const auto& b = bicluster_at(r, k);
    *data = b.features.data();
    *n = b.features.size();
  });
}

rdc_status rdc_result_membership(const rdc_result* r, size_t k, size_t n,
                                 uint8_t* out) {
  return guarded([&] {
    require(out, "out");
    const auto m = observation_membership(bicluster_at(r, k), n);
    std::memcpy(out, m.data(), n);
  });
}

int rdc_result_large_method(const rdc_result* r) {
  return r && r->report.large_method ? 1 : 0;
}

size_t rdc_result_seed_count(const rdc_result* r) {
  return r ? r->report.seed_count : 0;
}

double rdc_result_seconds(const rdc_result* r, const char* stage) {
  if (r == nullptr || stage == nullptr) return 0.0;
  const std::string s = stage;
  if (s == "normalize") return r->report.normalize_seconds;
  if (s == "density") return r->report.density_seconds;
  if (s == "seeds") return r->report.seed_seconds;
  if (s == "growth") return r->report.growth_seconds;
  return 0.0;
}

size_t rdc_result_warning_count(const rdc_result* r) {
  return r ? r->report.warnings.size() : 0;
}

const char* rdc_result_warning(const rdc_result* r, size_t i) {
  if (r == nullptr || i >= r->report.warnings.size()) return nullptr;
  return r->report.warnings[i].c_str();
}

rdc_status rdc_result_to_json(const rdc_result* r, const rdc_matrix* m,
                              char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    *out = dup_string(
        biclusters_to_json(r->biclusters, m ? m->m.col_ids()
                                            : std::vector<std::string>{}));
  });
}

rdc_status rdc_result_read_json(const char* path, rdc_result** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto* r = new rdc_result{};
    try {
      r->biclusters = biclusters_from_json(read_text(path));
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void rdc_result_free(rdc_result* r) { delete r; }

rdc_status rdc_generate(const char* family, uint64_t seed, rdc_dataset** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    auto* d = new rdc_dataset{};
    try {
      d->ds = generate(parse_family(family), seed);
      d->matrix.m = d->ds.matrix;
      d->truth.biclusters = d->ds.truth;
    } catch (...) {
      delete d;
      throw;
    }
    *out = d;
  });
}

const rdc_matrix* rdc_dataset_matrix(const rdc_dataset* d) {
  return d ? &d->matrix : nullptr;
}

const rdc_result* rdc_dataset_truth(const rdc_dataset* d) {
  return d ? &d->truth : nullptr;
}

rdc_status rdc_dataset_truth_json(const rdc_dataset* d, char** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    *out = dup_string(truth_to_json(d->ds));
  });
}

rdc_status rdc_dataset_params(const rdc_dataset* d, rdc_params** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    *out = new rdc_params{family_parameters(parse_family(d->ds.family))};
  });
}

void rdc_dataset_free(rdc_dataset* d) { delete d; }

rdc_status rdc_best_match(const rdc_result* estimates, const rdc_result* truth,
                          size_t truth_index, size_t rows, size_t cols,
                          size_t* index, double* score) {
  return guarded([&] {
    require(estimates, "estimates");
    require(index, "index");
    require(score, "score");
    const auto& t = bicluster_at(truth, truth_index);
    for (const auto& b : estimates->biclusters) validate_bicluster(b, rows, cols);
    const Match m = best_match(estimates->biclusters,
                               membership_matrix(t, rows, cols));
    *index = m.index;
    *score = m.score;
  });
}

rdc_status rdc_class_report_compute(const uint8_t* membership,
                                    const uint8_t* labels, size_t n,
                                    rdc_class_report* out) {
  return guarded([&] {
    require(membership, "membership");
    require(labels, "labels");
    require(out, "out");
    const ClassReport r = precision_recall_gscore({membership, n}, {labels, n});
    out->accuracy = r.accuracy;
    out->flipped = r.flipped ? 1 : 0;
    for (int k = 0; k < 2; ++k) {
      const ClassScores& s = r.classes[k];
      rdc_class_scores& o = out->classes[k];
      o.has_precision = s.precision.has_value();
      o.has_recall = s.recall.has_value();
      o.has_gscore = s.gscore.has_value();
      o.precision = s.precision.value_or(0.0);
      o.recall = s.recall.value_or(0.0);
      o.gscore = s.gscore.value_or(0.0);
    }
  });
}

rdc_status rdc_paired_t_test(const double* a, const double* b, size_t n,
                             double* t, double* p) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(t, "t");
    require(p, "p");
    const TTest r = paired_t_test({a, n}, {b, n});
    *t = r.t;
    *p = r.p;
  });
}

rdc_status rdc_percentile_match(const rdc_result* estimates,
                                const double* indicator, size_t n,
                                double percentile, size_t* index,
                                double* match) {
  return guarded([&] {
    require(estimates, "estimates");
    require(indicator, "indicator");
    require(index, "index");
    require(match, "match");
    const Match m =
        percentile_match(estimates->biclusters, {indicator, n}, percentile);
    *index = m.index;
    *match = m.score;
  });
}

}  // extern "C"
