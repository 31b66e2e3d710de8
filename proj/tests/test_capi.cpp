// Links only the shared library, so everything goes through the C header.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "reldenclu/reldenclu.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  rdc_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(rdc_version()) == "1.0.0");
  CHECK(std::string(rdc_status_string(RDC_OK)) == "ok");
  CHECK(std::strlen(rdc_status_string(RDC_ERR_NON_FINITE)) > 0);
}

TEST_CASE("matrix creation and validation") {
  const double v[] = {1, 2, 3, 4, 5, 6};
  rdc_matrix* m = nullptr;
  REQUIRE(rdc_matrix_from_rows(2, 3, v, &m) == RDC_OK);
  CHECK(rdc_matrix_rows(m) == 2);
  CHECK(rdc_matrix_cols(m) == 3);
  double x = 0;
  CHECK(rdc_matrix_get(m, 1, 2, &x) == RDC_OK);
  CHECK(x == 6.0);
  CHECK(rdc_matrix_get(m, 2, 0, &x) == RDC_ERR_INVALID_ARGUMENT);
  CHECK(rdc_matrix_col_name(m, 0) == nullptr);
  rdc_matrix_free(m);

  const double bad[] = {1, NAN, 3};
  rdc_matrix* n = nullptr;
  CHECK(rdc_matrix_from_rows(1, 3, bad, &n) == RDC_ERR_NON_FINITE);
  CHECK(n == nullptr);
  CHECK(std::string(rdc_last_error()).find("column 2") != std::string::npos);
  CHECK(rdc_matrix_from_rows(1, 3, nullptr, &n) == RDC_ERR_INVALID_ARGUMENT);
  CHECK(rdc_matrix_read_csv("/nonexistent/m.csv", &n) == RDC_ERR_IO);
}

TEST_CASE("parameters") {
  rdc_params* p = nullptr;
  REQUIRE(rdc_params_create(&p) == RDC_OK);
  CHECK(rdc_params_set(p, "sim2seed", "0.6") == RDC_OK);
  CHECK(rdc_params_set(p, "normalization", "unbounded") == RDC_OK);
  CHECK(rdc_params_set(p, "colour", "red") == RDC_ERR_INVALID_PARAMETERS);
  CHECK(rdc_params_set(p, "sim2seed", "2") == RDC_ERR_INVALID_PARAMETERS);
  char* text = nullptr;
  REQUIRE(rdc_params_to_config(p, &text) == RDC_OK);
  const std::string config = take(text);
  CHECK(config.find("sim2seed = 0.6") != std::string::npos);
  CHECK(config.find("normalization = unbounded") != std::string::npos);

  rdc_params* q = nullptr;
  CHECK(rdc_params_parse_config(config.c_str(), &q) == RDC_OK);
  rdc_params_free(q);
  CHECK(rdc_params_parse_config("sim2seed = 0.8\n", &q) == RDC_ERR_INVALID_PARAMETERS);
  rdc_params_free(p);
}

TEST_CASE("generate, run and evaluate through the C API") {
  rdc_dataset* d = nullptr;
  REQUIRE(rdc_generate("base", 3, &d) == RDC_OK);
  const rdc_matrix* m = rdc_dataset_matrix(d);
  const rdc_result* truth = rdc_dataset_truth(d);
  CHECK(rdc_matrix_rows(m) == 1000);
  CHECK(rdc_result_count(truth) == 1);

  rdc_params* p = nullptr;
  REQUIRE(rdc_dataset_params(d, &p) == RDC_OK);
  rdc_result* r = nullptr;
  REQUIRE(rdc_run(m, p, &r) == RDC_OK);
  REQUIRE(rdc_result_count(r) > 0);
  CHECK(rdc_result_large_method(r) == 1);
  CHECK(rdc_result_seed_count(r) > 0);
  CHECK(rdc_result_seconds(r, "density") >= 0.0);
  CHECK(rdc_result_seconds(r, "nap") == 0.0);

  std::size_t index = 0;
  double score = 0;
  REQUIRE(rdc_best_match(r, truth, 0, 1000, 20, &index, &score) == RDC_OK);
  CHECK(score >= 0.95);
  CHECK(rdc_best_match(r, truth, 5, 1000, 20, &index, &score) ==
        RDC_ERR_INVALID_ARGUMENT);

  const uint32_t* obs = nullptr;
  std::size_t n = 0;
  REQUIRE(rdc_result_observations(r, index, &obs, &n) == RDC_OK);
  CHECK(n > 400);
  std::vector<uint8_t> member(1000);
  REQUIRE(rdc_result_membership(r, index, 1000, member.data()) == RDC_OK);
  std::size_t ones = 0;
  for (auto v : member) ones += v;
  CHECK(ones == n);

  char* json = nullptr;
  REQUIRE(rdc_result_to_json(r, m, &json) == RDC_OK);
  CHECK(take(json).find("\"observations\"") != std::string::npos);
  REQUIRE(rdc_dataset_truth_json(d, &json) == RDC_OK);
  CHECK(take(json).find("\"family\": \"base\"") != std::string::npos);

  rdc_result_free(r);
  rdc_params_free(p);
  rdc_dataset_free(d);

  CHECK(rdc_generate("mystery", 1, &d) == RDC_ERR_UNKNOWN_FAMILY);
}

TEST_CASE("too few features is reported") {
  const double v[] = {1, 2, 3, 4, 5, 6};
  rdc_matrix* m = nullptr;
  REQUIRE(rdc_matrix_from_rows(3, 2, v, &m) == RDC_OK);
  rdc_params* p = nullptr;
  REQUIRE(rdc_params_create(&p) == RDC_OK);
  rdc_result* r = nullptr;
  CHECK(rdc_run(m, p, &r) == RDC_ERR_TOO_FEW_FEATURES);
  CHECK(std::string(rdc_last_error()).find("3 features") != std::string::npos);
  rdc_params_free(p);
  rdc_matrix_free(m);
}

TEST_CASE("evaluation helpers") {
  const uint8_t member[] = {1, 1, 0, 0};
  const uint8_t labels[] = {1, 0, 0, 0};
  rdc_class_report report{};
  REQUIRE(rdc_class_report_compute(member, labels, 4, &report) == RDC_OK);
  CHECK(report.accuracy == 0.75);
  CHECK(report.classes[1].has_recall == 1);
  CHECK(report.classes[1].recall == 1.0);

  const double a[] = {0.2, 0.1, 0.15, 0.25, 0.3};
  const double b[] = {0, 0, 0, 0, 0};
  double t = 0, pv = 0;
  REQUIRE(rdc_paired_t_test(a, b, 5, &t, &pv) == RDC_OK);
  CHECK(t == doctest::Approx(4 * std::sqrt(2.0)));
  CHECK(pv < 0.01);
  CHECK(rdc_paired_t_test(a, a, 5, &t, &pv) == RDC_ERR_DEGENERATE_TEST);
}
