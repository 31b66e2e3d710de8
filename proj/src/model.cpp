#include "reldenclu/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reldenclu {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::too_few_features: return "too few features";
    case ErrorCode::invalid_bicluster: return "invalid bicluster";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::zero_separation: return "zero separation";
    case ErrorCode::degenerate_column: return "degenerate column";
    case ErrorCode::degenerate_test: return "degenerate test";
    case ErrorCode::no_result: return "no result";
    case ErrorCode::unknown_family: return "unknown family";
    case ErrorCode::invalid_parameters: return "invalid parameters";
  }
  return "unknown error";
}

const char* to_string(Normalization n) noexcept {
  return n == Normalization::bounded ? "bounded" : "unbounded";
}

const char* to_string(DensityMode m) noexcept {
  switch (m) {
    case DensityMode::automatic: return "auto";
    case DensityMode::small: return "small";
    case DensityMode::large: return "large";
  }
  return "auto";
}

namespace {

void check_finite(const std::vector<std::vector<double>>& columns) {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < columns[c].size(); ++r) {
      if (!std::isfinite(columns[c][r])) {
        std::ostringstream msg;
        msg << "non-finite value at row " << r + 1 << ", column " << c + 1;
        throw Error(ErrorCode::non_finite, msg.str());
      }
    }
  }
}

}  // namespace

DataMatrix DataMatrix::from_rows(std::size_t rows, std::size_t cols,
                                 std::span<const double> values) {
  if (values.size() != rows * cols)
    throw Error(ErrorCode::dimension_mismatch,
                "value count does not match rows * cols");
  std::vector<std::vector<double>> columns(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) columns[c][r] = values[r * cols + c];
  return from_columns(std::move(columns));
}

DataMatrix DataMatrix::from_columns(std::vector<std::vector<double>> columns) {
  if (columns.size() < 2)
    throw Error(ErrorCode::too_few_features,
                "data matrix needs at least 2 columns, got " +
                    std::to_string(columns.size()));
  const std::size_t rows = columns.front().size();
  if (rows == 0)
    throw Error(ErrorCode::insufficient_data, "data matrix has no rows");
  for (const auto& c : columns)
    if (c.size() != rows)
      throw Error(ErrorCode::dimension_mismatch, "ragged columns");
  check_finite(columns);
  DataMatrix m;
  m.rows_ = rows;
  m.columns_ = std::move(columns);
  return m;
}

void DataMatrix::set_row_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != rows_)
    throw Error(ErrorCode::dimension_mismatch, "row id count mismatch");
  row_ids_ = std::move(ids);
}

void DataMatrix::set_col_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != cols())
    throw Error(ErrorCode::dimension_mismatch, "column id count mismatch");
  col_ids_ = std::move(ids);
}

DataMatrix DataMatrix::select_rows(std::span<const Index> rows) const {
  DataMatrix out;
  out.rows_ = rows.size();
  out.columns_.resize(cols());
  for (std::size_t c = 0; c < cols(); ++c) {
    out.columns_[c].reserve(rows.size());
    for (Index r : rows) out.columns_[c].push_back(columns_[c].at(r));
  }
  if (!row_ids_.empty())
    for (Index r : rows) out.row_ids_.push_back(row_ids_[r]);
  out.col_ids_ = col_ids_;
  return out;
}

DataMatrix DataMatrix::select_cols(std::span<const Index> cols) const {
  DataMatrix out;
  out.rows_ = rows_;
  for (Index c : cols) out.columns_.push_back(columns_.at(c));
  if (!col_ids_.empty())
    for (Index c : cols) out.col_ids_.push_back(col_ids_[c]);
  out.row_ids_ = row_ids_;
  return out;
}

NormalizedMatrix::NormalizedMatrix(std::vector<NormalizedColumn> columns)
    : columns_(std::move(columns)) {
  for (const auto& c : columns_)
    if (c.values.size() != columns_.front().values.size())
      throw Error(ErrorCode::dimension_mismatch, "ragged normalized columns");
}

void validate_bicluster(const Bicluster& b, std::size_t n, std::size_t m) {
  auto check = [](const IndexSet& s, std::size_t bound, const char* what) {
    if (s.empty())
      throw Error(ErrorCode::invalid_bicluster,
                  std::string("empty ") + what + " set");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= bound)
        throw Error(ErrorCode::invalid_bicluster,
                    std::string(what) + " index " + std::to_string(s[i]) +
                        " out of range");
      if (i > 0 && s[i] <= s[i - 1])
        throw Error(ErrorCode::invalid_bicluster,
                    std::string(what) + " indices not strictly increasing");
    }
  };
  check(b.observations, n, "observation");
  check(b.features, m, "feature");
}

void ParameterSet::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::invalid_parameters, msg);
  };
  auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (min_seed_size < 1) fail("min_seed_size must be positive");
  if (!unit(sim2seed)) fail("sim2seed must lie in (0, 1]");
  if (!reuse_all_seeds && !reuse_seed_sim)
    fail("reuse_seed_sim must be set when reuse_all_seeds is false");
  if (reuse_seed_sim && !unit(*reuse_seed_sim))
    fail("reuse_seed_sim must lie in (0, 1]");
  if (obs_in_min_base < 1) fail("obs_in_min_base must be positive");
  if (!unit(clus_sim)) fail("clus_sim must lie in (0, 1]");
  if (!(small_c > 0.0 && small_c < 0.5)) fail("small_c must lie in (0, 0.5)");
  if (large_threshold < 1) fail("large_threshold must be positive");
}

std::size_t MembershipMatrix::ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Bicluster MembershipMatrix::extract() const {
  Bicluster b;
  std::vector<bool> col_hit(cols_, false);
  for (std::size_t r = 0; r < rows_; ++r) {
    bool row_hit = false;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (bits_[r * cols_ + c]) {
        row_hit = true;
        col_hit[c] = true;
      }
    }
    if (row_hit) b.observations.push_back(static_cast<Index>(r));
  }
  for (std::size_t c = 0; c < cols_; ++c)
    if (col_hit[c]) b.features.push_back(static_cast<Index>(c));
  return b;
}

MembershipMatrix membership_matrix(const Bicluster& b, std::size_t n,
                                   std::size_t m) {
  validate_bicluster(b, n, m);
  MembershipMatrix mm(n, m);
  for (Index r : b.observations)
    for (Index c : b.features) mm.set(r, c, true);
  return mm;
}

void canonicalize(IndexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

std::size_t intersection_size(std::span<const Index> a,
                              std::span<const Index> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace reldenclu
