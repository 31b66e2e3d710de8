#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reldenclu {

// Row (observation) or column (feature) index. 0-based everywhere in the core.
using Index = std::uint32_t;

// Sorted, duplicate-free list of indices.
using IndexSet = std::vector<Index>;

enum class ErrorCode {
  invalid_argument,
  io,
  parse,
  non_finite,
  too_few_features,
  invalid_bicluster,
  dimension_mismatch,
  insufficient_data,
  zero_separation,
  degenerate_column,
  degenerate_test,
  no_result,
  unknown_family,
  invalid_parameters,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// N x M table of finite reals, rows are observations and columns features.
// Stored column-major since every stage of the pipeline works per column.
class DataMatrix {
 public:
  DataMatrix() = default;

  // `values` is row-major with rows * cols entries.
  static DataMatrix from_rows(std::size_t rows, std::size_t cols,
                              std::span<const double> values);
  static DataMatrix from_columns(std::vector<std::vector<double>> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  double at(std::size_t row, std::size_t col) const {
    return columns_[col][row];
  }
  const std::vector<double>& column(std::size_t col) const {
    return columns_[col];
  }

  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
  const std::vector<std::string>& col_ids() const noexcept { return col_ids_; }
  void set_row_ids(std::vector<std::string> ids);
  void set_col_ids(std::vector<std::string> ids);

  // Row/column subsets and reorderings, used by the generators.
  DataMatrix select_rows(std::span<const Index> rows) const;
  DataMatrix select_cols(std::span<const Index> cols) const;

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<double>> columns_;
  std::vector<std::string> row_ids_;
  std::vector<std::string> col_ids_;
};

enum class Normalization { bounded, unbounded };
enum class DensityMode { automatic, small, large };

const char* to_string(Normalization n) noexcept;
const char* to_string(DensityMode m) noexcept;

struct NormalizedColumn {
  std::vector<double> values;
  Normalization transform = Normalization::bounded;
  // Range of the raw column.
  double raw_min = 0.0;
  double raw_max = 0.0;
  // Constant raw column: values are all zero and the column takes part in no
  // pair analysis.
  bool degenerate = false;
};

class NormalizedMatrix {
 public:
  NormalizedMatrix() = default;
  explicit NormalizedMatrix(std::vector<NormalizedColumn> columns);

  std::size_t rows() const noexcept {
    return columns_.empty() ? 0 : columns_.front().values.size();
  }
  std::size_t cols() const noexcept { return columns_.size(); }
  const NormalizedColumn& column(std::size_t c) const { return columns_[c]; }

 private:
  std::vector<NormalizedColumn> columns_;
};

// Connected dense regions for one feature pair (first < second). Regions are
// pairwise disjoint and each is a sorted set of row indices.
struct DenseRegionSet {
  Index first = 0;
  Index second = 0;
  std::vector<IndexSet> regions;
};

struct SeedBicluster {
  IndexSet observations;
  // Ascending feature indices i < j < k.
  std::array<Index, 3> triplet{};
  // Region indices chosen in pairs (i,j), (j,k) and (i,k).
  std::array<std::uint32_t, 3> region_choice{};
};

struct Bicluster {
  IndexSet observations;
  IndexSet features;

  std::size_t area() const noexcept {
    return observations.size() * features.size();
  }
  friend bool operator==(const Bicluster&, const Bicluster&) = default;
};

// Throws invalid_bicluster unless `b` is non-empty, sorted, duplicate-free and
// in range for an n x m matrix.
void validate_bicluster(const Bicluster& b, std::size_t n, std::size_t m);

struct ParameterSet {
  std::size_t min_seed_size = 100;
  double sim2seed = 0.8;
  bool reuse_all_seeds = false;
  std::optional<double> reuse_seed_sim = 0.5;
  std::size_t obs_in_min_base = 3;
  double clus_sim = 1.0;
  Normalization normalization = Normalization::bounded;
  DensityMode density_mode = DensityMode::automatic;
  double small_c = 0.4999;
  std::size_t large_threshold = 750;
  std::uint64_t rng_seed = 0;

  // Throws invalid_parameters on the first violated constraint.
  void validate() const;
};

class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  MembershipMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return bits_[r * cols_ + c] != 0;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    bits_[r * cols_ + c] = v ? 1 : 0;
  }
  std::size_t ones() const noexcept;

  // Rows with any set bit and columns with any set bit.
  Bicluster extract() const;

  friend bool operator==(const MembershipMatrix&,
                         const MembershipMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

MembershipMatrix membership_matrix(const Bicluster& b, std::size_t n,
                                   std::size_t m);

// Sorts and removes duplicates in place.
void canonicalize(IndexSet& s);

std::size_t intersection_size(std::span<const Index> a,
                              std::span<const Index> b);

}  // namespace reldenclu
