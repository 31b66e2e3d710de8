#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "reldenclu/model.hpp"

namespace reldenclu {

// Largest gap between consecutive sorted values. Needs at least two values.
double maximal_separation(std::span<const double> column);

// Side of the rolling-window cell for the small-data estimator: sep^c.
double small_bin_length(double sep, double c);

// Equal-width partitions per axis for the grid estimator: round(3 ln n),
// never below 2.
std::size_t large_partition_count(std::size_t n);

// A cell is dense when its joint probability strictly exceeds the average of
// both marginal strips and the average over the whole unit square:
//   joint > marg_x / n_y,  joint > marg_y / n_x,  joint > 1 / (n_x n_y).
bool dense_cell_predicate(double joint, double marg_x, double marg_y,
                          std::size_t n_x, std::size_t n_y);

// Same predicate on raw counts (probabilities share the denominator `total`),
// evaluated exactly in integer arithmetic.
bool dense_cell_by_counts(std::uint64_t joint, std::uint64_t marg_x,
                          std::uint64_t marg_y, std::size_t n_x,
                          std::size_t n_y, std::uint64_t total);

// Bin of v in n equal half-open partitions (k/n, (k+1)/n] of [0, 1]; the value
// 0 belongs to the first bin.
std::size_t bin_index(double v, std::size_t n);

class GridHistogram {
 public:
  GridHistogram(std::span<const double> x, std::span<const double> y,
                std::size_t n_x, std::size_t n_y);

  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_y() const noexcept { return n_y_; }
  std::size_t total() const noexcept { return total_; }

  std::uint64_t count(std::size_t i, std::size_t j) const {
    return counts_[i * n_y_ + j];
  }
  // Observations in x-bin i (summed over y) and in y-bin j.
  std::uint64_t marginal_x(std::size_t i) const { return row_sums_[i]; }
  std::uint64_t marginal_y(std::size_t j) const { return col_sums_[j]; }

  double joint_probability(std::size_t i, std::size_t j) const;
  double marginal_x_probability(std::size_t i) const;
  double marginal_y_probability(std::size_t j) const;

  bool dense(std::size_t i, std::size_t j) const;

  // Cell (x-bin, y-bin) of each observation.
  std::size_t cell_of(std::size_t obs) const { return cell_of_[obs]; }

 private:
  std::size_t n_x_;
  std::size_t n_y_;
  std::size_t total_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> row_sums_;
  std::vector<std::uint64_t> col_sums_;
  std::vector<std::size_t> cell_of_;
};

// Rolling-window estimator for small data sets. A cell of side sep^c is
// centred on every observation; observations whose cell is denser than both
// marginal strips and the global average survive, survivors whose cell
// overlaps are merged, survivors that merged with nobody are dropped, and the
// rest are grouped by radius ln(k)/k connectivity (k = survivor count).
// Throws zero_separation when either column has no spread.
std::vector<IndexSet> dense_regions_small(std::span<const double> x,
                                          std::span<const double> y,
                                          double c);

// Grid estimator for large data sets: round(3 ln N) equal bins per axis,
// dense cells merged by 8-connectivity.
std::vector<IndexSet> dense_regions_large(std::span<const double> x,
                                          std::span<const double> y);

// Dense regions for every unordered feature pair (i < j), in lexicographic
// pair order.
class PairRegions {
 public:
  PairRegions() = default;
  PairRegions(std::size_t features, std::vector<DenseRegionSet> sets);

  std::size_t features() const noexcept { return features_; }
  const std::vector<DenseRegionSet>& sets() const noexcept { return sets_; }

  // Order of the arguments does not matter.
  const DenseRegionSet& at(Index a, Index b) const;

  static std::size_t pair_slot(Index i, Index j, std::size_t features);

 private:
  std::size_t features_ = 0;
  std::vector<DenseRegionSet> sets_;
};

// True when the grid estimator is used for a data set of n rows.
bool uses_large_method(std::size_t n, const ParameterSet& params);

PairRegions find_dense_regions(const NormalizedMatrix& matrix,
                               const ParameterSet& params);

}  // namespace reldenclu
