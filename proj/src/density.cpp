#include "reldenclu/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "union_find.hpp"

namespace reldenclu {

double maximal_separation(std::span<const double> column) {
  if (column.size() < 2)
    throw Error(ErrorCode::insufficient_data,
                "maximal separation needs at least 2 values");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  double gap = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    gap = std::max(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

double small_bin_length(double sep, double c) {
  if (sep == 0.0)
    throw Error(ErrorCode::zero_separation,
                "zero maximal separation (column has no spread)");
  if (!(sep > 0.0 && sep <= 1.0))
    throw Error(ErrorCode::invalid_argument,
                "separation must lie in (0, 1], got " + std::to_string(sep));
  if (!(c > 0.0 && c < 0.5))
    throw Error(ErrorCode::invalid_argument, "exponent c must lie in (0, 0.5)");
  return std::pow(sep, c);
}

std::size_t large_partition_count(std::size_t n) {
  if (n < 2)
    throw Error(ErrorCode::insufficient_data,
                "partition count needs at least 2 observations");
  const auto k = static_cast<std::size_t>(
      std::lround(3.0 * std::log(static_cast<double>(n))));
  return std::max<std::size_t>(k, 2);
}

bool dense_cell_predicate(double joint, double marg_x, double marg_y,
                          std::size_t n_x, std::size_t n_y) {
  const double nx = static_cast<double>(n_x);
  const double ny = static_cast<double>(n_y);
  return joint > marg_x / ny && joint > marg_y / nx && joint > 1.0 / (nx * ny);
}

bool dense_cell_by_counts(std::uint64_t joint, std::uint64_t marg_x,
                          std::uint64_t marg_y, std::size_t n_x,
                          std::size_t n_y, std::uint64_t total) {
  return joint * n_y > marg_x && joint * n_x > marg_y &&
         joint * n_x * n_y > total;
}

std::size_t bin_index(double v, std::size_t n) {
  const double dn = static_cast<double>(n);
  const double guess = std::ceil(v * dn) - 1.0;
  std::size_t idx = 0;
  if (guess > 0.0) idx = std::min(n - 1, static_cast<std::size_t>(guess));
  // The product v * n can round across an edge; settle against k / n.
  while (idx > 0 && v <= static_cast<double>(idx) / dn) --idx;
  while (idx + 1 < n && v > static_cast<double>(idx + 1) / dn) ++idx;
  return idx;
}

GridHistogram::GridHistogram(std::span<const double> x,
                             std::span<const double> y, std::size_t n_x,
                             std::size_t n_y)
    : n_x_(n_x),
      n_y_(n_y),
      total_(x.size()),
      counts_(n_x * n_y, 0),
      row_sums_(n_x, 0),
      col_sums_(n_y, 0),
      cell_of_(x.size()) {
  if (x.size() != y.size())
    throw Error(ErrorCode::dimension_mismatch, "column lengths differ");
  if (n_x == 0 || n_y == 0)
    throw Error(ErrorCode::invalid_argument, "histogram needs bins");
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t i = bin_index(x[k], n_x);
    const std::size_t j = bin_index(y[k], n_y);
    cell_of_[k] = i * n_y + j;
    ++counts_[i * n_y + j];
    ++row_sums_[i];
    ++col_sums_[j];
  }
}

double GridHistogram::joint_probability(std::size_t i, std::size_t j) const {
  return static_cast<double>(count(i, j)) / static_cast<double>(total_);
}

double GridHistogram::marginal_x_probability(std::size_t i) const {
  return static_cast<double>(row_sums_[i]) / static_cast<double>(total_);
}

double GridHistogram::marginal_y_probability(std::size_t j) const {
  return static_cast<double>(col_sums_[j]) / static_cast<double>(total_);
}

bool GridHistogram::dense(std::size_t i, std::size_t j) const {
  return dense_cell_by_counts(count(i, j), row_sums_[i], col_sums_[j], n_x_,
                              n_y_, total_);
}

namespace {

// Groups `members` into connected components of `uf` and returns them ordered
// by their smallest member; each component lists members in ascending order.
std::vector<IndexSet> components_of(std::span<const Index> members,
                                    detail::UnionFind& uf, std::size_t n) {
  std::vector<IndexSet> out;
  std::vector<std::ptrdiff_t> slot_of_root(n, -1);
  for (Index m : members) {
    const std::size_t root = uf.find(m);
    if (slot_of_root[root] < 0) {
      slot_of_root[root] = static_cast<std::ptrdiff_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot_of_root[root])].push_back(m);
  }
  return out;
}

}  // namespace

std::vector<IndexSet> dense_regions_small(std::span<const double> x,
                                          std::span<const double> y,
                                          double c) {
  if (x.size() != y.size())
    throw Error(ErrorCode::dimension_mismatch, "column lengths differ");
  const std::size_t n = x.size();
  const double sep_x = small_bin_length(maximal_separation(x), c);
  const double sep_y = small_bin_length(maximal_separation(y), c);
  const double area = sep_x * sep_y;
  const double average_density = static_cast<double>(n) * area;

  // Neighbourhood of each point as a bitset over all points.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> neigh(n * words, 0);
  std::vector<std::size_t> neigh_count(n, 0);
  std::vector<std::size_t> strip_x(n, 1);
  std::vector<std::size_t> strip_y(n, 1);
  const double half_x = sep_x / 2;
  const double half_y = sep_y / 2;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dx = std::abs(x[a] - x[b]);
      const double dy = std::abs(y[a] - y[b]);
      if (dx < sep_x && dy < sep_y) {
        neigh[a * words + b / 64] |= std::uint64_t{1} << (b % 64);
        neigh[b * words + a / 64] |= std::uint64_t{1} << (a % 64);
        ++neigh_count[a];
        ++neigh_count[b];
      }
      if (dx < half_x) {
        ++strip_x[a];
        ++strip_x[b];
      }
      if (dy < half_y) {
        ++strip_y[a];
        ++strip_y[b];
      }
    }
  }

  std::vector<Index> survivors;
  for (std::size_t a = 0; a < n; ++a) {
    const double count = static_cast<double>(neigh_count[a]);
    const double density = count / area;
    if (count > average_density &&
        density > static_cast<double>(strip_x[a]) / sep_x &&
        density > static_cast<double>(strip_y[a]) / sep_y)
      survivors.push_back(static_cast<Index>(a));
  }

  // Two cells can share a neighbour only if their centres are closer than two
  // cell widths; the slack absorbs rounding in the differences.
  const double reach_x = 2.0 * sep_x * (1.0 + 1e-9);
  const double reach_y = 2.0 * sep_y * (1.0 + 1e-9);
  std::vector<bool> merged(n, false);
  for (std::size_t p = 0; p < survivors.size(); ++p) {
    const std::size_t a = survivors[p];
    const double strip_a =
        std::max(static_cast<double>(strip_x[a]) / sep_x,
                 static_cast<double>(strip_y[a]) / sep_y);
    for (std::size_t q = p + 1; q < survivors.size(); ++q) {
      const std::size_t b = survivors[q];
      if (std::abs(x[a] - x[b]) > reach_x || std::abs(y[a] - y[b]) > reach_y)
        continue;
      std::size_t common = 0;
      for (std::size_t w = 0; w < words; ++w)
        common += static_cast<std::size_t>(
            std::popcount(neigh[a * words + w] & neigh[b * words + w]));
      const double overlap_density = static_cast<double>(common) * 4.0 / area;
      const double threshold =
          std::max({strip_a, static_cast<double>(strip_x[b]) / sep_x,
                    static_cast<double>(strip_y[b]) / sep_y});
      if (overlap_density > threshold) {
        merged[a] = true;
        merged[b] = true;
      }
    }
  }

  std::vector<Index> kept;
  for (Index a : survivors)
    if (merged[a]) kept.push_back(a);
  if (kept.empty()) return {};

  const double npc = static_cast<double>(kept.size());
  const double radius = std::log(npc) / npc;
  const double radius_sq = radius * radius;
  detail::UnionFind uf(n);
  for (std::size_t p = 0; p < kept.size(); ++p) {
    for (std::size_t q = p + 1; q < kept.size(); ++q) {
      const double dx = x[kept[p]] - x[kept[q]];
      const double dy = y[kept[p]] - y[kept[q]];
      if (dx * dx + dy * dy <= radius_sq) uf.unite(kept[p], kept[q]);
    }
  }
  return components_of(kept, uf, n);
}

std::vector<IndexSet> dense_regions_large(std::span<const double> x,
                                          std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::dimension_mismatch, "column lengths differ");
  const std::size_t bins = large_partition_count(x.size());
  const GridHistogram hist(x, y, bins, bins);

  std::vector<bool> dense(bins * bins, false);
  for (std::size_t i = 0; i < bins; ++i)
    for (std::size_t j = 0; j < bins; ++j) dense[i * bins + j] = hist.dense(i, j);

  detail::UnionFind uf(bins * bins);
  for (std::size_t i = 0; i < bins; ++i) {
    for (std::size_t j = 0; j < bins; ++j) {
      if (!dense[i * bins + j]) continue;
      // Forward half of the 8-neighbourhood; the rest is covered by symmetry.
      const std::pair<int, int> steps[] = {{0, 1}, {1, -1}, {1, 0}, {1, 1}};
      for (auto [di, dj] : steps) {
        const auto ni = static_cast<std::ptrdiff_t>(i) + di;
        const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
        if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(bins) ||
            nj >= static_cast<std::ptrdiff_t>(bins))
          continue;
        const auto other = static_cast<std::size_t>(ni) * bins +
                           static_cast<std::size_t>(nj);
        if (dense[other]) uf.unite(i * bins + j, other);
      }
    }
  }

  // Region ids follow the row-major order of each component's first cell.
  std::vector<std::ptrdiff_t> region_of_root(bins * bins, -1);
  std::vector<std::ptrdiff_t> region_of_cell(bins * bins, -1);
  std::size_t regions = 0;
  for (std::size_t cell = 0; cell < bins * bins; ++cell) {
    if (!dense[cell]) continue;
    const std::size_t root = uf.find(cell);
    if (region_of_root[root] < 0)
      region_of_root[root] = static_cast<std::ptrdiff_t>(regions++);
    region_of_cell[cell] = region_of_root[root];
  }

  std::vector<IndexSet> out(regions);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto r = region_of_cell[hist.cell_of(k)];
    if (r >= 0) out[static_cast<std::size_t>(r)].push_back(static_cast<Index>(k));
  }
  return out;
}

PairRegions::PairRegions(std::size_t features, std::vector<DenseRegionSet> sets)
    : features_(features), sets_(std::move(sets)) {
  if (sets_.size() != features * (features - 1) / 2)
    throw Error(ErrorCode::dimension_mismatch,
                "region sets do not cover every feature pair");
}

std::size_t PairRegions::pair_slot(Index i, Index j, std::size_t features) {
  if (i > j) std::swap(i, j);
  // Pairs (0,1), (0,2), ..., (0,M-1), (1,2), ...
  const std::size_t fi = i;
  return fi * features - fi * (fi + 1) / 2 + (j - fi - 1);
}

const DenseRegionSet& PairRegions::at(Index a, Index b) const {
  if (a == b || a >= features_ || b >= features_)
    throw Error(ErrorCode::invalid_argument, "invalid feature pair");
  return sets_[pair_slot(a, b, features_)];
}

bool uses_large_method(std::size_t n, const ParameterSet& params) {
  switch (params.density_mode) {
    case DensityMode::small: return false;
    case DensityMode::large: return true;
    case DensityMode::automatic: return n >= params.large_threshold;
  }
  return true;
}

PairRegions find_dense_regions(const NormalizedMatrix& matrix,
                               const ParameterSet& params) {
  const std::size_t m = matrix.cols();
  if (m < 3)
    throw Error(ErrorCode::too_few_features,
                "need at least 3 features, got " + std::to_string(m));
  const std::size_t n = matrix.rows();
  const bool large = uses_large_method(n, params);

  std::vector<DenseRegionSet> sets(m * (m - 1) / 2);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      auto& s = sets[PairRegions::pair_slot(i, j, m)];
      s.first = i;
      s.second = j;
    }
  }

  detail::parallel_for(sets.size(), [&](std::size_t slot) {
    auto& s = sets[slot];
    const auto& cx = matrix.column(s.first);
    const auto& cy = matrix.column(s.second);
    if (cx.degenerate || cy.degenerate || n < 2) return;
    if (large) {
      s.regions = dense_regions_large(cx.values, cy.values);
    } else {
      try {
        s.regions = dense_regions_small(cx.values, cy.values, params.small_c);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::zero_separation) throw;
      }
    }
  });
  return PairRegions(m, std::move(sets));
}

}  // namespace reldenclu
