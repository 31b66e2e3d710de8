#include "reldenclu/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reldenclu {

std::vector<double> norm_bounded(std::span<const double> column) {
  if (column.empty())
    throw Error(ErrorCode::insufficient_data, "empty column");
  const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::non_finite, "column contains non-finite values");
  if (!(hi > lo))
    throw Error(ErrorCode::degenerate_column, "constant column");
  const double range = hi - lo;
  std::vector<double> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    // Clamp guards the endpoints against rounding in the division.
    out[i] = std::clamp((column[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

std::vector<double> norm_unbounded(std::span<const double> column) {
  std::vector<double> mapped(column.size());
  std::transform(column.begin(), column.end(), mapped.begin(), [](double x) {
    return std::atan(x) / std::numbers::pi + 0.5;
  });
  return norm_bounded(mapped);
}

NormalizedMatrix normalize(const DataMatrix& matrix, Normalization transform) {
  std::vector<NormalizedColumn> columns;
  columns.reserve(matrix.cols());
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    const auto& raw = matrix.column(c);
    NormalizedColumn col;
    col.transform = transform;
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    col.raw_min = *lo;
    col.raw_max = *hi;
    try {
      col.values = transform == Normalization::bounded ? norm_bounded(raw)
                                                       : norm_unbounded(raw);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_column) throw;
      col.values.assign(raw.size(), 0.0);
      col.degenerate = true;
    }
    columns.push_back(std::move(col));
  }
  return NormalizedMatrix(std::move(columns));
}

}  // namespace reldenclu
