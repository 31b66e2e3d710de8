#pragma once

#include <span>
#include <vector>

#include "reldenclu/model.hpp"

namespace reldenclu {

// Min-max map onto [0, 1]. Throws degenerate_column when max == min.
std::vector<double> norm_bounded(std::span<const double> column);

// x -> atan(x)/pi + 0.5 followed by norm_bounded. Suited to data with an
// unbounded support such as Gaussian samples.
std::vector<double> norm_unbounded(std::span<const double> column);

// Applies one transform to every column. Constant columns become all-zero
// and are flagged degenerate instead of raising.
NormalizedMatrix normalize(const DataMatrix& matrix, Normalization transform);

}  // namespace reldenclu
