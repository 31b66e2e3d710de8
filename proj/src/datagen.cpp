#include "reldenclu/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reldenclu {

double Rng::uniform() {
  // 53 random bits, shifted off zero by half a step.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::invalid_argument, "empty range");
  // Rejection keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % bound;
  }
}

std::vector<Index> Rng::sample(std::size_t population, std::size_t count) {
  if (count > population)
    throw Error(ErrorCode::invalid_argument, "sample larger than population");
  std::vector<Index> pool(population);
  for (std::size_t i = 0; i < population; ++i) pool[i] = static_cast<Index>(i);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::vector<Index> Rng::permutation(std::size_t n) { return sample(n, n); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::nonlinear1: return "nonlinear1";
    case Family::nonlinear2: return "nonlinear2";
    case Family::base: return "base";
    case Family::scaled: return "scaled";
    case Family::translated: return "translated";
    case Family::linear: return "linear";
    case Family::square: return "square";
    case Family::exponential: return "exponential";
    case Family::point_proportion: return "point_proportion";
    case Family::cluster_proportion: return "cluster_proportion";
    case Family::noisy_uniform: return "noisy_uniform";
    case Family::permutations: return "permutations";
    case Family::normal: return "normal";
    case Family::noisy_normal: return "noisy_normal";
    case Family::overlap: return "overlap";
    case Family::large: return "large";
  }
  return "unknown";
}

const std::vector<Family>& simulated_families() {
  static const std::vector<Family> families = {
      Family::nonlinear1,        Family::nonlinear2,
      Family::base,              Family::scaled,
      Family::translated,        Family::linear,
      Family::square,            Family::exponential,
      Family::point_proportion,  Family::cluster_proportion,
      Family::noisy_uniform,     Family::permutations,
      Family::normal,            Family::noisy_normal,
      Family::overlap,
  };
  return families;
}

Family parse_family(std::string_view tag) {
  if (tag == "overlap1" || tag == "overlap2") return Family::overlap;
  if (tag == "large") return Family::large;
  for (Family f : simulated_families())
    if (tag == to_string(f)) return f;
  throw Error(ErrorCode::unknown_family,
              "unknown dataset family '" + std::string(tag) + "'");
}

const char* to_string(Transform t) noexcept {
  switch (t) {
    case Transform::scale: return "scale";
    case Transform::translate: return "translate";
    case Transform::linear: return "linear";
    case Transform::square: return "square";
    case Transform::exp: return "exp";
    case Transform::point_proportion: return "point_proportion";
    case Transform::cluster_proportion: return "cluster_proportion";
    case Transform::uniform_noise: return "uniform_noise";
    case Transform::permute: return "permute";
  }
  return "unknown";
}

Transform parse_transform(std::string_view tag) {
  for (Transform t :
       {Transform::scale, Transform::translate, Transform::linear,
        Transform::square, Transform::exp, Transform::point_proportion,
        Transform::cluster_proportion, Transform::uniform_noise,
        Transform::permute})
    if (tag == to_string(t)) return t;
  throw Error(ErrorCode::invalid_argument,
              "unknown transform '" + std::string(tag) + "'");
}

std::vector<MembershipMatrix> GeneratedDataset::truth_matrices() const {
  std::vector<MembershipMatrix> out;
  for (const auto& b : truth)
    out.push_back(membership_matrix(b, matrix.rows(), matrix.cols()));
  return out;
}

namespace {

using Columns = std::vector<std::vector<double>>;

Columns uniform_columns(Rng& rng, std::size_t rows, std::size_t cols) {
  Columns c(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) c[j][r] = rng.uniform();
  return c;
}

Columns normal_columns(Rng& rng, std::size_t rows, std::size_t cols) {
  Columns c(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) c[j][r] = rng.normal();
  return c;
}

Columns columns_of(const DataMatrix& m) {
  Columns c;
  for (std::size_t j = 0; j < m.cols(); ++j) c.push_back(m.column(j));
  return c;
}

struct Placement {
  IndexSet rows;
  // Draw order; the first column is the source x of the block.
  std::vector<Index> cols;

  Bicluster bicluster() const {
    Bicluster b{rows, IndexSet(cols.begin(), cols.end())};
    canonicalize(b.features);
    return b;
  }
};

Placement place_block(Rng& rng, std::size_t rows, std::size_t cols,
                      std::size_t block_rows, std::size_t block_cols) {
  Placement p;
  p.rows = rng.sample(rows, block_rows);
  canonicalize(p.rows);
  p.cols = rng.sample(cols, block_cols);
  return p;
}

// Column h of the block becomes scale[h] * x with x the first block column.
void plant_proportional(Rng& rng, Columns& data, const Placement& p) {
  std::vector<double> factor(p.cols.size(), 1.0);
  for (std::size_t h = 1; h < factor.size(); ++h) factor[h] = rng.uniform();
  for (Index r : p.rows) {
    const double x = data[p.cols[0]][r];
    for (std::size_t h = 1; h < p.cols.size(); ++h)
      data[p.cols[h]][r] = factor[h] * x;
  }
}

GeneratedDataset proportional_dataset(std::uint64_t seed, std::size_t rows,
                                      std::size_t cols, std::size_t block_rows,
                                      std::size_t block_cols, bool gaussian,
                                      const char* family) {
  Rng rng(seed);
  Columns data = gaussian ? normal_columns(rng, rows, cols)
                          : uniform_columns(rng, rows, cols);
  const Placement p = place_block(rng, rows, cols, block_rows, block_cols);
  plant_proportional(rng, data, p);
  GeneratedDataset ds;
  ds.matrix = DataMatrix::from_columns(std::move(data));
  ds.truth = {p.bicluster()};
  ds.family = family;
  ds.seed = seed;
  return ds;
}

double nonlinear_function(int variant, std::size_t h, double x) {
  using std::numbers::pi;
  switch (h) {
    case 0: return x;
    case 1: return std::sin(x);
    case 2: return x * x;
    case 3: return std::pow(x, 10);
    case 4: return variant == 1 ? std::sin(pi * x) : 0.5 * std::sin(pi * x);
    case 5:
      return variant == 1 ? std::sin(2 * pi * x)
                          : 0.5 * std::sin(2 * pi * x) + 0.5;
    case 6: return x * x * x;
    case 7: return variant == 1 ? 4 * x * x : x * x;
    case 8:
      return variant == 1 ? std::sin(4 * pi * x)
                          : 0.5 * std::sin(4 * pi * x) + 0.5;
    case 9: return variant == 1 ? 4 * x * x * x : x * x * x;
  }
  return x;
}

std::uint64_t transform_stream(Transform t) {
  return 100 + static_cast<std::uint64_t>(t);
}

}  // namespace

GeneratedDataset gen_nonlinear(int variant, std::uint64_t seed) {
  if (variant != 1 && variant != 2)
    throw Error(ErrorCode::invalid_argument, "non-linear variant must be 1 or 2");
  Rng rng(seed);
  Columns data = uniform_columns(rng, 1000, 20);
  const Placement p = place_block(rng, 1000, 20, 500, 10);
  for (Index r : p.rows) {
    const double x = data[p.cols[0]][r];
    for (std::size_t h = 1; h < p.cols.size(); ++h)
      data[p.cols[h]][r] = nonlinear_function(variant, h, x);
  }
  GeneratedDataset ds;
  ds.matrix = DataMatrix::from_columns(std::move(data));
  ds.truth = {p.bicluster()};
  ds.family = variant == 1 ? "nonlinear1" : "nonlinear2";
  ds.seed = seed;
  return ds;
}

GeneratedDataset gen_base(std::uint64_t seed) {
  return proportional_dataset(seed, 1000, 20, 500, 10, false, "base");
}

GeneratedDataset gen_normal(bool noisy, std::uint64_t seed) {
  GeneratedDataset ds =
      proportional_dataset(seed, 1000, 20, 500, 10, true, "normal");
  if (noisy) {
    Rng rng(derive_seed(seed, 1));
    Columns data = columns_of(ds.matrix);
    for (std::size_t r = 0; r < ds.matrix.rows(); ++r)
      for (auto& col : data) col[r] += 0.1 * rng.normal();
    ds.matrix = DataMatrix::from_columns(std::move(data));
    ds.family = "noisy_normal";
  }
  return ds;
}

GeneratedDataset gen_overlap(std::uint64_t seed) {
  Rng rng(seed);
  constexpr std::size_t rows = 1000;
  constexpr std::size_t cols = 20;
  Columns data = uniform_columns(rng, rows, cols);

  // First block 500 x 10; the second block's 300 rows all lie inside the
  // first, and 3 of its 8 columns are shared.
  const std::vector<Index> rows1 = rng.sample(rows, 500);
  const std::vector<Index> cols1 = rng.sample(cols, 10);
  std::vector<Index> rows2;
  for (Index pick : rng.sample(rows1.size(), 300)) rows2.push_back(rows1[pick]);
  std::vector<Index> cols2;
  for (Index pick : rng.sample(cols1.size(), 3)) cols2.push_back(cols1[pick]);
  std::vector<Index> outside;
  for (Index c = 0; c < cols; ++c)
    if (std::find(cols1.begin(), cols1.end(), c) == cols1.end())
      outside.push_back(c);
  for (Index pick : rng.sample(outside.size(), 5)) cols2.push_back(outside[pick]);

  // Each block is shifted by one draw from (1, 2), putting it above the
  // (0, 1) background; shared cells carry both shifts.
  const double shift1 = rng.uniform(1.0, 2.0);
  const double shift2 = rng.uniform(1.0, 2.0);
  for (Index r : rows1)
    for (Index c : cols1) data[c][r] += shift1;
  for (Index r : rows2)
    for (Index c : cols2) data[c][r] += shift2;

  GeneratedDataset ds;
  ds.matrix = DataMatrix::from_columns(std::move(data));
  Bicluster b1{IndexSet(rows1.begin(), rows1.end()),
               IndexSet(cols1.begin(), cols1.end())};
  Bicluster b2{IndexSet(rows2.begin(), rows2.end()),
               IndexSet(cols2.begin(), cols2.end())};
  for (auto* b : {&b1, &b2}) {
    canonicalize(b->observations);
    canonicalize(b->features);
  }
  ds.truth = {std::move(b1), std::move(b2)};
  ds.family = "overlap";
  ds.seed = seed;
  return ds;
}

GeneratedDataset gen_large(std::uint64_t seed) {
  return proportional_dataset(seed, 20000, 100, 10000, 30, false, "large");
}

GeneratedDataset apply_transform(const GeneratedDataset& ds, Transform kind,
                                 std::uint64_t seed) {
  Rng rng(seed);
  GeneratedDataset out = ds;
  Columns data = columns_of(ds.matrix);
  const std::size_t n = ds.matrix.rows();

  switch (kind) {
    case Transform::scale:
      for (auto& col : data) {
        const double r = rng.uniform();
        for (double& v : col) v *= r;
      }
      break;
    case Transform::translate:
      for (auto& col : data) {
        const double r = rng.uniform();
        for (double& v : col) v += r;
      }
      break;
    case Transform::linear:
      for (auto& col : data) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        for (double& v : col) v = r1 * v + r2;
      }
      break;
    case Transform::square:
      for (auto& col : data)
        for (double& v : col) v = v * v;
      break;
    case Transform::exp:
      for (auto& col : data)
        for (double& v : col) v = std::exp(v);
      break;
    case Transform::point_proportion: {
      for (auto& col : data) col.insert(col.end(), col.begin(), col.begin() + n);
      for (auto& b : out.truth) {
        const std::size_t k = b.observations.size();
        for (std::size_t i = 0; i < k; ++i)
          b.observations.push_back(static_cast<Index>(b.observations[i] + n));
      }
      break;
    }
    case Transform::cluster_proportion: {
      if (ds.truth.empty())
        throw Error(ErrorCode::invalid_argument, "dataset has no planted block");
      const IndexSet planted = ds.truth.front().observations;
      for (auto& col : data)
        for (Index r : planted) col.push_back(col[r]);
      for (auto& b : out.truth) {
        for (std::size_t i = 0; i < planted.size(); ++i)
          if (std::binary_search(b.observations.begin(), b.observations.end(),
                                 planted[i]))
            b.observations.push_back(static_cast<Index>(n + i));
        canonicalize(b.observations);
      }
      break;
    }
    case Transform::uniform_noise:
      for (std::size_t r = 0; r < n; ++r)
        for (auto& col : data) col[r] += 0.1 * rng.uniform();
      break;
    case Transform::permute: {
      out.row_perm = rng.permutation(n);
      out.col_perm = rng.permutation(data.size());
      Columns moved(data.size());
      for (std::size_t q = 0; q < data.size(); ++q) {
        const auto& src = data[out.col_perm[q]];
        moved[q].resize(n);
        for (std::size_t p = 0; p < n; ++p) moved[q][p] = src[out.row_perm[p]];
      }
      data = std::move(moved);
      std::vector<Index> new_row(n);
      for (std::size_t p = 0; p < n; ++p)
        new_row[out.row_perm[p]] = static_cast<Index>(p);
      std::vector<Index> new_col(out.col_perm.size());
      for (std::size_t q = 0; q < new_col.size(); ++q)
        new_col[out.col_perm[q]] = static_cast<Index>(q);
      for (auto& b : out.truth) {
        for (Index& o : b.observations) o = new_row[o];
        for (Index& f : b.features) f = new_col[f];
        canonicalize(b.observations);
        canonicalize(b.features);
      }
      break;
    }
  }
  out.matrix = DataMatrix::from_columns(std::move(data));
  return out;
}

GeneratedDataset invert_permutation(const GeneratedDataset& ds) {
  const std::size_t n = ds.matrix.rows();
  const std::size_t m = ds.matrix.cols();
  if (ds.row_perm.size() != n || ds.col_perm.size() != m)
    throw Error(ErrorCode::invalid_argument, "dataset carries no permutation");
  Columns data(m, std::vector<double>(n));
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t p = 0; p < n; ++p)
      data[ds.col_perm[q]][ds.row_perm[p]] = ds.matrix.at(p, q);
  GeneratedDataset out = ds;
  out.matrix = DataMatrix::from_columns(std::move(data));
  for (auto& b : out.truth) {
    for (Index& o : b.observations) o = ds.row_perm[o];
    for (Index& f : b.features) f = ds.col_perm[f];
    canonicalize(b.observations);
    canonicalize(b.features);
  }
  out.row_perm.clear();
  out.col_perm.clear();
  return out;
}

GeneratedDataset generate(Family family, std::uint64_t seed) {
  auto transformed = [&](Transform t) {
    GeneratedDataset ds =
        apply_transform(gen_base(seed), t, derive_seed(seed, transform_stream(t)));
    ds.family = to_string(family);
    return ds;
  };
  switch (family) {
    case Family::nonlinear1: return gen_nonlinear(1, seed);
    case Family::nonlinear2: return gen_nonlinear(2, seed);
    case Family::base: return gen_base(seed);
    case Family::scaled: return transformed(Transform::scale);
    case Family::translated: return transformed(Transform::translate);
    case Family::linear: return transformed(Transform::linear);
    case Family::square: return transformed(Transform::square);
    case Family::exponential: return transformed(Transform::exp);
    case Family::point_proportion: return transformed(Transform::point_proportion);
    case Family::cluster_proportion:
      return transformed(Transform::cluster_proportion);
    case Family::noisy_uniform: return transformed(Transform::uniform_noise);
    case Family::permutations: return transformed(Transform::permute);
    case Family::normal: return gen_normal(false, seed);
    case Family::noisy_normal: return gen_normal(true, seed);
    case Family::overlap: return gen_overlap(seed);
    case Family::large: return gen_large(seed);
  }
  throw Error(ErrorCode::unknown_family, "unknown dataset family");
}

ParameterSet family_parameters(Family family) {
  ParameterSet p;
  if (family == Family::normal || family == Family::noisy_normal)
    p.normalization = Normalization::unbounded;
  return p;
}

}  // namespace reldenclu
