#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "reldenclu/datagen.hpp"
#include "reldenclu/density.hpp"
#include "reldenclu/normalize.hpp"

using namespace reldenclu;
using doctest::Approx;

namespace {

oracle::Regions as_regions(const std::vector<IndexSet>& sets) {
  oracle::Regions out;
  for (const auto& s : sets) out.insert(oracle::Region(s.begin(), s.end()));
  return out;
}

// Two independent uniform columns rescaled onto [0, 1].
std::pair<std::vector<double>, std::vector<double>> uniform_pair(
    std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  return {norm_bounded(x), norm_bounded(y)};
}

}  // namespace

TEST_CASE("maximal separation") {
  CHECK(maximal_separation(std::vector<double>{0, 0.2, 0.5, 1.0}) == 0.5);
  CHECK(maximal_separation(std::vector<double>{0, 1}) == 1.0);
  std::vector<double> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[i] = i / 99.0;
  CHECK(maximal_separation(ramp) == Approx(1.0 / 99).epsilon(1e-12));
  CHECK(maximal_separation(ramp) == oracle::max_gap(ramp));
  CHECK_THROWS_AS(maximal_separation(std::vector<double>{0.5}), Error);
}

TEST_CASE("small bin length") {
  CHECK(small_bin_length(1.0, 0.4999) == 1.0);
  CHECK(small_bin_length(0.25, 0.4999) == Approx(std::pow(0.25, 0.4999)));
  // exp(0.4999 * ln 0.01)
  CHECK(small_bin_length(0.01, 0.4999) ==
        Approx(0.10004606230728402).epsilon(1e-14));
  try {
    small_bin_length(0.0, 0.4999);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_separation);
  }
  CHECK_THROWS_AS(small_bin_length(0.5, 0.5), Error);
}

TEST_CASE("partition counts") {
  CHECK(large_partition_count(1000) == 21);
  CHECK(large_partition_count(2) == 2);
  CHECK(large_partition_count(20000) == 30);
}

TEST_CASE("partition count trends towards the consistency limits") {
  double prev_inv = 1.0;
  double prev_load = 0.0;
  for (std::size_t n : {100u, 1000u, 10000u, 1000000u}) {
    const double k = static_cast<double>(large_partition_count(n));
    const double inv = 1.0 / (k * k);
    const double load = static_cast<double>(n) / (k * k);
    CHECK(inv < prev_inv);
    CHECK(load > prev_load);
    prev_inv = inv;
    prev_load = load;
  }
}

TEST_CASE("dense cell predicate") {
  CHECK(dense_cell_predicate(0.5, 0.5, 0.5, 2, 2));
  CHECK_FALSE(dense_cell_predicate(0.0, 0.3, 0.7, 2, 2));
  // Independence sits on the boundary and is never dense.
  for (std::size_t nx : {2u, 3u, 5u, 21u})
    for (std::size_t ny : {2u, 4u, 21u}) {
      const double mx = 1.0 / static_cast<double>(nx);
      const double my = 1.0 / static_cast<double>(ny);
      CHECK_FALSE(dense_cell_by_counts(1, ny, nx, nx, ny, nx * ny));
      CHECK_FALSE(dense_cell_predicate(mx * my, mx, my, nx, ny));
    }
}

TEST_CASE("count and probability forms of the predicate agree") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t nx = 2 + gen() % 20;
    const std::size_t ny = 2 + gen() % 20;
    const std::uint64_t total = 1 + gen() % 500;
    const std::uint64_t joint = gen() % (total + 1);
    const std::uint64_t mx = joint + gen() % (total - joint + 1);
    const std::uint64_t my = joint + gen() % (total - joint + 1);
    const bool exact = dense_cell_by_counts(joint, mx, my, nx, ny, total);
    // Same inequalities in rational arithmetic.
    const bool rational = joint * ny > mx && joint * nx > my &&
                          joint * nx * ny > total;
    CHECK(exact == rational);
  }
}

TEST_CASE("bins are half-open on the left") {
  CHECK(bin_index(0.0, 4) == 0);
  CHECK(bin_index(0.25, 4) == 0);
  CHECK(bin_index(std::nextafter(0.25, 1.0), 4) == 1);
  CHECK(bin_index(1.0, 4) == 3);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    double v = u(gen);
    if (trial % 5 == 0) v = static_cast<double>(gen() % (n + 1)) / static_cast<double>(n);
    CHECK(bin_index(v, n) == oracle::bin_of(v, n));
  }
}

TEST_CASE("histogram marginals are sums of joint counts") {
  auto [x, y] = uniform_pair(4, 300);
  const GridHistogram h(x, y, 7, 5);
  std::size_t total = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    std::uint64_t row = 0;
    for (std::size_t j = 0; j < 5; ++j) row += h.count(i, j);
    CHECK(row == h.marginal_x(i));
    total += row;
  }
  for (std::size_t j = 0; j < 5; ++j) {
    std::uint64_t col = 0;
    for (std::size_t i = 0; i < 7; ++i) col += h.count(i, j);
    CHECK(col == h.marginal_y(j));
  }
  CHECK(total == 300);
}

TEST_CASE("large path: all points in one cell") {
  const std::vector<double> x(50, 0.5);
  const std::vector<double> y(50, 0.5);
  const auto r = dense_regions_large(x, y);
  REQUIRE(r.size() == 1);
  CHECK(r[0].size() == 50);
}

TEST_CASE("large path: diagonal cells join diagonally") {
  // Four points give round(3 ln 4) = 4 bins; one point per diagonal cell.
  const std::vector<double> v = {0.125, 0.375, 0.625, 0.875};
  const auto r = dense_regions_large(v, v);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == IndexSet{0, 1, 2, 3});
}

TEST_CASE("large path matches the brute-force grid") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto [x, y] = uniform_pair(seed, 200 + seed * 7);
    // Plant a dependent strip on every other instance.
    if (seed % 2 == 0)
      for (std::size_t i = 0; i < x.size() / 3; ++i) y[i] = x[i] * x[i];
    CHECK(as_regions(dense_regions_large(x, y)) == oracle::large_regions(x, y));
  }
}

TEST_CASE("large path on independent uniform data") {
  // Mean dense-cell fraction measured with the brute-force grid over 20
  // seeds of 100 x 2 uniform data.
  double fraction = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [x, y] = uniform_pair(seed, 100);
    const auto g = oracle::grid(x, y);
    std::size_t dense = 0;
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j) {
        dense += g.dense[i][j];
        const GridHistogram h(x, y, g.n, g.n);
        CHECK(h.dense(i, j) == static_cast<bool>(g.dense[i][j]));
      }
    fraction += static_cast<double>(dense) / static_cast<double>(g.n * g.n);
  }
  CHECK(fraction / 20 == Approx(0.3855).epsilon(1e-3));
}

TEST_CASE("small path: diagonal line forms one region") {
  std::vector<double> d(100);
  for (int i = 0; i < 100; ++i) d[i] = i / 99.0;
  const auto r = dense_regions_small(d, d, 0.4999);
  CHECK(as_regions(r) == oracle::small_regions(d, d, 0.4999));
  REQUIRE(r.size() == 1);
  CHECK(r[0].size() >= 90);
}

TEST_CASE("small path: two distant points") {
  const std::vector<double> x = {0.0, 1.0};
  const std::vector<double> y = {0.0, 1.0};
  CHECK(dense_regions_small(x, y, 0.4999).empty());
}

TEST_CASE("small path: zero separation") {
  const std::vector<double> x = {0.0, 0.0, 0.0};
  const std::vector<double> y = {0.0, 0.5, 1.0};
  CHECK_THROWS_AS(dense_regions_small(x, y, 0.4999), Error);
}

TEST_CASE("small path matches the step-by-step oracle") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto [x, y] = uniform_pair(100 + seed, 60 + seed * 3);
    if (seed % 3 == 0)
      for (std::size_t i = 0; i < x.size() / 2; ++i) y[i] = std::sin(3 * x[i]) / 2;
    CHECK(as_regions(dense_regions_small(x, y, 0.4999)) ==
          oracle::small_regions(x, y, 0.4999));
  }
}

TEST_CASE("small path on independent uniform data") {
  // The verbatim procedure compares a neighbourhood box of width 2 sep
  // against a density normaliser of sep^2, so uniform noise is mostly kept.
  // The mean mass below is the oracle's measurement over 20 seeds.
  double mass = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [x, y] = uniform_pair(seed, 100);
    const auto r = dense_regions_small(x, y, 0.4999);
    CHECK(as_regions(r) == oracle::small_regions(x, y, 0.4999));
    for (const auto& s : r) mass += static_cast<double>(s.size());
  }
  CHECK(mass / 20 == Approx(98.05).epsilon(1e-12));
}

TEST_CASE("regions are disjoint and in range") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [x, y] = uniform_pair(seed, 150);
    for (const auto& regions :
         {dense_regions_small(x, y, 0.4999), dense_regions_large(x, y)}) {
      std::vector<int> seen(150, 0);
      for (const auto& r : regions)
        for (Index i : r) {
          REQUIRE(i < 150);
          ++seen[i];
        }
      for (int s : seen) CHECK(s <= 1);
    }
  }
}

TEST_CASE("dispatch between the two estimators") {
  ParameterSet p;
  CHECK_FALSE(uses_large_method(100, p));
  CHECK(uses_large_method(19020, p));
  p.density_mode = DensityMode::large;
  CHECK(uses_large_method(100, p));
  p.density_mode = DensityMode::small;
  CHECK_FALSE(uses_large_method(19020, p));
}

TEST_CASE("pair regions cover every pair") {
  auto [x, y] = uniform_pair(8, 120);
  auto [z, w] = uniform_pair(9, 120);
  const auto m = DataMatrix::from_columns({x, y, z, w});
  ParameterSet p;
  const auto regions = find_dense_regions(normalize(m, Normalization::bounded), p);
  CHECK(regions.sets().size() == 6);
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) {
      CHECK(regions.at(i, j).first == i);
      CHECK(regions.at(j, i).second == j);
    }
  CHECK_THROWS_AS(
      find_dense_regions(
          normalize(DataMatrix::from_columns({x, y}), Normalization::bounded), p),
      Error);
}

TEST_CASE("regions are unchanged by positive affine maps and follow row order") {
  auto [x, y] = uniform_pair(21, 200);
  for (std::size_t i = 0; i < 80; ++i) y[i] = x[i];
  std::vector<double> ax(x.size());
  std::vector<double> ay(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ax[i] = 3.0 * x[i] + 7.0;
    ay[i] = 0.25 * y[i] - 2.0;
  }
  const auto nx = norm_bounded(ax);
  const auto ny = norm_bounded(ay);
  CHECK(dense_regions_large(x, y) == dense_regions_large(nx, ny));
  CHECK(dense_regions_small(x, y, 0.4999) == dense_regions_small(nx, ny, 0.4999));

  // Reversing the rows maps region members through the same reversal.
  std::vector<double> rx(x.rbegin(), x.rend());
  std::vector<double> ry(y.rbegin(), y.rend());
  auto mapped = [&](const std::vector<IndexSet>& sets) {
    oracle::Regions out;
    for (const auto& s : sets) {
      oracle::Region r;
      for (Index i : s) r.insert(static_cast<std::uint32_t>(x.size() - 1 - i));
      out.insert(r);
    }
    return out;
  };
  CHECK(mapped(dense_regions_large(rx, ry)) == as_regions(dense_regions_large(x, y)));
  CHECK(mapped(dense_regions_small(rx, ry, 0.4999)) ==
        as_regions(dense_regions_small(x, y, 0.4999)));
}
