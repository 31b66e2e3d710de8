#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "reldenclu/datagen.hpp"
#include "reldenclu/evaluate.hpp"

using namespace reldenclu;
using doctest::Approx;

namespace {

// Replays the generator's draws to recover the block columns in draw order.
std::vector<Index> block_column_order(std::uint64_t seed, std::size_t rows,
                                      std::size_t cols, std::size_t brows,
                                      std::size_t bcols) {
  Rng rng(seed);
  for (std::size_t i = 0; i < rows * cols; ++i) rng.uniform();
  rng.sample(rows, brows);
  return rng.sample(cols, bcols);
}

bool same_matrix(const DataMatrix& a, const DataMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (a.column(c) != b.column(c)) return false;
  return true;
}

}  // namespace

TEST_CASE("rng: uniform stays inside the open interval") {
  Rng rng(1);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100000 == Approx(0.5).epsilon(0.01));
}

TEST_CASE("rng: below, sample and permutation") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
  const auto s = rng.sample(50, 20);
  CHECK(std::set<Index>(s.begin(), s.end()).size() == 20);
  CHECK(*std::max_element(s.begin(), s.end()) < 50);
  auto p = rng.permutation(30);
  std::sort(p.begin(), p.end());
  for (Index i = 0; i < 30; ++i) CHECK(p[i] == i);
}

TEST_CASE("rng: normal draws have unit spread") {
  Rng rng(3);
  std::vector<double> v(50000);
  for (double& x : v) x = rng.normal();
  CHECK(std::abs(mean(v)) < 4.0 / std::sqrt(50000.0));
  CHECK(stddev(v) == Approx(1.0).epsilon(0.02));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("family and transform names round trip") {
  for (Family f : simulated_families()) CHECK(parse_family(to_string(f)) == f);
  CHECK(parse_family("large") == Family::large);
  CHECK(parse_family("overlap1") == Family::overlap);
  CHECK(parse_family("overlap2") == Family::overlap);
  CHECK(simulated_families().size() == 15);
  CHECK_THROWS_AS(parse_family("nope"), Error);
  for (Transform t : {Transform::scale, Transform::translate, Transform::linear,
                      Transform::square, Transform::exp,
                      Transform::point_proportion, Transform::cluster_proportion,
                      Transform::uniform_noise, Transform::permute})
    CHECK(parse_transform(to_string(t)) == t);
  CHECK_THROWS_AS(parse_transform("rotate"), Error);
}

TEST_CASE("non-linear 1 plants the tabulated functions") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto ds = gen_nonlinear(1, seed);
    CHECK(ds.matrix.rows() == 1000);
    CHECK(ds.matrix.cols() == 20);
    const auto order = block_column_order(seed, 1000, 20, 500, 10);
    const auto& rows = ds.truth[0].observations;
    REQUIRE(rows.size() == 500);
    double lo = 10, hi = -10;
    for (Index r : rows) {
      const double x = ds.matrix.at(r, order[0]);
      CHECK(ds.matrix.at(r, order[7]) == 4 * x * x);
      CHECK(ds.matrix.at(r, order[2]) == x * x);
      lo = std::min(lo, ds.matrix.at(r, order[7]));
      hi = std::max(hi, ds.matrix.at(r, order[7]));
    }
    CHECK(lo > 0.0);
    CHECK(hi < 4.0);
    CHECK(hi > 1.0);
  }
}

TEST_CASE("non-linear 2 keeps block values in the unit interval") {
  const auto ds = gen_nonlinear(2, 4);
  const auto order = block_column_order(4, 1000, 20, 500, 10);
  for (Index r : ds.truth[0].observations) {
    const double x = ds.matrix.at(r, order[0]);
    for (Index c : ds.truth[0].features) {
      CHECK(ds.matrix.at(r, c) >= 0.0);
      CHECK(ds.matrix.at(r, c) <= 1.0);
    }
    // The repeated columns are kept.
    CHECK(ds.matrix.at(r, order[2]) == ds.matrix.at(r, order[7]));
    CHECK(ds.matrix.at(r, order[6]) == ds.matrix.at(r, order[9]));
    CHECK(ds.matrix.at(r, order[2]) == x * x);
  }
  CHECK_THROWS_AS(gen_nonlinear(3, 1), Error);
}

TEST_CASE("base: block columns are exactly proportional") {
  const auto ds = gen_base(8);
  const auto& b = ds.truth[0];
  CHECK(b.observations.size() == 500);
  CHECK(b.features.size() == 10);
  const auto order = block_column_order(8, 1000, 20, 500, 10);
  const Index src = order[0];
  for (std::size_t h = 1; h < order.size(); ++h) {
    const Index first_row = b.observations[0];
    const double a = ds.matrix.at(first_row, order[h]) / ds.matrix.at(first_row, src);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    for (Index r : b.observations)
      CHECK(ds.matrix.at(r, order[h]) == Approx(a * ds.matrix.at(r, src)).epsilon(1e-12));
  }
  // Off-block entries look uniform.
  std::vector<double> off;
  for (std::size_t r = 0; r < 1000; ++r)
    for (std::size_t c = 0; c < 20; ++c)
      if (!std::binary_search(b.observations.begin(), b.observations.end(), r) ||
          !std::binary_search(b.features.begin(), b.features.end(), c))
        off.push_back(ds.matrix.at(r, c));
  CHECK(off.size() == 15000);
  CHECK(*std::min_element(off.begin(), off.end()) > 0.0);
  CHECK(*std::max_element(off.begin(), off.end()) < 1.0);
  CHECK(mean(off) == Approx(0.5).epsilon(0.02));
}

TEST_CASE("generation is a pure function of family and seed") {
  for (Family f : simulated_families()) {
    const auto a = generate(f, 21);
    const auto b = generate(f, 21);
    CHECK(same_matrix(a.matrix, b.matrix));
    CHECK(a.truth == b.truth);
    CHECK(a.family == to_string(f));
    const auto c = generate(f, 22);
    CHECK_FALSE(same_matrix(a.matrix, c.matrix));
  }
}

TEST_CASE("proportion transforms") {
  const auto base = gen_base(5);
  const auto pp = generate(Family::point_proportion, 5);
  CHECK(pp.matrix.rows() == 2000);
  CHECK(pp.truth[0].observations.size() == 1000);
  for (std::size_t r = 0; r < 1000; ++r)
    CHECK(pp.matrix.at(r + 1000, 3) == pp.matrix.at(r, 3));

  const auto cp = generate(Family::cluster_proportion, 5);
  CHECK(cp.matrix.rows() == 1500);
  CHECK(cp.truth[0].observations.size() == 1000);
  CHECK(cp.truth[0].features == base.truth[0].features);
  CHECK(same_matrix(cp.matrix.select_rows(base.truth[0].observations),
                    cp.matrix.select_rows(std::vector<Index>(
                        cp.truth[0].observations.begin() + 500,
                        cp.truth[0].observations.end()))));
}

TEST_CASE("affine transforms act per column") {
  const auto base = gen_base(6);
  for (Family f : {Family::scaled, Family::translated, Family::linear}) {
    const auto ds = generate(f, 6);
    CHECK(ds.truth == base.truth);
    for (std::size_t c = 0; c < 20; ++c) {
      // Two points fix the map; every other point must follow it.
      const double x0 = base.matrix.at(0, c), x1 = base.matrix.at(1, c);
      const double a = (ds.matrix.at(1, c) - ds.matrix.at(0, c)) / (x1 - x0);
      const double b = ds.matrix.at(0, c) - a * x0;
      CHECK(a > 0.0);
      for (std::size_t r = 0; r < 1000; r += 37)
        CHECK(ds.matrix.at(r, c) == Approx(a * base.matrix.at(r, c) + b).epsilon(1e-9));
    }
  }
  const auto sq = generate(Family::square, 6);
  const auto ex = generate(Family::exponential, 6);
  CHECK(sq.matrix.at(10, 4) == base.matrix.at(10, 4) * base.matrix.at(10, 4));
  CHECK(ex.matrix.at(10, 4) == std::exp(base.matrix.at(10, 4)));
}

TEST_CASE("uniform noise stays within 0.1") {
  const auto base = gen_base(7);
  const auto ds = generate(Family::noisy_uniform, 7);
  for (std::size_t r = 0; r < 1000; r += 13)
    for (std::size_t c = 0; c < 20; ++c) {
      const double d = ds.matrix.at(r, c) - base.matrix.at(r, c);
      CHECK(d > 0.0);
      CHECK(d < 0.1);
    }
}

TEST_CASE("permute then invert recovers the original") {
  const auto base = gen_base(9);
  const auto perm = generate(Family::permutations, 9);
  CHECK(perm.row_perm.size() == 1000);
  CHECK(perm.col_perm.size() == 20);
  CHECK_FALSE(same_matrix(perm.matrix, base.matrix));
  const auto back = invert_permutation(perm);
  CHECK(same_matrix(back.matrix, base.matrix));
  CHECK(back.truth == base.truth);
  // Truth moves with the data.
  const auto t = perm.truth_matrices()[0];
  const auto u = base.truth_matrices()[0];
  for (std::size_t p = 0; p < 1000; p += 7)
    for (std::size_t q = 0; q < 20; ++q)
      CHECK(t.get(p, q) == u.get(perm.row_perm[p], perm.col_perm[q]));
  CHECK_THROWS_AS(invert_permutation(base), Error);
}

TEST_CASE("normal families") {
  const auto clean = gen_normal(false, 3);
  const auto noisy = gen_normal(true, 3);
  CHECK(clean.truth == noisy.truth);
  std::vector<double> off;
  const auto& b = clean.truth[0];
  for (std::size_t r = 0; r < 1000; ++r)
    for (std::size_t c = 0; c < 20; ++c)
      if (!std::binary_search(b.observations.begin(), b.observations.end(), r) ||
          !std::binary_search(b.features.begin(), b.features.end(), c))
        off.push_back(clean.matrix.at(r, c));
  CHECK(std::abs(mean(off)) < 4.0 / std::sqrt(20000.0));
  std::vector<double> diff;
  for (std::size_t r = 0; r < 1000; ++r)
    for (std::size_t c = 0; c < 20; ++c)
      diff.push_back(noisy.matrix.at(r, c) - clean.matrix.at(r, c));
  CHECK(stddev(diff) == Approx(0.1).epsilon(0.03));
  CHECK(family_parameters(Family::normal).normalization == Normalization::unbounded);
  CHECK(family_parameters(Family::base).normalization == Normalization::bounded);
}

TEST_CASE("overlap: two blocks sharing 300 x 3") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto ds = gen_overlap(seed);
    REQUIRE(ds.truth.size() == 2);
    const auto& b1 = ds.truth[0];
    const auto& b2 = ds.truth[1];
    CHECK(intersection_size(b1.observations, b2.observations) == 300);
    CHECK(intersection_size(b1.features, b2.features) == 3);
    const auto t = ds.truth_matrices();
    CHECK(t[0].ones() == 5000);
    CHECK(t[1].ones() == 2400);

    // Background in (0,1), one shift in (1,2), both in (2,4).
    for (std::size_t r = 0; r < 1000; ++r)
      for (std::size_t c = 0; c < 20; ++c) {
        const int layers = t[0].get(r, c) + t[1].get(r, c);
        const double v = ds.matrix.at(r, c);
        CHECK(v > layers);
        CHECK(v < 2 * layers + 1);
      }
  }
}

TEST_CASE("large family dimensions") {
  const auto ds = gen_large(1);
  CHECK(ds.matrix.rows() == 20000);
  CHECK(ds.matrix.cols() == 100);
  CHECK(ds.truth_matrices()[0].ones() == 300000);
  const auto order = block_column_order(1, 20000, 100, 10000, 30);
  const Index r = ds.truth[0].observations[0];
  for (std::size_t h = 1; h < 30; ++h) {
    const double a = ds.matrix.at(r, order[h]) / ds.matrix.at(r, order[0]);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
  }
}
