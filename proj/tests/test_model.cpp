#include <doctest.h>

#include <random>
#include <vector>

#include "reldenclu/model.hpp"

using namespace reldenclu;

TEST_CASE("membership of a single cell") {
  const auto m = membership_matrix({{0}, {0}}, 2, 2);
  CHECK(m.get(0, 0));
  CHECK_FALSE(m.get(0, 1));
  CHECK_FALSE(m.get(1, 0));
  CHECK_FALSE(m.get(1, 1));
}

TEST_CASE("membership of the full matrix") {
  const auto m = membership_matrix({{0, 1}, {0, 1}}, 2, 2);
  CHECK(m.ones() == 4);
}

TEST_CASE("membership of one row over two columns") {
  const auto m = membership_matrix({{1}, {0, 2}}, 3, 3);
  CHECK(m.ones() == 2);
  CHECK(m.get(1, 0));
  CHECK(m.get(1, 2));
  CHECK_FALSE(m.get(1, 1));
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK_FALSE(m.get(0, c));
    CHECK_FALSE(m.get(2, c));
  }
}

TEST_CASE("out of range bicluster is rejected") {
  try {
    membership_matrix({{3}, {0}}, 3, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_bicluster);
  }
  CHECK_THROWS_AS(membership_matrix({{}, {0}}, 3, 3), Error);
  CHECK_THROWS_AS(membership_matrix({{1, 0}, {0}}, 3, 3), Error);
}

TEST_CASE("membership ones equal area and extraction round-trips") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + gen() % 30;
    const std::size_t m = 1 + gen() % 12;
    Bicluster b;
    for (Index r = 0; r < n; ++r)
      if (gen() % 3 == 0) b.observations.push_back(r);
    for (Index c = 0; c < m; ++c)
      if (gen() % 2 == 0) b.features.push_back(c);
    if (b.observations.empty()) b.observations.push_back(0);
    if (b.features.empty()) b.features.push_back(0);
    const auto mm = membership_matrix(b, n, m);
    CHECK(mm.ones() == b.area());
    CHECK(mm.extract() == b);
  }
}

TEST_CASE("data matrix construction") {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6};
  const auto m = DataMatrix::from_rows(3, 2, v);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m.at(2, 1) == 6);
  CHECK(m.column(0) == std::vector<double>{1, 3, 5});

  CHECK_THROWS_AS(DataMatrix::from_rows(1, 1, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(DataMatrix::from_columns({{}, {}}), Error);
  CHECK_THROWS_AS(DataMatrix::from_columns({{1.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("non-finite values name their cell") {
  std::vector<double> v = {1, 2, 3, 4};
  v[3] = std::numeric_limits<double>::quiet_NaN();
  try {
    DataMatrix::from_rows(2, 2, v);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_finite);
    CHECK(std::string(e.what()).find("row 2, column 2") != std::string::npos);
  }
}

TEST_CASE("parameter validation") {
  ParameterSet p;
  CHECK_NOTHROW(p.validate());
  p.small_c = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.reuse_seed_sim.reset();
  CHECK_THROWS_AS(p.validate(), Error);
  p.reuse_all_seeds = true;
  CHECK_NOTHROW(p.validate());
  p = {};
  p.sim2seed = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.clus_sim = 1.5;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("set helpers") {
  IndexSet s = {5, 1, 5, 3};
  canonicalize(s);
  CHECK(s == IndexSet{1, 3, 5});
  const IndexSet a = {1, 2, 3, 7};
  const IndexSet b = {2, 3, 4, 7, 9};
  CHECK(intersection_size(a, b) == 3);
}
