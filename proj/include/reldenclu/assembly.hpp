#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reldenclu/density.hpp"
#include "reldenclu/model.hpp"

namespace reldenclu {

// Every feature triplet i < j < k and every choice of one region per pair
// (i,j), (j,k), (i,k) yields the intersection of the three regions; those
// holding at least `min_seed_size` observations become seeds. The result is
// sorted by size (descending), then triplet, then region choice.
std::vector<SeedBicluster> build_seed_biclusters(const PairRegions& regions,
                                                 std::size_t min_seed_size);

// Grows the seed at `base` into a bicluster. A seed joins when its triplet
// shares a feature with the growing feature set and it overlaps the base by
// more than sim2seed * |base|; joining repeats until nothing changes. The
// observations kept are those found in at least obs_in_min_base joined seeds.
//
// When `ignored` is given and reuse_all_seeds is false, seeds overlapping the
// base by more than reuse_seed_sim * sim2seed * |base| are flagged in it so
// the caller skips them as future bases.
std::optional<Bicluster> grow_bicluster(std::size_t base,
                                        std::span<const SeedBicluster> seeds,
                                        const ParameterSet& params,
                                        std::vector<bool>* ignored = nullptr);

// Product of the observation and feature cosine overlaps, in [0, 1].
double cosine_similarity(const Bicluster& a, const Bicluster& b);

// Drops the smaller (by |O| * |F|) member of every pair more similar than
// `clus_sim`. Survivors keep their input order.
std::vector<Bicluster> weed_similar(std::vector<Bicluster> clusters,
                                    double clus_sim);

struct RunReport {
  std::vector<Bicluster> biclusters;
  bool large_method = false;
  std::size_t seed_count = 0;
  std::size_t bases_used = 0;
  std::size_t grown_count = 0;
  std::vector<std::string> warnings;
  // Seconds spent per stage.
  double normalize_seconds = 0.0;
  double density_seconds = 0.0;
  double seed_seconds = 0.0;
  double growth_seconds = 0.0;
};

RunReport run_reldenclu_detailed(const DataMatrix& matrix,
                                 const ParameterSet& params);

std::vector<Bicluster> run_reldenclu(const DataMatrix& matrix,
                                     const ParameterSet& params);

}  // namespace reldenclu
