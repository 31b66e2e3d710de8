#include "reldenclu/assembly.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "parallel.hpp"
#include "reldenclu/normalize.hpp"

namespace reldenclu {

namespace {

constexpr std::int32_t kNoRegion = -1;

// Per-pair region label of every observation, keeping only regions large
// enough to hold a seed.
struct PairLabels {
  std::vector<std::int32_t> label;
  std::uint32_t region_count = 0;
  // (observation, region) for labelled observations, ascending.
  std::vector<std::pair<Index, std::uint32_t>> members;
};

std::size_t observation_bound(const PairRegions& regions) {
  std::size_t n = 0;
  for (const auto& s : regions.sets())
    for (const auto& r : s.regions)
      if (!r.empty()) n = std::max<std::size_t>(n, r.back() + 1);
  return n;
}

PairLabels label_pair(const DenseRegionSet& set, std::size_t n,
                      std::size_t min_seed_size) {
  PairLabels out;
  out.label.assign(n, kNoRegion);
  for (const auto& region : set.regions) {
    const auto id = out.region_count++;
    if (region.size() < min_seed_size) continue;
    for (Index o : region) out.label[o] = static_cast<std::int32_t>(id);
  }
  for (std::size_t o = 0; o < n; ++o)
    if (out.label[o] != kNoRegion)
      out.members.emplace_back(static_cast<Index>(o),
                               static_cast<std::uint32_t>(out.label[o]));
  return out;
}

bool seed_order(const SeedBicluster& a, const SeedBicluster& b) {
  if (a.observations.size() != b.observations.size())
    return a.observations.size() > b.observations.size();
  if (a.triplet != b.triplet) return a.triplet < b.triplet;
  return a.region_choice < b.region_choice;
}

// Seeds for all triplets whose two smallest features are (i, j).
std::vector<SeedBicluster> seeds_for_pair(Index i, Index j,
                                          const std::vector<PairLabels>& labels,
                                          std::size_t features,
                                          std::size_t min_seed_size) {
  std::vector<SeedBicluster> out;
  const auto& ij = labels[PairRegions::pair_slot(i, j, features)];
  if (ij.members.size() < min_seed_size) return out;

  std::vector<std::uint32_t> dense_counts;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_counts;
  std::vector<std::uint64_t> keys(ij.members.size());
  constexpr std::uint64_t kSkip = ~std::uint64_t{0};
  constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 16;

  for (Index k = j + 1; k < features; ++k) {
    const auto& jk = labels[PairRegions::pair_slot(j, k, features)];
    const auto& ik = labels[PairRegions::pair_slot(i, k, features)];
    if (jk.members.size() < min_seed_size || ik.members.size() < min_seed_size)
      continue;
    const std::uint64_t rv = jk.region_count;
    const std::uint64_t rw = ik.region_count;
    const std::uint64_t space = ij.region_count * rv * rw;
    const bool dense = space <= kDenseLimit;
    if (dense) {
      dense_counts.assign(space, 0);
    } else {
      sparse_counts.clear();
    }

    for (std::size_t p = 0; p < ij.members.size(); ++p) {
      const auto [o, u] = ij.members[p];
      const std::int32_t v = jk.label[o];
      const std::int32_t w = ik.label[o];
      if (v == kNoRegion || w == kNoRegion) {
        keys[p] = kSkip;
        continue;
      }
      const std::uint64_t key = (u * rv + static_cast<std::uint64_t>(v)) * rw +
                                static_cast<std::uint64_t>(w);
      keys[p] = key;
      if (dense) {
        ++dense_counts[key];
      } else {
        ++sparse_counts[key];
      }
    }

    auto count_of = [&](std::uint64_t key) -> std::uint32_t {
      if (dense) return dense_counts[key];
      auto it = sparse_counts.find(key);
      return it == sparse_counts.end() ? 0 : it->second;
    };

    std::unordered_map<std::uint64_t, std::size_t> seed_of_key;
    for (std::size_t p = 0; p < ij.members.size(); ++p) {
      const std::uint64_t key = keys[p];
      if (key == kSkip) continue;
      const std::uint32_t count = count_of(key);
      if (count < min_seed_size) continue;
      auto [it, inserted] = seed_of_key.try_emplace(key, out.size());
      if (inserted) {
        SeedBicluster s;
        s.triplet = {i, j, k};
        s.region_choice = {static_cast<std::uint32_t>(key / (rv * rw)),
                           static_cast<std::uint32_t>((key / rw) % rv),
                           static_cast<std::uint32_t>(key % rw)};
        s.observations.reserve(count);
        out.push_back(std::move(s));
      }
      out[it->second].observations.push_back(ij.members[p].first);
    }
  }
  return out;
}

// Observation -> seeds containing it, in compressed row form. Each posting
// list is in ascending seed order.
struct SeedIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> seeds;
  // size_prefix[k] = total size of seeds 0..k-1.
  std::vector<std::uint64_t> size_prefix;
  std::size_t observations = 0;
  std::size_t features = 0;

  explicit SeedIndex(std::span<const SeedBicluster> all) {
    size_prefix.assign(all.size() + 1, 0);
    for (std::size_t k = 0; k < all.size(); ++k) {
      const auto& s = all[k];
      if (!s.observations.empty())
        observations =
            std::max<std::size_t>(observations, s.observations.back() + 1);
      features = std::max<std::size_t>(features, s.triplet[2] + 1);
      size_prefix[k + 1] = size_prefix[k] + s.observations.size();
    }
    offsets.assign(observations + 1, 0);
    for (const auto& s : all)
      for (Index o : s.observations) ++offsets[o + 1];
    for (std::size_t o = 0; o < observations; ++o)
      offsets[o + 1] += offsets[o];
    seeds.resize(offsets.back());
    auto cursor = offsets;
    for (std::uint32_t id = 0; id < all.size(); ++id)
      for (Index o : all[id].observations) seeds[cursor[o]++] = id;
  }

  // Seeds below `limit` that contain observation o.
  std::size_t rank(Index o, std::uint32_t limit) const {
    const auto first = seeds.begin() + static_cast<std::ptrdiff_t>(offsets[o]);
    const auto last = seeds.begin() + static_cast<std::ptrdiff_t>(offsets[o + 1]);
    return static_cast<std::size_t>(std::lower_bound(first, last, limit) - first);
  }
};

struct GrowScratch {
  std::vector<std::uint16_t> overlap16;
  std::vector<std::uint32_t> overlap32;
  std::vector<std::uint32_t> occurrences;
};

// Overlap of the base with every seed below `cutoff`, calling visit(seed,
// overlap) for each seed that shares at least one observation, in seed order.
template <class Counter, class Visit>
void scan_overlaps(const IndexSet& base_obs, const SeedIndex& index,
                   std::size_t cutoff, std::vector<Counter>& counts,
                   Visit visit) {
  counts.assign(cutoff, 0);
  for (Index o : base_obs) {
    const std::uint32_t* p = index.seeds.data() + index.offsets[o];
    const std::uint32_t* end = index.seeds.data() + index.offsets[o + 1];
    for (; p != end && *p < cutoff; ++p) ++counts[*p];
  }
  for (std::size_t s = 0; s < cutoff; ++s)
    if (counts[s] != 0) visit(static_cast<std::uint32_t>(s), std::size_t{counts[s]});
}

// How many joined seeds hold each observation. Either sums the joined seeds
// directly or, when a prefix of seed ids is mostly joined, counts that prefix
// from the posting lists and corrects for the seeds in it that did not join.
void count_occurrences(std::span<const SeedBicluster> seeds,
                       const SeedIndex& index,
                       std::vector<std::uint32_t> joined,
                       GrowScratch& scratch) {
  std::sort(joined.begin(), joined.end());
  auto& count = scratch.occurrences;
  count.assign(index.observations, 0);

  std::uint64_t joined_total = 0;
  for (auto s : joined) joined_total += seeds[s].observations.size();

  // Cost of using the prefix of ids below joined[k - 1] + 1.
  const std::uint64_t lookup_cost =
      index.observations *
      static_cast<std::uint64_t>(
          std::bit_width(index.seeds.size() / std::max<std::size_t>(index.observations, 1)) + 1);
  std::size_t best_k = 0;
  std::uint64_t best_cost = joined_total;
  std::uint64_t joined_below = 0;
  for (std::size_t k = 1; k <= joined.size(); ++k) {
    joined_below += seeds[joined[k - 1]].observations.size();
    const std::uint64_t prefix = joined[k - 1] + 1;
    const std::uint64_t cost = lookup_cost +
                               (index.size_prefix[prefix] - joined_below) +
                               (joined_total - joined_below);
    if (cost < best_cost) {
      best_cost = cost;
      best_k = k;
    }
  }

  std::size_t next = 0;
  if (best_k > 0) {
    const std::uint32_t limit = joined[best_k - 1] + 1;
    for (std::size_t o = 0; o < index.observations; ++o)
      count[o] = static_cast<std::uint32_t>(index.rank(static_cast<Index>(o), limit));
    for (std::uint32_t s = 0; s < limit; ++s) {
      if (next < best_k && joined[next] == s) {
        ++next;
        continue;
      }
      for (Index o : seeds[s].observations) --count[o];
    }
  }
  for (; next < joined.size(); ++next)
    for (Index o : seeds[joined[next]].observations) ++count[o];
}

std::optional<Bicluster> grow_indexed(std::size_t base,
                                      std::span<const SeedBicluster> seeds,
                                      const ParameterSet& params,
                                      const SeedIndex& index,
                                      GrowScratch& scratch,
                                      std::vector<bool>* ignored,
                                      bool sorted_by_size) {
  const auto& base_obs = seeds[base].observations;
  const double base_size = static_cast<double>(base_obs.size());
  const bool marking = ignored && !params.reuse_all_seeds;
  const double join_limit = params.sim2seed * base_size;
  const double ignore_limit =
      marking ? *params.reuse_seed_sim * params.sim2seed * base_size : 0.0;

  // A seed can only pass a threshold it is larger than. With seeds sorted by
  // size a scan can stop at the first seed that is too small.
  const double lowest = marking ? std::min(join_limit, ignore_limit) : join_limit;
  std::size_t cutoff = seeds.size();
  if (sorted_by_size)
    cutoff = static_cast<std::size_t>(
        std::partition_point(seeds.begin(), seeds.end(),
                             [&](const SeedBicluster& s) {
                               return static_cast<double>(s.observations.size()) >
                                      lowest;
                             }) -
        seeds.begin());

  std::vector<std::uint32_t> candidates;
  auto visit = [&](std::uint32_t s, std::size_t overlap) {
    const auto v = static_cast<double>(overlap);
    if (marking && v > ignore_limit) (*ignored)[s] = true;
    if (s != base && v > join_limit) candidates.push_back(s);
  };
  if (base_obs.size() <= std::numeric_limits<std::uint16_t>::max())
    scan_overlaps(base_obs, index, cutoff, scratch.overlap16, visit);
  else
    scan_overlaps(base_obs, index, cutoff, scratch.overlap32, visit);

  std::vector<bool> feature_in(index.features, false);
  for (Index f : seeds[base].triplet) feature_in[f] = true;
  std::vector<std::uint32_t> joined{static_cast<std::uint32_t>(base)};
  std::vector<bool> taken(candidates.size(), false);
  for (bool added = true; added;) {
    added = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (taken[c]) continue;
      const auto& t = seeds[candidates[c]].triplet;
      if (!(feature_in[t[0]] || feature_in[t[1]] || feature_in[t[2]]))
        continue;
      taken[c] = true;
      added = true;
      joined.push_back(candidates[c]);
      for (Index f : t) feature_in[f] = true;
    }
  }

  count_occurrences(seeds, index, std::move(joined), scratch);
  Bicluster out;
  for (std::size_t o = 0; o < index.observations; ++o)
    if (scratch.occurrences[o] >= params.obs_in_min_base)
      out.observations.push_back(static_cast<Index>(o));
  if (out.observations.empty()) return std::nullopt;
  for (std::size_t f = 0; f < feature_in.size(); ++f)
    if (feature_in[f]) out.features.push_back(static_cast<Index>(f));
  return out;
}

// Feature and row indices change under a permutation of the input, so seeds
// of equal size are reordered by content instead: each observation becomes
// the sorted triple of its value ranks in the seed's three columns, and the
// sorted list of triples is compared. Equal keys keep the index order.
void order_equal_sizes(std::vector<SeedBicluster>& seeds,
                       const NormalizedMatrix& normalized) {
  using Triple = std::array<std::uint32_t, 3>;
  std::vector<std::vector<std::uint32_t>> rank(normalized.cols());
  auto ranks_of = [&](Index c) -> const std::vector<std::uint32_t>& {
    auto& r = rank[c];
    if (r.empty()) {
      const auto& v = normalized.column(c).values;
      std::vector<Index> order(v.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
      std::sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] < v[b]; });
      r.resize(v.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        const bool tied = i > 0 && v[order[i]] == v[order[i - 1]];
        r[order[i]] = tied ? r[order[i - 1]] : static_cast<std::uint32_t>(i);
      }
    }
    return r;
  };
  auto key = [&](const SeedBicluster& s) {
    std::vector<Triple> k;
    k.reserve(s.observations.size());
    for (auto o : s.observations) {
      Triple t{ranks_of(s.triplet[0])[o], ranks_of(s.triplet[1])[o],
               ranks_of(s.triplet[2])[o]};
      std::sort(t.begin(), t.end());
      k.push_back(t);
    }
    std::sort(k.begin(), k.end());
    return k;
  };

  for (std::size_t lo = 0; lo < seeds.size();) {
    std::size_t hi = lo + 1;
    while (hi < seeds.size() &&
           seeds[hi].observations.size() == seeds[lo].observations.size())
      ++hi;
    if (hi - lo > 1) {
      std::vector<std::pair<std::vector<Triple>, std::size_t>> keyed;
      for (std::size_t i = lo; i < hi; ++i) keyed.emplace_back(key(seeds[i]), i);
      std::sort(keyed.begin(), keyed.end());
      std::vector<SeedBicluster> group;
      group.reserve(hi - lo);
      for (auto& [k, i] : keyed) group.push_back(std::move(seeds[i]));
      std::move(group.begin(), group.end(), seeds.begin() + lo);
    }
    lo = hi;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<SeedBicluster> build_seed_biclusters(const PairRegions& regions,
                                                 std::size_t min_seed_size) {
  const std::size_t m = regions.features();
  if (m < 3) return {};
  const std::size_t n = observation_bound(regions);
  const std::size_t threshold = std::max<std::size_t>(min_seed_size, 1);

  std::vector<PairLabels> labels(regions.sets().size());
  detail::parallel_for(labels.size(), [&](std::size_t slot) {
    labels[slot] = label_pair(regions.sets()[slot], n, threshold);
  });

  std::vector<std::vector<SeedBicluster>> per_pair(labels.size());
  detail::parallel_for(labels.size(), [&](std::size_t slot) {
    const auto& set = regions.sets()[slot];
    per_pair[slot] = seeds_for_pair(set.first, set.second, labels, m, threshold);
  });

  std::vector<SeedBicluster> seeds;
  for (auto& part : per_pair)
    for (auto& s : part) seeds.push_back(std::move(s));
  std::sort(seeds.begin(), seeds.end(), seed_order);
  return seeds;
}

std::optional<Bicluster> grow_bicluster(std::size_t base,
                                        std::span<const SeedBicluster> seeds,
                                        const ParameterSet& params,
                                        std::vector<bool>* ignored) {
  if (base >= seeds.size())
    throw Error(ErrorCode::invalid_argument, "base seed out of range");
  params.validate();
  if (ignored) ignored->resize(seeds.size(), false);
  const SeedIndex index(seeds);
  GrowScratch scratch;
  const bool sorted = std::is_sorted(
      seeds.begin(), seeds.end(), [](const SeedBicluster& a, const SeedBicluster& b) {
        return a.observations.size() > b.observations.size();
      });
  return grow_indexed(base, seeds, params, index, scratch, ignored, sorted);
}

double cosine_similarity(const Bicluster& a, const Bicluster& b) {
  if (a.observations.empty() || a.features.empty() || b.observations.empty() ||
      b.features.empty())
    throw Error(ErrorCode::invalid_bicluster, "empty bicluster");
  auto overlap = [](const IndexSet& p, const IndexSet& q) {
    const double shared = static_cast<double>(intersection_size(p, q));
    const double norm = std::sqrt(static_cast<double>(p.size()) *
                                  static_cast<double>(q.size()));
    return std::min(1.0, shared / norm);
  };
  const double features = overlap(a.features, b.features);
  if (features == 0.0) return 0.0;
  return overlap(a.observations, b.observations) * features;
}

std::vector<Bicluster> weed_similar(std::vector<Bicluster> clusters,
                                    double clus_sim) {
  // Similarity never exceeds 1.
  if (clus_sim >= 1.0) return clusters;
  std::vector<bool> alive(clusters.size(), true);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      if (!alive[j]) continue;
      if (cosine_similarity(clusters[i], clusters[j]) <= clus_sim) continue;
      if (clusters[i].area() < clusters[j].area()) {
        alive[i] = false;
        break;
      }
      alive[j] = false;
    }
  }
  std::vector<Bicluster> out;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if (alive[i]) out.push_back(std::move(clusters[i]));
  return out;
}

RunReport run_reldenclu_detailed(const DataMatrix& matrix,
                                 const ParameterSet& params) {
  params.validate();
  if (matrix.cols() < 3)
    throw Error(ErrorCode::too_few_features,
                "need at least 3 features, got " + std::to_string(matrix.cols()));
  RunReport report;

  auto clock = std::chrono::steady_clock::now();
  const NormalizedMatrix normalized = normalize(matrix, params.normalization);
  for (std::size_t c = 0; c < normalized.cols(); ++c)
    if (normalized.column(c).degenerate)
      report.warnings.push_back("column " + std::to_string(c + 1) +
                                " is constant and was excluded");
  report.normalize_seconds = seconds_since(clock);

  clock = std::chrono::steady_clock::now();
  report.large_method = uses_large_method(matrix.rows(), params);
  const PairRegions regions = find_dense_regions(normalized, params);
  report.density_seconds = seconds_since(clock);

  clock = std::chrono::steady_clock::now();
  auto seeds = build_seed_biclusters(regions, params.min_seed_size);
  order_equal_sizes(seeds, normalized);
  report.seed_count = seeds.size();
  report.seed_seconds = seconds_since(clock);

  clock = std::chrono::steady_clock::now();
  std::vector<Bicluster> grown;
  if (!seeds.empty()) {
    const SeedIndex index(seeds);
    GrowScratch scratch;
    std::vector<bool> ignored(seeds.size(), false);
    for (std::size_t base = 0; base < seeds.size(); ++base) {
      if (ignored[base]) continue;
      ++report.bases_used;
      if (auto b = grow_indexed(base, seeds, params, index, scratch, &ignored, true))
        grown.push_back(std::move(*b));
    }
  }
  report.grown_count = grown.size();
  report.biclusters = weed_similar(std::move(grown), params.clus_sim);
  report.growth_seconds = seconds_since(clock);
  return report;
}

std::vector<Bicluster> run_reldenclu(const DataMatrix& matrix,
                                     const ParameterSet& params) {
  return run_reldenclu_detailed(matrix, params).biclusters;
}

}  // namespace reldenclu
