#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reldenclu/model.hpp"

namespace reldenclu {

// Portable seeded generator. The engine is mt19937_64, whose output sequence
// is fixed by the standard; the distributions are implemented here so the
// generated data is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller.
  double normal();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // `count` distinct values from [0, population), in draw order.
  std::vector<Index> sample(std::size_t population, std::size_t count);
  std::vector<Index> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a seed with a stream tag into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class Family {
  nonlinear1,
  nonlinear2,
  base,
  scaled,
  translated,
  linear,
  square,
  exponential,
  point_proportion,
  cluster_proportion,
  noisy_uniform,
  permutations,
  normal,
  noisy_normal,
  overlap,
  large,
};

const char* to_string(Family f) noexcept;
// Accepts the names produced by to_string plus "overlap1"/"overlap2".
Family parse_family(std::string_view tag);
// The simulated families, in table order (without `large`).
const std::vector<Family>& simulated_families();

enum class Transform {
  scale,
  translate,
  linear,
  square,
  exp,
  point_proportion,
  cluster_proportion,
  uniform_noise,
  permute,
};

const char* to_string(Transform t) noexcept;
Transform parse_transform(std::string_view tag);

struct GeneratedDataset {
  DataMatrix matrix;
  // Planted biclusters; each is a full block over its rows and columns.
  std::vector<Bicluster> truth;
  std::string family;
  std::uint64_t seed = 0;
  // Set by the permute transform: new row p holds old row row_perm[p], new
  // column q holds old column col_perm[q].
  std::vector<Index> row_perm;
  std::vector<Index> col_perm;

  std::vector<MembershipMatrix> truth_matrices() const;
};

GeneratedDataset gen_nonlinear(int variant, std::uint64_t seed);
GeneratedDataset gen_base(std::uint64_t seed);
GeneratedDataset gen_normal(bool noisy, std::uint64_t seed);
GeneratedDataset gen_overlap(std::uint64_t seed);
GeneratedDataset gen_large(std::uint64_t seed);

GeneratedDataset apply_transform(const GeneratedDataset& ds, Transform kind,
                                 std::uint64_t seed);

// Undoes a permute transform.
GeneratedDataset invert_permutation(const GeneratedDataset& ds);

GeneratedDataset generate(Family family, std::uint64_t seed);

// Default parameters for a family: the simulated-data settings with the
// unbounded transform for the Gaussian families.
ParameterSet family_parameters(Family family);

}  // namespace reldenclu
