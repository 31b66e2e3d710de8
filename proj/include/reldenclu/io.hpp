#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reldenclu/datagen.hpp"
#include "reldenclu/model.hpp"

namespace reldenclu {

// Comma-separated, '.' decimal. A first row with any non-numeric cell is taken
// as the header and becomes the column ids. Errors name the 1-based data row
// and column of the offending cell.
DataMatrix parse_csv(std::string_view text);
DataMatrix read_csv(const std::filesystem::path& path);

// Shortest round-trip representation of every value.
std::string format_csv(const DataMatrix& m);
void write_csv(const std::filesystem::path& path, const DataMatrix& m);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// [{"observations": [...], "features": [...]}, ...] with 1-based indices.
// `feature_names`, when non-empty, adds a "feature_names" list per bicluster.
std::string biclusters_to_json(const std::vector<Bicluster>& biclusters,
                               const std::vector<std::string>& feature_names = {});
std::vector<Bicluster> biclusters_from_json(std::string_view text);

// Truth file: family, seed, rows, cols and the planted biclusters.
std::string truth_to_json(const GeneratedDataset& ds);

struct TruthFile {
  std::string family;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Bicluster> biclusters;
};
TruthFile truth_from_json(std::string_view text);

// `key = value` lines, '#' starts a comment. Keys are the ParameterSet field
// names. The six algorithm parameters are required (reuse_seed_sim only when
// reuse_all_seeds is false); the remaining switches keep their defaults.
// Unknown or repeated keys are errors.
ParameterSet parse_config(std::string_view text);
ParameterSet read_config(const std::filesystem::path& path);
std::string format_config(const ParameterSet& p);

// One column of 0/1 values (no header) per line.
std::vector<std::uint8_t> parse_binary_vector(std::string_view text);
std::vector<double> parse_real_vector(std::string_view text);

}  // namespace reldenclu
