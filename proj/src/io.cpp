#include "reldenclu/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace reldenclu {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::string cell_position(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json bicluster_json(const Bicluster& b) {
  json obs = json::array();
  for (Index o : b.observations) obs.push_back(o + 1);
  json feats = json::array();
  for (Index f : b.features) feats.push_back(f + 1);
  return {{"observations", obs}, {"features", feats}};
}

IndexSet one_based_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error(ErrorCode::parse, std::string("bicluster lacks '") + key + "'");
  IndexSet out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
      throw Error(ErrorCode::parse,
                  std::string("'") + key + "' must hold positive integers");
    out.push_back(static_cast<Index>(v.get<std::int64_t>() - 1));
  }
  canonicalize(out);
  return out;
}

std::vector<Bicluster> bicluster_list(const json& arr) {
  if (!arr.is_array())
    throw Error(ErrorCode::parse, "expected a list of biclusters");
  std::vector<Bicluster> out;
  for (const auto& item : arr)
    out.push_back({one_based_list(item, "observations"),
                   one_based_list(item, "features")});
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

DataMatrix parse_csv(std::string_view text) {
  auto lines = split_lines(text);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::insufficient_data, "empty CSV");

  std::vector<std::string> header;
  std::size_t first = 0;
  {
    const auto cells = split_cells(lines.front());
    double dummy = 0.0;
    bool numeric = true;
    for (auto c : cells) {
      // "nan" and "inf" parse as numbers and are rejected later.
      if (!parse_double(c, dummy)) numeric = false;
    }
    if (!numeric) {
      for (auto c : cells) header.emplace_back(c);
      first = 1;
    }
  }
  const std::size_t width =
      header.empty() ? split_cells(lines.front()).size() : header.size();

  std::vector<std::vector<double>> columns(width);
  for (std::size_t li = first; li < lines.size(); ++li) {
    const std::size_t row = li - first + 1;
    if (trim(lines[li]).empty())
      throw Error(ErrorCode::parse, "blank line at data row " +
                                        std::to_string(row));
    const auto cells = split_cells(lines[li]);
    if (cells.size() != width)
      throw Error(ErrorCode::parse,
                  "row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v))
        throw Error(ErrorCode::parse, "non-numeric cell '" +
                                          std::string(cells[c]) + "' at " +
                                          cell_position(row, c + 1));
      if (!std::isfinite(v))
        throw Error(ErrorCode::non_finite,
                    "non-finite value at " + cell_position(row, c + 1));
      columns[c].push_back(v);
    }
  }
  if (columns.empty() || columns.front().empty())
    throw Error(ErrorCode::insufficient_data, "CSV has no data rows");
  DataMatrix m = DataMatrix::from_columns(std::move(columns));
  if (!header.empty()) m.set_col_ids(std::move(header));
  return m;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot create '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
}

DataMatrix read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text(path));
}

std::string format_csv(const DataMatrix& m) {
  std::string out;
  out.reserve(m.rows() * m.cols() * 20);
  if (!m.col_ids().empty()) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += m.col_ids()[c];
    }
    out += '\n';
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m.at(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const DataMatrix& m) {
  write_text(path, format_csv(m));
}

std::string biclusters_to_json(const std::vector<Bicluster>& biclusters,
                               const std::vector<std::string>& feature_names) {
  json arr = json::array();
  for (const auto& b : biclusters) {
    json item = bicluster_json(b);
    if (!feature_names.empty()) {
      json names = json::array();
      for (Index f : b.features)
        names.push_back(f < feature_names.size() ? feature_names[f]
                                                 : std::to_string(f + 1));
      item["feature_names"] = names;
    }
    arr.push_back(std::move(item));
  }
  return arr.dump(2) + "\n";
}

std::vector<Bicluster> biclusters_from_json(std::string_view text) {
  const json doc = parse_json(text);
  // Accept a bare list or a truth-style object.
  if (doc.is_object() && doc.contains("biclusters"))
    return bicluster_list(doc.at("biclusters"));
  return bicluster_list(doc);
}

std::string truth_to_json(const GeneratedDataset& ds) {
  json arr = json::array();
  for (const auto& b : ds.truth) arr.push_back(bicluster_json(b));
  json doc = {{"family", ds.family},
              {"seed", ds.seed},
              {"rows", ds.matrix.rows()},
              {"cols", ds.matrix.cols()},
              {"biclusters", arr}};
  return doc.dump(2) + "\n";
}

TruthFile truth_from_json(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw Error(ErrorCode::parse, "truth must be an object");
  TruthFile t;
  try {
    t.family = doc.value("family", std::string());
    t.seed = doc.value("seed", std::uint64_t{0});
    t.rows = doc.at("rows").get<std::size_t>();
    t.cols = doc.at("cols").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("truth file: ") + e.what());
  }
  t.biclusters = bicluster_list(doc.at("biclusters"));
  for (const auto& b : t.biclusters) validate_bicluster(b, t.rows, t.cols);
  return t;
}

namespace {

enum class Key {
  min_seed_size,
  sim2seed,
  reuse_all_seeds,
  reuse_seed_sim,
  obs_in_min_base,
  clus_sim,
  normalization,
  density_mode,
  small_c,
  large_threshold,
  rng_seed,
};

const std::map<std::string, Key, std::less<>>& config_keys() {
  static const std::map<std::string, Key, std::less<>> keys = {
      {"min_seed_size", Key::min_seed_size},
      {"sim2seed", Key::sim2seed},
      {"reuse_all_seeds", Key::reuse_all_seeds},
      {"reuse_seed_sim", Key::reuse_seed_sim},
      {"obs_in_min_base", Key::obs_in_min_base},
      {"clus_sim", Key::clus_sim},
      {"normalization", Key::normalization},
      {"density_mode", Key::density_mode},
      {"small_c", Key::small_c},
      {"large_threshold", Key::large_threshold},
      {"rng_seed", Key::rng_seed},
  };
  return keys;
}

std::uint64_t config_uint(std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorCode::parse, "line " + std::to_string(line) +
                                      ": expected a non-negative integer");
  return out;
}

double config_real(std::string_view v, std::size_t line) {
  double out = 0.0;
  if (!parse_double(v, out) || !std::isfinite(out))
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line) + ": expected a number");
  return out;
}

bool config_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "TRUE" || v == "1") return true;
  if (v == "false" || v == "FALSE" || v == "0") return false;
  throw Error(ErrorCode::parse,
              "line " + std::to_string(line) + ": expected true or false");
}

}  // namespace

ParameterSet parse_config(std::string_view text) {
  ParameterSet p;
  p.reuse_seed_sim.reset();
  std::map<Key, std::size_t> seen;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t ln = i + 1;
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(ln) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = config_keys().find(key);
    if (it == config_keys().end())
      throw Error(ErrorCode::invalid_parameters,
                  "line " + std::to_string(ln) + ": unknown key '" +
                      std::string(key) + "'");
    if (!seen.emplace(it->second, ln).second)
      throw Error(ErrorCode::invalid_parameters,
                  "line " + std::to_string(ln) + ": repeated key '" +
                      std::string(key) + "'");
    switch (it->second) {
      case Key::min_seed_size: p.min_seed_size = config_uint(value, ln); break;
      case Key::sim2seed: p.sim2seed = config_real(value, ln); break;
      case Key::reuse_all_seeds:
        p.reuse_all_seeds = config_bool(value, ln);
        break;
      case Key::reuse_seed_sim:
        p.reuse_seed_sim = config_real(value, ln);
        break;
      case Key::obs_in_min_base:
        p.obs_in_min_base = config_uint(value, ln);
        break;
      case Key::clus_sim: p.clus_sim = config_real(value, ln); break;
      case Key::normalization:
        if (value == "bounded") p.normalization = Normalization::bounded;
        else if (value == "unbounded") p.normalization = Normalization::unbounded;
        else
          throw Error(ErrorCode::parse, "line " + std::to_string(ln) +
                                            ": normalization is bounded or "
                                            "unbounded");
        break;
      case Key::density_mode:
        if (value == "auto") p.density_mode = DensityMode::automatic;
        else if (value == "small") p.density_mode = DensityMode::small;
        else if (value == "large") p.density_mode = DensityMode::large;
        else
          throw Error(ErrorCode::parse, "line " + std::to_string(ln) +
                                            ": density_mode is auto, small or "
                                            "large");
        break;
      case Key::small_c: p.small_c = config_real(value, ln); break;
      case Key::large_threshold:
        p.large_threshold = config_uint(value, ln);
        break;
      case Key::rng_seed: p.rng_seed = config_uint(value, ln); break;
    }
  }
  for (Key required : {Key::min_seed_size, Key::sim2seed, Key::reuse_all_seeds,
                       Key::obs_in_min_base, Key::clus_sim}) {
    if (!seen.contains(required)) {
      for (const auto& [name, k] : config_keys())
        if (k == required)
          throw Error(ErrorCode::invalid_parameters,
                      "missing required key '" + name + "'");
    }
  }
  if (!p.reuse_all_seeds && !p.reuse_seed_sim)
    throw Error(ErrorCode::invalid_parameters,
                "reuse_seed_sim is required when reuse_all_seeds is false");
  p.validate();
  return p;
}

ParameterSet read_config(const std::filesystem::path& path) {
  return parse_config(read_text(path));
}

std::string format_config(const ParameterSet& p) {
  std::ostringstream out;
  out << "min_seed_size = " << p.min_seed_size << '\n'
      << "sim2seed = " << format_double(p.sim2seed) << '\n'
      << "reuse_all_seeds = " << (p.reuse_all_seeds ? "true" : "false") << '\n';
  if (p.reuse_seed_sim)
    out << "reuse_seed_sim = " << format_double(*p.reuse_seed_sim) << '\n';
  out << "obs_in_min_base = " << p.obs_in_min_base << '\n'
      << "clus_sim = " << format_double(p.clus_sim) << '\n'
      << "normalization = " << to_string(p.normalization) << '\n'
      << "density_mode = " << to_string(p.density_mode) << '\n'
      << "small_c = " << format_double(p.small_c) << '\n'
      << "large_threshold = " << p.large_threshold << '\n'
      << "rng_seed = " << p.rng_seed << '\n';
  return out.str();
}

namespace {

// Non-empty lines; a non-numeric first line is skipped as a header. Multi-
// column lines use their last cell.
std::vector<std::pair<std::size_t, std::string_view>> vector_cells(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> cells;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    cells.emplace_back(i + 1, split_cells(lines[i]).back());
  }
  double dummy = 0.0;
  if (!cells.empty() && !parse_double(cells.front().second, dummy))
    cells.erase(cells.begin());
  return cells;
}

}  // namespace

std::vector<std::uint8_t> parse_binary_vector(std::string_view text) {
  std::vector<std::uint8_t> out;
  for (const auto& [line, cell] : vector_cells(text)) {
    double v = 0.0;
    if (!parse_double(cell, v) || (v != 0.0 && v != 1.0))
      throw Error(ErrorCode::parse, "line " + std::to_string(line) +
                                        ": expected 0 or 1");
    out.push_back(v != 0.0 ? 1 : 0);
  }
  return out;
}

std::vector<double> parse_real_vector(std::string_view text) {
  std::vector<double> out;
  for (const auto& [line, cell] : vector_cells(text)) {
    double v = 0.0;
    if (!parse_double(cell, v))
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line) + ": expected a number");
    if (!std::isfinite(v))
      throw Error(ErrorCode::non_finite,
                  "line " + std::to_string(line) + ": non-finite value");
    out.push_back(v);
  }
  return out;
}

}  // namespace reldenclu
