// Command-line front-end over the C API.
#include <reldenclu/reldenclu.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(rdc_status s) {
  if (s != RDC_OK) {
    std::string msg = rdc_status_string(s);
    if (*rdc_last_error()) msg += ": " + std::string(rdc_last_error());
    throw Failure(msg);
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<rdc_matrix, Deleter<rdc_matrix, rdc_matrix_free>>;
using Params = std::unique_ptr<rdc_params, Deleter<rdc_params, rdc_params_free>>;
using Result = std::unique_ptr<rdc_result, Deleter<rdc_result, rdc_result_free>>;
using Dataset =
    std::unique_ptr<rdc_dataset, Deleter<rdc_dataset, rdc_dataset_free>>;

std::string take(char* s) {
  std::string out(s);
  rdc_string_free(s);
  return out;
}

Matrix load_matrix(const std::string& path) {
  rdc_matrix* m = nullptr;
  check(rdc_matrix_read_csv(path.c_str(), &m));
  return Matrix(m);
}

Result load_biclusters(const std::string& path) {
  rdc_result* r = nullptr;
  check(rdc_result_read_json(path.c_str(), &r));
  return Result(r);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure("cannot create '" + path.string() + "'");
  out << text;
  if (!out) throw Failure("cannot write '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure("cannot create directory '" + dir.string() + "'");
}

std::vector<std::uint32_t> indices(const rdc_result* r, std::size_t k,
                                   bool features) {
  const std::uint32_t* data = nullptr;
  std::size_t n = 0;
  check(features ? rdc_result_features(r, k, &data, &n)
                 : rdc_result_observations(r, k, &data, &n));
  return {data, data + n};
}

// One value per non-empty line; a non-numeric first line is a header.
std::vector<double> read_column(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.rfind(',');
    const std::string cell =
        comma == std::string::npos ? line : line.substr(comma + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      if (out.empty() && lineno == 1) continue;
      throw Failure(path + ": line " + std::to_string(lineno) +
                    " is not a number");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
      throw Failure(path + ": line " + std::to_string(lineno) +
                    " is not a number");
    if (!std::isfinite(v))
      throw Failure(path + ": line " + std::to_string(lineno) +
                    " is not finite");
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint8_t> read_labels(const std::string& path) {
  std::vector<std::uint8_t> out;
  for (double v : read_column(path)) {
    if (v != 0.0 && v != 1.0)
      throw Failure(path + ": labels must be 0 or 1");
    out.push_back(v != 0.0);
  }
  return out;
}

json timings_of(const rdc_result* r) {
  return {{"normalize", rdc_result_seconds(r, "normalize")},
          {"density", rdc_result_seconds(r, "density")},
          {"seeds", rdc_result_seconds(r, "seeds")},
          {"growth", rdc_result_seconds(r, "growth")}};
}

// Parses "key = value" lines of a config dump into JSON.
json config_json(const std::string& text) {
  json out = json::object();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

std::string membership_csv(const rdc_result* r, std::size_t n, bool features) {
  const std::size_t k = rdc_result_count(r);
  std::vector<std::vector<std::uint8_t>> cols(k, std::vector<std::uint8_t>(n));
  for (std::size_t b = 0; b < k; ++b)
    for (std::uint32_t i : indices(r, b, features)) cols[b][i] = 1;
  std::string out;
  for (std::size_t b = 0; b < k; ++b) {
    if (b) out += ',';
    out += "bicluster_" + std::to_string(b + 1);
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < k; ++b) {
      if (b) out += ',';
      out += cols[b][i] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

struct RunOptions {
  std::string input;
  std::string config;
  std::string out;
};

int cmd_run(const RunOptions& o) {
  Matrix m = load_matrix(o.input);
  rdc_params* raw = nullptr;
  check(rdc_params_read_config(o.config.c_str(), &raw));
  Params p(raw);

  const auto start = std::chrono::steady_clock::now();
  rdc_result* rr = nullptr;
  check(rdc_run(m.get(), p.get(), &rr));
  Result r(rr);
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  for (std::size_t i = 0; i < rdc_result_warning_count(r.get()); ++i)
    std::cerr << "warning: " << rdc_result_warning(r.get(), i) << '\n';

  const fs::path dir(o.out);
  ensure_dir(dir);
  char* js = nullptr;
  check(rdc_result_to_json(r.get(), m.get(), &js));
  write_file(dir / "biclusters.json", take(js));
  const std::size_t rows = rdc_matrix_rows(m.get());
  const std::size_t cols = rdc_matrix_cols(m.get());
  write_file(dir / "membership_observations.csv",
             membership_csv(r.get(), rows, false));
  write_file(dir / "membership_features.csv",
             membership_csv(r.get(), cols, true));

  char* cfg = nullptr;
  check(rdc_params_to_config(p.get(), &cfg));
  const std::string config_text = take(cfg);
  json warnings = json::array();
  for (std::size_t i = 0; i < rdc_result_warning_count(r.get()); ++i)
    warnings.push_back(rdc_result_warning(r.get(), i));
  json manifest = {
      {"version", rdc_version()},
      {"input", fs::absolute(o.input).string()},
      {"config", fs::absolute(o.config).string()},
      {"rows", rows},
      {"cols", cols},
      {"parameters", config_json(config_text)},
      {"density_method", rdc_result_large_method(r.get()) ? "large" : "small"},
      {"seed_count", rdc_result_seed_count(r.get())},
      {"bicluster_count", rdc_result_count(r.get())},
      {"seconds", timings_of(r.get())},
      {"total_seconds", total},
      {"warnings", warnings},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << rdc_result_count(r.get()) << " biclusters written to "
            << dir.string() << '\n';
  return 0;
}

struct GenerateOptions {
  std::string family;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateOptions& o) {
  rdc_dataset* raw = nullptr;
  check(rdc_generate(o.family.c_str(), o.seed, &raw));
  Dataset d(raw);
  const fs::path dir(o.out);
  ensure_dir(dir);
  check(rdc_matrix_write_csv(rdc_dataset_matrix(d.get()),
                             (dir / "matrix.csv").string().c_str()));
  char* truth = nullptr;
  check(rdc_dataset_truth_json(d.get(), &truth));
  write_file(dir / "truth.json", take(truth));
  rdc_params* p = nullptr;
  check(rdc_dataset_params(d.get(), &p));
  Params params(p);
  char* cfg = nullptr;
  check(rdc_params_to_config(params.get(), &cfg));
  write_file(dir / "config.txt", take(cfg));
  json recipe = {{"family", o.family},
                 {"seed", o.seed},
                 {"version", rdc_version()}};
  write_file(dir / "recipe.json", recipe.dump(2) + "\n");
  std::cout << "wrote " << (dir / "matrix.csv").string() << " ("
            << rdc_matrix_rows(rdc_dataset_matrix(d.get())) << " x "
            << rdc_matrix_cols(rdc_dataset_matrix(d.get())) << ")\n";
  return 0;
}

struct EvaluateOptions {
  std::string biclusters;
  std::string mode = "truth";
  std::string truth;
  std::string labels;
  std::string indicator;
  double percentile = 90.0;
  bool as_json = false;
};

std::string format_score(const rdc_class_scores& s, int which) {
  const int has[] = {s.has_precision, s.has_recall, s.has_gscore};
  const double val[] = {s.precision, s.recall, s.gscore};
  if (!has[which]) return "*";
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << val[which];
  return out.str();
}

json optional_json(int has, double v) { return has ? json(v) : json(nullptr); }

int evaluate_truth(const EvaluateOptions& o, const rdc_result* est) {
  const json truth = json::parse(read_file(o.truth));
  const std::size_t rows = truth.at("rows").get<std::size_t>();
  const std::size_t cols = truth.at("cols").get<std::size_t>();
  Result t = load_biclusters(o.truth);
  json report = json::array();
  for (std::size_t k = 0; k < rdc_result_count(t.get()); ++k) {
    if (rdc_result_count(est) == 0) {
      report.push_back({{"truth", k + 1}, {"accuracy", nullptr}});
      continue;
    }
    std::size_t index = 0;
    double score = 0.0;
    check(rdc_best_match(est, t.get(), k, rows, cols, &index, &score));
    report.push_back(
        {{"truth", k + 1}, {"best", index + 1}, {"accuracy", score}});
  }
  if (o.as_json) {
    std::cout << report.dump(2) << '\n';
  } else {
    for (const auto& e : report) {
      std::cout << "truth " << e["truth"].get<std::size_t>() << ": ";
      if (e["accuracy"].is_null())
        std::cout << "no biclusters\n";
      else
        std::printf("accuracy %.4f (bicluster %zu)\n",
                    e["accuracy"].get<double>(), e["best"].get<std::size_t>());
    }
  }
  return 0;
}

int evaluate_classes(const EvaluateOptions& o, const rdc_result* est) {
  const auto labels = read_labels(o.labels);
  const std::size_t n = labels.size();
  if (rdc_result_count(est) == 0) throw Failure("no biclusters to evaluate");
  std::size_t best = 0;
  rdc_class_report best_report{};
  std::vector<std::uint8_t> m(n);
  for (std::size_t k = 0; k < rdc_result_count(est); ++k) {
    check(rdc_result_membership(est, k, n, m.data()));
    rdc_class_report rep{};
    check(rdc_class_report_compute(m.data(), labels.data(), n, &rep));
    if (k == 0 || rep.accuracy > best_report.accuracy) {
      best = k;
      best_report = rep;
    }
  }
  if (o.as_json) {
    json classes = json::array();
    for (const auto& c : best_report.classes)
      classes.push_back({{"precision", optional_json(c.has_precision, c.precision)},
                         {"recall", optional_json(c.has_recall, c.recall)},
                         {"gscore", optional_json(c.has_gscore, c.gscore)}});
    std::cout << json{{"bicluster", best + 1},
                      {"accuracy", best_report.accuracy},
                      {"flipped", best_report.flipped != 0},
                      {"classes", classes}}
                     .dump(2)
              << '\n';
  } else {
    std::printf("bicluster %zu: class-match accuracy %.4f\n", best + 1,
                best_report.accuracy);
    std::printf("%-6s %10s %10s %10s\n", "class", "precision", "recall",
                "gscore");
    for (int c = 0; c < 2; ++c) {
      const auto& s = best_report.classes[c];
      std::printf("%-6d %10s %10s %10s\n", c, format_score(s, 0).c_str(),
                  format_score(s, 1).c_str(), format_score(s, 2).c_str());
    }
  }
  return 0;
}

int evaluate_percentile(const EvaluateOptions& o, const rdc_result* est) {
  const auto indicator = read_column(o.indicator);
  std::size_t index = 0;
  double match = 0.0;
  check(rdc_percentile_match(est, indicator.data(), indicator.size(),
                             o.percentile, &index, &match));
  // Feature names are only present when the run input had a header.
  const json doc = json::parse(read_file(o.biclusters));
  const json& chosen = doc.is_array() ? doc.at(index) : doc.at("biclusters").at(index);
  json features = chosen.contains("feature_names") ? chosen.at("feature_names")
                                                   : chosen.at("features");
  if (o.as_json) {
    std::cout << json{{"bicluster", index + 1},
                      {"percentile", o.percentile},
                      {"match", match},
                      {"features", features}}
                     .dump(2)
              << '\n';
  } else {
    std::printf("bicluster %zu matches the top set above percentile %g: %.4f\n",
                index + 1, o.percentile, match);
    std::cout << "features:";
    for (const auto& f : features)
      std::cout << ' ' << (f.is_string() ? f.get<std::string>() : f.dump());
    std::cout << '\n';
  }
  return 0;
}

int cmd_evaluate(const EvaluateOptions& o) {
  Result est = load_biclusters(o.biclusters);
  if (o.mode == "truth") {
    if (o.truth.empty()) throw Failure("--truth is required in truth mode");
    return evaluate_truth(o, est.get());
  }
  if (o.mode == "classes") {
    if (o.labels.empty()) throw Failure("--labels is required in classes mode");
    return evaluate_classes(o, est.get());
  }
  if (o.indicator.empty())
    throw Failure("--indicator is required in percentile mode");
  return evaluate_percentile(o, est.get());
}

struct PlotOptions {
  std::string input;
  std::string biclusters;
  std::vector<std::size_t> pair;
  std::size_t bicluster = 0;
  std::string out;
};

int cmd_plotdata(const PlotOptions& o) {
  Matrix m = load_matrix(o.input);
  Result r = load_biclusters(o.biclusters);
  const std::size_t rows = rdc_matrix_rows(m.get());
  const std::size_t cols = rdc_matrix_cols(m.get());
  if (o.pair.size() != 2 || o.pair[0] < 1 || o.pair[1] < 1 ||
      o.pair[0] > cols || o.pair[1] > cols || o.pair[0] == o.pair[1])
    throw Failure("invalid pair: need two distinct features in 1.." +
                  std::to_string(cols));
  const std::size_t fx = o.pair[0] - 1;
  const std::size_t fy = o.pair[1] - 1;
  if (o.bicluster > rdc_result_count(r.get()))
    throw Failure("bicluster " + std::to_string(o.bicluster) + " does not exist");

  // Flag rows of the chosen bicluster, or by default of every bicluster whose
  // features include both plotted columns.
  std::vector<std::uint8_t> flag(rows, 0);
  for (std::size_t k = 0; k < rdc_result_count(r.get()); ++k) {
    if (o.bicluster != 0 && k + 1 != o.bicluster) continue;
    if (o.bicluster == 0) {
      const auto f = indices(r.get(), k, true);
      const bool has_x = std::find(f.begin(), f.end(), fx) != f.end();
      const bool has_y = std::find(f.begin(), f.end(), fy) != f.end();
      if (!has_x || !has_y) continue;
    }
    for (std::uint32_t i : indices(r.get(), k, false)) {
      if (i >= rows) throw Failure("bicluster row index out of range");
      flag[i] = 1;
    }
  }

  std::string out = "x,y,flag\n";
  char buf[64];
  for (std::size_t i = 0; i < rows; ++i) {
    double x = 0.0;
    double y = 0.0;
    check(rdc_matrix_get(m.get(), i, fx, &x));
    check(rdc_matrix_get(m.get(), i, fy, &y));
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", x, y, flag[i]);
    out += buf;
  }
  write_file(o.out, out);
  return 0;
}

struct BenchOptions {
  std::string input;
  std::string config;
  std::string family;
  std::uint64_t seed = 0;
  std::size_t instances = 10;
};

double stdev(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

int cmd_bench(const BenchOptions& o) {
  if (!o.input.empty()) {
    if (o.config.empty()) throw Failure("--config is required with --input");
    Matrix m = load_matrix(o.input);
    rdc_params* raw = nullptr;
    check(rdc_params_read_config(o.config.c_str(), &raw));
    Params p(raw);
    const auto start = std::chrono::steady_clock::now();
    rdc_result* r = nullptr;
    check(rdc_run(m.get(), p.get(), &r));
    Result keep(r);
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%.3f\n", sec);
    return 0;
  }
  if (o.family.empty()) throw Failure("give --input or --family");
  std::vector<double> scores;
  std::vector<double> seconds;
  for (std::size_t i = 0; i < o.instances; ++i) {
    rdc_dataset* raw = nullptr;
    check(rdc_generate(o.family.c_str(), o.seed + i, &raw));
    Dataset d(raw);
    rdc_params* praw = nullptr;
    check(rdc_dataset_params(d.get(), &praw));
    Params p(praw);
    const rdc_matrix* m = rdc_dataset_matrix(d.get());
    const auto start = std::chrono::steady_clock::now();
    rdc_result* rr = nullptr;
    check(rdc_run(m, p.get(), &rr));
    Result r(rr);
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count());
    const rdc_result* truth = rdc_dataset_truth(d.get());
    for (std::size_t k = 0; k < rdc_result_count(truth); ++k) {
      double score = 0.0;
      if (rdc_result_count(r.get()) > 0) {
        std::size_t index = 0;
        check(rdc_best_match(r.get(), truth, k, rdc_matrix_rows(m),
                             rdc_matrix_cols(m), &index, &score));
      }
      if (scores.size() <= k * o.instances + i)
        scores.resize(rdc_result_count(truth) * o.instances, 0.0);
      scores[k * o.instances + i] = score;
    }
  }
  const std::size_t truths = scores.size() / o.instances;
  std::printf("%-22s %8s %8s %10s\n", "family", "mean", "sd", "seconds");
  double sec_mean = 0.0;
  for (double s : seconds) sec_mean += s;
  sec_mean /= static_cast<double>(seconds.size());
  for (std::size_t k = 0; k < truths; ++k) {
    std::vector<double> v(scores.begin() + k * o.instances,
                          scores.begin() + (k + 1) * o.instances);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    std::string label = o.family;
    if (truths > 1) label += " " + std::to_string(k + 1);
    std::printf("%-22s %8.3f %8.3f %10.3f\n", label.c_str(), mean,
                stdev(v, mean), sec_mean);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative-density biclustering"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rdc_version());

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Find biclusters in a CSV matrix");
  run_cmd->add_option("-i,--input", run.input, "Numeric CSV input")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("-c,--config", run.config, "Parameter file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--out", run.out, "Output directory")->required();

  GenerateOptions gen;
  auto* gen_cmd =
      app.add_subcommand("generate", "Write a simulated dataset and its truth");
  gen_cmd->add_option("-f,--family", gen.family, "Dataset family")->required();
  gen_cmd->add_option("-s,--seed", gen.seed, "Random seed");
  gen_cmd->add_option("-o,--out", gen.out, "Output directory")->required();

  EvaluateOptions ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score biclusters");
  ev_cmd->add_option("-b,--biclusters", ev.biclusters, "biclusters.json")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("-m,--mode", ev.mode, "truth, classes or percentile")
      ->check(CLI::IsMember({"truth", "classes", "percentile"}));
  ev_cmd->add_option("-t,--truth", ev.truth, "truth.json")
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("-l,--labels", ev.labels, "0/1 class labels, one per row")
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--indicator", ev.indicator, "Real indicator, one per row")
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("-p,--percentile", ev.percentile, "Top-set percentile")
      ->check(CLI::Range(0.0, 100.0));
  ev_cmd->add_flag("--json", ev.as_json, "Print JSON");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand(
      "plot-data", "Write x, y, membership flag for one feature pair");
  plot_cmd->add_option("-i,--input", plot.input, "Numeric CSV input")
      ->required()
      ->check(CLI::ExistingFile);
  plot_cmd->add_option("-b,--biclusters", plot.biclusters, "biclusters.json")
      ->required()
      ->check(CLI::ExistingFile);
  plot_cmd->add_option("--pair", plot.pair, "Two 1-based feature indices")
      ->required()
      ->expected(2)
      ->delimiter(',');
  plot_cmd->add_option("--bicluster", plot.bicluster,
                       "1-based bicluster to flag (default: all covering the pair)");
  plot_cmd->add_option("-o,--out", plot.out, "Output CSV")->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time runs");
  bench_cmd->add_option("-i,--input", bench.input, "Numeric CSV input")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("-c,--config", bench.config, "Parameter file")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("-f,--family", bench.family, "Simulated family");
  bench_cmd->add_option("-s,--seed", bench.seed, "First seed");
  bench_cmd->add_option("-n,--instances", bench.instances, "Instances")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) return cmd_generate(gen);
    if (*ev_cmd) return cmd_evaluate(ev);
    if (*plot_cmd) return cmd_plotdata(plot);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
