#include "reldenclu/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

namespace reldenclu {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": lengths differ (" + std::to_string(a) +
                    " vs " + std::to_string(b) + ")");
}

}  // namespace

double accuracy(const MembershipMatrix& truth,
                const MembershipMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    throw Error(ErrorCode::dimension_mismatch,
                "membership matrices differ in shape");
  const std::size_t cells = truth.rows() * truth.cols();
  if (cells == 0)
    throw Error(ErrorCode::insufficient_data, "empty membership matrix");
  std::size_t agree = 0;
  for (std::size_t r = 0; r < truth.rows(); ++r)
    for (std::size_t c = 0; c < truth.cols(); ++c)
      agree += truth.get(r, c) == estimate.get(r, c);
  return static_cast<double>(agree) / static_cast<double>(cells);
}

Match best_match(std::span<const Bicluster> biclusters,
                 const MembershipMatrix& truth) {
  if (biclusters.empty())
    throw Error(ErrorCode::no_result, "no biclusters to match");
  Match best{0, -1.0};
  for (std::size_t i = 0; i < biclusters.size(); ++i) {
    const double s = accuracy(
        truth, membership_matrix(biclusters[i], truth.rows(), truth.cols()));
    if (s > best.score) best = {i, s};
  }
  return best;
}

std::vector<std::uint8_t> observation_membership(const Bicluster& b,
                                                 std::size_t n) {
  std::vector<std::uint8_t> m(n, 0);
  for (Index o : b.observations) {
    if (o >= n)
      throw Error(ErrorCode::invalid_bicluster,
                  "observation " + std::to_string(o + 1) + " out of range");
    m[o] = 1;
  }
  return m;
}

double class_match_accuracy(std::span<const std::uint8_t> membership,
                            std::span<const std::uint8_t> labels) {
  require_same_length(membership.size(), labels.size(), "class match");
  if (labels.empty())
    throw Error(ErrorCode::insufficient_data, "no observations");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    agree += (membership[i] != 0) == (labels[i] != 0);
  const std::size_t n = labels.size();
  return static_cast<double>(std::max(agree, n - agree)) /
         static_cast<double>(n);
}

ClassReport precision_recall_gscore(std::span<const std::uint8_t> membership,
                                    std::span<const std::uint8_t> labels) {
  require_same_length(membership.size(), labels.size(), "class scores");
  if (labels.empty())
    throw Error(ErrorCode::insufficient_data, "no observations");
  const std::size_t n = labels.size();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i)
    agree += (membership[i] != 0) == (labels[i] != 0);

  ClassReport report;
  report.flipped = n - agree > agree;
  report.accuracy =
      static_cast<double>(std::max(agree, n - agree)) / static_cast<double>(n);

  // confusion[label][predicted]
  std::size_t confusion[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < n; ++i) {
    const int predicted = (membership[i] != 0) != report.flipped ? 1 : 0;
    ++confusion[labels[i] != 0 ? 1 : 0][predicted];
  }
  for (int k = 0; k < 2; ++k) {
    const std::size_t hit = confusion[k][k];
    const std::size_t predicted = confusion[0][k] + confusion[1][k];
    const std::size_t actual = confusion[k][0] + confusion[k][1];
    ClassScores& s = report.classes[k];
    if (predicted > 0)
      s.precision = static_cast<double>(hit) / static_cast<double>(predicted);
    if (actual > 0)
      s.recall = static_cast<double>(hit) / static_cast<double>(actual);
    if (s.precision && s.recall) s.gscore = std::sqrt(*s.precision * *s.recall);
  }
  return report;
}

double student_t_upper_tail(double t, double dof) {
  if (!(dof > 0.0))
    throw Error(ErrorCode::invalid_argument, "degrees of freedom must be > 0");
  if (std::isnan(t)) throw Error(ErrorCode::non_finite, "t statistic is NaN");
  if (t == std::numeric_limits<double>::infinity()) return 0.0;
  if (t == -std::numeric_limits<double>::infinity()) return 1.0;
  if (t < 0.0) return 1.0 - student_t_upper_tail(-t, dof);

  // With x = sqrt(dof) tan(theta) the density turns into
  // cos(theta)^(dof-1) / B(1/2, dof/2) on (-pi/2, pi/2).
  const double log_beta = std::lgamma(0.5) + std::lgamma(0.5 * dof) -
                          std::lgamma(0.5 * (dof + 1.0));
  const double lower = std::atan(t / std::sqrt(dof));
  const double upper = std::numbers::pi / 2;
  if (lower >= upper) return 0.0;
  auto integrand = [dof](double theta) {
    const double c = std::cos(theta);
    return c <= 0.0 ? (dof == 1.0 ? 1.0 : 0.0) : std::pow(c, dof - 1.0);
  };
  const double area =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          integrand, lower, upper, 20, 1e-14);
  return std::clamp(area * std::exp(-log_beta), 0.0, 1.0);
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "paired t-test");
  const std::size_t n = a.size();
  if (n < 2)
    throw Error(ErrorCode::insufficient_data,
                "paired t-test needs at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double m = mean(d);
  double ss = 0.0;
  for (double v : d) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(n - 1);
  if (!(var > 0.0))
    throw Error(ErrorCode::degenerate_test,
                "differences have zero variance");
  TTest out;
  out.dof = n - 1;
  out.t = m / std::sqrt(var / static_cast<double>(n));
  out.p = student_t_upper_tail(out.t, static_cast<double>(out.dof));
  return out;
}

double percentile_value(std::span<const double> values, double percentile) {
  if (values.empty())
    throw Error(ErrorCode::insufficient_data, "no values");
  if (!(percentile >= 0.0 && percentile <= 100.0))
    throw Error(ErrorCode::invalid_argument, "percentile must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = percentile / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<std::uint8_t> top_set(std::span<const double> indicator,
                                  double percentile) {
  if (!(percentile > 0.0 && percentile < 100.0))
    throw Error(ErrorCode::invalid_argument,
                "percentile must lie strictly between 0 and 100");
  const double cut = percentile_value(indicator, percentile);
  std::vector<std::uint8_t> top(indicator.size());
  for (std::size_t i = 0; i < indicator.size(); ++i)
    top[i] = indicator[i] > cut ? 1 : 0;
  return top;
}

Match percentile_match(std::span<const Bicluster> biclusters,
                       std::span<const double> indicator, double percentile) {
  if (biclusters.empty())
    throw Error(ErrorCode::no_result, "no biclusters to match");
  const auto top = top_set(indicator, percentile);
  Match best{0, -1.0};
  for (std::size_t i = 0; i < biclusters.size(); ++i) {
    const double s = class_match_accuracy(
        observation_membership(biclusters[i], indicator.size()), top);
    if (s > best.score) best = {i, s};
  }
  return best;
}

FeatureMatrix export_membership_features(std::span<const Bicluster> biclusters,
                                         std::size_t n) {
  FeatureMatrix f{n, biclusters.size(),
                  std::vector<std::uint8_t>(n * biclusters.size(), 0)};
  for (std::size_t k = 0; k < biclusters.size(); ++k) {
    const auto m = observation_membership(biclusters[k], n);
    for (std::size_t r = 0; r < n; ++r) f.values[r * f.cols + k] = m[r];
  }
  return f;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::string format_score_table(std::span<const FamilyScore> rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.family.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Family"
      << "  " << std::setw(4) << "" << "  " << "Accuracy\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    out << std::setw(static_cast<int>(width)) << r.family << "  "
        << std::setw(4) << "Mean" << "  " << mean(r.scores) << '\n';
    out << std::setw(static_cast<int>(width)) << "" << "  " << std::setw(4)
        << "SD" << "  " << stddev(r.scores) << '\n';
  }
  return out.str();
}

std::string format_score_json(std::span<const FamilyScore> rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : rows)
    doc.push_back({{"family", r.family},
                   {"mean", mean(r.scores)},
                   {"sd", stddev(r.scores)},
                   {"scores", r.scores}});
  return doc.dump(2);
}

}  // namespace reldenclu
