#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reldenclu/model.hpp"

namespace reldenclu {

// Fraction of cells on which the two membership matrices agree.
double accuracy(const MembershipMatrix& truth, const MembershipMatrix& estimate);

struct Match {
  std::size_t index = 0;
  double score = 0.0;
};

// Candidate with the highest accuracy against `truth`; the first one wins
// ties. Throws no_result on an empty list.
Match best_match(std::span<const Bicluster> biclusters,
                 const MembershipMatrix& truth);

// Observation membership of `b` over n rows.
std::vector<std::uint8_t> observation_membership(const Bicluster& b,
                                                 std::size_t n);

// max(#agree, #disagree) / N, so label polarity does not matter.
double class_match_accuracy(std::span<const std::uint8_t> membership,
                            std::span<const std::uint8_t> labels);

struct ClassScores {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> gscore;
};

struct ClassReport {
  double accuracy = 0.0;
  // True when membership was flipped to agree with the labels.
  bool flipped = false;
  // Index 0 scores label 0, index 1 scores label 1.
  ClassScores classes[2];
};

// Membership polarity is chosen to maximise class_match_accuracy first; a tie
// keeps it as is. Scores with a zero denominator are absent.
ClassReport precision_recall_gscore(std::span<const std::uint8_t> membership,
                                    std::span<const std::uint8_t> labels);

struct TTest {
  double t = 0.0;
  // Right-tailed.
  double p = 0.0;
  std::size_t dof = 0;
};

// Paired t-test on d = a - b. Throws degenerate_test when the differences
// have zero variance and dimension_mismatch / insufficient_data on bad input.
TTest paired_t_test(std::span<const double> a, std::span<const double> b);

// P(T > t) for Student's t with `dof` degrees of freedom.
double student_t_upper_tail(double t, double dof);

// Linear-interpolated percentile (0..100) of `values`.
double percentile_value(std::span<const double> values, double percentile);

// Observations strictly above the given percentile of `indicator`.
std::vector<std::uint8_t> top_set(std::span<const double> indicator,
                                  double percentile);

// Bicluster whose observation membership best matches the top set of
// `indicator`. Throws no_result on an empty list.
Match percentile_match(std::span<const Bicluster> biclusters,
                       std::span<const double> indicator, double percentile);

// N x K binary matrix, row-major; column k is the membership of bicluster k.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> values;

  std::uint8_t at(std::size_t r, std::size_t c) const {
    return values[r * cols + c];
  }
};

FeatureMatrix export_membership_features(std::span<const Bicluster> biclusters,
                                         std::size_t n);

double mean(std::span<const double> values);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> values);

struct FamilyScore {
  std::string family;
  std::vector<double> scores;
};

// Aligned text table with one mean row and one deviation row per family.
std::string format_score_table(std::span<const FamilyScore> rows);
std::string format_score_json(std::span<const FamilyScore> rows);

}  // namespace reldenclu
