// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace respscreen::eval {

/// Scores for one set of participants from one classifier (or a fusion).
struct ScoredSet {
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::vector<int> labels;  // 1 = COVID
  std::string modality;

  std::size_t size() const { return scores.size(); }
  void check() const;
};

struct RocPoint {
  double threshold;
  double sensitivity;
  double specificity;
};

/// Threshold sweep step and the sweep's terminal point.
inline constexpr int kSweepSteps = 10000;
inline constexpr double kSweepStep = 1e-4;

/// Thresholds k / 10000 for k = 0..10000 plus one terminal point one step
/// past 1 (nothing predicted positive). A score p is positive at t iff p >= t.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
std::vector<RocPoint> roc_curve(const ScoredSet& set);

/// Trapezoidal area under sensitivity vs 1 - specificity.
double auc(std::span<const RocPoint> roc);
double auc(const ScoredSet& set);

/// Mann-Whitney probability that a positive outscores a negative, ties 1/2.
/// O(n log n).
double rank_auc(std::span<const double> scores, std::span<const int> labels);

struct ConfusionMatrix {
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
};

struct OperatingPoint {
  double threshold = 0.0;
  ConfusionMatrix confusion;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double ppv = 0.0;  // 0 when nothing is predicted positive
  double npv = 0.0;  // 0 when nothing is predicted negative
  double accuracy = 0.0;
  double weighted_accuracy = 0.0;  // (sensitivity + specificity) / 2
  bool target_reached = true;
};

ConfusionMatrix confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold);
OperatingPoint metrics_at(std::span<const double> scores, std::span<const int> labels,
                          double threshold);

/// Smallest sweep threshold whose specificity >= target. When even t = 1
/// misses the target, reports t = 1 with target_reached = false.
OperatingPoint operating_point(const ScoredSet& set, double target_specificity = 0.95);

struct EvalReport {
  std::vector<RocPoint> roc;
  double auc = 0.0;
  OperatingPoint operating;
};

EvalReport evaluate(const ScoredSet& set, double target_specificity = 0.95);

/// Arithmetic mean of the member scores per participant. Members are aligned
/// by id to the first set's order; id sets and labels must agree.
ScoredSet fuse(std::span<const ScoredSet> members);

/// Pearson correlation of aligned score vectors. A zero-variance member
/// correlates 0 with others and 1 with itself.
std::vector<std::vector<double>> score_cross_correlation(std::span<const ScoredSet> sets);

struct Histogram {
  std::string subset;
  std::string modality;
  std::vector<std::size_t> counts;  // 20 bins of width 0.05, last bin closed
  std::size_t total = 0;
  bool empty = false;
};

inline constexpr std::size_t kHistogramBins = 20;
std::size_t histogram_bin(double p);
Histogram score_histogram(std::span<const double> scores, std::string subset,
                          std::string modality);

// ------------------------------------------------------------------- text I/O

/// "id,label,score" rows with a leading "# modality=<m>" line plus optional
/// extra comment lines.
std::string scored_set_to_csv(const ScoredSet& set, std::string_view comment = {});
ScoredSet scored_set_from_csv(std::string_view text);

std::string roc_to_csv(std::span<const RocPoint> roc, std::string_view comment = {});

}  // namespace respscreen::eval
