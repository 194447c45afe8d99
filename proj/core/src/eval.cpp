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

#include "respscreen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "respscreen/error.hpp"
#include "respscreen/text.hpp"

namespace respscreen::eval {

namespace {

double threshold_at(int k) { return static_cast<double>(k) / static_cast<double>(kSweepSteps); }
constexpr double kTerminalThreshold = 1.0 + kSweepStep;

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  require(scores.size() == labels.size(), ErrorKind::kData, "scores and labels differ in length");
  for (double s : scores) require(std::isfinite(s), ErrorKind::kData, "non-finite score");
  for (int c : labels) require(c == 0 || c == 1, ErrorKind::kData, "labels must be 0 or 1");
}

double ratio(std::size_t a, std::size_t b) {
  return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
}

// Positions of each set's ids relative to the reference order.
std::vector<std::vector<std::size_t>> align(std::span<const ScoredSet> sets) {
  require(!sets.empty(), ErrorKind::kData, "no score sets given");
  const auto& ref = sets[0];
  std::map<std::string, std::size_t> ref_index;
  for (std::size_t i = 0; i < ref.ids.size(); ++i) {
    require(ref_index.emplace(ref.ids[i], i).second, ErrorKind::kData,
            "duplicate id " + ref.ids[i] + " in score set " + ref.modality);
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : sets) {
    s.check();
    require(s.size() == ref.size(), ErrorKind::kData,
            "score sets " + ref.modality + " and " + s.modality + " cover different participants");
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < s.ids.size(); ++i) idx.emplace(s.ids[i], i);
    std::vector<std::size_t> pos(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto it = idx.find(ref.ids[i]);
      require(it != idx.end(), ErrorKind::kData,
              "id " + ref.ids[i] + " missing from score set " + s.modality);
      require(s.labels[it->second] == ref.labels[i], ErrorKind::kData,
              "label of " + ref.ids[i] + " differs between score sets");
      pos[i] = it->second;
    }
    out.push_back(std::move(pos));
  }
  return out;
}

}  // namespace

void ScoredSet::check() const {
  require(ids.size() == scores.size() && labels.size() == scores.size(), ErrorKind::kData,
          "score set " + modality + ": ids, scores and labels differ in length");
  check_inputs(scores, labels);
  for (double s : scores) {
    require(s >= 0.0 && s <= 1.0, ErrorKind::kData, "score set " + modality + ": score outside [0, 1]");
  }
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  require(!pos.empty() && !neg.empty(), ErrorKind::kData,
          "ROC needs both classes (" + std::to_string(pos.size()) + " positive, " +
              std::to_string(neg.size()) + " negative)");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto at = [&](double t) {
    // Count of scores >= t.
    const auto p = static_cast<std::size_t>(pos.end() - std::lower_bound(pos.begin(), pos.end(), t));
    const auto n = static_cast<std::size_t>(neg.end() - std::lower_bound(neg.begin(), neg.end(), t));
    return RocPoint{t, ratio(p, pos.size()), 1.0 - ratio(n, neg.size())};
  };
  std::vector<RocPoint> roc;
  roc.reserve(kSweepSteps + 2);
  for (int k = 0; k <= kSweepSteps; ++k) roc.push_back(at(threshold_at(k)));
  roc.push_back(at(kTerminalThreshold));
  return roc;
}

std::vector<RocPoint> roc_curve(const ScoredSet& set) {
  set.check();
  return roc_curve(set.scores, set.labels);
}

double auc(std::span<const RocPoint> roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    const double x0 = 1.0 - roc[i - 1].specificity, x1 = 1.0 - roc[i].specificity;
    area += (x0 - x1) * 0.5 * (roc[i - 1].sensitivity + roc[i].sensitivity);
  }
  return area;
}

double auc(const ScoredSet& set) { return auc(roc_curve(set)); }

double rank_auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t npos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += mid_rank;
        ++npos;
      }
    }
    i = j;
  }
  const std::size_t nneg = scores.size() - npos;
  require(npos > 0 && nneg > 0, ErrorKind::kData, "AUC needs both classes");
  const double np = static_cast<double>(npos), nn = static_cast<double>(nneg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

ConfusionMatrix confusion_at(std::span<const double> scores, std::span<const int> labels,
                             double threshold) {
  check_inputs(scores, labels);
  ConfusionMatrix c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) (predicted ? c.tp : c.fn) += 1;
    else (predicted ? c.fp : c.tn) += 1;
  }
  return c;
}

OperatingPoint metrics_at(std::span<const double> scores, std::span<const int> labels,
                          double threshold) {
  OperatingPoint op;
  op.threshold = threshold;
  op.confusion = confusion_at(scores, labels, threshold);
  const auto& c = op.confusion;
  op.sensitivity = ratio(c.tp, c.tp + c.fn);
  op.specificity = ratio(c.tn, c.tn + c.fp);
  op.ppv = ratio(c.tp, c.tp + c.fp);
  op.npv = ratio(c.tn, c.tn + c.fn);
  op.accuracy = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn);
  op.weighted_accuracy = 0.5 * (op.sensitivity + op.specificity);
  return op;
}

OperatingPoint operating_point(const ScoredSet& set, double target) {
  const auto roc = roc_curve(set);
  for (int k = 0; k <= kSweepSteps; ++k) {
    if (roc[static_cast<std::size_t>(k)].specificity >= target) {
      return metrics_at(set.scores, set.labels, roc[static_cast<std::size_t>(k)].threshold);
    }
  }
  auto op = metrics_at(set.scores, set.labels, 1.0);
  op.target_reached = false;
  return op;
}

EvalReport evaluate(const ScoredSet& set, double target) {
  EvalReport r;
  r.roc = roc_curve(set);
  r.auc = auc(r.roc);
  r.operating = operating_point(set, target);
  return r;
}

ScoredSet fuse(std::span<const ScoredSet> members) {
  const auto pos = align(members);
  const auto& ref = members[0];
  ScoredSet out;
  out.ids = ref.ids;
  out.labels = ref.labels;
  const auto n = static_cast<double>(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    out.modality += (m > 0 ? "+" : "") + members[m].modality;
  }
  out.scores.resize(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    // Offsets from the first member keep the mean of identical inputs exact.
    double acc = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      acc += members[m].scores[pos[m][i]] - ref.scores[i];
    }
    out.scores[i] = std::clamp(ref.scores[i] + acc / n, 0.0, 1.0);
  }
  return out;
}

std::vector<std::vector<double>> score_cross_correlation(std::span<const ScoredSet> sets) {
  const auto pos = align(sets);
  const std::size_t k = sets.size(), n = sets[0].size();
  std::vector<std::vector<double>> centered(k, std::vector<double>(n));
  std::vector<double> norm(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += sets[a].scores[pos[a][i]];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      centered[a][i] = sets[a].scores[pos[a][i]] - mean;
      norm[a] += centered[a][i] * centered[a][i];
    }
    norm[a] = std::sqrt(norm[a]);
  }
  std::vector<std::vector<double>> r(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    r[a][a] = 1.0;
    for (std::size_t b = 0; b < a; ++b) {
      double v = 0.0;
      if (norm[a] > 0 && norm[b] > 0) {
        for (std::size_t i = 0; i < n; ++i) v += centered[a][i] * centered[b][i];
        v = std::clamp(v / (norm[a] * norm[b]), -1.0, 1.0);
      }
      r[a][b] = r[b][a] = v;
    }
  }
  return r;
}

std::size_t histogram_bin(double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorKind::kData, "score outside [0, 1]");
  auto b = static_cast<std::size_t>(std::floor(p * static_cast<double>(kHistogramBins)));
  // Correct for rounding in p * 20 so that bin b covers [b/20, (b+1)/20).
  const auto edge = [](std::size_t k) {
    return static_cast<double>(k) / static_cast<double>(kHistogramBins);
  };
  if (b > 0 && p < edge(b)) --b;
  else if (p >= edge(b + 1)) ++b;
  return std::min(b, kHistogramBins - 1);
}

Histogram score_histogram(std::span<const double> scores, std::string subset, std::string modality) {
  Histogram h;
  h.subset = std::move(subset);
  h.modality = std::move(modality);
  h.counts.assign(kHistogramBins, 0);
  h.total = scores.size();
  h.empty = scores.empty();
  for (double p : scores) ++h.counts[histogram_bin(p)];
  return h;
}

// ------------------------------------------------------------------ text I/O

namespace {
void append_comment(std::string& out, std::string_view comment) {
  if (comment.empty()) return;
  std::istringstream lines{std::string(comment)};
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
}
}  // namespace

std::string scored_set_to_csv(const ScoredSet& set, std::string_view comment) {
  set.check();
  std::string out = "# modality=" + set.modality + "\n";
  append_comment(out, comment);
  out += "id,label,score\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += csv_field(set.ids[i]) + "," + std::to_string(set.labels[i]) + "," + format_double(set.scores[i]) + "\n";
  }
  return out;
}

ScoredSet scored_set_from_csv(std::string_view text) {
  ScoredSet set;
  std::istringstream in{std::string(text)};
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto t = trim(std::string_view(line).substr(1));
      if (t.starts_with("modality=")) set.modality = t.substr(9);
      continue;
    }
    const auto f = split_fields(line);
    if (!header) {
      require(f.size() == 3 && f[0] == "id" && f[1] == "label" && f[2] == "score",
              ErrorKind::kFormat, "score file header must be id,label,score");
      header = true;
      continue;
    }
    require(f.size() == 3, ErrorKind::kData, "score file: expected 3 fields in '" + line + "'");
    set.ids.push_back(f[0]);
    require(f[1] == "0" || f[1] == "1", ErrorKind::kData, "score file: bad label '" + f[1] + "'");
    set.labels.push_back(f[1] == "1" ? 1 : 0);
    set.scores.push_back(parse_double(f[2]));
  }
  require(header, ErrorKind::kFormat, "score file has no header");
  set.check();
  return set;
}

std::string roc_to_csv(std::span<const RocPoint> roc, std::string_view comment) {
  std::string out;
  append_comment(out, comment);
  out += "threshold,sensitivity,specificity\n";
  for (const auto& p : roc) {
    out += format_double(p.threshold) + "," + format_double(p.sensitivity) + "," +
           format_double(p.specificity) + "\n";
  }
  return out;
}

}  // namespace respscreen::eval
