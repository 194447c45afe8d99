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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "respscreen/error.hpp"
#include "respscreen/features.hpp"
#include "respscreen/functionals.hpp"

namespace respscreen {

namespace {

constexpr std::array<const char*, kFunctionalsPerContour> kFunctionalNames = {
    // percentiles
    "quartile1", "quartile2", "quartile3", "iqr1_2", "iqr2_3", "iqr1_3", "percentile1",
    "percentile99", "pctlrange1_99",
    // temporal
    "argmin_pos", "argmax_pos", "range", "centroid", "flatness", "above25", "above50", "above75",
    "above90", "rising", "pos_curvature", "seglen_mean", "seglen_max", "seglen_min", "seglen_std",
    "nonzero",
    // peaks
    "peak_mean", "peak_mean_minus_mean", "peak_dist_mean", "peak_dist_std", "peak_amp_mean",
    "minima_amp_mean", "peak_amp_range", "rise_slope_mean", "rise_slope_std", "fall_slope_mean",
    "fall_slope_std",
    // moments
    "mean", "rqmean", "stddev", "skewness", "kurtosis",
    // regression
    "linreg_slope", "linreg_offset", "linreg_err", "quadreg_a", "quadreg_b", "quadreg_offset",
    "quadreg_err",
    // modulation
    "lp_gain", "lpc1", "lpc2", "lpc3", "lpc4", "lpc5"};

constexpr std::array<const char*, kVoicedOnlyFunctionals> kVoicedNames = {
    "quartile1", "quartile2", "quartile3", "iqr1_2", "iqr2_3", "iqr1_3", "percentile1",
    "percentile99", "pctlrange1_99", "mean", "rqmean", "stddev", "skewness", "kurtosis"};

void append_percentiles(const functionals::Percentiles& p, std::vector<double>& out) {
  out.insert(out.end(), {p.q1, p.q2, p.q3, p.iqr12, p.iqr23, p.iqr13, p.p1, p.p99, p.range1_99});
}

void append_moments(const functionals::Moments& m, std::vector<double>& out) {
  out.insert(out.end(), {m.mean, m.rq_mean, m.stddev, m.skewness, m.kurtosis});
}

void append_all(std::span<const double> c, std::vector<double>& out) {
  append_percentiles(functionals::percentiles(c), out);
  const auto t = functionals::temporal(c);
  out.insert(out.end(), {t.argmin_pos, t.argmax_pos, t.range, t.centroid, t.flatness, t.above25,
                         t.above50, t.above75, t.above90, t.rising, t.positive_curvature,
                         t.seg_len_mean, t.seg_len_max, t.seg_len_min, t.seg_len_std, t.nonzero});
  const auto p = functionals::peaks(c);
  out.insert(out.end(), {p.peak_mean, p.peak_mean_minus_mean, p.peak_dist_mean, p.peak_dist_std,
                         p.peak_amp_mean, p.minima_amp_mean, p.peak_amp_range, p.rise_slope_mean,
                         p.rise_slope_std, p.fall_slope_mean, p.fall_slope_std});
  append_moments(functionals::moments(c), out);
  const auto r = functionals::regression(c);
  out.insert(out.end(), {r.lin_slope, r.lin_offset, r.lin_error, r.quad_a, r.quad_b,
                         r.quad_offset, r.quad_error});
  const auto m = functionals::modulation(c);
  out.push_back(m.lp_gain);
  out.insert(out.end(), m.lp.begin(), m.lp.end());
}

}  // namespace

std::vector<std::size_t> FeatureLayout::mask(std::span<const LldGroup> groups) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (std::find(groups.begin(), groups.end(), dims[i].group) != groups.end()) out.push_back(i);
  }
  return out;
}

const FeatureLayout& feature_layout() {
  static const FeatureLayout layout = [] {
    FeatureLayout l;
    const auto& lld = lld_descriptors();
    for (std::size_t c = 0; c < lld.size(); ++c) {
      for (const char* f : kFunctionalNames) {
        l.dims.push_back({lld[c].name + "__" + f, c, lld[c].group, f, false});
      }
    }
    for (std::size_t c = lld_column::kF0; c < kBaseLldCount; ++c) {
      for (const char* f : kVoicedNames) {
        l.dims.push_back({lld[c].name + "__voiced_" + f, c, lld[c].group, f, true});
      }
    }
    l.id = "respscreen-fv1-" + std::to_string(l.dims.size());
    return l;
  }();
  return layout;
}

FeatureVector assemble_feature_vector(const LLDMatrix& lld) {
  require(lld.columns == kLldCount && lld.frames > 0, ErrorKind::kData,
          "feature assembly needs a non-empty " + std::to_string(kLldCount) + "-column LLD matrix");
  const auto& layout = feature_layout();
  FeatureVector fv;
  fv.layout_id = layout.id;
  fv.values.reserve(layout.size());
  for (std::size_t c = 0; c < lld.columns; ++c) append_all(lld.column(c), fv.values);

  std::vector<std::size_t> voiced;
  for (std::size_t t = 0; t < lld.frames; ++t) {
    if (lld.at(t, lld_column::kF0) > 0.0) voiced.push_back(t);
  }
  for (std::size_t c = lld_column::kF0; c < kBaseLldCount; ++c) {
    if (voiced.empty()) {
      fv.values.insert(fv.values.end(), kVoicedOnlyFunctionals, 0.0);
      continue;
    }
    std::vector<double> sub;
    sub.reserve(voiced.size());
    for (std::size_t t : voiced) sub.push_back(lld.at(t, c));
    append_percentiles(functionals::percentiles(sub), fv.values);
    append_moments(functionals::moments(sub), fv.values);
  }

  require(fv.values.size() == layout.size(), ErrorKind::kCompute, "feature layout size mismatch");
  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    if (!std::isfinite(fv.values[i])) {
      fail(ErrorKind::kCompute, "non-finite feature " + layout.dims[i].name);
    }
  }
  return fv;
}

ExtractionOutcome extract_recording(const AudioSegment& loaded, const ExtractionConfig& config) {
  ExtractionOutcome out;
  if (loaded.samples.empty() || loaded.peak() < config.preprocess.min_peak) {
    out.rejection = std::string(reject_reason_name(RejectReason::kTooQuiet));
    return out;
  }
  auto pre = preprocess(loaded, config.preprocess);
  if (pre.rejection) {
    out.rejection = std::string(reject_reason_name(*pre.rejection));
    return out;
  }
  const double rate = pre.segment.sample_rate;
  if (pre.segment.samples.size() < config.frame.window_samples(rate)) {
    out.rejection = std::string(reject_reason_name(RejectReason::kTooShort));
    return out;
  }
  out.features = assemble_feature_vector(
      extract_lld_matrix(quantize_analysis(pre.segment), config.frame));
  return out;
}

}  // namespace respscreen
