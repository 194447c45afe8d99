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

#include <cmath>

#include "respscreen/audio.hpp"
#include "respscreen/error.hpp"

namespace respscreen {

AudioSegment normalize_amplitude(const AudioSegment& segment) {
  const double peak = segment.peak();
  require(peak > 0.0, ErrorKind::kCompute, "degenerate signal: all samples are zero");
  AudioSegment out = segment;
  // Division (not multiplication by 1/peak) so the peak sample lands on 1 exactly.
  for (double& s : out.samples) s /= peak;
  return out;
}

AudioSegment quantize_analysis(const AudioSegment& segment) {
  AudioSegment out = segment;
  for (double& s : out.samples) s = std::nearbyint(s * kAnalysisScale) / kAnalysisScale;
  return out;
}

AudioSegment trim_silence(const AudioSegment& segment, double threshold, double guard_s) {
  const auto& x = segment.samples;
  std::size_t first = x.size(), last = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) >= threshold) {
      if (first == x.size()) first = i;
      last = i;
    }
  }
  require(first != x.size(), ErrorKind::kCompute,
          "all-silence signal: no sample reaches the trim threshold");
  const auto guard = static_cast<std::size_t>(std::llround(guard_s * segment.sample_rate));
  const std::size_t begin = first > guard ? first - guard : 0;
  const std::size_t end = std::min(x.size(), last + guard + 1);
  AudioSegment out;
  out.sample_rate = segment.sample_rate;
  out.samples.assign(x.begin() + static_cast<long>(begin), x.begin() + static_cast<long>(end));
  return out;
}

std::string_view reject_reason_name(RejectReason r) {
  return r == RejectReason::kTooShort ? "too_short" : "too_quiet";
}

std::optional<RejectReason> validate(const AudioSegment& segment, double min_duration_s,
                                     double min_peak) {
  if (segment.samples.empty() || segment.duration() < min_duration_s) {
    return RejectReason::kTooShort;
  }
  if (segment.peak() < min_peak) return RejectReason::kTooQuiet;
  return std::nullopt;
}

PreprocessResult preprocess(const AudioSegment& loaded, const PreprocessConfig& config) {
  AudioSegment seg = resample(loaded, config.target_rate, config.resampler);
  seg = normalize_amplitude(seg);
  seg = trim_silence(seg, config.silence_threshold, config.guard_s);
  PreprocessResult r;
  r.rejection = validate(seg, config.min_duration_s, config.min_peak);
  r.segment = std::move(seg);
  return r;
}

}  // namespace respscreen
