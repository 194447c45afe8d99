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
#include <cmath>
#include <vector>

#include "respscreen/error.hpp"
#include "respscreen/fft.hpp"
#include "respscreen/lld.hpp"
#include "respscreen/pitch.hpp"

namespace respscreen {

namespace {

// SHS alone can favour a multiple of F0 when energy sits in high harmonics.
// Candidates are rescored by the autocorrelation at their period so that
// salience = SHS strength x periodicity, normalized to best = 1.
std::vector<pitch::Candidate> rescore(std::vector<pitch::Candidate> cands,
                                      const pitch::Autocorrelator& acf, double rate) {
  double best = 0.0;
  for (auto& c : cands) {
    c.strength *= acf.value_at(rate / c.f0);
    best = std::max(best, c.strength);
  }
  std::vector<pitch::Candidate> out;
  for (const auto& c : cands) {
    if (best > 0.0 && c.strength > 0.0) out.push_back({c.f0, c.strength / best});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.strength > b.strength; });
  return out;
}

}  // namespace

VoicingLlds compute_voicing_llds(const AudioSegment& segment, const FrameConfig& config,
                                 std::size_t frame_count, std::size_t spectral_window) {
  const double rate = segment.sample_rate;
  const std::size_t hop = config.hop_samples(rate);
  const std::size_t W = config.pitch_window_samples(rate);
  const auto min_lag = static_cast<std::size_t>(std::floor(rate / config.f0_max_hz));
  const auto max_lag = static_cast<std::size_t>(std::ceil(rate / config.f0_min_hz));
  require(max_lag + 2 < W, ErrorKind::kConfig,
          "pitch window too short for the lowest F0 of the search range");

  const auto window = make_window(WindowFunction::kHann, W);
  pitch::Autocorrelator acf(window, std::max<std::size_t>(min_lag, 1), max_lag);
  RealFft fft(next_pow2(2 * W));
  const double bin_hz = rate / static_cast<double>(fft.size());
  pitch::ShsConfig shs;
  shs.f0_min = config.f0_min_hz;
  shs.f0_max = config.f0_max_hz;
  shs.max_freq = std::min(shs.max_freq, 0.5 * rate);

  const auto& x = segment.samples;
  const auto n = static_cast<long>(x.size());
  std::vector<double> raw(W), windowed(W), voicing(frame_count), magnitude;
  std::vector<std::vector<pitch::Candidate>> candidates(frame_count);
  std::vector<std::vector<double>> raw_frames(frame_count);

  for (std::size_t m = 0; m < frame_count; ++m) {
    // Centre the pitch frame on the centre of spectral frame m.
    const long centre = static_cast<long>(m * hop) + static_cast<long>(spectral_window / 2);
    const long start = centre - static_cast<long>(W / 2);
    for (std::size_t i = 0; i < W; ++i) {
      const long j = start + static_cast<long>(i);
      raw[i] = (j >= 0 && j < n) ? x[static_cast<std::size_t>(j)] : 0.0;
      windowed[i] = raw[i] * window[i];
    }
    voicing[m] = acf.best_peak(windowed).value;
    fft.power_spectrum(windowed, magnitude);
    for (double& v : magnitude) v = std::sqrt(v);
    candidates[m] = rescore(pitch::shs_candidates(magnitude, bin_hz, shs), acf, rate);
    raw_frames[m] = raw;
  }

  const auto f0 = pitch::viterbi_track(candidates, voicing);

  VoicingLlds out;
  out.values.assign(frame_count * kVoicingLldCount, 0.0);
  for (std::size_t m = 0; m < frame_count; ++m) {
    double* row = out.values.data() + m * kVoicingLldCount;
    const double r = std::clamp(voicing[m], 1e-4, 1.0 - 1e-4);
    row[0] = f0[m];
    row[1] = voicing[m];
    row[2] = 10.0 * std::log10(r / (1.0 - r));
    if (f0[m] > 0.0) {
      const auto p = pitch::period_perturbation(raw_frames[m], rate / f0[m]);
      row[3] = p.jitter_local;
      row[4] = p.jitter_delta;
      row[5] = p.shimmer_local;
    }
  }
  return out;
}

}  // namespace respscreen
