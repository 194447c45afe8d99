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
#include <vector>

namespace respscreen::pitch {

struct Candidate {
  double f0 = 0.0;
  double strength = 0.0;  // normalized to the frame's best candidate, (0, 1]
};

struct ShsConfig {
  double f0_min = 55.0;
  double f0_max = 500.0;
  std::size_t harmonics = 15;
  double compression = 0.85;   // weight of harmonic h is compression^(h-1)
  double max_freq = 5000.0;    // harmonics above this are ignored
  std::size_t steps_per_octave = 120;
  std::size_t max_candidates = 6;
};

/// Subharmonic summation over a magnitude spectrum. Only bins near local
/// spectral peaks contribute (peak enhancement); the sum is evaluated on a
/// log-frequency grid and its local maxima become candidates, best first.
std::vector<Candidate> shs_candidates(std::span<const double> magnitude,
                                      double bin_hz, const ShsConfig& config);

/// Normalized autocorrelation r(lag)/r(0) corrected for the analysis window
/// (divide by the window's own normalized autocorrelation).
struct AutocorrPeak {
  double lag = 0.0;   // fractional, parabolic refinement
  double value = 0.0; // clamped to [0, 1]
};

class Autocorrelator {
 public:
  Autocorrelator(std::span<const double> window, std::size_t min_lag, std::size_t max_lag);
  ~Autocorrelator();
  Autocorrelator(const Autocorrelator&) = delete;
  Autocorrelator& operator=(const Autocorrelator&) = delete;

  /// `frame` must already be windowed and have the window's length.
  AutocorrPeak best_peak(std::span<const double> frame);
  /// Normalized value at a (fractional) lag; valid after best_peak().
  double value_at(double lag) const;

 private:
  struct Impl;
  Impl* impl_;
};

struct ViterbiConfig {
  double octave_jump_cost = 0.5;  // per octave of |log2 f - log2 f'|
  double voicing_switch_cost = 0.2;
  double candidate_weight = 0.5;
};

/// Picks one state per frame among {candidates..., unvoiced}. Local costs:
/// voiced = (1 - v) + w (1 - strength); unvoiced = v, where v is the frame's
/// voicing probability. Returns F0 per frame, 0 for unvoiced.
std::vector<double> viterbi_track(const std::vector<std::vector<Candidate>>& candidates,
                                  std::span<const double> voicing,
                                  const ViterbiConfig& config = {});

struct Perturbation {
  double jitter_local = 0.0;  // mean |T_i - T_{i-1}| / mean T
  double jitter_delta = 0.0;  // mean |(T_{i+1}-T_i) - (T_i-T_{i-1})| / mean T
  double shimmer_local = 0.0; // mean |A_i - A_{i-1}| / mean A
  std::size_t periods = 0;
};

/// Cycle-to-cycle perturbation from successive waveform maxima spaced about
/// `period` samples apart (parabolic sub-sample refinement).
Perturbation period_perturbation(std::span<const double> samples, double period);

}  // namespace respscreen::pitch
