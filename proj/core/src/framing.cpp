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
#include <numbers>

#include "respscreen/error.hpp"
#include "respscreen/lld.hpp"

namespace respscreen {

namespace {
std::size_t ms_to_samples(double ms, double rate) {
  return static_cast<std::size_t>(std::floor(ms * rate / 1000.0 + 0.5));
}
}  // namespace

std::size_t FrameConfig::window_samples(double rate) const { return ms_to_samples(window_ms, rate); }
std::size_t FrameConfig::hop_samples(double rate) const { return ms_to_samples(hop_ms, rate); }
std::size_t FrameConfig::pitch_window_samples(double rate) const {
  return ms_to_samples(pitch_window_ms, rate);
}

void FrameConfig::validate(double rate) const {
  require(window_ms > 0 && hop_ms > 0 && pitch_window_ms > 0 && fft_size > 0, ErrorKind::kConfig,
          "frame config: lengths must be positive");
  require(hop_ms <= window_ms, ErrorKind::kConfig, "frame config: hop exceeds window");
  require(hop_samples(rate) >= 1, ErrorKind::kConfig, "frame config: hop below one sample");
  require(fft_size >= window_samples(rate), ErrorKind::kConfig,
          "frame config: FFT size smaller than the window");
  require(f0_min_hz > 0 && f0_max_hz > f0_min_hz, ErrorKind::kConfig,
          "frame config: invalid F0 search range");
}

std::vector<double> make_window(WindowFunction fn, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (fn == WindowFunction::kRectangular || length < 2) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    w[n] = fn == WindowFunction::kHamming ? 0.54 - 0.46 * c : 0.5 - 0.5 * c;
  }
  return w;
}

FrameSet frame_signal(const AudioSegment& segment, std::size_t window_length, std::size_t hop,
                      WindowFunction window) {
  require(window_length > 0 && hop > 0, ErrorKind::kConfig, "framing: zero window or hop");
  const auto& x = segment.samples;
  require(x.size() >= window_length, ErrorKind::kData,
          "segment shorter than one analysis window (" + std::to_string(x.size()) + " < " +
              std::to_string(window_length) + " samples)");
  FrameSet fs;
  fs.length = window_length;
  fs.hop = hop;
  fs.sample_rate = segment.sample_rate;
  fs.full_count = (x.size() - window_length) / hop + 1;
  const bool partial = (fs.full_count - 1) * hop + window_length < x.size();
  fs.count = fs.full_count + (partial ? 1 : 0);

  const auto w = make_window(window, window_length);
  fs.data.assign(fs.count * window_length, 0.0);
  for (std::size_t m = 0; m < fs.count; ++m) {
    const std::size_t start = m * hop;
    const std::size_t avail = std::min(window_length, x.size() - start);
    double* dst = fs.data.data() + m * window_length;
    for (std::size_t i = 0; i < avail; ++i) dst[i] = x[start + i] * w[i];
  }
  return fs;
}

FrameSet frame_signal(const AudioSegment& segment, const FrameConfig& config) {
  config.validate(segment.sample_rate);
  return frame_signal(segment, config.window_samples(segment.sample_rate),
                      config.hop_samples(segment.sample_rate), config.window);
}

std::vector<double> delta(std::span<const double> c, std::size_t width) {
  const std::size_t n = c.size();
  std::vector<double> d(n, 0.0);
  if (n == 0 || width == 0) return d;
  double norm = 0.0;
  for (std::size_t k = 1; k <= width; ++k) norm += static_cast<double>(k * k);
  norm *= 2.0;
  auto at = [&](long i) {
    i = std::clamp(i, 0L, static_cast<long>(n) - 1);
    return c[static_cast<std::size_t>(i)];
  };
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= width; ++k) {
      const long ti = static_cast<long>(t);
      const long kk = static_cast<long>(k);
      acc += static_cast<double>(k) * (at(ti + kk) - at(ti - kk));
    }
    d[t] = acc / norm;
  }
  return d;
}

// ------------------------------------------------------------ descriptor map

std::string_view lld_group_name(LldGroup g) {
  switch (g) {
    case LldGroup::kRmsZcr: return "RMS Energy, Zero-Crossing Rate";
    case LldGroup::kModulationSum: return "Sum of modulation filtered auditory spectrum";
    case LldGroup::kLoudness: return "Sum of auditory spectrum (loudness)";
    case LldGroup::kRastaBands: return "Modulation filtered auditory spectrogram (0-8 kHz)";
    case LldGroup::kMfcc: return "Mel frequency cepstral coefficients (MFCC)";
    case LldGroup::kFluxCentroidEntropySlope: return "Spectral Flux, Centroid, Entropy, Slope";
    case LldGroup::kSharpnessHarmonicity: return "Psychoacoustic Sharpness, Harmonicity";
    case LldGroup::kRolloff: return "Spectral Roll-Off Pt. 0.25, 0.5, 0.75, 0.9";
    case LldGroup::kSpectralMoments: return "Spectral Variance, Skewness, Kurtosis";
    case LldGroup::kBandEnergy: return "Spectral energy in bands 250-650 Hz, 1-4 kHz";
    case LldGroup::kF0: return "F0 (SHS & Viterbi smoothing)";
    case LldGroup::kHnrJitterShimmer: return "Log. HNR, Jitter (local, delta), Shimmer (local)";
    case LldGroup::kVoicingProbability: return "Probability of voicing";
  }
  return "unknown";
}

LldFamily lld_family(LldGroup g) {
  switch (g) {
    case LldGroup::kRmsZcr:
    case LldGroup::kModulationSum:
    case LldGroup::kLoudness:
      return LldFamily::kEnergy;
    case LldGroup::kF0:
    case LldGroup::kHnrJitterShimmer:
    case LldGroup::kVoicingProbability:
      return LldFamily::kVoicing;
    default:
      return LldFamily::kSpectral;
  }
}

const std::vector<LldDescriptor>& lld_descriptors() {
  static const std::vector<LldDescriptor> table = [] {
    std::vector<LldDescriptor> base;
    base.push_back({"rms_energy", LldGroup::kRmsZcr});
    base.push_back({"zcr", LldGroup::kRmsZcr});
    base.push_back({"loudness", LldGroup::kLoudness});
    base.push_back({"modulation_sum", LldGroup::kModulationSum});
    for (std::size_t b = 0; b < kRastaBandCount; ++b) {
      base.push_back({"rasta_band" + std::to_string(b), LldGroup::kRastaBands});
    }
    for (std::size_t i = 1; i <= kMfccCount; ++i) {
      base.push_back({"mfcc" + std::to_string(i), LldGroup::kMfcc});
    }
    for (const char* n : {"spectral_flux", "spectral_centroid", "spectral_entropy",
                          "spectral_slope"}) {
      base.push_back({n, LldGroup::kFluxCentroidEntropySlope});
    }
    base.push_back({"sharpness", LldGroup::kSharpnessHarmonicity});
    base.push_back({"harmonicity", LldGroup::kSharpnessHarmonicity});
    for (const char* n : {"rolloff25", "rolloff50", "rolloff75", "rolloff90"}) {
      base.push_back({n, LldGroup::kRolloff});
    }
    for (const char* n : {"spectral_variance", "spectral_skewness", "spectral_kurtosis"}) {
      base.push_back({n, LldGroup::kSpectralMoments});
    }
    base.push_back({"band_energy_250_650", LldGroup::kBandEnergy});
    base.push_back({"band_energy_1k_4k", LldGroup::kBandEnergy});
    base.push_back({"f0", LldGroup::kF0});
    base.push_back({"voicing_prob", LldGroup::kVoicingProbability});
    base.push_back({"log_hnr", LldGroup::kHnrJitterShimmer});
    base.push_back({"jitter_local", LldGroup::kHnrJitterShimmer});
    base.push_back({"jitter_delta", LldGroup::kHnrJitterShimmer});
    base.push_back({"shimmer_local", LldGroup::kHnrJitterShimmer});

    std::vector<LldDescriptor> all = base;
    for (const auto& d : base) all.push_back({d.name + "_de", d.group, true});
    return all;
  }();
  return table;
}

std::vector<double> LLDMatrix::column(std::size_t c) const {
  std::vector<double> out(frames);
  for (std::size_t t = 0; t < frames; ++t) out[t] = values[t * columns + c];
  return out;
}

}  // namespace respscreen
