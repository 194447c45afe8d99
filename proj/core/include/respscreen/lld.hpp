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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "respscreen/audio.hpp"

namespace respscreen {

enum class WindowFunction { kRectangular, kHamming, kHann };

std::vector<double> make_window(WindowFunction fn, std::size_t length);

struct FrameConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  WindowFunction window = WindowFunction::kHamming;
  std::size_t fft_size = 2048;
  double pitch_window_ms = 60.0;
  double f0_min_hz = 55.0;
  double f0_max_hz = 500.0;

  /// Sample counts use round-half-up of ms * rate / 1000.
  std::size_t window_samples(double rate) const;
  std::size_t hop_samples(double rate) const;
  std::size_t pitch_window_samples(double rate) const;
  void validate(double rate) const;
};

/// Frames of one signal, stored row-major (count x length). Frame m starts at
/// m * hop. `full_count` frames lie entirely inside the signal; one extra
/// zero-padded frame follows when the last full frame stops short of the end.
struct FrameSet {
  std::vector<double> data;
  std::size_t length = 0;
  std::size_t hop = 0;
  std::size_t count = 0;
  std::size_t full_count = 0;
  double sample_rate = 0.0;

  std::span<const double> frame(std::size_t m) const {
    return {data.data() + m * length, length};
  }
  /// Centre of frame m in seconds.
  double time(std::size_t m) const {
    return (static_cast<double>(m * hop) + 0.5 * static_cast<double>(length)) /
           sample_rate;
  }
};

FrameSet frame_signal(const AudioSegment& segment, std::size_t window_length,
                      std::size_t hop, WindowFunction window);
FrameSet frame_signal(const AudioSegment& segment, const FrameConfig& config);

// ------------------------------------------------------------ descriptor map

/// Rows of the low-level descriptor table; ablation masks are built on these.
enum class LldGroup {
  kRmsZcr,
  kModulationSum,
  kLoudness,
  kRastaBands,
  kMfcc,
  kFluxCentroidEntropySlope,
  kSharpnessHarmonicity,
  kRolloff,
  kSpectralMoments,
  kBandEnergy,
  kF0,
  kHnrJitterShimmer,
  kVoicingProbability,
};

inline constexpr std::size_t kLldGroupCount = 13;

std::string_view lld_group_name(LldGroup g);

enum class LldFamily { kEnergy, kSpectral, kVoicing };
LldFamily lld_family(LldGroup g);

inline constexpr std::size_t kRastaBandCount = 26;
inline constexpr std::size_t kMfccCount = 14;
inline constexpr std::size_t kEnergyLldCount = 4;
inline constexpr std::size_t kSpectralLldCount = 55;
inline constexpr std::size_t kVoicingLldCount = 6;
inline constexpr std::size_t kBaseLldCount =
    kEnergyLldCount + kSpectralLldCount + kVoicingLldCount;  // 65
inline constexpr std::size_t kLldCount = 2 * kBaseLldCount;  // with deltas

struct LldDescriptor {
  std::string name;
  LldGroup group;
  bool is_delta = false;
};

/// Column layout of LLDMatrix: 65 base descriptors (energy, spectral,
/// voicing) followed by their deltas in the same order.
const std::vector<LldDescriptor>& lld_descriptors();

// Base column indices of a few descriptors that other code addresses directly.
namespace lld_column {
inline constexpr std::size_t kRms = 0;
inline constexpr std::size_t kZcr = 1;
inline constexpr std::size_t kLoudness = 2;
inline constexpr std::size_t kModulationSum = 3;
inline constexpr std::size_t kRastaFirst = 4;
inline constexpr std::size_t kMfccFirst = kRastaFirst + kRastaBandCount;  // 30
inline constexpr std::size_t kFlux = kMfccFirst + kMfccCount;             // 44
inline constexpr std::size_t kCentroid = kFlux + 1;
inline constexpr std::size_t kEntropy = kFlux + 2;
inline constexpr std::size_t kSlope = kFlux + 3;
inline constexpr std::size_t kSharpness = kFlux + 4;
inline constexpr std::size_t kHarmonicity = kFlux + 5;
inline constexpr std::size_t kRolloff25 = kFlux + 6;
inline constexpr std::size_t kRolloff50 = kFlux + 7;
inline constexpr std::size_t kRolloff75 = kFlux + 8;
inline constexpr std::size_t kRolloff90 = kFlux + 9;
inline constexpr std::size_t kSpectralVariance = kFlux + 10;
inline constexpr std::size_t kSpectralSkewness = kFlux + 11;
inline constexpr std::size_t kSpectralKurtosis = kFlux + 12;
inline constexpr std::size_t kBand250_650 = kFlux + 13;
inline constexpr std::size_t kBand1k_4k = kFlux + 14;                     // 58
inline constexpr std::size_t kF0 = 59;
inline constexpr std::size_t kVoicingProb = 60;
inline constexpr std::size_t kLogHnr = 61;
inline constexpr std::size_t kJitterLocal = 62;
inline constexpr std::size_t kJitterDelta = 63;
inline constexpr std::size_t kShimmerLocal = 64;
}  // namespace lld_column

/// frames x columns, row-major.
struct LLDMatrix {
  std::vector<double> values;
  std::size_t frames = 0;
  std::size_t full_frames = 0;  // frames not reaching into the zero-padded tail
  std::size_t columns = 0;
  std::vector<std::string> names;
  std::vector<double> frame_times;

  double at(std::size_t frame, std::size_t column) const {
    return values[frame * columns + column];
  }
  std::vector<double> column(std::size_t c) const;
};

// --------------------------------------------------------------- extractors

/// Per-frame columns in lld_column order (energy: 4, spectral: 55,
/// voicing: 6). Each is frames x n, row-major.
struct EnergyLlds {
  std::vector<double> values;  // frames x 4
};
struct SpectralLlds {
  std::vector<double> values;  // frames x 55
  std::vector<double> loudness;         // per frame, sum of auditory spectrum
  std::vector<double> modulation_sum;   // per frame, sum of modulation-filtered bands
};
struct VoicingLlds {
  std::vector<double> values;  // frames x 6
};

/// Power floor for every spectral quantity; keeps silent frames finite.
inline constexpr double kPowerFloor = 1e-10;

double frame_rms(std::span<const double> frame);
/// Sign changes per sample; a sample >= 0 counts as positive.
double frame_zcr(std::span<const double> frame);

/// `raw` must be rectangular frames, `windowed` the analysis-window frames of
/// the same framing.
SpectralLlds compute_spectral_llds(const FrameSet& windowed, const FrameConfig& config);
EnergyLlds compute_energy_llds(const FrameSet& raw, const SpectralLlds& spectral);

/// Pitch frames share the hop of the spectral framing and are centred on the
/// same instants, so frame m of the result aligns with spectral frame m.
VoicingLlds compute_voicing_llds(const AudioSegment& segment, const FrameConfig& config,
                                 std::size_t frame_count, std::size_t spectral_window);

/// Regression delta over +/- `width` frames with edge replication.
std::vector<double> delta(std::span<const double> contour, std::size_t width = 2);

LLDMatrix extract_lld_matrix(const AudioSegment& segment, const FrameConfig& config = {});

/// Delimiter-separated dump: header = "time" + descriptor names.
std::string lld_matrix_to_csv(const LLDMatrix& m);

}  // namespace respscreen
