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
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace respscreen {

/// Mono sample buffer. Amplitudes are doubles in [-1, 1] once loaded.
struct AudioSegment {
  std::vector<double> samples;
  double sample_rate = 0.0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  double peak() const;
};

// ---------------------------------------------------------------- wave I/O

/// Reads a RIFF/WAVE file: PCM 8/16/24/32-bit integer or IEEE float 32/64,
/// any channel count (channels are averaged). WAVE_FORMAT_EXTENSIBLE is
/// accepted when its sub-format is PCM or float.
AudioSegment load_wav(const std::filesystem::path& path);
AudioSegment decode_wav(std::string_view bytes);

enum class WavEncoding { kPcm16, kFloat32 };

void save_wav(const std::filesystem::path& path, const AudioSegment& segment,
              WavEncoding encoding = WavEncoding::kFloat32);
std::vector<char> encode_wav(const AudioSegment& segment, WavEncoding encoding);

// -------------------------------------------------------------- resampling

struct ResamplerConfig {
  double passband = 0.90;         // fraction of the lower Nyquist kept flat
  double stopband_atten_db = 90;  // Kaiser design target
  std::size_t max_phases = 4096;  // above this, coefficients are computed per output
};

/// Band-limited rational resampler: Kaiser-windowed sinc prototype split into
/// L polyphase branches for a conversion ratio L/M. Output length is
/// round(n * target / source).
AudioSegment resample(const AudioSegment& segment, double target_rate,
                      const ResamplerConfig& config = {});

// ----------------------------------------------------- amplitude & trimming

/// Divides by the peak magnitude so that max |x| == 1 exactly.
AudioSegment normalize_amplitude(const AudioSegment& segment);

/// Feature analysis runs on samples rounded to a 2^-24 grid. Two inputs that
/// differ only by a gain normalize to values a few ulps apart; the rounding
/// maps them to the same samples, so features are exactly gain invariant.
inline constexpr double kAnalysisScale = 16777216.0;
AudioSegment quantize_analysis(const AudioSegment& segment);

/// Keeps [first - guard, last + guard] where first/last are the outermost
/// samples with |x| >= threshold.
AudioSegment trim_silence(const AudioSegment& segment, double threshold = 1e-4,
                          double guard_s = 0.050);

enum class RejectReason { kTooShort, kTooQuiet };

std::string_view reject_reason_name(RejectReason r);

std::optional<RejectReason> validate(const AudioSegment& segment,
                                     double min_duration_s = 0.100,
                                     double min_peak = 1e-4);

struct PreprocessConfig {
  double target_rate = 44100.0;
  double silence_threshold = 1e-4;
  double guard_s = 0.050;
  double min_duration_s = 0.100;
  double min_peak = 1e-4;
  ResamplerConfig resampler;
};

struct PreprocessResult {
  AudioSegment segment;
  std::optional<RejectReason> rejection;
};

/// resample -> normalize -> trim -> validate, in that order. The intake peak
/// screen of filter_participants runs on the loaded signal, before this.
PreprocessResult preprocess(const AudioSegment& loaded,
                            const PreprocessConfig& config = {});

}  // namespace respscreen
