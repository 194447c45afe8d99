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
#include <string>

#include "respscreen/error.hpp"
#include "respscreen/lld.hpp"
#include "respscreen/text.hpp"

namespace respscreen {

LLDMatrix extract_lld_matrix(const AudioSegment& segment, const FrameConfig& config) {
  config.validate(segment.sample_rate);
  const auto windowed = frame_signal(segment, config);
  const auto raw = frame_signal(segment, windowed.length, windowed.hop, WindowFunction::kRectangular);
  const auto spectral = compute_spectral_llds(windowed, config);
  const auto energy = compute_energy_llds(raw, spectral);
  const auto voicing = compute_voicing_llds(segment, config, windowed.count, windowed.length);

  const std::size_t T = windowed.count;
  LLDMatrix m;
  m.frames = T;
  m.full_frames = windowed.full_count;
  m.columns = kLldCount;
  for (const auto& d : lld_descriptors()) m.names.push_back(d.name);
  m.frame_times.resize(T);
  for (std::size_t t = 0; t < T; ++t) m.frame_times[t] = windowed.time(t);
  m.values.assign(T * kLldCount, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double* row = m.values.data() + t * kLldCount;
    for (std::size_t c = 0; c < kEnergyLldCount; ++c) row[c] = energy.values[t * kEnergyLldCount + c];
    for (std::size_t c = 0; c < kSpectralLldCount; ++c) {
      row[kEnergyLldCount + c] = spectral.values[t * kSpectralLldCount + c];
    }
    for (std::size_t c = 0; c < kVoicingLldCount; ++c) {
      row[lld_column::kF0 + c] = voicing.values[t * kVoicingLldCount + c];
    }
  }
  for (std::size_t c = 0; c < kBaseLldCount; ++c) {
    const auto d = delta(m.column(c));
    for (std::size_t t = 0; t < T; ++t) m.values[t * kLldCount + kBaseLldCount + c] = d[t];
  }
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (!std::isfinite(m.values[i])) {
      fail(ErrorKind::kCompute, "non-finite descriptor " + m.names[i % kLldCount] + " at frame " +
                                    std::to_string(i / kLldCount));
    }
  }
  return m;
}

std::string lld_matrix_to_csv(const LLDMatrix& m) {
  std::string out = "time";
  for (const auto& n : m.names) out += "," + n;
  out += "\n";
  for (std::size_t t = 0; t < m.frames; ++t) {
    out += format_double(m.frame_times[t]);
    for (std::size_t c = 0; c < m.columns; ++c) out += "," + format_double(m.at(t, c));
    out += "\n";
  }
  return out;
}

}  // namespace respscreen
