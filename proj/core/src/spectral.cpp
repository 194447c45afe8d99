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
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "respscreen/fft.hpp"
#include "respscreen/lld.hpp"

namespace respscreen {

namespace {

constexpr double kMelLow = 0.0;
constexpr double kMelHigh = 8000.0;
constexpr double kModulationLowHz = 1.0;
constexpr double kModulationHighHz = 30.0;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

double hz_to_bark(double f) {
  return 13.0 * std::atan(0.00076 * f) + 3.5 * std::atan((f / 7500.0) * (f / 7500.0));
}

struct MelBank {
  std::vector<std::vector<std::pair<std::size_t, double>>> weights;  // per band: (bin, w)
  std::vector<double> centre_hz;
};

MelBank make_mel_bank(std::size_t bands, std::size_t bins, double bin_hz) {
  MelBank bank;
  const double lo = hz_to_mel(kMelLow), hi = hz_to_mel(kMelHigh);
  std::vector<double> edges(bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bands + 1));
  }
  bank.weights.resize(bands);
  bank.centre_hz.resize(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const double l = edges[b], c = edges[b + 1], h = edges[b + 2];
    bank.centre_hz[b] = c;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > l && f <= c) w = (f - l) / (c - l);
      else if (f > c && f < h) w = (h - f) / (h - c);
      if (w > 0.0) bank.weights[b].emplace_back(k, w);
    }
  }
  return bank;
}

// Band-pass biquad (constant 0 dB peak gain) applied along time to each log
// band trajectory. State starts at the steady state of the first input, which
// for a band-pass is zero output.
struct ModulationFilter {
  double b0, b2, a1, a2;

  ModulationFilter(double frame_rate) {
    const double nyq = 0.5 * frame_rate;
    const double hi = std::min(kModulationHighHz, 0.9 * nyq);
    const double lo = std::min(kModulationLowHz, 0.5 * hi);
    const double f0 = std::sqrt(lo * hi);
    const double w0 = 2.0 * std::numbers::pi * f0 / frame_rate;
    const double bw = std::log2(hi / lo);
    const double alpha = std::sin(w0) * std::sinh(std::log(2.0) / 2.0 * bw * w0 / std::sin(w0));
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }

  std::vector<double> run(std::span<const double> x) const {
    std::vector<double> y(x.size());
    if (x.empty()) return y;
    // Transposed direct form II with b1 = 0 and b2 = -b0; a constant input
    // x0 gives zero output when s1 = s2 = b2 * x0.
    double s1 = b2 * x[0], s2 = b2 * x[0];
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double out = b0 * x[n] + s1;
      s1 = -a1 * out + s2;
      s2 = b2 * x[n] - a2 * out;
      y[n] = out;
    }
    return y;
  }
};

double sharpness_weight(double z) { return z < 15.8 ? 1.0 : 0.066 * std::exp(0.171 * z); }

}  // namespace

double frame_rms(std::span<const double> frame) {
  if (frame.empty()) return 0.0;
  double acc = 0.0;
  for (double v : frame) acc += v * v;
  return std::sqrt(acc / static_cast<double>(frame.size()));
}

double frame_zcr(std::span<const double> frame) {
  if (frame.size() < 2) return 0.0;
  std::size_t crossings = 0;
  for (std::size_t i = 1; i < frame.size(); ++i) {
    if ((frame[i - 1] >= 0.0) != (frame[i] >= 0.0)) ++crossings;
  }
  return static_cast<double>(crossings) / static_cast<double>(frame.size());
}

SpectralLlds compute_spectral_llds(const FrameSet& frames, const FrameConfig& config) {
  const std::size_t nfft = std::max(config.fft_size, next_pow2(frames.length));
  RealFft fft(nfft);
  const std::size_t bins = fft.bins();
  const double bin_hz = frames.sample_rate / static_cast<double>(nfft);
  const MelBank bank = make_mel_bank(kRastaBandCount, bins, bin_hz);
  const std::size_t nb = kRastaBandCount;
  const std::size_t T = frames.count;

  std::vector<double> freq(bins), bark_centre(nb);
  for (std::size_t k = 0; k < bins; ++k) freq[k] = static_cast<double>(k) * bin_hz;
  for (std::size_t b = 0; b < nb; ++b) bark_centre[b] = hz_to_bark(bank.centre_hz[b]);
  double freq_mean = 0.0, freq_var = 0.0;
  for (double f : freq) freq_mean += f / 1000.0;
  freq_mean /= static_cast<double>(bins);
  for (double f : freq) freq_var += (f / 1000.0 - freq_mean) * (f / 1000.0 - freq_mean);

  SpectralLlds out;
  out.values.assign(T * kSpectralLldCount, 0.0);
  out.loudness.assign(T, 0.0);
  out.modulation_sum.assign(T, 0.0);
  std::vector<double> log_bands(T * nb);
  std::vector<double> power, prev_norm_mag(bins, 0.0), norm_mag(bins);

  constexpr std::size_t kMfccOff = kRastaBandCount;
  constexpr std::size_t kScalarOff = kMfccOff + kMfccCount;

  for (std::size_t t = 0; t < T; ++t) {
    fft.power_spectrum(frames.frame(t), power);
    for (double& p : power) p = std::max(p, kPowerFloor);
    double* row = out.values.data() + t * kSpectralLldCount;

    // Mel bands, loudness and cepstrum.
    double loud = 0.0;
    std::vector<double> band(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      double e = 0.0;
      for (auto [k, w] : bank.weights[b]) e += w * power[k];
      band[b] = std::max(e, kPowerFloor);
      log_bands[t * nb + b] = std::log(band[b]);
      loud += std::cbrt(band[b]);
    }
    out.loudness[t] = loud;
    for (std::size_t i = 1; i <= kMfccCount; ++i) {
      double c = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        c += log_bands[t * nb + b] *
             std::cos(std::numbers::pi * static_cast<double>(i) * (static_cast<double>(b) + 0.5) /
                      static_cast<double>(nb));
      }
      row[kMfccOff + i - 1] = std::sqrt(2.0 / static_cast<double>(nb)) * c;
    }

    // Distribution statistics over the power spectrum.
    double total = 0.0;
    for (double p : power) total += p;
    double centroid = 0.0, entropy = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double pk = power[k] / total;
      centroid += freq[k] * pk;
      entropy -= pk * std::log(pk);
    }
    entropy /= std::log(static_cast<double>(bins));
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double pk = power[k] / total;
      const double d = freq[k] - centroid;
      m2 += pk * d * d;
      m3 += pk * d * d * d;
      m4 += pk * d * d * d * d;
    }
    const double sd = std::sqrt(m2);
    const double skew = m2 > 1e-12 ? m3 / (m2 * sd) : 0.0;
    const double kurt = m2 > 1e-12 ? m4 / (m2 * m2) : 0.0;

    // Slope of the dB spectrum against frequency in kHz.
    double slope_num = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      slope_num += (freq[k] / 1000.0 - freq_mean) * 10.0 * std::log10(power[k]);
    }
    const double slope = slope_num / freq_var;

    // Flux between unit-norm magnitude spectra; the first frame has none.
    double norm = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      norm_mag[k] = std::sqrt(power[k]);
      norm += power[k];
    }
    norm = std::sqrt(norm);
    double flux = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      norm_mag[k] /= norm;
      const double d = norm_mag[k] - prev_norm_mag[k];
      flux += d * d;
    }
    flux = t == 0 ? 0.0 : std::sqrt(flux);
    std::swap(prev_norm_mag, norm_mag);

    // Roll-off points.
    std::array<double, 4> rolloff{};
    const std::array<double, 4> fractions = {0.25, 0.5, 0.75, 0.9};
    {
      double cum = 0.0;
      std::size_t r = 0;
      for (std::size_t k = 0; k < bins && r < 4; ++k) {
        cum += power[k];
        while (r < 4 && cum >= fractions[r] * total) rolloff[r++] = freq[k];
      }
      while (r < 4) rolloff[r++] = freq[bins - 1];
    }

    // Zwicker-style sharpness on the compressed bands.
    double sharp_num = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const double n = std::cbrt(band[b]);
      sharp_num += n * sharpness_weight(bark_centre[b]) * bark_centre[b];
    }
    const double sharpness = loud > 0 ? 0.11 * sharp_num / loud : 0.0;

    // Peak-to-valley ratio in dB, weighted by peak power.
    double harm_num = 0.0, harm_den = 0.0;
    {
      std::size_t last_min = 0;
      for (std::size_t k = 1; k + 1 < bins; ++k) {
        if (power[k] <= power[k - 1] && power[k] < power[k + 1]) last_min = k;
        if (power[k] > power[k - 1] && power[k] >= power[k + 1]) {
          std::size_t j = k + 1;
          while (j + 1 < bins && power[j + 1] <= power[j]) ++j;
          const double valley = std::min(power[last_min], power[j]);
          harm_num += power[k] * 10.0 * std::log10(power[k] / valley);
          harm_den += power[k];
        }
      }
    }
    const double harmonicity = harm_den > 0 ? harm_num / harm_den : 0.0;

    double band_low = 0.0, band_high = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      if (freq[k] >= 250.0 && freq[k] <= 650.0) band_low += power[k];
      if (freq[k] >= 1000.0 && freq[k] <= 4000.0) band_high += power[k];
    }

    double* s = row + kScalarOff;
    s[0] = flux;
    s[1] = centroid;
    s[2] = entropy;
    s[3] = slope;
    s[4] = sharpness;
    s[5] = harmonicity;
    s[6] = rolloff[0];
    s[7] = rolloff[1];
    s[8] = rolloff[2];
    s[9] = rolloff[3];
    s[10] = m2;
    s[11] = skew;
    s[12] = kurt;
    s[13] = band_low;
    s[14] = band_high;
  }

  // Modulation filtering along time, then back to compressed linear power.
  const ModulationFilter filter(frames.sample_rate / static_cast<double>(frames.hop));
  std::vector<double> traj(T);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t t = 0; t < T; ++t) traj[t] = log_bands[t * nb + b];
    const auto filtered = filter.run(traj);
    for (std::size_t t = 0; t < T; ++t) {
      const double v = std::exp(filtered[t] / 3.0);
      out.values[t * kSpectralLldCount + b] = v;
      out.modulation_sum[t] += v;
    }
  }
  return out;
}

EnergyLlds compute_energy_llds(const FrameSet& raw, const SpectralLlds& spectral) {
  EnergyLlds out;
  out.values.assign(raw.count * kEnergyLldCount, 0.0);
  for (std::size_t t = 0; t < raw.count; ++t) {
    auto f = raw.frame(t);
    // A trailing zero-padded frame is measured over its real samples only.
    double* row = out.values.data() + t * kEnergyLldCount;
    row[0] = frame_rms(f);
    row[1] = frame_zcr(f);
    row[2] = spectral.loudness[t];
    row[3] = spectral.modulation_sum[t];
  }
  return out;
}

}  // namespace respscreen
