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
#include <numeric>
#include <span>
#include <vector>

#include "respscreen/audio.hpp"
#include "respscreen/error.hpp"

namespace respscreen {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

struct KaiserSinc {
  double cutoff;      // cycles per input sample
  double half_width;  // taps on each side, in input samples
  double beta;
  double i0_beta;

  double operator()(double tau) const {
    double x = tau / half_width;
    if (std::abs(x) >= 1.0) return 0.0;
    double w = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) / i0_beta;
    return 2.0 * cutoff * sinc(2.0 * cutoff * tau) * w;
  }
};

// Design in input-sample units. The transition band ends exactly at the
// lower of the two Nyquist frequencies.
KaiserSinc design(double source_rate, double target_rate, const ResamplerConfig& cfg) {
  const double nyquist = 0.5 * std::min(source_rate, target_rate);
  const double pass_edge = cfg.passband * nyquist;
  const double transition = (nyquist - pass_edge) / source_rate;
  const double atten = cfg.stopband_atten_db;
  const double beta = atten > 50.0   ? 0.1102 * (atten - 8.7)
                      : atten > 21.0 ? 0.5842 * std::pow(atten - 21.0, 0.4) +
                                           0.07886 * (atten - 21.0)
                                     : 0.0;
  const double length = (atten - 7.95) / (14.36 * transition);
  KaiserSinc k;
  k.cutoff = 0.5 * (pass_edge + nyquist) / source_rate;
  k.half_width = std::ceil(0.5 * length) + 1.0;
  k.beta = beta;
  k.i0_beta = std::cyl_bessel_i(0.0, beta);
  return k;
}

bool is_integral(double v) { return v == std::floor(v) && v < 9.0e15; }

}  // namespace

AudioSegment resample(const AudioSegment& segment, double target_rate,
                      const ResamplerConfig& config) {
  require(target_rate > 0.0, ErrorKind::kConfig, "resample: target rate must be positive");
  require(segment.sample_rate > 0.0, ErrorKind::kData, "resample: source rate must be positive");
  if (segment.sample_rate == target_rate) return segment;

  const double source_rate = segment.sample_rate;
  const std::size_t n_in = segment.samples.size();
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_in) * target_rate / source_rate));
  const KaiserSinc kernel = design(source_rate, target_rate, config);
  const auto taps = static_cast<long>(kernel.half_width);
  const std::span<const double> x(segment.samples);

  AudioSegment out;
  out.sample_rate = target_rate;
  out.samples.assign(n_out, 0.0);

  // Sum of x[base + m] * coef(m) for m in (-taps, taps]; out-of-range input is 0.
  auto convolve = [&](long base, auto&& coef) {
    double acc = 0.0;
    const long lo = std::max(-taps + 1, -base);
    const long hi = std::min(taps, static_cast<long>(n_in) - 1 - base);
    for (long m = lo; m <= hi; ++m) acc += x[static_cast<std::size_t>(base + m)] * coef(m);
    return acc;
  };

  std::uint64_t up = 0, down = 0;
  if (is_integral(source_rate) && is_integral(target_rate)) {
    auto s = static_cast<std::uint64_t>(source_rate);
    auto t = static_cast<std::uint64_t>(target_rate);
    std::uint64_t g = std::gcd(s, t);
    up = t / g;
    down = s / g;
  }

  if (up != 0 && up <= config.max_phases) {
    // Phase p holds coefficients for fractional offset p / up; each phase is
    // normalized to unit DC gain.
    const std::size_t width = static_cast<std::size_t>(2 * taps);
    std::vector<double> table(up * width);
    for (std::size_t p = 0; p < up; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up);
      double sum = 0.0;
      for (long m = -taps + 1; m <= taps; ++m) {
        double c = kernel(frac - static_cast<double>(m));
        table[p * width + static_cast<std::size_t>(m + taps - 1)] = c;
        sum += c;
      }
      for (std::size_t i = 0; i < width; ++i) table[p * width + i] /= sum;
    }
    for (std::size_t n = 0; n < n_out; ++n) {
      const std::uint64_t pos = static_cast<std::uint64_t>(n) * down;
      const auto base = static_cast<long>(pos / up);
      const double* row = table.data() + (pos % up) * width;
      out.samples[n] =
          convolve(base, [&](long m) { return row[static_cast<std::size_t>(m + taps - 1)]; });
    }
  } else {
    const double step = source_rate / target_rate;
    for (std::size_t n = 0; n < n_out; ++n) {
      const double t = static_cast<double>(n) * step;
      const auto base = static_cast<long>(std::floor(t));
      const double frac = t - static_cast<double>(base);
      double sum = 0.0;
      for (long m = -taps + 1; m <= taps; ++m) sum += kernel(frac - static_cast<double>(m));
      out.samples[n] =
          convolve(base, [&](long m) { return kernel(frac - static_cast<double>(m)); }) / sum;
    }
  }
  return out;
}

}  // namespace respscreen
