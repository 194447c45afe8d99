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

#include "respscreen/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "respscreen/error.hpp"
#include "respscreen/fft.hpp"

namespace respscreen::pitch {

namespace {

double interp(std::span<const double> v, double pos) {
  if (pos < 0.0) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return i < v.size() ? v[i] : 0.0;
  const double frac = pos - static_cast<double>(i);
  return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

// Vertex of the parabola through (-1, a), (0, b), (1, c).
std::pair<double, double> parabolic(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (std::abs(den) < 1e-300) return {0.0, b};
  const double off = std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
  return {off, b - 0.25 * (a - c) * off};
}

}  // namespace

std::vector<Candidate> shs_candidates(std::span<const double> magnitude, double bin_hz,
                                      const ShsConfig& cfg) {
  const std::size_t n = magnitude.size();
  // Peak enhancement: only +/- 2 bins around local maxima survive.
  std::vector<double> enhanced(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (magnitude[k] > magnitude[k - 1] && magnitude[k] >= magnitude[k + 1]) {
      const std::size_t lo = k >= 2 ? k - 2 : 0;
      const std::size_t hi = std::min(n - 1, k + 2);
      for (std::size_t j = lo; j <= hi; ++j) enhanced[j] = magnitude[j];
    }
  }

  const double octaves = std::log2(cfg.f0_max / cfg.f0_min);
  const auto steps = static_cast<std::size_t>(std::ceil(octaves * static_cast<double>(cfg.steps_per_octave)));
  std::vector<double> grid(steps + 1), sum(steps + 1, 0.0);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double f = cfg.f0_min * std::exp2(static_cast<double>(s) / static_cast<double>(cfg.steps_per_octave));
    grid[s] = std::min(f, cfg.f0_max);
    double weight = 1.0, acc = 0.0;
    for (std::size_t h = 1; h <= cfg.harmonics; ++h, weight *= cfg.compression) {
      const double fh = static_cast<double>(h) * grid[s];
      if (fh > cfg.max_freq) break;
      acc += weight * interp(enhanced, fh / bin_hz);
    }
    sum[s] = acc;
  }

  std::vector<std::pair<double, std::size_t>> peaks;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double left = s > 0 ? sum[s - 1] : -1.0;
    const double right = s < steps ? sum[s + 1] : -1.0;
    if (sum[s] > 0.0 && sum[s] > left && sum[s] >= right) peaks.emplace_back(sum[s], s);
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (peaks.size() > cfg.max_candidates) peaks.resize(cfg.max_candidates);

  std::vector<Candidate> out;
  if (peaks.empty()) return out;
  const double best = peaks.front().first;
  for (const auto& [value, s] : peaks) out.push_back({grid[s], value / best});
  return out;
}

// ----------------------------------------------------------- autocorrelation

struct Autocorrelator::Impl {
  std::size_t length;
  std::size_t min_lag;
  std::size_t max_lag;
  RealFft fft;
  std::vector<double> window_acf;  // normalized autocorrelation of the window
  std::vector<double> power;
  std::vector<double> full;
  std::vector<double> normalized;  // per lag, last frame

  Impl(std::size_t len, std::size_t lo, std::size_t hi)
      : length(len), min_lag(lo), max_lag(hi), fft(next_pow2(2 * len)) {}

  // Biased autocorrelation for lags 0..max_lag via |X|^2 and a second forward
  // transform (the power spectrum is real and even).
  void acf(std::span<const double> x, std::vector<double>& out) {
    fft.power_spectrum(x, power);
    const std::size_t n = fft.size();
    full.assign(n, 0.0);
    for (std::size_t k = 0; k < power.size(); ++k) {
      full[k] = power[k];
      if (k > 0 && k < n - k) full[n - k] = power[k];
    }
    const auto spec = fft.forward(full);
    out.resize(max_lag + 2);
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = spec[l].real() / static_cast<double>(n);
  }
};

Autocorrelator::Autocorrelator(std::span<const double> window, std::size_t min_lag,
                               std::size_t max_lag)
    : impl_(nullptr) {
  require(min_lag >= 1 && min_lag < max_lag && max_lag + 2 < window.size(), ErrorKind::kConfig,
          "autocorrelator: lag range does not fit the window");
  impl_ = new Impl(window.size(), min_lag, max_lag);
  impl_->acf(window, impl_->window_acf);
  const double r0 = impl_->window_acf[0];
  for (double& v : impl_->window_acf) v /= r0;
}

Autocorrelator::~Autocorrelator() { delete impl_; }

AutocorrPeak Autocorrelator::best_peak(std::span<const double> frame) {
  auto& im = *impl_;
  std::vector<double> r;
  im.acf(frame, r);
  im.normalized.assign(r.size(), 0.0);
  if (!(r[0] > 1e-20)) return {};
  for (std::size_t l = 0; l < r.size(); ++l) {
    im.normalized[l] = (r[l] / r[0]) / std::max(im.window_acf[l], 1e-12);
  }
  const auto& nr = im.normalized;
  // Peaks are ranked with a small per-octave penalty on lag so that a
  // multiple of the period never beats the period itself on rounding noise.
  constexpr double kOctaveCost = 0.01;
  AutocorrPeak best;
  double best_rank = 0.0;
  bool found = false;
  for (std::size_t l = im.min_lag; l <= im.max_lag; ++l) {
    if (nr[l] > nr[l - 1] && nr[l] >= nr[l + 1]) {
      const auto [off, val] = parabolic(nr[l - 1], nr[l], nr[l + 1]);
      const double lag = static_cast<double>(l) + off;
      const double rank =
          val - kOctaveCost * std::log2(lag / static_cast<double>(im.min_lag));
      if (!found || rank > best_rank) {
        best = {lag, val};
        best_rank = rank;
        found = true;
      }
    }
  }
  best.value = std::clamp(best.value, 0.0, 1.0);
  return best;
}

double Autocorrelator::value_at(double lag) const {
  return std::clamp(interp(impl_->normalized, lag), 0.0, 1.0);
}

// ------------------------------------------------------------------- Viterbi

std::vector<double> viterbi_track(const std::vector<std::vector<Candidate>>& candidates,
                                  std::span<const double> voicing, const ViterbiConfig& cfg) {
  const std::size_t T = candidates.size();
  require(voicing.size() == T, ErrorKind::kCompute, "viterbi: voicing length mismatch");
  std::vector<double> f0(T, 0.0);
  if (T == 0) return f0;

  // State k < candidates[t].size() is voiced, the last state is unvoiced.
  auto local = [&](std::size_t t, std::size_t k) {
    const double v = voicing[t];
    if (k == candidates[t].size()) return v;
    return (1.0 - v) + cfg.candidate_weight * (1.0 - candidates[t][k].strength);
  };
  auto trans = [&](std::size_t tp, std::size_t kp, std::size_t t, std::size_t k) {
    const bool up = kp == candidates[tp].size(), u = k == candidates[t].size();
    if (up && u) return 0.0;
    if (up != u) return cfg.voicing_switch_cost;
    return cfg.octave_jump_cost *
           std::abs(std::log2(candidates[t][k].f0) - std::log2(candidates[tp][kp].f0));
  };

  std::vector<std::vector<double>> cost(T);
  std::vector<std::vector<std::size_t>> back(T);
  cost[0].resize(candidates[0].size() + 1);
  back[0].assign(candidates[0].size() + 1, 0);
  for (std::size_t k = 0; k < cost[0].size(); ++k) cost[0][k] = local(0, k);
  for (std::size_t t = 1; t < T; ++t) {
    const std::size_t ns = candidates[t].size() + 1;
    cost[t].assign(ns, std::numeric_limits<double>::infinity());
    back[t].assign(ns, 0);
    for (std::size_t k = 0; k < ns; ++k) {
      for (std::size_t kp = 0; kp < cost[t - 1].size(); ++kp) {
        const double c = cost[t - 1][kp] + trans(t - 1, kp, t, k);
        if (c < cost[t][k]) {
          cost[t][k] = c;
          back[t][k] = kp;
        }
      }
      cost[t][k] += local(t, k);
    }
  }
  std::size_t k = static_cast<std::size_t>(
      std::min_element(cost[T - 1].begin(), cost[T - 1].end()) - cost[T - 1].begin());
  for (std::size_t t = T; t-- > 0;) {
    f0[t] = k < candidates[t].size() ? candidates[t][k].f0 : 0.0;
    if (t > 0) k = back[t][k];
  }
  return f0;
}

// -------------------------------------------------------------- perturbation

Perturbation period_perturbation(std::span<const double> x, double period) {
  Perturbation out;
  if (!(period >= 2.0) || x.size() < 3) return out;
  const std::size_t n = x.size();

  auto refine = [&](std::size_t i) {
    if (i == 0 || i + 1 >= n) return std::pair<double, double>{static_cast<double>(i), x[i]};
    const auto [off, val] = parabolic(x[i - 1], x[i], x[i + 1]);
    return std::pair<double, double>{static_cast<double>(i) + off, val};
  };
  auto argmax = [&](std::size_t lo, std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (x[i] > x[best]) best = i;
    }
    return best;
  };

  std::vector<double> pos, amp;
  std::size_t cur = argmax(0, std::min(n - 1, static_cast<std::size_t>(std::ceil(1.2 * period))));
  auto [p0, a0] = refine(cur);
  pos.push_back(p0);
  amp.push_back(a0);
  for (;;) {
    const auto lo = static_cast<std::size_t>(std::ceil(static_cast<double>(cur) + 0.8 * period));
    const auto hi = static_cast<std::size_t>(std::floor(static_cast<double>(cur) + 1.2 * period));
    if (hi >= n - 1 || lo > hi) break;
    cur = argmax(lo, hi);
    auto [p, a] = refine(cur);
    pos.push_back(p);
    amp.push_back(a);
  }

  std::vector<double> periods;
  for (std::size_t i = 1; i < pos.size(); ++i) periods.push_back(pos[i] - pos[i - 1]);
  out.periods = periods.size();
  if (periods.size() >= 2) {
    double mean_t = 0.0, d1 = 0.0;
    for (double t : periods) mean_t += t;
    mean_t /= static_cast<double>(periods.size());
    for (std::size_t i = 1; i < periods.size(); ++i) d1 += std::abs(periods[i] - periods[i - 1]);
    out.jitter_local = d1 / static_cast<double>(periods.size() - 1) / mean_t;
    if (periods.size() >= 3) {
      double d2 = 0.0;
      for (std::size_t i = 1; i + 1 < periods.size(); ++i) {
        d2 += std::abs((periods[i + 1] - periods[i]) - (periods[i] - periods[i - 1]));
      }
      out.jitter_delta = d2 / static_cast<double>(periods.size() - 2) / mean_t;
    }
  }
  if (amp.size() >= 2) {
    double mean_a = 0.0, da = 0.0;
    for (double a : amp) mean_a += std::abs(a);
    mean_a /= static_cast<double>(amp.size());
    for (std::size_t i = 1; i < amp.size(); ++i) da += std::abs(std::abs(amp[i]) - std::abs(amp[i - 1]));
    out.shimmer_local = mean_a > 0 ? da / static_cast<double>(amp.size() - 1) / mean_a : 0.0;
  }
  return out;
}

}  // namespace respscreen::pitch
