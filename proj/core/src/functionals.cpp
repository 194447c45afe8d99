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

#include "respscreen/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "respscreen/error.hpp"

namespace respscreen::functionals {

namespace {

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double position(std::size_t i, std::size_t n) {
  return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
}

// Solves the 3x3 system a x = b by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 4>, 3> a, std::array<double, 3>& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[c], a[piv]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = a[r][3];
    for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace

double percentile(std::span<const double> sorted, double p) {
  require(!sorted.empty(), ErrorKind::kData, "percentile of an empty contour");
  const double rank = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Percentiles percentiles(std::span<const double> contour) {
  require(!contour.empty(), ErrorKind::kData, "percentiles of an empty contour");
  std::vector<double> s(contour.begin(), contour.end());
  std::sort(s.begin(), s.end());
  Percentiles p{};
  p.q1 = percentile(s, 0.25);
  p.q2 = percentile(s, 0.50);
  p.q3 = percentile(s, 0.75);
  p.iqr12 = p.q2 - p.q1;
  p.iqr23 = p.q3 - p.q2;
  p.iqr13 = p.q3 - p.q1;
  p.p1 = percentile(s, 0.01);
  p.p99 = percentile(s, 0.99);
  p.range1_99 = p.p99 - p.p1;
  return p;
}

Temporal temporal(std::span<const double> x) {
  Temporal t{};
  const std::size_t n = x.size();
  if (n == 0) return t;
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn, hi = *mx;
  t.argmin_pos = position(static_cast<std::size_t>(mn - x.begin()), n);
  t.argmax_pos = position(static_cast<std::size_t>(mx - x.begin()), n);
  t.range = hi - lo;

  double abs_sum = 0.0, weighted = 0.0, log_sum = 0.0;
  bool has_zero = false;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(x[i]);
    abs_sum += a;
    weighted += position(i, n) * a;
    if (a == 0.0) has_zero = true;
    else log_sum += std::log(a);
    if (x[i] != 0.0) ++nonzero;
  }
  t.centroid = abs_sum > 0 ? weighted / abs_sum : 0.0;
  const double arith = abs_sum / static_cast<double>(n);
  t.flatness = (has_zero || arith <= 0) ? 0.0 : std::exp(log_sum / static_cast<double>(n)) / arith;
  t.nonzero = static_cast<double>(nonzero) / static_cast<double>(n);

  if (t.range > 0) {
    std::array<std::size_t, 4> counts{};
    const std::array<double, 4> levels = {0.25, 0.5, 0.75, 0.9};
    for (double v : x) {
      for (std::size_t k = 0; k < 4; ++k) {
        if (v > lo + levels[k] * t.range) ++counts[k];
      }
    }
    t.above25 = static_cast<double>(counts[0]) / static_cast<double>(n);
    t.above50 = static_cast<double>(counts[1]) / static_cast<double>(n);
    t.above75 = static_cast<double>(counts[2]) / static_cast<double>(n);
    t.above90 = static_cast<double>(counts[3]) / static_cast<double>(n);

    std::vector<double> seg;
    std::size_t run = 0;
    const double thr = lo + 0.25 * t.range;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i < n && x[i] > thr) {
        ++run;
      } else if (run > 0) {
        seg.push_back(static_cast<double>(run) / static_cast<double>(n));
        run = 0;
      }
    }
    if (!seg.empty()) {
      t.seg_len_mean = mean_of(seg);
      t.seg_len_max = *std::max_element(seg.begin(), seg.end());
      t.seg_len_min = *std::min_element(seg.begin(), seg.end());
      t.seg_len_std = std_of(seg);
    }
  }

  if (n >= 2) {
    std::size_t rising = 0;
    for (std::size_t i = 1; i < n; ++i) rising += x[i] > x[i - 1] ? 1 : 0;
    t.rising = static_cast<double>(rising) / static_cast<double>(n - 1);
  }
  if (n >= 3) {
    std::size_t curv = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) curv += (x[i + 1] - 2.0 * x[i] + x[i - 1]) > 0 ? 1 : 0;
    t.positive_curvature = static_cast<double>(curv) / static_cast<double>(n - 2);
  }
  return t;
}

std::vector<Extremum> find_extrema(std::span<const double> x) {
  std::vector<Extremum> out;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    // Extend over a plateau of equal values.
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 >= n) break;
    const double left = x[i - 1], right = x[j + 1], v = x[i];
    const double centre = 0.5 * static_cast<double>(i + j);
    if (v > left && v > right) out.push_back({centre, v, true});
    else if (v < left && v < right) out.push_back({centre, v, false});
    i = j + 1;
  }
  return out;
}

Peaks peaks(std::span<const double> x) {
  Peaks p{};
  const auto ext = find_extrema(x);
  std::vector<double> pk_val, pk_pos, mn_val, rise, fall;
  for (std::size_t k = 0; k < ext.size(); ++k) {
    if (ext[k].is_peak) {
      pk_val.push_back(ext[k].value);
      pk_pos.push_back(ext[k].position);
    } else {
      mn_val.push_back(std::abs(ext[k].value));
    }
    if (k > 0 && ext[k].is_peak != ext[k - 1].is_peak) {
      const double dv = std::abs(ext[k].value - ext[k - 1].value);
      const double dt = ext[k].position - ext[k - 1].position;
      (ext[k].is_peak ? rise : fall).push_back(dv / dt);
    }
  }
  if (!pk_val.empty()) {
    p.peak_mean = mean_of(pk_val);
    p.peak_mean_minus_mean = p.peak_mean - mean_of(x);
    double amp = 0.0;
    for (double v : pk_val) amp += std::abs(v);
    p.peak_amp_mean = amp / static_cast<double>(pk_val.size());
    const auto [lo, hi] = std::minmax_element(pk_val.begin(), pk_val.end());
    p.peak_amp_range = *hi - *lo;
  }
  if (pk_pos.size() >= 2) {
    std::vector<double> dist;
    for (std::size_t k = 1; k < pk_pos.size(); ++k) dist.push_back(pk_pos[k] - pk_pos[k - 1]);
    p.peak_dist_mean = mean_of(dist);
    p.peak_dist_std = std_of(dist);
  }
  p.minima_amp_mean = mean_of(mn_val);
  p.rise_slope_mean = mean_of(rise);
  p.rise_slope_std = std_of(rise);
  p.fall_slope_mean = mean_of(fall);
  p.fall_slope_std = std_of(fall);
  return p;
}

Moments moments(std::span<const double> x) {
  Moments m{};
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  m.mean = mean_of(x);
  // Sums run on x / peak so that higher powers cannot overflow.
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return m;
  double sq = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double u = v / peak;
    sq += u * u;
    const double d = (v - m.mean) / peak;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m.rq_mean = std::sqrt(sq / n) * peak;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.stddev = std::sqrt(m2) * peak;
  if (m.stddev * m.stddev >= 1e-12) {
    m.skewness = m3 / (m2 * std::sqrt(m2));
    m.kurtosis = m4 / (m2 * m2);
  }
  return m;
}

Regression regression(std::span<const double> x) {
  Regression r{};
  const std::size_t n = x.size();
  if (n == 0) return r;
  if (n == 1) {
    r.lin_offset = x[0];
    return r;
  }
  double st = 0, stt = 0, sx = 0, stx = 0, sttt = 0, stttt = 0, sttx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = position(i, n);
    st += t;
    stt += t * t;
    sttt += t * t * t;
    stttt += t * t * t * t;
    sx += x[i];
    stx += t * x[i];
    sttx += t * t * x[i];
  }
  const double N = static_cast<double>(n);
  const double den = N * stt - st * st;
  r.lin_slope = (N * stx - st * sx) / den;
  r.lin_offset = (sx - r.lin_slope * st) / N;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = x[i] - (r.lin_slope * position(i, n) + r.lin_offset);
    err += e * e;
  }
  r.lin_error = err / N;

  if (n >= 3) {
    std::array<std::array<double, 4>, 3> a = {{{stttt, sttt, stt, sttx},
                                               {sttt, stt, st, stx},
                                               {stt, st, N, sx}}};
    std::array<double, 3> c{};
    if (solve3(a, c)) {
      r.quad_a = c[0];
      r.quad_b = c[1];
      r.quad_offset = c[2];
      double qerr = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = position(i, n);
        const double e = x[i] - (c[0] * t * t + c[1] * t + c[2]);
        qerr += e * e;
      }
      r.quad_error = qerr / N;
    }
  }
  return r;
}

std::vector<double> levinson(std::span<const double> r, std::size_t order, double& error) {
  require(r.size() > order, ErrorKind::kCompute, "levinson: autocorrelation too short");
  std::vector<double> a(order + 1, 0.0), prev(order + 1, 0.0);
  error = r[0];
  if (!(error > 0.0)) {
    error = 0.0;
    return std::vector<double>(order, 0.0);
  }
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / error;
    prev = a;
    a[i] = k;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    const double next = error * (1.0 - k * k);
    if (!(next > 0.0)) {
      // Perfectly predictable: later reflection coefficients stay 0.
      error = 0.0;
      break;
    }
    error = next;
  }
  return {a.begin() + 1, a.end()};
}

Modulation modulation(std::span<const double> x) {
  Modulation m{};
  const std::size_t n = x.size();
  constexpr std::size_t kOrder = 5;
  if (n <= kOrder) return m;
  const double mu = mean_of(x);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - mu;
  std::array<double, kOrder + 1> r{};
  for (std::size_t lag = 0; lag <= kOrder; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += y[i] * y[i - lag];
    r[lag] = acc / static_cast<double>(n);
  }
  // A contour that is constant up to rounding carries no modulation.
  if (r[0] <= 1e-300 || r[0] <= 1e-24 * mu * mu) return m;
  double err = 0.0;
  const auto a = levinson(r, kOrder, err);
  m.lp_gain = err;
  std::copy(a.begin(), a.end(), m.lp.begin());
  return m;
}

}  // namespace respscreen::functionals
