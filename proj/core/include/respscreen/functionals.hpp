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
#include <string_view>
#include <vector>

// Recording-level statistics of one descriptor contour. Every function is
// total over finite input with |x| < 1e150 (mean squared errors need x^2 to be
// representable): degenerate cases (no peaks, zero variance, short contours)
// produce 0 instead of NaN.
namespace respscreen::functionals {

struct Percentiles {
  double q1, q2, q3;
  double iqr12, iqr23, iqr13;
  double p1, p99, range1_99;
};

/// Linear interpolation between order statistics at rank p * (n - 1).
double percentile(std::span<const double> sorted, double p);
Percentiles percentiles(std::span<const double> contour);

struct Temporal {
  double argmin_pos, argmax_pos;  // index / (n - 1)
  double range;
  double centroid;                // sum t|x| / sum |x|, t in [0, 1]
  double flatness;                // geometric / arithmetic mean of |x|
  double above25, above50, above75, above90;  // fraction > min + p * range
  double rising;                  // fraction of steps with x[i] > x[i-1]
  double positive_curvature;      // fraction with x[i+1] - 2x[i] + x[i-1] > 0
  double seg_len_mean, seg_len_max, seg_len_min, seg_len_std;
  double nonzero;                 // fraction of samples != 0
};

/// Segments are maximal runs above min + 0.25 * range; their lengths are
/// reported as fractions of the contour length.
Temporal temporal(std::span<const double> contour);

struct Peaks {
  double peak_mean;
  double peak_mean_minus_mean;
  double peak_dist_mean, peak_dist_std;  // in frames
  double peak_amp_mean;                  // mean |peak|
  double minima_amp_mean;
  double peak_amp_range;
  double rise_slope_mean, rise_slope_std;
  double fall_slope_mean, fall_slope_std;
};

struct Extremum {
  double position;  // plateau centre
  double value;
  bool is_peak;
};

/// Strict local extrema; a plateau bounded by lower (higher) neighbours is one
/// peak (minimum) at its centre. Endpoints are never extrema.
std::vector<Extremum> find_extrema(std::span<const double> contour);
Peaks peaks(std::span<const double> contour);

struct Moments {
  double mean, rq_mean, stddev, skewness, kurtosis;
};

/// Population moments; skewness and kurtosis are 0 when variance < 1e-12.
Moments moments(std::span<const double> contour);

struct Regression {
  double lin_slope, lin_offset, lin_error;
  double quad_a, quad_b, quad_offset, quad_error;
};

/// Least squares on t = i / (n - 1); errors are mean squared residuals.
Regression regression(std::span<const double> contour);

struct Modulation {
  double lp_gain;
  std::array<double, 5> lp;
};

/// Order-5 autocorrelation-method LPC of the mean-removed contour, with
/// x[n] ~ sum_k lp[k-1] x[n-k]; lp_gain is the final prediction-error power.
Modulation modulation(std::span<const double> contour);

/// Levinson-Durbin on autocorrelation r[0..order]. Returns predictor
/// coefficients a[1..order] and writes the final error power.
std::vector<double> levinson(std::span<const double> r, std::size_t order, double& error);

}  // namespace respscreen::functionals
