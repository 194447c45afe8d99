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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace respscreen {

/// Forward real-to-complex DFT of a fixed size, backed by FFTW. Plans are
/// created under a process-wide lock; execute() on distinct instances is
/// thread-safe. Not copyable.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const { return size_; }
  std::size_t bins() const { return size_ / 2 + 1; }

  /// `input` shorter than size() is zero-padded. Returns size()/2+1 bins.
  std::span<const std::complex<double>> forward(std::span<const double> input);

  /// |X_k|^2 for k = 0..size/2.
  void power_spectrum(std::span<const double> input, std::vector<double>& out);

 private:
  struct Impl;
  std::size_t size_ = 0;
  std::unique_ptr<Impl> impl_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace respscreen
