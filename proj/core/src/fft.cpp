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

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "respscreen/error.hpp"
#include "respscreen/fft.hpp"

namespace respscreen {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
  std::vector<std::complex<double>> result;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

RealFft::RealFft(std::size_t size) : size_(size), impl_(std::make_unique<Impl>()) {
  require(size >= 2, ErrorKind::kConfig, "FFT size must be at least 2");
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_real(size);
  impl_->out = fftw_alloc_complex(size / 2 + 1);
  impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(size), impl_->in, impl_->out,
                                     FFTW_ESTIMATE);
  require(impl_->plan != nullptr, ErrorKind::kCompute, "FFTW planning failed");
  impl_->result.resize(size / 2 + 1);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::span<const std::complex<double>> RealFft::forward(std::span<const double> input) {
  const std::size_t n = std::min(input.size(), size_);
  std::memcpy(impl_->in, input.data(), n * sizeof(double));
  std::fill(impl_->in + n, impl_->in + size_, 0.0);
  fftw_execute(impl_->plan);
  for (std::size_t k = 0; k < bins(); ++k) {
    impl_->result[k] = {impl_->out[k][0], impl_->out[k][1]};
  }
  return impl_->result;
}

void RealFft::power_spectrum(std::span<const double> input, std::vector<double>& out) {
  auto spec = forward(input);
  out.resize(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) out[k] = std::norm(spec[k]);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace respscreen
