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

#include <benchmark/benchmark.h>

#include <random>

#include "respscreen/eval.hpp"
#include "respscreen/ml/linear.hpp"
#include "respscreen/ml/svm.hpp"
#include "respscreen/ml/tree.hpp"

using namespace respscreen;

namespace {

struct Data {
  ml::Matrix x;
  std::vector<int> y;
};

Data blobs(std::size_t n, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Data d{ml::Matrix(n, dims), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = i % 5 == 0 ? 1 : 0;
    d.y.push_back(c);
    for (std::size_t j = 0; j < dims; ++j) d.x(i, j) = g(rng) + (c && j < 10 ? 0.5 : 0.0);
  }
  return d;
}

void BM_TrainLogistic(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ml::train_logistic(d.x, d.y, 1.0));
}
BENCHMARK(BM_TrainLogistic)->Args({1000, 100})->Args({1000, 7104})->Unit(benchmark::kMillisecond);

void BM_SmoDual(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = blobs(n, 50, 2);
  ml::Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = ml::rbf_kernel(d.x.row(i), d.x.row(j), 50.0);
  }
  const auto upper = ml::box_constraints(d.y, ml::class_weights(d.y, true), 0.1);
  std::vector<int> signs(n);
  for (std::size_t i = 0; i < n; ++i) signs[i] = d.y[i] ? 1 : -1;
  for (auto _ : state) benchmark::DoNotOptimize(ml::solve_svm_dual(k, signs, upper));
}
BENCHMARK(BM_SmoDual)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TrainTree(benchmark::State& state) {
  auto d = blobs(1500, 8, 3);
  for (double& v : d.x.data) v = v > 0.5 ? 1.0 : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(ml::train_tree(d.x, d.y, 5));
}
BENCHMARK(BM_TrainTree)->Unit(benchmark::kMicrosecond);

void BM_SweepAuc(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), 1, 4);
  std::vector<double> s(d.x.data);
  for (double& v : s) v = 1.0 / (1.0 + std::exp(-v));
  for (auto _ : state) benchmark::DoNotOptimize(eval::auc(eval::roc_curve(s, d.y)));
}
BENCHMARK(BM_SweepAuc)->Arg(300)->Arg(3000)->Unit(benchmark::kMicrosecond);

}  // namespace
