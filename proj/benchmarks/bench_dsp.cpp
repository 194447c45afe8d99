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

#include "respscreen/audio.hpp"
#include "respscreen/features.hpp"
#include "respscreen/functionals.hpp"
#include "respscreen/lld.hpp"
#include "synth.hpp"

using namespace respscreen;

namespace {

void BM_Resample48kTo44k1(benchmark::State& state) {
  const auto seconds = static_cast<double>(state.range(0));
  const auto in = testing::white_noise(seconds, 1, 0.2, 48000.0);
  for (auto _ : state) benchmark::DoNotOptimize(resample(in, 44100.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.samples.size()));
}
BENCHMARK(BM_Resample48kTo44k1)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Resample16kTo44k1(benchmark::State& state) {
  const auto in = testing::white_noise(10.0, 2, 0.2, 16000.0);
  for (auto _ : state) benchmark::DoNotOptimize(resample(in, 44100.0));
}
BENCHMARK(BM_Resample16kTo44k1)->Unit(benchmark::kMillisecond);

void BM_LldMatrix(benchmark::State& state) {
  const auto seconds = static_cast<double>(state.range(0));
  const auto in = testing::vowel(140.0, seconds);
  for (auto _ : state) benchmark::DoNotOptimize(extract_lld_matrix(in));
  state.counters["realtime_factor"] = benchmark::Counter(
      seconds * static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_LldMatrix)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_AssembleFeatureVector(benchmark::State& state) {
  const auto lld = extract_lld_matrix(testing::vowel(140.0, static_cast<double>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_feature_vector(lld));
}
BENCHMARK(BM_AssembleFeatureVector)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Percentiles(benchmark::State& state) {
  const auto noise = testing::white_noise(1.0, 3).samples;
  std::vector<double> contour(noise.begin(), noise.begin() + state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(functionals::percentiles(contour));
}
BENCHMARK(BM_Percentiles)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Modulation(benchmark::State& state) {
  const auto noise = testing::white_noise(1.0, 4).samples;
  std::vector<double> contour(noise.begin(), noise.begin() + state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(functionals::modulation(contour));
}
BENCHMARK(BM_Modulation)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExtractRecording(benchmark::State& state) {
  const auto in = testing::vowel(140.0, 10.0, 48000.0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_recording(in));
}
BENCHMARK(BM_ExtractRecording)->Unit(benchmark::kMillisecond);

}  // namespace
