// Copyright 2026 The MapRaster Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "maprast/hungarian.h"
#include "maprast/metrics.h"

namespace maprast {
namespace {

void BM_HungarianAssign(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  CostMatrix costs(n, n + n / 2);
  for (size_t r = 0; r < costs.rows(); ++r) {
    for (size_t c = 0; c < costs.cols(); ++c) costs.at(r, c) = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(HungarianAssign(costs));
}
BENCHMARK(BM_HungarianAssign)->RangeMultiplier(4)->Range(4, 256);

void BM_ChamferDistance(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::vector<Point2> p(n), q(n);
  for (Point2& v : p) v = {u(rng), u(rng)};
  for (Point2& v : q) v = {u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(ChamferDistance(p, q));
}
BENCHMARK(BM_ChamferDistance)->Arg(20)->Arg(100)->Arg(400);

// Scenes of five noisy lane dividers and one crossing each.
std::vector<EvalScene> Scenes(size_t count) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<EvalScene> scenes;
  for (size_t s = 0; s < count; ++s) {
    EvalScene scene;
    scene.id = "scene_" + std::to_string(s);
    for (int lane = -2; lane <= 2; ++lane) {
      const double x = 3.5 * lane;
      const MapElement gt(0, Polyline({{x, -28}, {x + 0.5, 0}, {x, 28}}));
      const double dx = noise(rng);
      scene.ground_truth.push_back(gt);
      scene.detections.push_back(
          {MapElement(0, Polyline({{x + dx, -27}, {x + 0.5 + dx, 0}, {x + dx, 27}})),
           0.5 + 0.1 * lane});
    }
    const MapElement crossing(1, Polygon({{-8, 10}, {8, 10}, {8, 14}, {-8, 14}}));
    scene.ground_truth.push_back(crossing);
    scene.detections.push_back(
        {MapElement(1, Polygon({{-7.5, 10.2}, {8.3, 10}, {8, 14.4}, {-8, 13.8}})),
         0.9});
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

const Vocabulary kVocabulary = {{"divider", ElementKind::kLine},
                                {"ped_crossing", ElementKind::kPolygon}};

void BM_EvaluateRaster(benchmark::State& state) {
  const std::vector<EvalScene> scenes = Scenes(8);
  EvalConfig cfg;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateRaster(scenes, kVocabulary, cfg));
  }
}
BENCHMARK(BM_EvaluateRaster)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvaluateChamfer(benchmark::State& state) {
  const std::vector<EvalScene> scenes = Scenes(8);
  const EvalConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateChamfer(scenes, kVocabulary, cfg));
  }
}
BENCHMARK(BM_EvaluateChamfer)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace maprast

BENCHMARK_MAIN();
