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

// JSON scene files, tool configuration and report serialization.
//
// Scene file:
//   {
//     "scene_id": "000123",
//     "vocabulary": [{"name": "divider", "kind": "line"},
//                    {"name": "ped_crossing", "kind": "polygon"}],
//     "elements": [
//       {"class": "divider", "kind": "line",
//        "points": [[-3.0, -20.0], [-3.1, 20.0]], "confidence": 0.9}
//     ]
//   }
//
// Prediction files carry a confidence on every element; ground-truth files
// carry none. Coordinates are meters in the BEV frame.

#ifndef MAPRAST_SCENE_IO_H_
#define MAPRAST_SCENE_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maprast/fit.h"
#include "maprast/losses.h"
#include "maprast/map_element.h"
#include "maprast/metrics.h"

namespace maprast {

enum class SceneRole { kPrediction, kGroundTruth };

struct SceneElement {
  MapElement element;
  std::optional<double> confidence;
};

struct SceneFile {
  std::string scene_id;
  Vocabulary vocabulary;
  std::vector<SceneElement> elements;

  // Number of consecutive duplicate points dropped while loading.
  size_t NumDeduplicated() const;
};

// Parses and validates a scene. When `role` is unset it is inferred from
// the confidence fields, which must then be all present or all absent.
// Errors name `source` and the offending element index.
SceneFile ParseScene(std::string_view text, const std::string& source,
                     std::optional<SceneRole> role = std::nullopt);
SceneFile LoadScene(const std::string& path,
                    std::optional<SceneRole> role = std::nullopt);

std::string SerializeScene(const SceneFile& scene);
void WriteScene(const SceneFile& scene, const std::string& path);

EvalScene ToEvalScene(const SceneFile& predictions,
                      const SceneFile& ground_truth);

enum class TargetMode { kSoft, kHard };

// Every knob of the command-line tool. Config-file keys mirror the field
// names; see ParseToolConfig.
struct ToolConfig {
  GridSpec grid{-15.0, 15.0, -30.0, 30.0, 240, 480};
  double tau = Softness::kDefaultTau;
  int line_dilation_px = 2;
  DilationKernel dilation_kernel = DilationKernel::kDisk;
  std::vector<double> line_iou_thresholds = ThresholdRange(0.25, 0.50, 0.05);
  std::vector<double> polygon_iou_thresholds = ThresholdRange(0.50, 0.75, 0.05);
  std::vector<double> chamfer_thresholds_m = {0.5, 1.0, 1.5};
  size_t chamfer_resample_points = 100;
  Pooling pooling = Pooling::kDataset;
  MatchingWeights matching_weights;
  LossWeights loss_weights;
  FitConfig fit;
  TargetMode fit_target = TargetMode::kSoft;
  bool cull = false;
  int workers = 1;
  uint64_t seed = 0;

  EvalConfig ToEvalConfig() const;
  FitConfig ToFitConfig() const;
  // Runs every owning module's validation.
  void Validate() const;
};

// Unknown keys and type mismatches are ValidationErrors. Threshold lists
// accept either a JSON array or a "start:stop:step" string.
ToolConfig ParseToolConfig(std::string_view text, const std::string& source);
ToolConfig LoadToolConfig(const std::string& path);

// Rounds to 9 significant digits, the precision of every number written by
// the tool.
double RoundSignificant(double value);
std::string FormatNumber(double value);

// APReport as JSON with sorted keys, and PR curves as CSV with columns
// class,threshold,recall,precision.
std::string ReportToJson(const ApReport& report);
std::string ReportToCsv(const ApReport& report);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

}  // namespace maprast

#endif  // MAPRAST_SCENE_IO_H_
