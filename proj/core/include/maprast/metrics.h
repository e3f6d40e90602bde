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

// Instance-level evaluation of vectorized maps. Two match criteria share
// one AP machinery:
//
//   * raster:  IoU of the rasterized prediction and ground truth (lines are
//              dilated, polygons filled) must reach the IoU threshold;
//   * chamfer: symmetric mean nearest-neighbor distance between the point
//              sets must not exceed the distance threshold.
//
// Detections are ranked by confidence and greedily claim the best unclaimed
// ground truth, one-to-one. AP is the area under the precision envelope.

#ifndef MAPRAST_METRICS_H_
#define MAPRAST_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maprast/geometry.h"
#include "maprast/hungarian.h"
#include "maprast/map_element.h"
#include "maprast/rasterizer.h"

namespace maprast {

struct Detection {
  MapElement element;
  double confidence = 1.0;
};

struct ClassInfo {
  std::string name;
  ElementKind kind;

  friend bool operator==(const ClassInfo&, const ClassInfo&) = default;
};
using Vocabulary = std::vector<ClassInfo>;

struct EvalScene {
  std::string id;
  std::vector<Detection> detections;
  std::vector<MapElement> ground_truth;
};

// start:stop:step with both ends included; values are snapped to 1e-12 so
// 0.25:0.50:0.05 yields exactly six thresholds.
std::vector<double> ThresholdRange(double start, double stop, double step);
// Parses "start:stop:step". Throws ValidationError on malformed text.
std::vector<double> ParseThresholdRange(std::string_view text);

enum class Pooling {
  kDataset,   // Pool TP/FP over all scenes, then compute AP.
  kPerScene,  // AP per scene, averaged over scenes containing the class.
};

struct EvalConfig {
  // 480 x 240 pixels over x in [-15, 15] m and y in [-30, 30] m, i.e.
  // 0.125 m per pixel.
  GridSpec grid{-15.0, 15.0, -30.0, 30.0, 240, 480};
  int line_dilation_px = 2;
  DilationKernel dilation_kernel = DilationKernel::kDisk;
  std::vector<double> line_iou_thresholds = ThresholdRange(0.25, 0.50, 0.05);
  std::vector<double> polygon_iou_thresholds = ThresholdRange(0.50, 0.75, 0.05);
  std::vector<double> chamfer_thresholds_m = {0.5, 1.0, 1.5};
  // Points per element after arc-length resampling for chamfer matching;
  // 0 uses the raw control points.
  size_t chamfer_resample_points = 100;
  Pooling pooling = Pooling::kDataset;
  int workers = 1;

  // Throws ValidationError if thresholds are not strictly increasing and in
  // range, or other fields are invalid.
  void Validate() const;
};

// 0.5 * (mean_p min_q |p - q| + mean_q min_p |p - q|). Throws
// ValidationError if either set is empty.
double ChamferDistance(std::span<const Point2> p, std::span<const Point2> q);

// |a & b| / |a | b|, 0 when both are empty. Throws ValidationError when the
// grids differ.
double MaskIou(const BinaryMask& a, const BinaryMask& b);

struct DetectionLabel {
  double confidence = 0.0;
  bool true_positive = false;
  std::optional<size_t> matched_gt;
};

// Greedy one-to-one matching on a detection x ground-truth similarity
// matrix: detections in descending confidence (input order on ties) each
// claim the unclaimed ground truth with the highest similarity >=
// `threshold` (lowest index on ties). Labels come back in input order.
std::vector<DetectionLabel> GreedyMatch(std::span<const double> confidences,
                                        const CostMatrix& similarity,
                                        double threshold);

// Pairwise matrices used by the two criteria: IoU similarity for raster,
// chamfer distance in meters for chamfer.
CostMatrix RasterIouMatrix(std::span<const Detection> dets,
                           std::span<const MapElement> gts,
                           const EvalConfig& cfg);
CostMatrix ChamferDistanceMatrix(std::span<const Detection> dets,
                                 std::span<const MapElement> gts,
                                 const EvalConfig& cfg);

std::vector<DetectionLabel> MatchDetectionsRaster(
    std::span<const Detection> dets, std::span<const MapElement> gts,
    double iou_threshold, const EvalConfig& cfg);
std::vector<DetectionLabel> MatchDetectionsChamfer(
    std::span<const Detection> dets, std::span<const MapElement> gts,
    double threshold_m, const EvalConfig& cfg);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;

  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

// Raw precision/recall after each confidence level, in descending
// confidence. Detections with equal confidence form one step.
std::vector<PrPoint> PrCurve(std::span<const DetectionLabel> labels,
                             size_t num_gt);

// Area under the monotone precision envelope (all-point interpolation).
// With num_gt == 0: 1 if there are no detections, else 0.
double AveragePrecision(std::span<const DetectionLabel> labels, size_t num_gt);

struct ThresholdResult {
  double threshold = 0.0;
  double ap = 0.0;
  std::vector<PrPoint> curve;
};

struct ClassReport {
  std::string name;
  ElementKind kind;
  size_t num_gt = 0;
  size_t num_detections = 0;
  std::vector<ThresholdResult> thresholds;
  double mean_ap = 0.0;
};

struct ApReport {
  std::string metric;  // "raster" or "chamfer"
  // Only classes with at least one ground truth or detection.
  std::vector<ClassReport> classes;
  double mean_ap = 0.0;
};

// Both throw ValidationError for class ids outside the vocabulary or
// elements whose kind disagrees with their class.
ApReport EvaluateRaster(std::span<const EvalScene> scenes,
                        const Vocabulary& vocabulary, const EvalConfig& cfg);
ApReport EvaluateChamfer(std::span<const EvalScene> scenes,
                         const Vocabulary& vocabulary, const EvalConfig& cfg);

}  // namespace maprast

#endif  // MAPRAST_METRICS_H_
