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

// Training objectives on rendered masks and vectorized point sets:
//
//   matching cost  = w_render * dice + w_cls * (1 - sigmoid(score_gt))
//                  + w_reg * L1
//   final loss     = w_render * dice + w_cls * focal + w_dir * direction
//                  + w_reg * L1
//
// Unless stated otherwise, gradients are with respect to the same units as
// the inputs (world meters for point sets, raw logits for scores).

#ifndef MAPRAST_LOSSES_H_
#define MAPRAST_LOSSES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "maprast/geometry.h"
#include "maprast/hungarian.h"
#include "maprast/map_element.h"
#include "maprast/rasterizer.h"

namespace maprast {

// Weights of the final per-prediction loss. Throws ValidationError if any
// weight is negative or non-finite, or if all are zero.
struct LossWeights {
  double render = 2.0;
  double classification = 2.0;
  double direction = 0.005;
  double regression = 0.05;

  void Validate() const;
};

// Weights of the pairwise matching cost.
struct MatchingWeights {
  double render = 2.0;
  double classification = 2.0;
  double regression = 0.05;

  void Validate() const;
};

struct DiceResult {
  double loss = 0.0;
  std::vector<double> grad;  // d(loss)/d(pred pixel)
};

// 1 - (2 * sum(p * g) + 1) / (sum(p) + sum(g) + 1). Throws ValidationError
// when the grids differ.
DiceResult DiceLoss(const SoftMask& pred, const SoftMask& target);
DiceResult DiceLoss(std::span<const double> pred,
                    std::span<const double> target);

enum class DirectionForm {
  kOneMinusCosine,  // sum(1 - cos theta); zero for straight chains.
  kRawCosine,       // sum(cos theta), the literal printed form.
};

struct PointLoss {
  double value = 0.0;
  std::vector<Point2> grad;  // One entry per input point.
};

// Penalty over the N - 2 interior joints on the cosine between consecutive
// segment directions. Joints touching a segment shorter than 1e-9 contribute
// nothing. Chains with fewer than 3 points give 0.
PointLoss DirectionRegularization(
    std::span<const Point2> points,
    DirectionForm form = DirectionForm::kOneMinusCosine);

enum class Reduction { kMean, kSum };

struct RegressionResult {
  double value = 0.0;
  std::vector<Point2> grad;
  bool reversed = false;  // True if the reversed target was closer.
};

// Per-point |dx| + |dy|, reduced over points, minimized over the target's
// two traversal directions (forward wins ties). Throws ValidationError on a
// length mismatch.
RegressionResult L1RegressionLoss(std::span<const Point2> pred,
                                  std::span<const Point2> target,
                                  Reduction reduction = Reduction::kMean);

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;

  void Validate() const;
};

struct FocalResult {
  double value = 0.0;
  std::vector<double> grad;  // d(loss)/d(logit)
};

// Sum over classes of the sigmoid focal term with a one-hot target at
// `target_class`. std::nullopt means background: every class is negative.
// Positives weigh alpha * (1 - p)^gamma * -log p, negatives
// (1 - alpha) * p^gamma * -log(1 - p). Throws ValidationError for an
// out-of-range class.
FocalResult FocalClassificationLoss(std::span<const double> logits,
                                    std::optional<size_t> target_class,
                                    const FocalParams& params = {});

double Logistic(double logit);

// A scored prediction: element plus one logit per vocabulary class.
struct Prediction {
  MapElement element;
  std::vector<double> logits;
};

struct MatchingOptions {
  // Cost used when a prediction and ground truth differ in kind.
  double kind_mismatch_cost = 1e6;
  Reduction regression_reduction = Reduction::kMean;
  RasterOptions raster;
};

// Throws ValidationError if the gt class has no logit.
double MatchingCost(const Prediction& pred, const MapElement& gt,
                    const MatchingWeights& weights, const GridSpec& grid,
                    Softness tau, const MatchingOptions& options = {});

// Full prediction x ground-truth cost matrix; rows parallelized over
// `workers` with a deterministic layout.
CostMatrix BuildCostMatrix(std::span<const Prediction> preds,
                           std::span<const MapElement> gts,
                           const MatchingWeights& weights, const GridSpec& grid,
                           Softness tau, const MatchingOptions& options = {},
                           int workers = 1);

struct TotalLossOptions {
  FocalParams focal;
  DirectionForm direction_form = DirectionForm::kOneMinusCosine;
  Reduction regression_reduction = Reduction::kMean;
  RasterOptions raster;
};

struct TotalLossResult {
  double loss = 0.0;
  // d(loss)/d(point) in world units, indexed like the predictions.
  std::vector<std::vector<Point2>> point_grads;
  std::vector<std::vector<double>> logit_grads;
};

// Sum over matched pairs of the weighted render, focal, direction and L1
// terms; unmatched predictions pay only the focal term against background.
// The direction term applies to line predictions. Throws ValidationError if
// the assignment references out-of-range or repeated indices.
TotalLossResult TotalLoss(std::span<const Prediction> preds,
                          std::span<const MapElement> gts,
                          const Assignment& assignment,
                          const LossWeights& weights, const GridSpec& grid,
                          Softness tau, const TotalLossOptions& options = {});

}  // namespace maprast

#endif  // MAPRAST_LOSSES_H_
