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

#include "maprast/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "maprast/error.h"
#include "maprast/parallel.h"

namespace maprast {
namespace {

constexpr double kDiceSmoothing = 1.0;
constexpr double kMinJointSegment = 1e-9;

void CheckWeight(double w, const char* name) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw ValidationError(std::string("loss weight '") + name +
                          "' must be finite and >= 0");
  }
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Maps pixel-unit gradients back to world units.
std::vector<Point2> PixelGradToWorld(const RasterGradient& g,
                                     const GridSpec& grid) {
  std::vector<Point2> out;
  out.reserve(g.per_point.size());
  for (const Point2& p : g.per_point) {
    out.push_back({p.x / grid.dx(), p.y / grid.dy()});
  }
  return out;
}

void AddScaled(std::vector<Point2>& acc, const std::vector<Point2>& g,
               double scale) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + scale * g[i];
}

void AddScaled(std::vector<double>& acc, const std::vector<double>& g,
               double scale) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += scale * g[i];
}

void CheckClass(const Prediction& pred, const MapElement& gt) {
  if (gt.class_id() >= pred.logits.size()) {
    throw ValidationError("ground-truth class " + std::to_string(gt.class_id()) +
                          " has no prediction score (vocabulary size " +
                          std::to_string(pred.logits.size()) + ")");
  }
}

}  // namespace

void LossWeights::Validate() const {
  CheckWeight(render, "render");
  CheckWeight(classification, "classification");
  CheckWeight(direction, "direction");
  CheckWeight(regression, "regression");
  if (render + classification + direction + regression <= 0.0) {
    throw ValidationError("at least one loss weight must be positive");
  }
}

void MatchingWeights::Validate() const {
  CheckWeight(render, "render");
  CheckWeight(classification, "classification");
  CheckWeight(regression, "regression");
  if (render + classification + regression <= 0.0) {
    throw ValidationError("at least one matching weight must be positive");
  }
}

void FocalParams::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("focal alpha must lie in [0, 1]");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("focal gamma must be finite and >= 0");
  }
}

double Logistic(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

DiceResult DiceLoss(std::span<const double> pred,
                    std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ValidationError("dice loss inputs differ in size");
  }
  double inter = 0.0, sum_p = 0.0, sum_g = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    inter += pred[i] * target[i];
    sum_p += pred[i];
    sum_g += target[i];
  }
  const double num = 2.0 * inter + kDiceSmoothing;
  const double den = sum_p + sum_g + kDiceSmoothing;
  DiceResult r;
  r.loss = 1.0 - num / den;
  r.grad.resize(pred.size());
  const double inv_den2 = 1.0 / (den * den);
  for (size_t i = 0; i < pred.size(); ++i) {
    r.grad[i] = -(2.0 * target[i] * den - num) * inv_den2;
  }
  return r;
}

DiceResult DiceLoss(const SoftMask& pred, const SoftMask& target) {
  if (!(pred.grid() == target.grid())) {
    throw ValidationError("dice loss masks are on different grids");
  }
  return DiceLoss(pred.values(), target.values());
}

PointLoss DirectionRegularization(std::span<const Point2> points,
                                  DirectionForm form) {
  PointLoss out;
  out.grad.assign(points.size(), Point2{});
  const double sign = form == DirectionForm::kOneMinusCosine ? -1.0 : 1.0;
  for (size_t i = 0; i + 2 < points.size(); ++i) {
    const Point2 u = points[i + 1] - points[i];
    const Point2 v = points[i + 2] - points[i + 1];
    const double lu = Norm(u), lv = Norm(v);
    if (lu < kMinJointSegment || lv < kMinJointSegment) continue;
    const double cosine = Dot(u, v) / (lu * lv);
    out.value += form == DirectionForm::kOneMinusCosine ? 1.0 - cosine : cosine;
    const Point2 dc_du = (1.0 / (lu * lv)) * v - (cosine / (lu * lu)) * u;
    const Point2 dc_dv = (1.0 / (lu * lv)) * u - (cosine / (lv * lv)) * v;
    out.grad[i] = out.grad[i] - sign * dc_du;
    out.grad[i + 1] = out.grad[i + 1] + sign * (dc_du - dc_dv);
    out.grad[i + 2] = out.grad[i + 2] + sign * dc_dv;
  }
  return out;
}

RegressionResult L1RegressionLoss(std::span<const Point2> pred,
                                  std::span<const Point2> target,
                                  Reduction reduction) {
  if (pred.size() != target.size()) {
    throw ValidationError("L1 regression needs equal point counts (" +
                          std::to_string(pred.size()) + " vs " +
                          std::to_string(target.size()) + ")");
  }
  const size_t n = pred.size();
  RegressionResult r;
  r.grad.assign(n, Point2{});
  if (n == 0) return r;
  double forward = 0.0, backward = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point2 df = pred[i] - target[i];
    const Point2 db = pred[i] - target[n - 1 - i];
    forward += std::abs(df.x) + std::abs(df.y);
    backward += std::abs(db.x) + std::abs(db.y);
  }
  r.reversed = backward < forward;
  const double scale = reduction == Reduction::kMean ? 1.0 / n : 1.0;
  r.value = scale * (r.reversed ? backward : forward);
  for (size_t i = 0; i < n; ++i) {
    const Point2 d = pred[i] - target[r.reversed ? n - 1 - i : i];
    r.grad[i] = {scale * Sign(d.x), scale * Sign(d.y)};
  }
  return r;
}

FocalResult FocalClassificationLoss(std::span<const double> logits,
                                    std::optional<size_t> target_class,
                                    const FocalParams& params) {
  params.Validate();
  if (target_class && *target_class >= logits.size()) {
    throw ValidationError("target class " + std::to_string(*target_class) +
                          " out of range for " + std::to_string(logits.size()) +
                          " classes");
  }
  const double a = params.alpha, g = params.gamma;
  FocalResult r;
  r.grad.resize(logits.size());
  for (size_t c = 0; c < logits.size(); ++c) {
    const double x = logits[c];
    const double p = Logistic(x);
    const double log_p = -Softplus(-x);
    const double log_q = -Softplus(x);  // log(1 - p)
    if (target_class && *target_class == c) {
      const double q = 1.0 - p;
      const double mod = std::pow(q, g);
      r.value += -a * mod * log_p;
      r.grad[c] = a * mod * (g * p * log_p - q);
    } else {
      const double mod = std::pow(p, g);
      r.value += -(1.0 - a) * mod * log_q;
      r.grad[c] = (1.0 - a) * mod * (p - g * (1.0 - p) * log_q);
    }
  }
  return r;
}

double MatchingCost(const Prediction& pred, const MapElement& gt,
                    const MatchingWeights& weights, const GridSpec& grid,
                    Softness tau, const MatchingOptions& options) {
  CheckClass(pred, gt);
  if (pred.element.kind() != gt.kind()) return options.kind_mismatch_cost;
  double cost = 0.0;
  if (weights.render > 0.0) {
    const SoftMask pm = RenderSoft(pred.element, grid, tau, options.raster);
    const SoftMask gm = RenderSoft(gt, grid, tau, options.raster);
    cost += weights.render * DiceLoss(pm, gm).loss;
  }
  if (weights.classification > 0.0) {
    cost += weights.classification *
            (1.0 - Logistic(pred.logits[gt.class_id()]));
  }
  if (weights.regression > 0.0) {
    const std::span<const Point2> pts = pred.element.points();
    const std::vector<Point2> target =
        ResampleElement(gt.kind(), gt.points(), pts.size());
    cost += weights.regression *
            L1RegressionLoss(pts, target, options.regression_reduction).value;
  }
  return cost;
}

CostMatrix BuildCostMatrix(std::span<const Prediction> preds,
                           std::span<const MapElement> gts,
                           const MatchingWeights& weights, const GridSpec& grid,
                           Softness tau, const MatchingOptions& options,
                           int workers) {
  weights.Validate();
  CostMatrix costs(preds.size(), gts.size());
  ParallelFor(preds.size(), workers, [&](size_t r) {
    for (size_t c = 0; c < gts.size(); ++c) {
      costs.at(r, c) = MatchingCost(preds[r], gts[c], weights, grid, tau, options);
    }
  });
  return costs;
}

TotalLossResult TotalLoss(std::span<const Prediction> preds,
                          std::span<const MapElement> gts,
                          const Assignment& assignment,
                          const LossWeights& weights, const GridSpec& grid,
                          Softness tau, const TotalLossOptions& options) {
  weights.Validate();
  std::vector<std::optional<size_t>> matched(preds.size());
  std::vector<char> gt_used(gts.size(), 0);
  for (const auto& [p, g] : assignment.pairs) {
    if (p >= preds.size() || g >= gts.size()) {
      throw ValidationError("assignment pair (" + std::to_string(p) + ", " +
                            std::to_string(g) + ") out of range");
    }
    if (matched[p] || gt_used[g]) {
      throw ValidationError("assignment reuses prediction " +
                            std::to_string(p) + " or ground truth " +
                            std::to_string(g));
    }
    matched[p] = g;
    gt_used[g] = 1;
  }

  TotalLossResult out;
  out.point_grads.resize(preds.size());
  out.logit_grads.resize(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) {
    const Prediction& pred = preds[i];
    const std::span<const Point2> pts = pred.element.points();
    std::vector<Point2>& pgrad = out.point_grads[i];
    std::vector<double>& lgrad = out.logit_grads[i];
    pgrad.assign(pts.size(), Point2{});
    lgrad.assign(pred.logits.size(), 0.0);

    if (!matched[i]) {
      const FocalResult focal =
          FocalClassificationLoss(pred.logits, std::nullopt, options.focal);
      out.loss += weights.classification * focal.value;
      AddScaled(lgrad, focal.grad, weights.classification);
      continue;
    }
    const MapElement& gt = gts[*matched[i]];
    CheckClass(pred, gt);

    if (weights.render > 0.0) {
      const SoftMask pm = RenderSoft(pred.element, grid, tau, options.raster);
      const SoftMask gm = RenderSoft(gt, grid, tau, options.raster);
      const DiceResult dice = DiceLoss(pm, gm);
      out.loss += weights.render * dice.loss;
      const RasterGradient rg = BackwardSoft(pred.element.kind(), pts, grid,
                                             tau, dice.grad, options.raster);
      AddScaled(pgrad, PixelGradToWorld(rg, grid), weights.render);
    }
    if (weights.classification > 0.0) {
      const FocalResult focal =
          FocalClassificationLoss(pred.logits, gt.class_id(), options.focal);
      out.loss += weights.classification * focal.value;
      AddScaled(lgrad, focal.grad, weights.classification);
    }
    if (weights.direction > 0.0 && pred.element.kind() == ElementKind::kLine) {
      const PointLoss dir =
          DirectionRegularization(pts, options.direction_form);
      out.loss += weights.direction * dir.value;
      AddScaled(pgrad, dir.grad, weights.direction);
    }
    if (weights.regression > 0.0) {
      const std::vector<Point2> target =
          ResampleElement(gt.kind(), gt.points(), pts.size());
      const RegressionResult reg =
          L1RegressionLoss(pts, target, options.regression_reduction);
      out.loss += weights.regression * reg.value;
      AddScaled(pgrad, reg.grad, weights.regression);
    }
  }
  return out;
}

}  // namespace maprast
