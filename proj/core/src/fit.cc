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

#include "maprast/fit.h"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace maprast {
namespace {

class AdamState {
 public:
  AdamState(size_t n, const FitConfig& cfg)
      : cfg_(cfg), m_(n), v_(n) {}

  Point2 Step(size_t i, Point2 g) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * Point2{g.x * g.x, g.y * g.y};
    const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
    return {cfg_.step_px * (m_[i].x / c1) / (std::sqrt(v_[i].x / c2) + cfg_.adam_epsilon),
            cfg_.step_px * (m_[i].y / c1) / (std::sqrt(v_[i].y / c2) + cfg_.adam_epsilon)};
  }
  void Advance() { ++t_; }

 private:
  const FitConfig& cfg_;
  std::vector<Point2> m_, v_;
  int t_ = 1;
};

std::vector<Point2> ToWorld(const std::vector<Point2>& px, const GridSpec& g) {
  std::vector<Point2> out;
  out.reserve(px.size());
  for (const Point2& p : px) out.push_back(g.PixelToWorld(p));
  return out;
}

}  // namespace

void FitConfig::Validate() const {
  if (iterations < 1) throw ValidationError("fit iterations must be >= 1");
  if (!(step_px > 0.0) || !std::isfinite(step_px)) {
    throw ValidationError("fit step must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("adam betas must lie in [0, 1)");
  }
  if (!(dice_weight >= 0.0) || !(direction_weight >= 0.0) ||
      dice_weight + direction_weight <= 0.0) {
    throw ValidationError("fit weights must be >= 0 with one positive");
  }
  if (convergence_window < 1) {
    throw ValidationError("convergence window must be >= 1");
  }
  if (snapshot_every < 0 || !(init_jitter_px >= 0.0)) {
    throw ValidationError("snapshot interval and jitter must be >= 0");
  }
}

SoftMask ToSoftMask(const BinaryMask& mask) {
  std::vector<double> values(mask.bits().begin(), mask.bits().end());
  return SoftMask(mask.grid(), std::move(values));
}

FitResult FitElement(const BinaryMask& target, const MapElement& init,
                     const FitConfig& config) {
  return FitElement(ToSoftMask(target), init, config);
}

FitResult FitElement(const SoftMask& target, const MapElement& init,
                     const FitConfig& config) {
  config.Validate();
  const GridSpec& grid = target.grid();
  const ElementKind kind = init.kind();

  std::vector<Point2> px;
  for (const Point2& p : init.points()) px.push_back(grid.WorldToPixel(p));
  if (config.init_jitter_px > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> jitter(-config.init_jitter_px,
                                                  config.init_jitter_px);
    for (Point2& p : px) {
      p.x += jitter(rng);
      p.y += jitter(rng);
    }
  }

  FitTrace trace;
  std::vector<Point2> best = px;
  double best_loss = std::numeric_limits<double>::infinity();
  AdamState adam(px.size(), config);

  for (int it = 0; it < config.iterations; ++it) {
    const std::vector<Point2> world = ToWorld(px, grid);
    const SoftMask rendered =
        RenderSoft(kind, world, grid, config.tau, config.raster);
    const DiceResult dice = DiceLoss(rendered, target);
    double loss = config.dice_weight * dice.loss;

    std::vector<double> upstream(dice.grad);
    for (double& g : upstream) g *= config.dice_weight;
    std::vector<Point2> grad =
        BackwardSoft(kind, world, grid, config.tau, upstream, config.raster)
            .per_point;
    if (config.direction_weight > 0.0 && kind == ElementKind::kLine) {
      const PointLoss dir = DirectionRegularization(px, config.direction_form);
      loss += config.direction_weight * dir.value;
      for (size_t i = 0; i < grad.size(); ++i) {
        grad[i] = grad[i] + config.direction_weight * dir.grad[i];
      }
    }

    trace.loss.push_back(loss);
    if (!std::isfinite(loss)) {
      throw FitError("fit loss became non-finite at iteration " +
                         std::to_string(it),
                     std::move(trace));
    }
    if (config.snapshot_every > 0 && it % config.snapshot_every == 0) {
      trace.snapshots.push_back({it, world});
    }
    if (loss < best_loss) {
      best_loss = loss;
      best = px;
      trace.best_iteration = it;
    }
    const int window = config.convergence_window;
    if (it + 1 >= 2 * window) {
      double previous = 0.0, current = 0.0;
      for (int k = 0; k < window; ++k) {
        current += trace.loss[it - k];
        previous += trace.loss[it - window - k];
      }
      if ((previous - current) / window < config.convergence_tolerance) {
        trace.converged = true;
        break;
      }
    }

    for (size_t i = 0; i < px.size(); ++i) {
      if (config.optimizer == Optimizer::kAdam) {
        px[i] = px[i] - adam.Step(i, grad[i]);
      } else {
        px[i] = px[i] - config.step_px * grad[i];
      }
    }
    adam.Advance();
  }

  return {init.WithPoints(ToWorld(best, grid)), best_loss, std::move(trace)};
}

}  // namespace maprast
