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

// Fits a vectorized element to a target mask using only gradients that flow
// back through the soft rasterizer: render, score with dice (plus optional
// direction regularization), backpropagate, update control points. The
// point count never changes. Steps are in pixel units.

#ifndef MAPRAST_FIT_H_
#define MAPRAST_FIT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "maprast/error.h"
#include "maprast/losses.h"
#include "maprast/map_element.h"
#include "maprast/rasterizer.h"

namespace maprast {

enum class Optimizer { kGradientDescent, kAdam };

struct FitConfig {
  int iterations = 1000;
  double step_px = 0.1;
  Optimizer optimizer = Optimizer::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  Softness tau;
  double dice_weight = 1.0;
  // Applied to line elements only.
  double direction_weight = 0.0;
  DirectionForm direction_form = DirectionForm::kOneMinusCosine;
  // Stop once the mean loss of the last `convergence_window` iterations
  // improves on the mean of the window before it by less than the tolerance.
  double convergence_tolerance = 1e-6;
  int convergence_window = 20;
  // Record control points every N iterations (0 disables).
  int snapshot_every = 0;
  // Seeded uniform jitter in [-init_jitter_px, init_jitter_px] applied to
  // the initial points.
  double init_jitter_px = 0.0;
  uint64_t seed = 0;
  RasterOptions raster;

  void Validate() const;
};

struct FitSnapshot {
  int iteration = 0;
  std::vector<Point2> points;  // World units.
};

struct FitTrace {
  std::vector<double> loss;  // One value per evaluated iteration.
  std::vector<FitSnapshot> snapshots;
  int best_iteration = 0;
  bool converged = false;
};

struct FitResult {
  MapElement element;  // Best-loss iterate.
  double best_loss = 0.0;
  FitTrace trace;
};

// Raised when the loss turns non-finite; carries the trace up to that point.
class FitError : public NumericError {
 public:
  FitError(const std::string& what, FitTrace trace)
      : NumericError(what), trace_(std::move(trace)) {}
  const FitTrace& trace() const { return trace_; }

 private:
  FitTrace trace_;
};

FitResult FitElement(const SoftMask& target, const MapElement& init,
                     const FitConfig& config);
// Binary targets are treated as 0/1 soft masks.
FitResult FitElement(const BinaryMask& target, const MapElement& init,
                     const FitConfig& config);

SoftMask ToSoftMask(const BinaryMask& mask);

}  // namespace maprast

#endif  // MAPRAST_FIT_H_
