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

// Soft (differentiable) and hard (binary) rasterization of polylines and
// polygons onto a GridSpec.
//
// All soft rasterization happens in pixel units: element coordinates are
// mapped through GridSpec::WorldToPixel before distances are measured, so
// the softness tau is relative to the pixel pitch rather than to meters.
// Gradients returned by the backward passes are likewise with respect to
// control-point coordinates in pixel units.
//
//   line:    I(q) = exp(-D(q) / tau)
//   polygon: I(q) = sigmoid(C(q) * D(q) / tau),  C = +1 inside, -1 outside
//
// where D is the distance from pixel center q to the nearest segment.

#ifndef MAPRAST_RASTERIZER_H_
#define MAPRAST_RASTERIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "maprast/geometry.h"

namespace maprast {

// Rasterization temperature in pixel units; must be positive and finite.
class Softness {
 public:
  static constexpr double kDefaultTau = 2.0;

  Softness() = default;
  explicit Softness(double tau);

  double tau() const { return tau_; }

 private:
  double tau_ = kDefaultTau;
};

// Real-valued H x W mask, row-major with row 0 at y_min.
class SoftMask {
 public:
  explicit SoftMask(GridSpec grid);
  // Throws ValidationError if the size mismatches or a value is outside
  // [0, 1].
  SoftMask(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  double at(int row, int col) const {
    return values_[static_cast<size_t>(row) * grid_.width() + col];
  }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

class BinaryMask {
 public:
  explicit BinaryMask(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const uint8_t> bits() const { return bits_; }
  bool at(int row, int col) const {
    return bits_[static_cast<size_t>(row) * grid_.width() + col] != 0;
  }
  void set(int row, int col, bool value = true) {
    bits_[static_cast<size_t>(row) * grid_.width() + col] = value ? 1 : 0;
  }
  size_t Count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  GridSpec grid_;
  std::vector<uint8_t> bits_;
};

// d(loss)/d(control point), one entry per control point, in loss units per
// pixel unit.
struct RasterGradient {
  std::vector<Point2> per_point;
};

enum class DilationKernel {
  kDisk,    // Euclidean distance threshold.
  kSquare,  // Chebyshev distance threshold.
};

struct RasterOptions {
  // Worker threads for per-pixel work. Results are bit-identical for any
  // value.
  int workers = 1;
  // Skip line pixels beyond tau * ln(1 / cull_epsilon) of the element's
  // bounding box; skipped pixels are written as 0 and get no gradient.
  bool cull = false;
  double cull_epsilon = 1e-6;
};

// Soft line rendering. The span overloads accept raw world-space control
// points (consecutive duplicates allowed) and are what the optimizer uses.
SoftMask RenderLineSoft(std::span<const Point2> points, const GridSpec& grid,
                        Softness tau, const RasterOptions& options = {});
SoftMask RenderLineSoft(const Polyline& line, const GridSpec& grid,
                        Softness tau, const RasterOptions& options = {});

SoftMask RenderPolygonSoft(std::span<const Point2> ring, const GridSpec& grid,
                           Softness tau, const RasterOptions& options = {});
SoftMask RenderPolygonSoft(const Polygon& poly, const GridSpec& grid,
                           Softness tau, const RasterOptions& options = {});

// Backward passes: `upstream` holds dL/dI per pixel (row-major, H*W).
// Throws ValidationError on a size mismatch. The argmin segment and the
// inside/outside sign are treated as locally constant; pixels lying exactly
// on the element (D == 0) contribute no gradient.
RasterGradient BackwardLineSoft(std::span<const Point2> points,
                                const GridSpec& grid, Softness tau,
                                std::span<const double> upstream,
                                const RasterOptions& options = {});
RasterGradient BackwardLineSoft(const Polyline& line, const GridSpec& grid,
                                Softness tau, std::span<const double> upstream,
                                const RasterOptions& options = {});

RasterGradient BackwardPolygonSoft(std::span<const Point2> ring,
                                   const GridSpec& grid, Softness tau,
                                   std::span<const double> upstream,
                                   const RasterOptions& options = {});
RasterGradient BackwardPolygonSoft(const Polygon& poly, const GridSpec& grid,
                                   Softness tau,
                                   std::span<const double> upstream,
                                   const RasterOptions& options = {});

// Marks pixels whose center lies within (dilation_px + 0.5) pixels of the
// line: a one-pixel supercover stroke grown by `dilation_px` on each side.
BinaryMask RenderLineHard(std::span<const Point2> points, const GridSpec& grid,
                          int dilation_px,
                          DilationKernel kernel = DilationKernel::kDisk);
BinaryMask RenderLineHard(const Polyline& line, const GridSpec& grid,
                          int dilation_px,
                          DilationKernel kernel = DilationKernel::kDisk);

// Marks pixels whose center is inside (even-odd) or on the polygon.
BinaryMask RenderPolygonHard(std::span<const Point2> ring,
                             const GridSpec& grid);
BinaryMask RenderPolygonHard(const Polygon& poly, const GridSpec& grid);

}  // namespace maprast

#endif  // MAPRAST_RASTERIZER_H_
