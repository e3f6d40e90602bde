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

#ifndef MAPRAST_MAP_ELEMENT_H_
#define MAPRAST_MAP_ELEMENT_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "maprast/geometry.h"
#include "maprast/rasterizer.h"

namespace maprast {

enum class ElementKind { kLine, kPolygon };

std::string_view KindName(ElementKind kind);

// A classed vectorized map element: a polyline (dividers, boundaries) or a
// polygon (crossings, intersections).
class MapElement {
 public:
  MapElement(size_t class_id, Polyline line)
      : class_id_(class_id), geometry_(std::move(line)) {}
  MapElement(size_t class_id, Polygon polygon)
      : class_id_(class_id), geometry_(std::move(polygon)) {}

  // Builds the geometry matching `kind`; throws ValidationError on invalid
  // point sets.
  static MapElement Make(size_t class_id, ElementKind kind,
                         std::vector<Point2> points);

  size_t class_id() const { return class_id_; }
  ElementKind kind() const {
    return std::holds_alternative<Polyline>(geometry_) ? ElementKind::kLine
                                                       : ElementKind::kPolygon;
  }
  std::span<const Point2> points() const;
  const Polyline& line() const { return std::get<Polyline>(geometry_); }
  const Polygon& polygon() const { return std::get<Polygon>(geometry_); }
  size_t num_deduplicated() const;

  // Same class and kind with new control points.
  MapElement WithPoints(std::vector<Point2> points) const {
    return Make(class_id_, kind(), std::move(points));
  }

 private:
  size_t class_id_;
  std::variant<Polyline, Polygon> geometry_;
};

// Kind-dispatched rasterization over raw control points.
SoftMask RenderSoft(ElementKind kind, std::span<const Point2> points,
                    const GridSpec& grid, Softness tau,
                    const RasterOptions& options = {});
RasterGradient BackwardSoft(ElementKind kind, std::span<const Point2> points,
                            const GridSpec& grid, Softness tau,
                            std::span<const double> upstream,
                            const RasterOptions& options = {});

SoftMask RenderSoft(const MapElement& element, const GridSpec& grid,
                    Softness tau, const RasterOptions& options = {});
// Lines are dilated by `line_dilation_px`; polygons are filled.
BinaryMask RenderHard(const MapElement& element, const GridSpec& grid,
                      int line_dilation_px,
                      DilationKernel kernel = DilationKernel::kDisk);

// Equidistant resampling that respects the element kind: open chains keep
// both endpoints, closed rings are sampled around the perimeter.
std::vector<Point2> ResampleElement(ElementKind kind,
                                    std::span<const Point2> points, size_t n);

}  // namespace maprast

#endif  // MAPRAST_MAP_ELEMENT_H_
