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

#include "maprast/map_element.h"

namespace maprast {

std::string_view KindName(ElementKind kind) {
  return kind == ElementKind::kLine ? "line" : "polygon";
}

MapElement MapElement::Make(size_t class_id, ElementKind kind,
                            std::vector<Point2> points) {
  if (kind == ElementKind::kLine) {
    return MapElement(class_id, Polyline(std::move(points)));
  }
  return MapElement(class_id, Polygon(std::move(points)));
}

std::span<const Point2> MapElement::points() const {
  if (const auto* line = std::get_if<Polyline>(&geometry_)) {
    return line->points();
  }
  return std::get<Polygon>(geometry_).vertices();
}

size_t MapElement::num_deduplicated() const {
  if (const auto* line = std::get_if<Polyline>(&geometry_)) {
    return line->num_deduplicated();
  }
  return std::get<Polygon>(geometry_).num_deduplicated();
}

SoftMask RenderSoft(ElementKind kind, std::span<const Point2> points,
                    const GridSpec& grid, Softness tau,
                    const RasterOptions& options) {
  return kind == ElementKind::kLine
             ? RenderLineSoft(points, grid, tau, options)
             : RenderPolygonSoft(points, grid, tau, options);
}

RasterGradient BackwardSoft(ElementKind kind, std::span<const Point2> points,
                            const GridSpec& grid, Softness tau,
                            std::span<const double> upstream,
                            const RasterOptions& options) {
  return kind == ElementKind::kLine
             ? BackwardLineSoft(points, grid, tau, upstream, options)
             : BackwardPolygonSoft(points, grid, tau, upstream, options);
}

SoftMask RenderSoft(const MapElement& element, const GridSpec& grid,
                    Softness tau, const RasterOptions& options) {
  return RenderSoft(element.kind(), element.points(), grid, tau, options);
}

BinaryMask RenderHard(const MapElement& element, const GridSpec& grid,
                      int line_dilation_px, DilationKernel kernel) {
  if (element.kind() == ElementKind::kLine) {
    return RenderLineHard(element.points(), grid, line_dilation_px, kernel);
  }
  return RenderPolygonHard(element.points(), grid);
}

std::vector<Point2> ResampleElement(ElementKind kind,
                                    std::span<const Point2> points, size_t n) {
  return kind == ElementKind::kLine ? ResampleEquidistant(points, n)
                                    : ResampleClosedEquidistant(points, n);
}

}  // namespace maprast
