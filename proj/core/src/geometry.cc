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

#include "maprast/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "maprast/error.h"

namespace maprast {
namespace {

constexpr double kMinPolygonArea = 1e-9;

void CheckFinite(std::span<const Point2> points, const char* what) {
  for (size_t i = 0; i < points.size(); ++i) {
    if (!IsFinite(points[i])) {
      throw ValidationError(std::string(what) + " point " + std::to_string(i) +
                            " has a non-finite coordinate");
    }
  }
}

size_t DropConsecutiveDuplicates(std::vector<Point2>& points) {
  const size_t before = points.size();
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return before - points.size();
}

double SignedAreaOf(std::span<const Point2> ring) {
  double twice = 0.0;
  for (size_t i = 0; i < ring.size(); ++i) {
    twice += Cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * twice;
}

// Cumulative arc length; cum[0] == 0.
std::vector<double> CumulativeLength(std::span<const Point2> points) {
  std::vector<double> cum(points.size(), 0.0);
  for (size_t i = 1; i < points.size(); ++i) {
    cum[i] = cum[i - 1] + Norm(points[i] - points[i - 1]);
  }
  return cum;
}

Point2 PointAtArcLength(std::span<const Point2> points,
                        const std::vector<double>& cum, double s) {
  auto it = std::upper_bound(cum.begin(), cum.end(), s);
  size_t hi = static_cast<size_t>(it - cum.begin());
  if (hi == 0) return points.front();
  if (hi >= cum.size()) return points.back();
  const size_t lo = hi - 1;
  const double seg = cum[hi] - cum[lo];
  const double t = seg > 0.0 ? (s - cum[lo]) / seg : 0.0;
  return points[lo] + t * (points[hi] - points[lo]);
}

}  // namespace

double Dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double Norm(Point2 p) { return std::hypot(p.x, p.y); }
bool IsFinite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points)) {
  CheckFinite(points_, "polyline");
  num_deduplicated_ = DropConsecutiveDuplicates(points_);
  if (points_.size() < 2) {
    throw ValidationError("polyline requires >= 2 distinct points");
  }
}

double Polyline::Length() const { return CumulativeLength(points_).back(); }

Polyline Polyline::Reversed() const {
  return Polyline(std::vector<Point2>(points_.rbegin(), points_.rend()));
}

Polyline Polyline::Translated(Point2 offset) const {
  std::vector<Point2> moved(points_);
  for (Point2& p : moved) p = p + offset;
  return Polyline(std::move(moved));
}

Polygon::Polygon(std::vector<Point2> vertices)
    : vertices_(std::move(vertices)) {
  CheckFinite(vertices_, "polygon");
  num_deduplicated_ = DropConsecutiveDuplicates(vertices_);
  while (vertices_.size() > 1 && vertices_.back() == vertices_.front()) {
    vertices_.pop_back();
    ++num_deduplicated_;
  }
  if (vertices_.size() < 3) {
    throw ValidationError("polygon requires >= 3 vertices");
  }
  if (std::abs(SignedAreaOf(vertices_)) <= kMinPolygonArea) {
    throw ValidationError("polygon has (near) zero area");
  }
}

double Polygon::SignedArea() const { return SignedAreaOf(vertices_); }

double Polygon::Perimeter() const {
  double total = 0.0;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    total += Norm(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  }
  return total;
}

Polygon Polygon::Translated(Point2 offset) const {
  std::vector<Point2> moved(vertices_);
  for (Point2& p : moved) p = p + offset;
  return Polygon(std::move(moved));
}

GridSpec::GridSpec(double x_min, double x_max, double y_min, double y_max,
                   int width, int height)
    : x_min_(x_min),
      x_max_(x_max),
      y_min_(y_min),
      y_max_(y_max),
      width_(width),
      height_(height) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
        std::isfinite(y_max))) {
    throw ValidationError("grid extent must be finite");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw ValidationError("grid extent must satisfy min < max on both axes");
  }
  if (width < 1 || height < 1) {
    throw ValidationError("grid width and height must be >= 1");
  }
}

Point2 GridSpec::WorldToPixel(Point2 world) const {
  return {(world.x - x_min_) / dx(), (world.y - y_min_) / dy()};
}

Point2 GridSpec::PixelToWorld(Point2 pixel) const {
  return {x_min_ + pixel.x * dx(), y_min_ + pixel.y * dy()};
}

SegmentProjection ProjectOntoSegment(Point2 q, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = Dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(Dot(q - a, ab) / len2, 0.0, 1.0);
  }
  const Point2 foot = a + t * ab;
  return {t, Norm(q - foot)};
}

double PointSegmentDistance(Point2 q, Point2 a, Point2 b) {
  return ProjectOntoSegment(q, a, b).distance;
}

ChainDistance OpenChainDistance(Point2 q, std::span<const Point2> points) {
  if (points.size() == 1) return {Norm(q - points[0]), 0, 0.0};
  ChainDistance best{std::numeric_limits<double>::infinity(), 0, 0.0};
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const SegmentProjection p = ProjectOntoSegment(q, points[i], points[i + 1]);
    if (p.distance < best.distance) best = {p.distance, i, p.t};
  }
  return best;
}

ChainDistance ClosedChainDistance(Point2 q, std::span<const Point2> points) {
  ChainDistance best{std::numeric_limits<double>::infinity(), 0, 0.0};
  const size_t n = points.size();
  for (size_t i = 0; i < n; ++i) {
    const SegmentProjection p =
        ProjectOntoSegment(q, points[i], points[(i + 1) % n]);
    if (p.distance < best.distance) best = {p.distance, i, p.t};
  }
  return best;
}

ChainDistance PolylineDistance(Point2 q, const Polyline& line) {
  return OpenChainDistance(q, line.points());
}

double PolygonBoundaryDistance(Point2 q, const Polygon& poly) {
  return ClosedChainDistance(q, poly.vertices()).distance;
}

int PointInPolygonSign(Point2 q, std::span<const Point2> ring) {
  const size_t n = ring.size();
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[j];
    const Point2 b = ring[i];
    // Boundary points count as inside.
    if (Cross(b - a, q - a) == 0.0 && Dot(q - a, q - b) <= 0.0) return +1;
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x_cross) inside = !inside;
    }
  }
  return inside ? +1 : -1;
}

int PointInPolygonSign(Point2 q, const Polygon& poly) {
  return PointInPolygonSign(q, poly.vertices());
}

std::vector<Point2> ResampleEquidistant(std::span<const Point2> points,
                                        size_t n) {
  if (n < 2) throw ValidationError("resampling requires n >= 2");
  if (points.empty()) throw ValidationError("cannot resample an empty chain");
  const std::vector<double> cum = CumulativeLength(points);
  const double total = cum.back();
  std::vector<Point2> out;
  out.reserve(n);
  out.push_back(points.front());
  for (size_t k = 1; k + 1 < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
    out.push_back(PointAtArcLength(points, cum, s));
  }
  out.push_back(points.back());
  return out;
}

Polyline ResampleEquidistant(const Polyline& line, size_t n) {
  return Polyline(ResampleEquidistant(line.points(), n));
}

std::vector<Point2> ResampleClosedEquidistant(std::span<const Point2> ring,
                                              size_t n) {
  if (n < 1) throw ValidationError("resampling requires n >= 1");
  if (ring.empty()) throw ValidationError("cannot resample an empty ring");
  std::vector<Point2> closed(ring.begin(), ring.end());
  closed.push_back(ring.front());
  const std::vector<double> cum = CumulativeLength(closed);
  const double total = cum.back();
  std::vector<Point2> out;
  out.reserve(n);
  out.push_back(ring.front());
  for (size_t k = 1; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    out.push_back(PointAtArcLength(closed, cum, s));
  }
  return out;
}

Point2 PixelCenter(const GridSpec& grid, int row, int col) {
  if (row < 0 || row >= grid.height() || col < 0 || col >= grid.width()) {
    throw std::out_of_range("pixel (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside grid");
  }
  return {grid.x_min() + (col + 0.5) * grid.dx(),
          grid.y_min() + (row + 0.5) * grid.dy()};
}

}  // namespace maprast
