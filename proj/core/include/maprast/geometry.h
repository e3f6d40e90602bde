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

// Planar geometry kernels: point/segment distances, polygon containment,
// arc-length resampling and the pixel grid used by every rasterizer.

#ifndef MAPRAST_GEOMETRY_H_
#define MAPRAST_GEOMETRY_H_

#include <cstddef>
#include <span>
#include <vector>

namespace maprast {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

double Dot(Point2 a, Point2 b);
double Cross(Point2 a, Point2 b);
double Norm(Point2 p);
bool IsFinite(Point2 p);

// Open polyline with at least two distinct consecutive points. Consecutive
// duplicates are dropped on construction; throws ValidationError if fewer
// than two points remain or a coordinate is not finite.
class Polyline {
 public:
  explicit Polyline(std::vector<Point2> points);

  std::span<const Point2> points() const { return points_; }
  size_t size() const { return points_.size(); }
  const Point2& operator[](size_t i) const { return points_[i]; }
  // Number of input points removed as consecutive duplicates.
  size_t num_deduplicated() const { return num_deduplicated_; }

  double Length() const;
  Polyline Reversed() const;
  Polyline Translated(Point2 offset) const;

 private:
  std::vector<Point2> points_;
  size_t num_deduplicated_ = 0;
};

// Implicitly closed polygon. Consecutive duplicates (including a repeated
// first vertex at the end) are dropped; requires >= 3 vertices and
// |signed area| > 1e-9.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  size_t size() const { return vertices_.size(); }
  const Point2& operator[](size_t i) const { return vertices_[i]; }
  size_t num_deduplicated() const { return num_deduplicated_; }

  double SignedArea() const;
  double Perimeter() const;
  Polygon Translated(Point2 offset) const;

 private:
  std::vector<Point2> vertices_;
  size_t num_deduplicated_ = 0;
};

// Axis-aligned raster domain. Row 0 lies along y_min, column 0 along x_min.
// Pixel centers sit at half-integer offsets.
class GridSpec {
 public:
  GridSpec(double x_min, double x_max, double y_min, double y_max, int width,
           int height);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  int width() const { return width_; }
  int height() const { return height_; }
  size_t num_pixels() const {
    return static_cast<size_t>(width_) * static_cast<size_t>(height_);
  }
  double dx() const { return (x_max_ - x_min_) / width_; }
  double dy() const { return (y_max_ - y_min_) / height_; }

  // World (meters) to continuous pixel coordinates, where pixel (row, col)
  // has its center at (col + 0.5, row + 0.5).
  Point2 WorldToPixel(Point2 world) const;
  Point2 PixelToWorld(Point2 pixel) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  int width_, height_;
};

// Closest point of segment [a, b] to q, as a segment parameter and distance.
struct SegmentProjection {
  double t = 0.0;
  double distance = 0.0;
};

SegmentProjection ProjectOntoSegment(Point2 q, Point2 a, Point2 b);
double PointSegmentDistance(Point2 q, Point2 a, Point2 b);

// Minimum distance to a chain of segments plus the index of the minimizing
// segment; the lowest index wins ties.
struct ChainDistance {
  double distance = 0.0;
  size_t segment = 0;
  double t = 0.0;
};

// `points` is treated as an open chain (size - 1 segments). A single point
// degenerates to the point distance.
ChainDistance OpenChainDistance(Point2 q, std::span<const Point2> points);
// `points` is treated as a closed ring; segment i joins i and (i+1) % n.
ChainDistance ClosedChainDistance(Point2 q, std::span<const Point2> points);

ChainDistance PolylineDistance(Point2 q, const Polyline& line);
double PolygonBoundaryDistance(Point2 q, const Polygon& poly);

// Even-odd containment: +1 inside or on the boundary, -1 outside.
int PointInPolygonSign(Point2 q, std::span<const Point2> ring);
int PointInPolygonSign(Point2 q, const Polygon& poly);

// n points at equal arc-length spacing with both endpoints kept exactly.
// Throws ValidationError for n < 2.
std::vector<Point2> ResampleEquidistant(std::span<const Point2> points,
                                        size_t n);
Polyline ResampleEquidistant(const Polyline& line, size_t n);
// n points at equal spacing along the closed boundary starting at vertex 0;
// the closing duplicate of vertex 0 is not emitted.
std::vector<Point2> ResampleClosedEquidistant(std::span<const Point2> ring,
                                              size_t n);

// Center of pixel (row, col) in meters. Throws std::out_of_range.
Point2 PixelCenter(const GridSpec& grid, int row, int col);

}  // namespace maprast

#endif  // MAPRAST_GEOMETRY_H_
