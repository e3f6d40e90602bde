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

#include "maprast/rasterizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maprast/error.h"
#include "maprast/parallel.h"

namespace maprast {
namespace {

constexpr int kRowBlock = 8;
// Absorbs rounding in the pixel-space distance when testing the hard
// dilation radius.
constexpr double kHardRadiusSlack = 1e-9;

struct Segment {
  Point2 a;
  Point2 ab;
  double inv_len2;  // 0 for degenerate segments.
};

struct Nearest {
  double distance;
  size_t segment;
  double t;
  Point2 foot;
};

std::vector<Point2> ToPixelSpace(std::span<const Point2> points,
                                 const GridSpec& grid) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const Point2& p : points) {
    if (!IsFinite(p)) {
      throw ValidationError("control point has a non-finite coordinate");
    }
    out.push_back(grid.WorldToPixel(p));
  }
  return out;
}

std::vector<Segment> BuildSegments(std::span<const Point2> pts, bool closed) {
  std::vector<Segment> segs;
  const size_t n = pts.size();
  const size_t count = closed ? n : (n > 0 ? n - 1 : 0);
  segs.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % n];
    const Point2 ab = b - a;
    const double len2 = Dot(ab, ab);
    segs.push_back({a, ab, len2 > 0.0 ? 1.0 / len2 : 0.0});
  }
  return segs;
}

Nearest NearestSegment(Point2 q, const std::vector<Segment>& segs) {
  Nearest best{std::numeric_limits<double>::infinity(), 0, 0.0, {}};
  double best_d2 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    const Point2 aq = q - s.a;
    const double t = std::clamp(Dot(aq, s.ab) * s.inv_len2, 0.0, 1.0);
    const Point2 foot = s.a + t * s.ab;
    const Point2 diff = q - foot;
    const double d2 = Dot(diff, diff);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = {0.0, i, t, foot};
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Point2 PixelCenterPx(int row, int col) { return {col + 0.5, row + 0.5}; }

struct Box {
  double x0, x1, y0, y1;
};

Box BoundsOf(std::span<const Point2> pts, double margin) {
  Box b{std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity()};
  for (const Point2& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return {b.x0 - margin, b.x1 + margin, b.y0 - margin, b.y1 + margin};
}

// Column range [first, last) of pixel centers inside [x0, x1], clamped to
// the grid.
std::pair<int, int> ColumnRange(const Box& box, int width) {
  const double lo = std::ceil(box.x0 - 0.5);
  const double hi = std::floor(box.x1 - 0.5);
  const int first = static_cast<int>(std::clamp(lo, 0.0, double(width)));
  const int last = static_cast<int>(std::clamp(hi + 1.0, 0.0, double(width)));
  return {first, std::max(first, last)};
}

std::pair<int, int> RowRange(const Box& box, int height) {
  return ColumnRange({box.y0, box.y1, 0, 0}, height);
}

size_t NumBlocks(const GridSpec& grid) {
  return static_cast<size_t>((grid.height() + kRowBlock - 1) / kRowBlock);
}

void CheckUpstream(const GridSpec& grid, std::span<const double> upstream) {
  if (upstream.size() != grid.num_pixels()) {
    throw ValidationError("upstream gradient has " +
                          std::to_string(upstream.size()) +
                          " entries, grid has " +
                          std::to_string(grid.num_pixels()));
  }
}

enum class Shape { kLine, kPolygon };

// Segments in structure-of-arrays form so the per-pixel distance pass
// vectorizes.
struct SegmentTable {
  std::vector<double> ax, ay, abx, aby, inv_len2;
  size_t size() const { return ax.size(); }
};

SegmentTable BuildSegmentTable(const std::vector<Point2>& pts, bool closed) {
  SegmentTable table;
  for (const Segment& s : BuildSegments(pts, closed)) {
    table.ax.push_back(s.a.x);
    table.ay.push_back(s.a.y);
    table.abx.push_back(s.ab.x);
    table.aby.push_back(s.ab.y);
    table.inv_len2.push_back(s.inv_len2);
  }
  return table;
}

struct PixelSample {
  double value;
  double d_value_d_distance;
  double distance;
  size_t segment;
  double t;
  Point2 away;  // q minus the foot point.
};

// Per-row scratch space. Terms that depend only on the row are computed once
// in Begin(); Sample() then walks columns in increasing order.
struct RowState {
  explicit RowState(size_t num_segments)
      : ry(num_segments), dot_y(num_segments), d2(num_segments),
        t(num_segments) {}

  std::vector<double> ry, dot_y, d2, t;
  std::vector<double> crossings;
  size_t next_crossing = 0;
};

class SoftKernel {
 public:
  SoftKernel(Shape shape, std::span<const Point2> world, const GridSpec& grid,
             Softness tau, const RasterOptions& options)
      : shape_(shape),
        grid_(grid),
        tau_(tau.tau()),
        pixel_points_(ToPixelSpace(world, grid)) {
    if (pixel_points_.empty()) {
      throw ValidationError("cannot rasterize an element without points");
    }
    // A single point is treated as a zero-length segment.
    std::vector<Point2> chain = pixel_points_;
    if (chain.size() == 1) chain.push_back(chain[0]);
    segments_ = BuildSegmentTable(chain, shape == Shape::kPolygon &&
                                             pixel_points_.size() > 1);
    rows_ = {0, grid.height()};
    cull_ = options.cull && shape == Shape::kLine;
    if (cull_) {
      const double cutoff = tau_ * std::log(1.0 / options.cull_epsilon);
      box_ = BoundsOf(pixel_points_, cutoff);
      rows_ = RowRange(box_, grid.height());
    }
  }

  std::pair<int, int> columns() const {
    if (!cull_) return {0, grid_.width()};
    return ColumnRange(box_, grid_.width());
  }
  bool RowActive(int row) const { return row >= rows_.first && row < rows_.second; }

  RowState MakeRowState() const { return RowState(segments_.size()); }

  void Begin(int row, RowState& s) const {
    const double y = row + 0.5;
    for (size_t i = 0; i < segments_.size(); ++i) {
      s.ry[i] = y - segments_.ay[i];
      s.dot_y[i] = s.ry[i] * segments_.aby[i];
    }
    if (shape_ != Shape::kPolygon) return;
    // Even-odd crossings of the +x ray, matching PointInPolygonSign.
    s.crossings.clear();
    s.next_crossing = 0;
    const size_t n = pixel_points_.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 a = pixel_points_[j];
      const Point2 b = pixel_points_[i];
      if ((a.y > y) != (b.y > y)) {
        s.crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(s.crossings.begin(), s.crossings.end());
  }

  // Columns must be visited in increasing order after Begin().
  PixelSample Sample(int col, RowState& s) const {
    const double x = col + 0.5;
    const size_t m = segments_.size();
    const double* ax = segments_.ax.data();
    const double* abx = segments_.abx.data();
    const double* aby = segments_.aby.data();
    const double* inv = segments_.inv_len2.data();
    const double* ry = s.ry.data();
    const double* dot_y = s.dot_y.data();
    double* d2 = s.d2.data();
    double* t = s.t.data();
    for (size_t i = 0; i < m; ++i) {
      const double rx = x - ax[i];
      const double ti =
          std::min(1.0, std::max(0.0, (rx * abx[i] + dot_y[i]) * inv[i]));
      const double fx = rx - ti * abx[i];
      const double fy = ry[i] - ti * aby[i];
      d2[i] = fx * fx + fy * fy;
      t[i] = ti;
    }
    size_t best = 0;
    for (size_t i = 1; i < m; ++i) {
      if (d2[i] < d2[best]) best = i;
    }
    PixelSample out;
    out.segment = best;
    out.t = t[best];
    out.distance = std::sqrt(d2[best]);
    out.away = {x - ax[best] - t[best] * abx[best],
                ry[best] - t[best] * aby[best]};
    const double d = out.distance;
    if (shape_ == Shape::kLine) {
      out.value = std::exp(-d / tau_);
      out.d_value_d_distance = -out.value / tau_;
      return out;
    }
    while (s.next_crossing < s.crossings.size() &&
           s.crossings[s.next_crossing] <= x) {
      ++s.next_crossing;
    }
    const bool inside = (s.crossings.size() - s.next_crossing) % 2 == 1;
    const double sign = (inside || d == 0.0) ? 1.0 : -1.0;
    out.value = Sigmoid(sign * d / tau_);
    out.d_value_d_distance = sign * out.value * (1.0 - out.value) / tau_;
    return out;
  }

  size_t num_points() const { return pixel_points_.size(); }
  bool closed() const { return shape_ == Shape::kPolygon; }

 private:
  Shape shape_;
  const GridSpec& grid_;
  double tau_;
  std::vector<Point2> pixel_points_;
  SegmentTable segments_;
  bool cull_ = false;
  Box box_{};
  std::pair<int, int> rows_;
};

SoftMask RenderSoft(Shape shape, std::span<const Point2> world,
                    const GridSpec& grid, Softness tau,
                    const RasterOptions& options) {
  const SoftKernel kernel(shape, world, grid, tau, options);
  SoftMask mask(grid);
  std::span<double> out = mask.mutable_values();
  const auto [col0, col1] = kernel.columns();
  ParallelFor(NumBlocks(grid), options.workers, [&](size_t block) {
    const int row_end =
        std::min(grid.height(), static_cast<int>(block + 1) * kRowBlock);
    RowState state = kernel.MakeRowState();
    for (int row = static_cast<int>(block) * kRowBlock; row < row_end; ++row) {
      if (!kernel.RowActive(row)) continue;
      kernel.Begin(row, state);
      double* dst = out.data() + static_cast<size_t>(row) * grid.width();
      for (int col = col0; col < col1; ++col) {
        dst[col] = kernel.Sample(col, state).value;
      }
    }
  });
  return mask;
}

RasterGradient BackwardSoft(Shape shape, std::span<const Point2> world,
                            const GridSpec& grid, Softness tau,
                            std::span<const double> upstream,
                            const RasterOptions& options) {
  CheckUpstream(grid, upstream);
  const SoftKernel kernel(shape, world, grid, tau, options);
  const size_t n = kernel.num_points();
  const size_t blocks = NumBlocks(grid);
  const auto [col0, col1] = kernel.columns();
  // One partial gradient per row block, reduced in block order so the sum
  // is independent of the worker count.
  std::vector<std::vector<Point2>> partial(blocks, std::vector<Point2>(n));
  ParallelFor(blocks, options.workers, [&](size_t block) {
    std::vector<Point2>& acc = partial[block];
    const int row_end =
        std::min(grid.height(), static_cast<int>(block + 1) * kRowBlock);
    RowState state = kernel.MakeRowState();
    for (int row = static_cast<int>(block) * kRowBlock; row < row_end; ++row) {
      if (!kernel.RowActive(row)) continue;
      kernel.Begin(row, state);
      const double* up = upstream.data() + static_cast<size_t>(row) * grid.width();
      for (int col = col0; col < col1; ++col) {
        // Sampled even when the upstream is zero: polygon rows are walked in
        // column order.
        const PixelSample s = kernel.Sample(col, state);
        if (up[col] == 0.0 || s.distance == 0.0) continue;
        // dD/da = -(1 - t) * u, dD/db = -t * u with u the unit vector from
        // the foot point to q.
        const double scale = up[col] * s.d_value_d_distance / s.distance;
        const size_t ia = s.segment;
        const size_t ib = kernel.closed() ? (ia + 1) % n : std::min(ia + 1, n - 1);
        acc[ia] = acc[ia] - (scale * (1.0 - s.t)) * s.away;
        acc[ib] = acc[ib] - (scale * s.t) * s.away;
      }
    }
  });
  RasterGradient grad;
  grad.per_point.assign(n, Point2{});
  for (const std::vector<Point2>& acc : partial) {
    for (size_t i = 0; i < n; ++i) grad.per_point[i] = grad.per_point[i] + acc[i];
  }
  return grad;
}

bool SegmentHitsSquare(Point2 a, Point2 b, Point2 c, double r) {
  double t0 = 0.0, t1 = 1.0;
  const Point2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - (c.x - r), (c.x + r) - a.x, a.y - (c.y - r),
                       (c.y + r) - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

Softness::Softness(double tau) : tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ValidationError("softness tau must be positive and finite");
  }
}

SoftMask::SoftMask(GridSpec grid)
    : grid_(grid), values_(grid.num_pixels(), 0.0) {}

SoftMask::SoftMask(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.num_pixels()) {
    throw ValidationError("soft mask size does not match its grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("soft mask values must lie in [0, 1]");
    }
  }
}

BinaryMask::BinaryMask(GridSpec grid)
    : grid_(grid), bits_(grid.num_pixels(), 0) {}

size_t BinaryMask::Count() const {
  return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

SoftMask RenderLineSoft(std::span<const Point2> points, const GridSpec& grid,
                        Softness tau, const RasterOptions& options) {
  return RenderSoft(Shape::kLine, points, grid, tau, options);
}

SoftMask RenderLineSoft(const Polyline& line, const GridSpec& grid,
                        Softness tau, const RasterOptions& options) {
  return RenderSoft(Shape::kLine, line.points(), grid, tau, options);
}

SoftMask RenderPolygonSoft(std::span<const Point2> ring, const GridSpec& grid,
                           Softness tau, const RasterOptions& options) {
  return RenderSoft(Shape::kPolygon, ring, grid, tau, options);
}

SoftMask RenderPolygonSoft(const Polygon& poly, const GridSpec& grid,
                           Softness tau, const RasterOptions& options) {
  return RenderSoft(Shape::kPolygon, poly.vertices(), grid, tau, options);
}

RasterGradient BackwardLineSoft(std::span<const Point2> points,
                                const GridSpec& grid, Softness tau,
                                std::span<const double> upstream,
                                const RasterOptions& options) {
  return BackwardSoft(Shape::kLine, points, grid, tau, upstream, options);
}

RasterGradient BackwardLineSoft(const Polyline& line, const GridSpec& grid,
                                Softness tau, std::span<const double> upstream,
                                const RasterOptions& options) {
  return BackwardSoft(Shape::kLine, line.points(), grid, tau, upstream,
                      options);
}

RasterGradient BackwardPolygonSoft(std::span<const Point2> ring,
                                   const GridSpec& grid, Softness tau,
                                   std::span<const double> upstream,
                                   const RasterOptions& options) {
  return BackwardSoft(Shape::kPolygon, ring, grid, tau, upstream, options);
}

RasterGradient BackwardPolygonSoft(const Polygon& poly, const GridSpec& grid,
                                   Softness tau,
                                   std::span<const double> upstream,
                                   const RasterOptions& options) {
  return BackwardSoft(Shape::kPolygon, poly.vertices(), grid, tau, upstream,
                      options);
}

BinaryMask RenderLineHard(std::span<const Point2> points, const GridSpec& grid,
                          int dilation_px, DilationKernel kernel) {
  if (dilation_px < 0) throw ValidationError("dilation must be >= 0");
  const std::vector<Point2> px = ToPixelSpace(points, grid);
  BinaryMask mask(grid);
  if (px.empty()) return mask;
  const double radius = dilation_px + 0.5 + kHardRadiusSlack;
  const Box box = BoundsOf(px, radius);
  const auto [row0, row1] = RowRange(box, grid.height());
  const auto [col0, col1] = ColumnRange(box, grid.width());
  const std::vector<Segment> segs = BuildSegments(px, /*closed=*/false);
  for (int row = row0; row < row1; ++row) {
    for (int col = col0; col < col1; ++col) {
      const Point2 q = PixelCenterPx(row, col);
      bool hit = false;
      if (kernel == DilationKernel::kDisk) {
        const double d = segs.empty() ? Norm(q - px[0])
                                      : NearestSegment(q, segs).distance;
        hit = d <= radius;
      } else if (segs.empty()) {
        hit = SegmentHitsSquare(px[0], px[0], q, radius);
      } else {
        for (size_t i = 0; i + 1 < px.size() && !hit; ++i) {
          hit = SegmentHitsSquare(px[i], px[i + 1], q, radius);
        }
      }
      if (hit) mask.set(row, col);
    }
  }
  return mask;
}

BinaryMask RenderLineHard(const Polyline& line, const GridSpec& grid,
                          int dilation_px, DilationKernel kernel) {
  return RenderLineHard(line.points(), grid, dilation_px, kernel);
}

BinaryMask RenderPolygonHard(std::span<const Point2> ring,
                             const GridSpec& grid) {
  const std::vector<Point2> px = ToPixelSpace(ring, grid);
  BinaryMask mask(grid);
  if (px.size() < 3) return mask;
  const Box box = BoundsOf(px, 0.0);
  const auto [row0, row1] = RowRange(box, grid.height());
  const auto [col0, col1] = ColumnRange(box, grid.width());
  for (int row = row0; row < row1; ++row) {
    for (int col = col0; col < col1; ++col) {
      if (PointInPolygonSign(PixelCenterPx(row, col), px) > 0) {
        mask.set(row, col);
      }
    }
  }
  return mask;
}

BinaryMask RenderPolygonHard(const Polygon& poly, const GridSpec& grid) {
  return RenderPolygonHard(poly.vertices(), grid);
}

}  // namespace maprast
