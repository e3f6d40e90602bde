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

// Shared scenes and harnesses for unit and acceptance tests.

#ifndef MAPRAST_TESTS_FIXTURES_H_
#define MAPRAST_TESTS_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "maprast/fit.h"
#include "maprast/geometry.h"
#include "maprast/map_element.h"
#include "maprast/metrics.h"
#include "maprast/rasterizer.h"
#include "oracles.h"

namespace maprast::fixtures {

inline constexpr size_t kDivider = 0;
inline constexpr size_t kStopLine = 1;
inline constexpr size_t kPedCrossing = 2;

inline Vocabulary DefaultVocabulary() {
  return {{"divider", ElementKind::kLine},
          {"stop_line", ElementKind::kLine},
          {"ped_crossing", ElementKind::kPolygon}};
}

inline MapElement Line(size_t class_id, std::vector<Point2> pts) {
  return MapElement(class_id, Polyline(std::move(pts)));
}

inline MapElement Poly(size_t class_id, std::vector<Point2> pts) {
  return MapElement(class_id, Polygon(std::move(pts)));
}

// Evaluation-quality cases. `chamfer_match` is the expected judgment at a
// 1.0 m chamfer threshold, `raster_match` the expected judgment at every
// default line IoU threshold.
struct JudgmentCase {
  std::string name;
  MapElement gt;
  MapElement pred;
  bool chamfer_match;
  bool raster_match;
};

// Stopline of length `length` with a prediction of the same length rotated
// 90 degrees about the shared midpoint.
inline JudgmentCase PerpendicularStopline(double length) {
  const double h = length / 2.0;
  return {"perpendicular_stopline",
          Line(kStopLine, {{-h, 10.0}, {h, 10.0}}),
          Line(kStopLine, {{0.0, 10.0 - h}, {0.0, 10.0 + h}}), true, false};
}

inline std::vector<JudgmentCase> JudgmentCases() {
  return {
      PerpendicularStopline(2.0),
      {"lateral_shift", Line(kDivider, {{3.0, -25.0}, {3.0, 25.0}}),
       Line(kDivider, {{3.9, -25.0}, {3.9, 25.0}}), true, false},
      {"truncation", Line(kDivider, {{-3.0, -20.0}, {-3.0, 20.0}}),
       Line(kDivider, {{-3.0, -20.0}, {-3.0, 4.0}}), false, true},
      {"local_kink", Line(kDivider, {{6.0, -15.0}, {6.0, 15.0}}),
       Line(kDivider,
            {{6.0, -15.0}, {6.0, -5.0}, {6.8, -3.0}, {6.8, 15.0}}),
       true, false},
  };
}

// Direct computation of the raster IoU: per-pixel distance threshold of
// (dilation + 0.5) pixels for lines, even-odd containment for polygons.
inline std::vector<uint8_t> OracleHardMask(const MapElement& e,
                                           const GridSpec& g, int dilation) {
  std::vector<Point2> pts(e.points().begin(), e.points().end());
  std::vector<uint8_t> bits(g.num_pixels());
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      const oracle::Xy q = oracle::PixelCenterMeters(
          g.x_min(), g.x_max(), g.y_min(), g.y_max(), g.width(), g.height(),
          r, c);
      bool on;
      if (e.kind() == ElementKind::kLine) {
        // Pixel-space distance, so anisotropic pitches are honored.
        std::vector<Point2> px;
        for (const Point2& p : pts) {
          px.push_back({(p.x - g.x_min()) / g.dx(), (p.y - g.y_min()) / g.dy()});
        }
        on = oracle::ChainDistance(c + 0.5, r + 0.5, px, false) <=
             dilation + 0.5 + 1e-9;
      } else {
        on = oracle::ChainDistance(q.x, q.y, pts, true) == 0.0 ||
             oracle::RayCrossingSign(q.x, q.y, pts) > 0;
      }
      bits[static_cast<size_t>(r) * g.width() + c] = on ? 1 : 0;
    }
  }
  return bits;
}

inline double OracleIou(const std::vector<uint8_t>& a,
                        const std::vector<uint8_t>& b) {
  size_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

// Arc-length resampling written independently of the library.
inline std::vector<Point2> OracleResample(const std::vector<Point2>& pts,
                                          size_t n) {
  std::vector<double> cum{0.0};
  for (size_t i = 1; i < pts.size(); ++i) {
    cum.push_back(cum.back() + std::hypot(pts[i].x - pts[i - 1].x,
                                          pts[i].y - pts[i - 1].y));
  }
  std::vector<Point2> out;
  size_t seg = 0;
  for (size_t k = 0; k < n; ++k) {
    const double s = cum.back() * k / (n - 1);
    while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0 ? (s - cum[seg]) / len : 0.0;
    out.push_back({pts[seg].x + t * (pts[seg + 1].x - pts[seg].x),
                   pts[seg].y + t * (pts[seg + 1].y - pts[seg].y)});
  }
  return out;
}

inline double OracleChamfer(const MapElement& a, const MapElement& b,
                            size_t n) {
  std::vector<Point2> pa(a.points().begin(), a.points().end());
  std::vector<Point2> pb(b.points().begin(), b.points().end());
  return oracle::BruteForceChamfer(OracleResample(pa, n),
                                   OracleResample(pb, n));
}

// Random elements in pixel coordinates of a w x h grid.
inline std::vector<Point2> RandomWalkLine(std::mt19937_64& rng, size_t n,
                                          double w, double h) {
  std::uniform_real_distribution<double> start_x(0.2 * w, 0.8 * w);
  std::uniform_real_distribution<double> start_y(0.2 * h, 0.8 * h);
  std::uniform_real_distribution<double> step(3.0, 10.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Point2> pts{{start_x(rng), start_y(rng)}};
  while (pts.size() < n) {
    const double a = angle(rng), s = step(rng);
    Point2 p{pts.back().x + s * std::cos(a), pts.back().y + s * std::sin(a)};
    p.x = std::clamp(p.x, 2.0, w - 2.0);
    p.y = std::clamp(p.y, 2.0, h - 2.0);
    if (std::hypot(p.x - pts.back().x, p.y - pts.back().y) < 1.0) continue;
    pts.push_back(p);
  }
  return pts;
}

inline std::vector<Point2> RandomStarPolygon(std::mt19937_64& rng, size_t n,
                                             double w, double h) {
  std::uniform_real_distribution<double> cx(0.35 * w, 0.65 * w);
  std::uniform_real_distribution<double> cy(0.35 * h, 0.65 * h);
  std::uniform_real_distribution<double> radius(0.08 * std::min(w, h),
                                                0.3 * std::min(w, h));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> angles(n);
  for (double& a : angles) a = angle(rng);
  std::sort(angles.begin(), angles.end());
  const Point2 c{cx(rng), cy(rng)};
  std::vector<Point2> pts;
  for (double a : angles) {
    const double r = radius(rng);
    pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return pts;
}

inline std::vector<Point2> PixelsToWorld(const std::vector<Point2>& px,
                                         const GridSpec& g) {
  std::vector<Point2> out;
  for (const Point2& p : px) {
    out.push_back({g.x_min() + p.x * g.dx(), g.y_min() + p.y * g.dy()});
  }
  return out;
}

// Pixels where D is not smooth enough for a central difference: within
// `near_margin` px of the element, or with a competing segment whose
// distance is within `tie_margin` px and whose foot is not the same shared
// vertex.
inline std::vector<uint8_t> TieLocusMask(ElementKind kind,
                                         const std::vector<Point2>& px,
                                         int width, int height,
                                         double tie_margin,
                                         double near_margin) {
  const bool closed = kind == ElementKind::kPolygon;
  const size_t n = px.size();
  const size_t segs = closed ? n : n - 1;
  std::vector<uint8_t> mask(static_cast<size_t>(width) * height);
  std::vector<double> d(segs), t(segs);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double qx = c + 0.5, qy = r + 0.5;
      size_t best = 0;
      for (size_t i = 0; i < segs; ++i) {
        const Point2& a = px[i];
        const Point2& b = px[(i + 1) % n];
        const double ux = b.x - a.x, uy = b.y - a.y;
        const double uu = ux * ux + uy * uy;
        double ti = uu == 0 ? 0 : ((qx - a.x) * ux + (qy - a.y) * uy) / uu;
        t[i] = std::clamp(ti, 0.0, 1.0);
        d[i] = oracle::SegmentDistance(qx, qy, a.x, a.y, b.x, b.y);
        if (d[i] < d[best]) best = i;
      }
      bool tie = d[best] < near_margin;
      auto foot_vertex = [&](size_t i) -> const Point2* {
        if (t[i] == 0.0) return &px[i];
        if (t[i] == 1.0) return &px[(i + 1) % n];
        return nullptr;
      };
      for (size_t i = 0; i < segs && !tie; ++i) {
        if (i == best || d[i] - d[best] >= tie_margin) continue;
        const Point2* vb = foot_vertex(best);
        const Point2* vi = foot_vertex(i);
        tie = vb == nullptr || vi == nullptr || !(*vb == *vi);
      }
      mask[static_cast<size_t>(r) * width + c] = tie ? 1 : 0;
    }
  }
  return mask;
}

struct GradCheck {
  double max_rel_error = 0.0;
  size_t coordinates = 0;
  size_t masked_pixels = 0;
};

// Compares the analytic backward pass of L = sum(u * I) against central
// differences in pixel units. Upstream weights are uniform in [0, 1] and
// zeroed where TieLocusMask applies. The relative error floor is
// `floor_fraction` of the largest gradient component.
inline GradCheck CheckSoftGradient(ElementKind kind,
                                   const std::vector<Point2>& px,
                                   const GridSpec& g, double tau,
                                   std::mt19937_64& rng, double step = 1e-3,
                                   double tie_margin = 1e-2,
                                   double near_margin = 5e-2,
                                   double floor_fraction = 1e-3) {
  GradCheck out;
  const std::vector<uint8_t> tie =
      TieLocusMask(kind, px, g.width(), g.height(), tie_margin, near_margin);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> upstream(g.num_pixels());
  for (size_t i = 0; i < upstream.size(); ++i) {
    const double u = unit(rng);
    upstream[i] = tie[i] ? 0.0 : u;
    out.masked_pixels += tie[i];
  }
  const Softness soft(tau);
  auto loss = [&](const std::vector<Point2>& p) {
    const SoftMask m = RenderSoft(kind, PixelsToWorld(p, g), g, soft);
    double s = 0.0;
    for (size_t i = 0; i < upstream.size(); ++i) s += upstream[i] * m.values()[i];
    return s;
  };
  const RasterGradient analytic =
      BackwardSoft(kind, PixelsToWorld(px, g), g, soft, upstream);
  std::vector<double> a, num;
  for (size_t k = 0; k < px.size(); ++k) {
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<Point2> plus = px, minus = px;
      (axis == 0 ? plus[k].x : plus[k].y) += step;
      (axis == 0 ? minus[k].x : minus[k].y) -= step;
      num.push_back((loss(plus) - loss(minus)) / (2.0 * step));
      a.push_back(axis == 0 ? analytic.per_point[k].x
                            : analytic.per_point[k].y);
    }
  }
  double scale = 0.0;
  for (double v : num) scale = std::max(scale, std::abs(v));
  const double floor = std::max(floor_fraction * scale, 1e-12);
  for (size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(num[i]), floor});
    out.max_rel_error = std::max(out.max_rel_error,
                                 std::abs(a[i] - num[i]) / denom);
  }
  out.coordinates = a.size();
  return out;
}

// Synthetic evaluation scenes on the default evaluation grid: lane dividers,
// stop lines and crossings, with predictions perturbed by `noise_m`, some
// dropped, some spurious.
inline std::vector<EvalScene> SyntheticDataset(uint64_t seed, size_t scenes,
                                               double noise_m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_m);
  std::vector<EvalScene> out;
  for (size_t s = 0; s < scenes; ++s) {
    EvalScene scene;
    scene.id = "scene_" + std::to_string(s);
    const double bend = 4.0 * (unit(rng) - 0.5);
    for (int lane = -2; lane <= 2; ++lane) {
      const double x0 = 3.5 * lane + unit(rng);
      std::vector<Point2> pts;
      for (int k = 0; k <= 6; ++k) {
        const double y = -28.0 + 56.0 * k / 6.0;
        pts.push_back({x0 + bend * std::sin(y / 20.0), y});
      }
      scene.ground_truth.push_back(Line(kDivider, pts));
    }
    const double sy = 5.0 + 10.0 * unit(rng);
    scene.ground_truth.push_back(Line(kStopLine, {{-7.0, sy}, {7.0, sy}}));
    const double cy = -15.0 + 5.0 * unit(rng);
    scene.ground_truth.push_back(Poly(
        kPedCrossing, {{-8.0, cy}, {8.0, cy}, {8.0, cy + 4.0}, {-8.0, cy + 4.0}}));

    for (const MapElement& gt : scene.ground_truth) {
      if (unit(rng) < 0.15) continue;
      std::vector<Point2> pts;
      const double dx = noise(rng), dy = noise(rng);
      for (const Point2& p : gt.points()) {
        pts.push_back({p.x + dx + 0.3 * noise(rng), p.y + dy + 0.3 * noise(rng)});
      }
      scene.detections.push_back({gt.WithPoints(pts), 0.3 + 0.7 * unit(rng)});
    }
    if (unit(rng) < 0.5) {
      const double x = -12.0 + 24.0 * unit(rng);
      scene.detections.push_back(
          {Line(kDivider, {{x, -20.0}, {x + 1.0, 0.0}, {x, 20.0}}),
           0.6 * unit(rng)});
    }
    out.push_back(std::move(scene));
  }
  return out;
}

// Fitting benchmark: a target element and a perturbed initialization, both
// in world units on FitGrid().
struct FitCase {
  std::string name;
  MapElement target;
  MapElement init;
};

inline GridSpec FitGrid() { return GridSpec(0.0, 48.0, 0.0, 48.0, 96, 96); }

inline std::vector<FitCase> FitSuite() {
  std::vector<FitCase> out;
  const GridSpec g = FitGrid();
  auto world = [&](std::vector<Point2> px) { return PixelsToWorld(px, g); };
  auto offset = [](std::vector<Point2> px, double d) {
    const Point2 dir = px.back() - px.front();
    const double n = Norm(dir);
    const Point2 normal{-dir.y / n, dir.x / n};
    for (Point2& p : px) p = p + d * normal;
    return px;
  };
  const std::vector<std::vector<Point2>> lines = {
      {{16, 20.5}, {80, 20.5}},
      {{30.5, 12}, {30.5, 84}},
      {{14, 14}, {82, 76}},
      {{15, 40}, {48, 52}, {81, 40}},
  };
  const double offsets[] = {2.0, 3.0, 4.0, 5.0};
  for (size_t i = 0; i < lines.size(); ++i) {
    out.push_back({"offset_line_" + std::to_string(i),
                   Line(kDivider, world(lines[i])),
                   Line(kDivider, world(offset(lines[i], offsets[i])))});
  }
  auto square = [](double cx, double cy, double half) {
    return std::vector<Point2>{{cx - half, cy - half},
                               {cx + half, cy - half},
                               {cx + half, cy + half},
                               {cx - half, cy + half}};
  };
  for (double scale : {0.7, 0.8, 1.2}) {
    out.push_back({"scaled_square_" + std::to_string(out.size() - 4),
                   Poly(kPedCrossing, world(square(48, 48, 28))),
                   Poly(kPedCrossing, world(square(48, 48, 28 * scale)))});
  }
  std::mt19937_64 rng(7);
  std::normal_distribution<double> jitter(0.0, 0.7);
  for (int i = 0; i < 3; ++i) {
    const double amp = 8.0 + 3.0 * i;
    std::vector<Point2> target, init;
    for (int k = 0; k < 10; ++k) {
      const double y = 12.0 + 72.0 * k / 9.0;
      const double x = 48.0 + amp * std::sin(2.0 * std::numbers::pi * k / 9.0);
      target.push_back({x, y});
      init.push_back({x + 2.5 + jitter(rng), y + jitter(rng)});
    }
    out.push_back({"s_curve_" + std::to_string(i),
                   Line(kDivider, world(target)), Line(kDivider, world(init))});
  }
  return out;
}

}  // namespace maprast::fixtures

#endif  // MAPRAST_TESTS_FIXTURES_H_
