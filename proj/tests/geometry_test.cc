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

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "maprast/error.h"
#include "oracles.h"

namespace maprast {
namespace {

const std::vector<Point2> kUnitSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

TEST(PointSegmentDistanceTest, PerpendicularFootInside) {
  EXPECT_DOUBLE_EQ(PointSegmentDistance({0, 1}, {-1, 0}, {1, 0}), 1.0);
}

TEST(PointSegmentDistanceTest, ClampsToEndpoint) {
  EXPECT_DOUBLE_EQ(PointSegmentDistance({3, 0}, {-1, 0}, {1, 0}), 2.0);
}

TEST(PointSegmentDistanceTest, DegenerateSegment) {
  EXPECT_DOUBLE_EQ(PointSegmentDistance({3, 4}, {0, 0}, {0, 0}), 5.0);
}

TEST(PointSegmentDistanceTest, ProjectionParameter) {
  const SegmentProjection p = ProjectOntoSegment({0.5, 2}, {0, 0}, {2, 0});
  EXPECT_DOUBLE_EQ(p.t, 0.25);
  EXPECT_DOUBLE_EQ(p.distance, 2.0);
}

TEST(PointSegmentDistanceTest, MatchesOracleAndIsSymmetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 2000; ++i) {
    const Point2 q{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double d = PointSegmentDistance(q, a, b);
    EXPECT_NEAR(d, oracle::SegmentDistance(q.x, q.y, a.x, a.y, b.x, b.y),
                1e-12);
    EXPECT_NEAR(d, PointSegmentDistance(q, b, a), 1e-12);
  }
}

TEST(PolylineTest, DeduplicatesConsecutivePoints) {
  const Polyline line({{0, 0}, {0, 0}, {1, 0}, {1, 0}, {1, 0}, {2, 0}});
  EXPECT_EQ(line.size(), 3u);
  EXPECT_EQ(line.num_deduplicated(), 3u);
  EXPECT_DOUBLE_EQ(line.Length(), 2.0);
}

TEST(PolylineTest, RejectsFewerThanTwoDistinctPoints) {
  EXPECT_THROW(Polyline({{1, 1}}), ValidationError);
  EXPECT_THROW(Polyline({{1, 1}, {1, 1}}), ValidationError);
  EXPECT_THROW(Polyline({}), ValidationError);
}

TEST(PolylineTest, RejectsNonFinite) {
  EXPECT_THROW(Polyline({{0, 0}, {NAN, 1}}), ValidationError);
  EXPECT_THROW(Polyline({{0, 0}, {INFINITY, 1}}), ValidationError);
}

TEST(PolygonTest, RejectsDegenerate) {
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}}), ValidationError);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {2, 0}}), ValidationError);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {0, 0}}), ValidationError);
}

TEST(PolygonTest, DropsClosingDuplicate) {
  const Polygon poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
  EXPECT_EQ(poly.size(), 4u);
  EXPECT_EQ(poly.num_deduplicated(), 1u);
  EXPECT_DOUBLE_EQ(poly.SignedArea(), 1.0);
  EXPECT_DOUBLE_EQ(poly.Perimeter(), 4.0);
}

TEST(PolylineDistanceTest, ZeroOnSegment) {
  const Polyline line({{0, 0}, {2, 0}, {2, 2}});
  EXPECT_DOUBLE_EQ(PolylineDistance({2, 1}, line).distance, 0.0);
  EXPECT_DOUBLE_EQ(PolylineDistance({0.5, 0}, line).distance, 0.0);
}

TEST(PolylineDistanceTest, SymmetricStraightLine) {
  EXPECT_DOUBLE_EQ(
      PolylineDistance({0, 1}, Polyline({{-2, 0}, {0, 0}, {2, 0}})).distance,
      1.0);
}

TEST(PolylineDistanceTest, ElbowMatchesExhaustiveOracle) {
  const std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1}};
  const ChainDistance d = PolylineDistance({5, 5}, Polyline(pts));
  EXPECT_NEAR(d.distance, oracle::ChainDistance(5, 5, pts, false), 1e-12);
  EXPECT_NEAR(d.distance, 4.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(d.segment, 1u);
}

TEST(PolylineDistanceTest, TieGoesToLowestSegment) {
  // (1, 1) is equidistant from both segments of the V.
  const ChainDistance d =
      PolylineDistance({1, 1}, Polyline({{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_EQ(d.segment, 0u);
  EXPECT_DOUBLE_EQ(d.t, 1.0);
}

TEST(PolylineDistanceTest, ReversalTranslationAndOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point2> pts(2 + trial % 7);
    for (Point2& p : pts) p = {u(rng), u(rng)};
    const Polyline line(pts);
    const Point2 q{u(rng), u(rng)}, shift{u(rng), u(rng)};
    const double d = PolylineDistance(q, line).distance;
    EXPECT_NEAR(d, oracle::ChainDistance(q.x, q.y, pts, false), 1e-12);
    EXPECT_NEAR(d, PolylineDistance(q, line.Reversed()).distance, 1e-12);
    EXPECT_NEAR(d, PolylineDistance(q + shift, line.Translated(shift)).distance,
                1e-9);
  }
}

TEST(PolygonBoundaryDistanceTest, UnitSquare) {
  const Polygon sq(kUnitSquare);
  EXPECT_DOUBLE_EQ(PolygonBoundaryDistance({0.5, 0.5}, sq), 0.5);
  EXPECT_DOUBLE_EQ(PolygonBoundaryDistance({2, 0.5}, sq), 1.0);
  EXPECT_DOUBLE_EQ(PolygonBoundaryDistance({0.3, 0}, sq), 0.0);
  // The closing edge (0,1)-(0,0) is part of the boundary.
  EXPECT_DOUBLE_EQ(PolygonBoundaryDistance({-1, 0.5}, sq), 1.0);
}

TEST(PointInPolygonSignTest, UnitSquare) {
  const Polygon sq(kUnitSquare);
  EXPECT_EQ(PointInPolygonSign({0.5, 0.5}, sq), +1);
  EXPECT_EQ(PointInPolygonSign({2, 2}, sq), -1);
}

TEST(PointInPolygonSignTest, BoundaryCountsAsInside) {
  const Polygon sq(kUnitSquare);
  EXPECT_EQ(PointInPolygonSign({1, 0.5}, sq), +1);
  EXPECT_EQ(PointInPolygonSign({0, 0}, sq), +1);
  EXPECT_EQ(PointInPolygonSign({0.5, 1}, sq), +1);
}

TEST(PointInPolygonSignTest, BowtieLobes) {
  // Diagonals cross at (1.2, 1.2); lobes have unequal area.
  const std::vector<Point2> bowtie = {{0, 0}, {2, 2}, {2, 0}, {0, 3}};
  const Polygon poly(bowtie);
  for (const Point2 q : {Point2{1.8, 1.0}, Point2{0.3, 1.2}, Point2{1.0, 0.2},
                         Point2{1.0, 2.5}}) {
    EXPECT_EQ(PointInPolygonSign(q, poly),
              oracle::RayCrossingSign(q.x, q.y, bowtie))
        << q.x << "," << q.y;
  }
  EXPECT_EQ(PointInPolygonSign({1.8, 1.0}, poly), +1);
  EXPECT_EQ(PointInPolygonSign({0.3, 1.2}, poly), +1);
  EXPECT_EQ(PointInPolygonSign({1.0, 0.2}, poly), -1);
  EXPECT_EQ(PointInPolygonSign({1.0, 2.5}, poly), -1);
}

TEST(PointInPolygonSignTest, AgreesWithRayCrossingOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_int_distribution<int> nv(3, 12);
  int checked = 0;
  while (checked < 10000) {
    std::vector<Point2> pts(nv(rng));
    for (Point2& p : pts) p = {u(rng), u(rng)};
    std::unique_ptr<Polygon> poly;
    try {
      poly = std::make_unique<Polygon>(pts);
    } catch (const ValidationError&) {
      continue;
    }
    for (int k = 0; k < 10; ++k, ++checked) {
      const Point2 q{u(rng), u(rng)};
      ASSERT_EQ(PointInPolygonSign(q, *poly),
                oracle::RayCrossingSign(q.x, q.y, pts));
    }
  }
}

TEST(ResampleTest, UniformStraightLine) {
  const Polyline r = ResampleEquidistant(Polyline({{0, 0}, {4, 0}}), 5);
  ASSERT_EQ(r.size(), 5u);
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(r[i].x, static_cast<double>(i));
    EXPECT_DOUBLE_EQ(r[i].y, 0.0);
  }
}

TEST(ResampleTest, BreakpointCoincidesWithSample) {
  const Polyline r =
      ResampleEquidistant(Polyline({{0, 0}, {1, 0}, {1, 1}}), 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], (Point2{0, 0}));
  EXPECT_NEAR(r[1].x, 1.0, 1e-15);
  EXPECT_NEAR(r[1].y, 0.0, 1e-15);
  EXPECT_EQ(r[2], (Point2{1, 1}));
}

TEST(ResampleTest, LShapeEqualSpacing) {
  const Polyline line({{0, 0}, {3, 0}, {3, 7}});
  const Polyline r = ResampleEquidistant(line, 20);
  ASSERT_EQ(r.size(), 20u);
  const double spacing = line.Length() / 19.0;
  double total = 0.0;
  for (size_t i = 1; i < r.size(); ++i) {
    // Arc distance between samples: through the corner if they straddle it.
    const Point2 a = r[i - 1], b = r[i];
    const bool straddles = a.y == 0.0 && b.x == 3.0 && b.y > 0.0 && a.x < 3.0;
    const double arc = straddles ? (3.0 - a.x) + b.y : Norm(b - a);
    EXPECT_NEAR(arc, spacing, 1e-9 * spacing);
    total += arc;
  }
  EXPECT_NEAR(total, line.Length(), 1e-9 * line.Length());
  EXPECT_EQ(r[0], line[0]);
  EXPECT_EQ(r[19], line[2]);
}

TEST(ResampleTest, RandomChainsPreserveEndpointsAndLength) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> pts(2 + trial % 9);
    for (Point2& p : pts) p = {u(rng), u(rng)};
    const Polyline line(pts);
    const size_t n = 2 + trial % 40;
    const Polyline r = ResampleEquidistant(line, n);
    ASSERT_EQ(r.size(), n);
    EXPECT_EQ(r[0], line[0]);
    EXPECT_EQ(r[n - 1], line[line.size() - 1]);
    // Every sample lies on the chain.
    for (size_t i = 0; i < n; ++i) {
      EXPECT_LT(PolylineDistance(r[i], line).distance, 1e-9);
    }
  }
}

TEST(ResampleTest, RejectsTooFewSamples) {
  EXPECT_THROW(ResampleEquidistant(Polyline({{0, 0}, {1, 0}}), 1),
               ValidationError);
}

TEST(ResampleTest, ClosedRingStartsAtFirstVertex) {
  const std::vector<Point2> r = ResampleClosedEquidistant(kUnitSquare, 8);
  ASSERT_EQ(r.size(), 8u);
  EXPECT_EQ(r[0], (Point2{0, 0}));
  EXPECT_NEAR(r[1].x, 0.5, 1e-15);
  EXPECT_NEAR(r[2].x, 1.0, 1e-15);
  EXPECT_NEAR(r[7].y, 0.5, 1e-15);
}

TEST(GridSpecTest, RejectsInvalid) {
  EXPECT_THROW(GridSpec(1, 0, 0, 1, 1, 1), ValidationError);
  EXPECT_THROW(GridSpec(0, 1, 0, 1, 0, 1), ValidationError);
  EXPECT_THROW(GridSpec(0, 1, 1, 1, 1, 1), ValidationError);
}

TEST(PixelCenterTest, SinglePixel) {
  EXPECT_EQ(PixelCenter(GridSpec(0, 1, 0, 1, 1, 1), 0, 0), (Point2{0.5, 0.5}));
}

TEST(PixelCenterTest, EvaluationGridFirstColumn) {
  const GridSpec g(-15, 15, -30, 30, 240, 480);
  const oracle::Xy want = oracle::PixelCenterMeters(-15, 15, -30, 30, 240, 480,
                                                    0, 0);
  EXPECT_DOUBLE_EQ(PixelCenter(g, 0, 0).x, want.x);
  EXPECT_DOUBLE_EQ(PixelCenter(g, 0, 0).x, -14.9375);
  EXPECT_DOUBLE_EQ(PixelCenter(g, 0, 0).y, -29.9375);
}

TEST(PixelCenterTest, TwoByTwo) {
  const GridSpec g(0, 2, 0, 2, 2, 2);
  EXPECT_EQ(PixelCenter(g, 0, 0), (Point2{0.5, 0.5}));
  EXPECT_EQ(PixelCenter(g, 0, 1), (Point2{1.5, 0.5}));
  EXPECT_EQ(PixelCenter(g, 1, 0), (Point2{0.5, 1.5}));
  EXPECT_EQ(PixelCenter(g, 1, 1), (Point2{1.5, 1.5}));
}

TEST(PixelCenterTest, RejectsOutOfRange) {
  const GridSpec g(0, 2, 0, 2, 2, 2);
  EXPECT_THROW(PixelCenter(g, 2, 0), std::out_of_range);
  EXPECT_THROW(PixelCenter(g, 0, -1), std::out_of_range);
}

TEST(GridSpecTest, WorldPixelRoundTrip) {
  const GridSpec g(-15, 15, -30, 30, 240, 480);
  const Point2 p{3.3, -7.1};
  const Point2 back = g.PixelToWorld(g.WorldToPixel(p));
  EXPECT_NEAR(back.x, p.x, 1e-12);
  EXPECT_NEAR(back.y, p.y, 1e-12);
  EXPECT_EQ(g.WorldToPixel(PixelCenter(g, 5, 7)), (Point2{7.5, 5.5}));
}

}  // namespace
}  // namespace maprast
