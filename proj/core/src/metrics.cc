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

#include "maprast/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "maprast/error.h"
#include "maprast/parallel.h"

namespace maprast {
namespace {

constexpr double kThresholdSnap = 1e12;

double Snap(double v) { return std::round(v * kThresholdSnap) / kThresholdSnap; }

void CheckIncreasing(const std::vector<double>& values, const char* name,
                     double lo, double hi, bool hi_inclusive) {
  if (values.empty()) {
    throw ValidationError(std::string(name) + " must not be empty");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const bool in_range = v > lo && (hi_inclusive ? v <= hi : v < hi);
    if (!std::isfinite(v) || !in_range) {
      throw ValidationError(std::string(name) + " value " + std::to_string(v) +
                            " is out of range");
    }
    if (i > 0 && !(v > values[i - 1])) {
      throw ValidationError(std::string(name) + " must be strictly increasing");
    }
  }
}

// A hard mask with its popcount and the rows holding set bits.
struct RasterizedElement {
  BinaryMask mask;
  size_t count = 0;
  int row_begin = 0;
  int row_end = 0;
};

RasterizedElement Rasterize(const MapElement& element, const EvalConfig& cfg) {
  RasterizedElement r{RenderHard(element, cfg.grid, cfg.line_dilation_px,
                                 cfg.dilation_kernel)};
  const int w = cfg.grid.width();
  r.row_begin = cfg.grid.height();
  for (int row = 0; row < cfg.grid.height(); ++row) {
    size_t in_row = 0;
    for (int col = 0; col < w; ++col) in_row += r.mask.at(row, col) ? 1 : 0;
    if (in_row > 0) {
      r.row_begin = std::min(r.row_begin, row);
      r.row_end = row + 1;
      r.count += in_row;
    }
  }
  return r;
}

double FastIou(const RasterizedElement& a, const RasterizedElement& b) {
  if (a.count == 0 && b.count == 0) return 0.0;
  const int r0 = std::max(a.row_begin, b.row_begin);
  const int r1 = std::min(a.row_end, b.row_end);
  size_t inter = 0;
  if (r0 < r1) {
    const size_t w = static_cast<size_t>(a.mask.grid().width());
    const uint8_t* pa = a.mask.bits().data() + r0 * w;
    const uint8_t* pb = b.mask.bits().data() + r0 * w;
    const size_t n = static_cast<size_t>(r1 - r0) * w;
    for (size_t i = 0; i < n; ++i) inter += pa[i] & pb[i];
  }
  const size_t uni = a.count + b.count - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Point2> ChamferPoints(const MapElement& e, const EvalConfig& cfg) {
  const std::span<const Point2> pts = e.points();
  if (cfg.chamfer_resample_points == 0) {
    return std::vector<Point2>(pts.begin(), pts.end());
  }
  return ResampleElement(e.kind(), pts, cfg.chamfer_resample_points);
}

// Descending confidence, input order on ties.
std::vector<size_t> RankByConfidence(std::span<const double> confidences) {
  std::vector<size_t> order(confidences.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return confidences[a] > confidences[b];
  });
  return order;
}

struct CumulativeStep {
  size_t tp = 0;
  size_t fp = 0;
};

// Cumulative counts at the end of each group of equal confidence.
std::vector<CumulativeStep> Steps(std::span<const DetectionLabel> labels) {
  std::vector<double> conf;
  conf.reserve(labels.size());
  for (const DetectionLabel& l : labels) conf.push_back(l.confidence);
  const std::vector<size_t> order = RankByConfidence(conf);
  std::vector<CumulativeStep> steps;
  CumulativeStep cur;
  for (size_t k = 0; k < order.size(); ++k) {
    const DetectionLabel& l = labels[order[k]];
    (l.true_positive ? cur.tp : cur.fp) += 1;
    const bool group_end = k + 1 == order.size() ||
                           labels[order[k + 1]].confidence != l.confidence;
    if (group_end) steps.push_back(cur);
  }
  return steps;
}

void CheckScenes(std::span<const EvalScene> scenes, const Vocabulary& vocab) {
  auto check = [&](const MapElement& e, const EvalScene& s, const char* role,
                   size_t index) {
    if (e.class_id() >= vocab.size()) {
      throw ValidationError("scene '" + s.id + "' " + role + " " +
                            std::to_string(index) + ": unknown class id " +
                            std::to_string(e.class_id()));
    }
    if (vocab[e.class_id()].kind != e.kind()) {
      throw ValidationError(
          "scene '" + s.id + "' " + role + " " + std::to_string(index) +
          ": class '" + vocab[e.class_id()].name + "' is " +
          std::string(KindName(vocab[e.class_id()].kind)) + "-shaped");
    }
  };
  for (const EvalScene& s : scenes) {
    for (size_t i = 0; i < s.detections.size(); ++i) {
      const double c = s.detections[i].confidence;
      if (!(c >= 0.0 && c <= 1.0)) {
        throw ValidationError("scene '" + s.id + "' detection " +
                              std::to_string(i) + ": confidence outside [0, 1]");
      }
      check(s.detections[i].element, s, "detection", i);
    }
    for (size_t i = 0; i < s.ground_truth.size(); ++i) {
      check(s.ground_truth[i], s, "ground truth", i);
    }
  }
}

using SimilarityFn = std::function<CostMatrix(
    std::span<const Detection>, std::span<const MapElement>)>;

// Per class, the thresholds to sweep and how they map onto similarity.
struct Criterion {
  std::string name;
  std::function<std::vector<double>(ElementKind)> thresholds;
  std::function<double(double)> to_similarity;
  SimilarityFn similarity;
};

ApReport Evaluate(std::span<const EvalScene> scenes, const Vocabulary& vocab,
                  const EvalConfig& cfg, const Criterion& criterion) {
  cfg.Validate();
  CheckScenes(scenes, vocab);
  const size_t num_classes = vocab.size();

  // labels[scene][class][threshold]
  using PerClass = std::vector<std::vector<std::vector<DetectionLabel>>>;
  std::vector<PerClass> labels(scenes.size(), PerClass(num_classes));
  std::vector<std::vector<size_t>> num_gt(scenes.size(),
                                          std::vector<size_t>(num_classes, 0));

  ParallelFor(scenes.size(), cfg.workers, [&](size_t s) {
    const EvalScene& scene = scenes[s];
    for (size_t c = 0; c < num_classes; ++c) {
      std::vector<Detection> dets;
      std::vector<MapElement> gts;
      for (const Detection& d : scene.detections) {
        if (d.element.class_id() == c) dets.push_back(d);
      }
      for (const MapElement& g : scene.ground_truth) {
        if (g.class_id() == c) gts.push_back(g);
      }
      num_gt[s][c] = gts.size();
      const std::vector<double> thresholds = criterion.thresholds(vocab[c].kind);
      std::vector<double> conf;
      for (const Detection& d : dets) conf.push_back(d.confidence);
      const CostMatrix sim = criterion.similarity(dets, gts);
      for (double t : thresholds) {
        labels[s][c].push_back(GreedyMatch(conf, sim, criterion.to_similarity(t)));
      }
    }
  });

  ApReport report;
  report.metric = criterion.name;
  for (size_t c = 0; c < num_classes; ++c) {
    ClassReport cr;
    cr.name = vocab[c].name;
    cr.kind = vocab[c].kind;
    for (size_t s = 0; s < scenes.size(); ++s) {
      cr.num_gt += num_gt[s][c];
      if (!labels[s][c].empty()) cr.num_detections += labels[s][c][0].size();
    }
    if (cr.num_gt == 0 && cr.num_detections == 0) continue;

    const std::vector<double> thresholds = criterion.thresholds(vocab[c].kind);
    for (size_t t = 0; t < thresholds.size(); ++t) {
      ThresholdResult tr;
      tr.threshold = thresholds[t];
      std::vector<DetectionLabel> pooled;
      for (size_t s = 0; s < scenes.size(); ++s) {
        const std::vector<DetectionLabel>& l = labels[s][c][t];
        pooled.insert(pooled.end(), l.begin(), l.end());
      }
      tr.curve = PrCurve(pooled, cr.num_gt);
      if (cfg.pooling == Pooling::kDataset) {
        tr.ap = AveragePrecision(pooled, cr.num_gt);
      } else {
        double sum = 0.0;
        size_t count = 0;
        for (size_t s = 0; s < scenes.size(); ++s) {
          const std::vector<DetectionLabel>& l = labels[s][c][t];
          if (num_gt[s][c] == 0 && l.empty()) continue;
          sum += AveragePrecision(l, num_gt[s][c]);
          ++count;
        }
        tr.ap = count > 0 ? sum / count : 0.0;
      }
      cr.thresholds.push_back(std::move(tr));
    }
    double sum = 0.0;
    for (const ThresholdResult& tr : cr.thresholds) sum += tr.ap;
    cr.mean_ap = sum / cr.thresholds.size();
    report.classes.push_back(std::move(cr));
  }
  double sum = 0.0;
  for (const ClassReport& cr : report.classes) sum += cr.mean_ap;
  report.mean_ap = report.classes.empty() ? 0.0 : sum / report.classes.size();
  return report;
}

}  // namespace

std::vector<double> ThresholdRange(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) ||
      !std::isfinite(step) || stop < start) {
    throw ValidationError("threshold range needs finite start <= stop, step > 0");
  }
  const auto count =
      static_cast<size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (size_t k = 0; k < count; ++k) out.push_back(Snap(start + k * step));
  return out;
}

std::vector<double> ParseThresholdRange(std::string_view text) {
  double parts[3];
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const size_t end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) {
      throw ValidationError("threshold range '" + std::string(text) +
                            "' must look like start:stop:step");
    }
    const std::string token(text.substr(pos, end - pos));
    size_t used = 0;
    try {
      parts[i] = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size()) {
      throw ValidationError("threshold range '" + std::string(text) +
                            "' has a malformed number");
    }
    pos = end + 1;
  }
  return ThresholdRange(parts[0], parts[1], parts[2]);
}

void EvalConfig::Validate() const {
  if (line_dilation_px < 0) throw ValidationError("line_dilation_px must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  CheckIncreasing(line_iou_thresholds, "line_iou_thresholds", 0.0, 1.0, true);
  CheckIncreasing(polygon_iou_thresholds, "polygon_iou_thresholds", 0.0, 1.0,
                  true);
  CheckIncreasing(chamfer_thresholds_m, "chamfer_thresholds_m", 0.0,
                  std::numeric_limits<double>::infinity(), false);
  if (chamfer_resample_points == 1) {
    throw ValidationError("chamfer_resample_points must be 0 or >= 2");
  }
}

double ChamferDistance(std::span<const Point2> p, std::span<const Point2> q) {
  if (p.empty() || q.empty()) {
    throw ValidationError("chamfer distance needs two nonempty point sets");
  }
  auto directed = [](std::span<const Point2> from, std::span<const Point2> to) {
    double sum = 0.0;
    for (const Point2& a : from) {
      double best2 = std::numeric_limits<double>::infinity();
      for (const Point2& b : to) {
        const double dx = a.x - b.x, dy = a.y - b.y;
        best2 = std::min(best2, dx * dx + dy * dy);
      }
      sum += std::sqrt(best2);
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(p, q) + directed(q, p));
}

double MaskIou(const BinaryMask& a, const BinaryMask& b) {
  if (!(a.grid() == b.grid())) {
    throw ValidationError("IoU masks are on different grids");
  }
  size_t inter = 0, uni = 0;
  const std::span<const uint8_t> ba = a.bits(), bb = b.bits();
  for (size_t i = 0; i < ba.size(); ++i) {
    inter += ba[i] & bb[i];
    uni += ba[i] | bb[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<DetectionLabel> GreedyMatch(std::span<const double> confidences,
                                        const CostMatrix& similarity,
                                        double threshold) {
  const size_t num_gt = similarity.cols();
  std::vector<DetectionLabel> labels(confidences.size());
  std::vector<char> claimed(num_gt, 0);
  for (size_t d : RankByConfidence(confidences)) {
    labels[d].confidence = confidences[d];
    std::optional<size_t> best;
    for (size_t g = 0; g < num_gt; ++g) {
      if (claimed[g]) continue;
      const double s = similarity.at(d, g);
      if (s >= threshold && (!best || s > similarity.at(d, *best))) best = g;
    }
    if (best) {
      claimed[*best] = 1;
      labels[d].true_positive = true;
      labels[d].matched_gt = best;
    }
  }
  return labels;
}

CostMatrix RasterIouMatrix(std::span<const Detection> dets,
                           std::span<const MapElement> gts,
                           const EvalConfig& cfg) {
  std::vector<RasterizedElement> det_masks, gt_masks;
  for (const Detection& d : dets) det_masks.push_back(Rasterize(d.element, cfg));
  for (const MapElement& g : gts) gt_masks.push_back(Rasterize(g, cfg));
  CostMatrix iou(dets.size(), gts.size());
  for (size_t i = 0; i < dets.size(); ++i) {
    for (size_t j = 0; j < gts.size(); ++j) {
      iou.at(i, j) = FastIou(det_masks[i], gt_masks[j]);
    }
  }
  return iou;
}

CostMatrix ChamferDistanceMatrix(std::span<const Detection> dets,
                                 std::span<const MapElement> gts,
                                 const EvalConfig& cfg) {
  std::vector<std::vector<Point2>> det_pts, gt_pts;
  for (const Detection& d : dets) det_pts.push_back(ChamferPoints(d.element, cfg));
  for (const MapElement& g : gts) gt_pts.push_back(ChamferPoints(g, cfg));
  CostMatrix dist(dets.size(), gts.size());
  for (size_t i = 0; i < dets.size(); ++i) {
    for (size_t j = 0; j < gts.size(); ++j) {
      dist.at(i, j) = ChamferDistance(det_pts[i], gt_pts[j]);
    }
  }
  return dist;
}

std::vector<DetectionLabel> MatchDetectionsRaster(
    std::span<const Detection> dets, std::span<const MapElement> gts,
    double iou_threshold, const EvalConfig& cfg) {
  std::vector<double> conf;
  for (const Detection& d : dets) conf.push_back(d.confidence);
  return GreedyMatch(conf, RasterIouMatrix(dets, gts, cfg), iou_threshold);
}

std::vector<DetectionLabel> MatchDetectionsChamfer(
    std::span<const Detection> dets, std::span<const MapElement> gts,
    double threshold_m, const EvalConfig& cfg) {
  std::vector<double> conf;
  for (const Detection& d : dets) conf.push_back(d.confidence);
  CostMatrix sim = ChamferDistanceMatrix(dets, gts, cfg);
  for (size_t i = 0; i < sim.rows(); ++i) {
    for (size_t j = 0; j < sim.cols(); ++j) sim.at(i, j) = -sim.at(i, j);
  }
  return GreedyMatch(conf, sim, -threshold_m);
}

std::vector<PrPoint> PrCurve(std::span<const DetectionLabel> labels,
                             size_t num_gt) {
  std::vector<PrPoint> curve;
  for (const CumulativeStep& s : Steps(labels)) {
    const double recall =
        num_gt == 0 ? 0.0 : static_cast<double>(s.tp) / static_cast<double>(num_gt);
    const double precision =
        static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    curve.push_back({recall, precision});
  }
  return curve;
}

double AveragePrecision(std::span<const DetectionLabel> labels, size_t num_gt) {
  if (num_gt == 0) return labels.empty() ? 1.0 : 0.0;
  const std::vector<PrPoint> curve = PrCurve(labels, num_gt);
  double ap = 0.0;
  double envelope = 0.0;
  // Walk backwards so `envelope` is the max precision at >= this recall.
  for (size_t k = curve.size(); k-- > 0;) {
    envelope = std::max(envelope, curve[k].precision);
    const double prev_recall = k == 0 ? 0.0 : curve[k - 1].recall;
    ap += (curve[k].recall - prev_recall) * envelope;
  }
  return std::clamp(ap, 0.0, 1.0);
}

ApReport EvaluateRaster(std::span<const EvalScene> scenes,
                        const Vocabulary& vocabulary, const EvalConfig& cfg) {
  Criterion c;
  c.name = "raster";
  c.thresholds = [&cfg](ElementKind k) {
    return k == ElementKind::kLine ? cfg.line_iou_thresholds
                                   : cfg.polygon_iou_thresholds;
  };
  c.to_similarity = [](double t) { return t; };
  c.similarity = [&cfg](std::span<const Detection> d,
                        std::span<const MapElement> g) {
    return RasterIouMatrix(d, g, cfg);
  };
  return Evaluate(scenes, vocabulary, cfg, c);
}

ApReport EvaluateChamfer(std::span<const EvalScene> scenes,
                         const Vocabulary& vocabulary, const EvalConfig& cfg) {
  Criterion c;
  c.name = "chamfer";
  c.thresholds = [&cfg](ElementKind) { return cfg.chamfer_thresholds_m; };
  c.to_similarity = [](double t) { return -t; };
  c.similarity = [&cfg](std::span<const Detection> d,
                        std::span<const MapElement> g) {
    CostMatrix sim = ChamferDistanceMatrix(d, g, cfg);
    for (size_t i = 0; i < sim.rows(); ++i) {
      for (size_t j = 0; j < sim.cols(); ++j) sim.at(i, j) = -sim.at(i, j);
    }
    return sim;
  };
  return Evaluate(scenes, vocabulary, cfg, c);
}

}  // namespace maprast
