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

#include "maprast/scene_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "maprast/error.h"

namespace maprast {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& source, const std::string& what) {
  throw ValidationError(source + ": " + what);
}

ElementKind ParseKind(const json& j, const std::string& where) {
  if (!j.is_string()) Fail(where, "\"kind\" must be a string");
  const std::string s = j.get<std::string>();
  if (s == "line") return ElementKind::kLine;
  if (s == "polygon") return ElementKind::kPolygon;
  Fail(where, "unknown kind '" + s + "' (expected line or polygon)");
}

double GetNumber(const json& j, const std::string& where,
                 const std::string& key) {
  if (!j.is_number()) Fail(where, "\"" + key + "\" must be a number");
  return j.get<double>();
}

int GetInt(const json& j, const std::string& where, const std::string& key) {
  if (!j.is_number_integer()) Fail(where, "\"" + key + "\" must be an integer");
  return j.get<int>();
}

void CheckKeys(const json& obj, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!obj.is_object()) Fail(where, "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) Fail(where, "unknown key '" + key + "'");
  }
}

std::vector<double> ParseThresholds(const json& j, const std::string& where,
                                    const std::string& key) {
  if (j.is_string()) {
    try {
      return ParseThresholdRange(j.get<std::string>());
    } catch (const ValidationError& e) {
      Fail(where, key + ": " + e.what());
    }
  }
  if (!j.is_array()) {
    Fail(where, "\"" + key + "\" must be an array or a start:stop:step string");
  }
  std::vector<double> out;
  for (const json& v : j) out.push_back(GetNumber(v, where, key));
  return out;
}

json NumberJson(double v) { return json(RoundSignificant(v)); }

}  // namespace

size_t SceneFile::NumDeduplicated() const {
  size_t total = 0;
  for (const SceneElement& e : elements) total += e.element.num_deduplicated();
  return total;
}

SceneFile ParseScene(std::string_view text, const std::string& source,
                     std::optional<SceneRole> role) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(source, std::string("malformed JSON: ") + e.what());
  }
  CheckKeys(doc, {"scene_id", "vocabulary", "elements"}, source);
  SceneFile scene;
  if (!doc.contains("scene_id") || !doc["scene_id"].is_string()) {
    Fail(source, "\"scene_id\" must be a string");
  }
  scene.scene_id = doc["scene_id"].get<std::string>();

  if (!doc.contains("vocabulary") || !doc["vocabulary"].is_array() ||
      doc["vocabulary"].empty()) {
    Fail(source, "\"vocabulary\" must be a nonempty array");
  }
  std::map<std::string, size_t> class_index;
  for (size_t i = 0; i < doc["vocabulary"].size(); ++i) {
    const json& c = doc["vocabulary"][i];
    const std::string where = source + ": vocabulary[" + std::to_string(i) + "]";
    CheckKeys(c, {"name", "kind"}, where);
    if (!c.contains("name") || !c["name"].is_string() || !c.contains("kind")) {
      Fail(where, "needs a string \"name\" and a \"kind\"");
    }
    ClassInfo info{c["name"].get<std::string>(), ParseKind(c["kind"], where)};
    if (!class_index.emplace(info.name, i).second) {
      Fail(where, "duplicate class '" + info.name + "'");
    }
    scene.vocabulary.push_back(std::move(info));
  }

  if (!doc.contains("elements") || !doc["elements"].is_array()) {
    Fail(source, "\"elements\" must be an array");
  }
  std::optional<bool> has_confidence;
  if (role) has_confidence = *role == SceneRole::kPrediction;
  for (size_t i = 0; i < doc["elements"].size(); ++i) {
    const json& e = doc["elements"][i];
    const std::string where = source + ": element " + std::to_string(i);
    CheckKeys(e, {"class", "kind", "points", "confidence"}, where);
    if (!e.contains("class") || !e["class"].is_string()) {
      Fail(where, "\"class\" must be a string");
    }
    const std::string cls = e["class"].get<std::string>();
    const auto found = class_index.find(cls);
    if (found == class_index.end()) Fail(where, "unknown class '" + cls + "'");
    if (!e.contains("kind")) Fail(where, "missing \"kind\"");
    const ElementKind kind = ParseKind(e["kind"], where);
    if (kind != scene.vocabulary[found->second].kind) {
      Fail(where, "kind '" + std::string(KindName(kind)) + "' disagrees with class '" +
                      cls + "'");
    }
    if (!e.contains("points") || !e["points"].is_array()) {
      Fail(where, "\"points\" must be an array of [x, y] pairs");
    }
    std::vector<Point2> pts;
    for (const json& p : e["points"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number()) {
        Fail(where, "each point must be an [x, y] pair of numbers");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }

    const bool present = e.contains("confidence");
    if (!has_confidence) has_confidence = present;
    if (present != *has_confidence) {
      Fail(where, *has_confidence
                      ? "confidence is required for prediction elements"
                      : "confidence is not allowed on ground-truth elements");
    }
    SceneElement se{MapElement(0, Polyline({{0, 0}, {1, 0}})), std::nullopt};
    try {
      se.element = MapElement::Make(found->second, kind, std::move(pts));
    } catch (const ValidationError& err) {
      Fail(where, err.what());
    }
    if (present) {
      const double c = GetNumber(e["confidence"], where, "confidence");
      if (!(c >= 0.0 && c <= 1.0)) Fail(where, "confidence outside [0, 1]");
      se.confidence = c;
    }
    scene.elements.push_back(std::move(se));
  }
  return scene;
}

SceneFile LoadScene(const std::string& path, std::optional<SceneRole> role) {
  return ParseScene(ReadTextFile(path), path, role);
}

std::string SerializeScene(const SceneFile& scene) {
  json doc;
  doc["scene_id"] = scene.scene_id;
  json vocab = json::array();
  for (const ClassInfo& c : scene.vocabulary) {
    vocab.push_back({{"name", c.name}, {"kind", std::string(KindName(c.kind))}});
  }
  doc["vocabulary"] = vocab;
  json elements = json::array();
  for (const SceneElement& se : scene.elements) {
    json e;
    e["class"] = scene.vocabulary.at(se.element.class_id()).name;
    e["kind"] = std::string(KindName(se.element.kind()));
    json pts = json::array();
    for (const Point2& p : se.element.points()) {
      pts.push_back({NumberJson(p.x), NumberJson(p.y)});
    }
    e["points"] = pts;
    if (se.confidence) e["confidence"] = NumberJson(*se.confidence);
    elements.push_back(e);
  }
  doc["elements"] = elements;
  return doc.dump(2) + "\n";
}

void WriteScene(const SceneFile& scene, const std::string& path) {
  WriteTextFile(path, SerializeScene(scene));
}

EvalScene ToEvalScene(const SceneFile& predictions,
                      const SceneFile& ground_truth) {
  if (!(predictions.vocabulary == ground_truth.vocabulary)) {
    throw ValidationError("scene '" + predictions.scene_id +
                          "': prediction and ground-truth vocabularies differ");
  }
  EvalScene out;
  out.id = ground_truth.scene_id;
  for (const SceneElement& e : predictions.elements) {
    out.detections.push_back({e.element, e.confidence.value_or(1.0)});
  }
  for (const SceneElement& e : ground_truth.elements) {
    out.ground_truth.push_back(e.element);
  }
  return out;
}

EvalConfig ToolConfig::ToEvalConfig() const {
  EvalConfig cfg;
  cfg.grid = grid;
  cfg.line_dilation_px = line_dilation_px;
  cfg.dilation_kernel = dilation_kernel;
  cfg.line_iou_thresholds = line_iou_thresholds;
  cfg.polygon_iou_thresholds = polygon_iou_thresholds;
  cfg.chamfer_thresholds_m = chamfer_thresholds_m;
  cfg.chamfer_resample_points = chamfer_resample_points;
  cfg.pooling = pooling;
  cfg.workers = workers;
  return cfg;
}

FitConfig ToolConfig::ToFitConfig() const {
  FitConfig cfg = fit;
  cfg.tau = Softness(tau);
  cfg.seed = seed;
  cfg.raster.workers = workers;
  cfg.raster.cull = cull;
  return cfg;
}

void ToolConfig::Validate() const {
  Softness check_tau(tau);
  (void)check_tau;
  ToEvalConfig().Validate();
  matching_weights.Validate();
  loss_weights.Validate();
  ToFitConfig().Validate();
}

ToolConfig ParseToolConfig(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(source, std::string("malformed JSON: ") + e.what());
  }
  CheckKeys(doc,
            {"grid", "tau", "line_dilation_px", "dilation_kernel",
             "line_iou_thresholds", "polygon_iou_thresholds",
             "chamfer_thresholds_m", "chamfer_resample_points", "pooling",
             "matching_weights", "loss_weights", "fit", "fit_target", "cull",
             "workers", "seed"},
            source);
  ToolConfig cfg;
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    const std::string where = source + ": grid";
    CheckKeys(g, {"x_min", "x_max", "y_min", "y_max", "width", "height"}, where);
    for (const char* key : {"x_min", "x_max", "y_min", "y_max", "width", "height"}) {
      if (!g.contains(key)) Fail(where, std::string("missing \"") + key + "\"");
    }
    try {
      cfg.grid = GridSpec(GetNumber(g["x_min"], where, "x_min"),
                          GetNumber(g["x_max"], where, "x_max"),
                          GetNumber(g["y_min"], where, "y_min"),
                          GetNumber(g["y_max"], where, "y_max"),
                          GetInt(g["width"], where, "width"),
                          GetInt(g["height"], where, "height"));
    } catch (const ValidationError& e) {
      if (std::string(e.what()).rfind(source, 0) == 0) throw;
      Fail(where, e.what());
    }
  }
  if (doc.contains("tau")) cfg.tau = GetNumber(doc["tau"], source, "tau");
  if (doc.contains("line_dilation_px")) {
    cfg.line_dilation_px = GetInt(doc["line_dilation_px"], source, "line_dilation_px");
  }
  if (doc.contains("dilation_kernel")) {
    const json& k = doc["dilation_kernel"];
    if (k == "disk") {
      cfg.dilation_kernel = DilationKernel::kDisk;
    } else if (k == "square") {
      cfg.dilation_kernel = DilationKernel::kSquare;
    } else {
      Fail(source, "\"dilation_kernel\" must be \"disk\" or \"square\"");
    }
  }
  if (doc.contains("line_iou_thresholds")) {
    cfg.line_iou_thresholds =
        ParseThresholds(doc["line_iou_thresholds"], source, "line_iou_thresholds");
  }
  if (doc.contains("polygon_iou_thresholds")) {
    cfg.polygon_iou_thresholds = ParseThresholds(
        doc["polygon_iou_thresholds"], source, "polygon_iou_thresholds");
  }
  if (doc.contains("chamfer_thresholds_m")) {
    cfg.chamfer_thresholds_m = ParseThresholds(doc["chamfer_thresholds_m"],
                                               source, "chamfer_thresholds_m");
  }
  if (doc.contains("chamfer_resample_points")) {
    const int n = GetInt(doc["chamfer_resample_points"], source,
                         "chamfer_resample_points");
    if (n < 0) Fail(source, "\"chamfer_resample_points\" must be >= 0");
    cfg.chamfer_resample_points = static_cast<size_t>(n);
  }
  if (doc.contains("pooling")) {
    const json& p = doc["pooling"];
    if (p == "dataset") {
      cfg.pooling = Pooling::kDataset;
    } else if (p == "per_scene") {
      cfg.pooling = Pooling::kPerScene;
    } else {
      Fail(source, "\"pooling\" must be \"dataset\" or \"per_scene\"");
    }
  }
  if (doc.contains("matching_weights")) {
    const json& w = doc["matching_weights"];
    const std::string where = source + ": matching_weights";
    CheckKeys(w, {"render", "classification", "regression"}, where);
    if (w.contains("render")) cfg.matching_weights.render = GetNumber(w["render"], where, "render");
    if (w.contains("classification")) {
      cfg.matching_weights.classification =
          GetNumber(w["classification"], where, "classification");
    }
    if (w.contains("regression")) {
      cfg.matching_weights.regression = GetNumber(w["regression"], where, "regression");
    }
  }
  if (doc.contains("loss_weights")) {
    const json& w = doc["loss_weights"];
    const std::string where = source + ": loss_weights";
    CheckKeys(w, {"render", "classification", "direction", "regression"}, where);
    if (w.contains("render")) cfg.loss_weights.render = GetNumber(w["render"], where, "render");
    if (w.contains("classification")) {
      cfg.loss_weights.classification =
          GetNumber(w["classification"], where, "classification");
    }
    if (w.contains("direction")) {
      cfg.loss_weights.direction = GetNumber(w["direction"], where, "direction");
    }
    if (w.contains("regression")) {
      cfg.loss_weights.regression = GetNumber(w["regression"], where, "regression");
    }
  }
  if (doc.contains("fit")) {
    const json& f = doc["fit"];
    const std::string where = source + ": fit";
    CheckKeys(f,
              {"iterations", "step_px", "optimizer", "beta1", "beta2",
               "dice_weight", "direction_weight", "convergence_tolerance",
               "convergence_window", "snapshot_every", "init_jitter_px"},
              where);
    FitConfig& fit = cfg.fit;
    if (f.contains("iterations")) fit.iterations = GetInt(f["iterations"], where, "iterations");
    if (f.contains("step_px")) fit.step_px = GetNumber(f["step_px"], where, "step_px");
    if (f.contains("optimizer")) {
      if (f["optimizer"] == "adam") {
        fit.optimizer = Optimizer::kAdam;
      } else if (f["optimizer"] == "gradient_descent") {
        fit.optimizer = Optimizer::kGradientDescent;
      } else {
        Fail(where, "\"optimizer\" must be \"adam\" or \"gradient_descent\"");
      }
    }
    if (f.contains("beta1")) fit.beta1 = GetNumber(f["beta1"], where, "beta1");
    if (f.contains("beta2")) fit.beta2 = GetNumber(f["beta2"], where, "beta2");
    if (f.contains("dice_weight")) {
      fit.dice_weight = GetNumber(f["dice_weight"], where, "dice_weight");
    }
    if (f.contains("direction_weight")) {
      fit.direction_weight = GetNumber(f["direction_weight"], where, "direction_weight");
    }
    if (f.contains("convergence_tolerance")) {
      fit.convergence_tolerance =
          GetNumber(f["convergence_tolerance"], where, "convergence_tolerance");
    }
    if (f.contains("convergence_window")) {
      fit.convergence_window = GetInt(f["convergence_window"], where, "convergence_window");
    }
    if (f.contains("snapshot_every")) {
      fit.snapshot_every = GetInt(f["snapshot_every"], where, "snapshot_every");
    }
    if (f.contains("init_jitter_px")) {
      fit.init_jitter_px = GetNumber(f["init_jitter_px"], where, "init_jitter_px");
    }
  }
  if (doc.contains("fit_target")) {
    const json& t = doc["fit_target"];
    if (t == "soft") {
      cfg.fit_target = TargetMode::kSoft;
    } else if (t == "hard") {
      cfg.fit_target = TargetMode::kHard;
    } else {
      Fail(source, "\"fit_target\" must be \"soft\" or \"hard\"");
    }
  }
  if (doc.contains("cull")) {
    if (!doc["cull"].is_boolean()) Fail(source, "\"cull\" must be a boolean");
    cfg.cull = doc["cull"].get<bool>();
  }
  if (doc.contains("workers")) cfg.workers = GetInt(doc["workers"], source, "workers");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      Fail(source, "\"seed\" must be a non-negative integer");
    }
    cfg.seed = doc["seed"].get<uint64_t>();
  }
  try {
    cfg.Validate();
  } catch (const ValidationError& e) {
    Fail(source, e.what());
  }
  return cfg;
}

ToolConfig LoadToolConfig(const std::string& path) {
  return ParseToolConfig(ReadTextFile(path), path);
}

double RoundSignificant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::strtod(buf, nullptr);
}

std::string FormatNumber(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string ReportToJson(const ApReport& report) {
  json doc;
  doc["metric"] = report.metric;
  doc["mean_ap"] = NumberJson(report.mean_ap);
  json classes = json::array();
  for (const ClassReport& c : report.classes) {
    json jc;
    jc["name"] = c.name;
    jc["kind"] = std::string(KindName(c.kind));
    jc["num_gt"] = c.num_gt;
    jc["num_detections"] = c.num_detections;
    jc["mean_ap"] = NumberJson(c.mean_ap);
    json per = json::array();
    for (const ThresholdResult& t : c.thresholds) {
      per.push_back({{"threshold", NumberJson(t.threshold)},
                     {"ap", NumberJson(t.ap)}});
    }
    jc["ap_by_threshold"] = per;
    classes.push_back(jc);
  }
  doc["classes"] = classes;
  return doc.dump(2) + "\n";
}

std::string ReportToCsv(const ApReport& report) {
  std::ostringstream out;
  out << "class,threshold,recall,precision\n";
  for (const ClassReport& c : report.classes) {
    for (const ThresholdResult& t : c.thresholds) {
      for (const PrPoint& p : t.curve) {
        out << c.name << ',' << FormatNumber(t.threshold) << ','
            << FormatNumber(p.recall) << ',' << FormatNumber(p.precision)
            << '\n';
      }
    }
  }
  return out.str();
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace maprast
