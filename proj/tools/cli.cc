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

#include "cli.h"

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "maprast/error.h"
#include "maprast/fit.h"
#include "maprast/mask_io.h"
#include "maprast/metrics.h"
#include "maprast/scene_io.h"

namespace maprast {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kDefaultFrameInterval = 10;

ToolConfig LoadConfig(const std::string& path, std::optional<int> workers) {
  ToolConfig cfg = path.empty() ? ToolConfig{} : LoadToolConfig(path);
  if (workers) {
    if (*workers < 1) throw ValidationError("--workers must be >= 1");
    cfg.workers = *workers;
  }
  cfg.Validate();
  return cfg;
}

std::string SiblingPath(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

void EnsureParentDir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

json GridJson(const GridSpec& g) {
  return {{"x_min", RoundSignificant(g.x_min())},
          {"x_max", RoundSignificant(g.x_max())},
          {"y_min", RoundSignificant(g.y_min())},
          {"y_max", RoundSignificant(g.y_max())},
          {"width", g.width()},
          {"height", g.height()}};
}

struct RasterizeArgs {
  std::string in, config, mode = "soft", out;
  std::optional<int> workers;
};

int Rasterize(const RasterizeArgs& a, std::ostream& out) {
  const ToolConfig cfg = LoadConfig(a.config, a.workers);
  const SceneFile scene = LoadScene(a.in);
  fs::create_directories(a.out);
  RasterOptions opts;
  opts.workers = cfg.workers;
  opts.cull = cfg.cull;
  const bool soft = a.mode == "soft";

  json index;
  index["scene_id"] = scene.scene_id;
  index["mode"] = a.mode;
  index["grid"] = GridJson(cfg.grid);
  if (soft) {
    index["tau"] = RoundSignificant(cfg.tau);
  } else {
    index["line_dilation_px"] = cfg.line_dilation_px;
  }
  json masks = json::array();
  for (size_t i = 0; i < scene.elements.size(); ++i) {
    const MapElement& e = scene.elements[i].element;
    char name[64];
    std::snprintf(name, sizeof(name), "element_%03zu.%s", i, soft ? "pgm" : "pbm");
    const std::string path = (fs::path(a.out) / name).string();
    if (soft) {
      WritePgmFile(RenderSoft(e, cfg.grid, Softness(cfg.tau), opts), path);
    } else {
      WritePbmFile(RenderHard(e, cfg.grid, cfg.line_dilation_px, cfg.dilation_kernel),
                   path);
    }
    masks.push_back({{"index", i},
                     {"class", scene.vocabulary[e.class_id()].name},
                     {"kind", std::string(KindName(e.kind()))},
                     {"file", name}});
  }
  index["masks"] = masks;
  WriteTextFile((fs::path(a.out) / "index.json").string(), index.dump(2) + "\n");
  out << "rasterized " << scene.elements.size() << " element(s) from "
      << a.in << " into " << a.out << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string metric;
  std::vector<std::string> preds, gts;
  std::string config, out, pr_csv;
  std::optional<int> workers;
};

int Evaluate(const EvalArgs& a, std::ostream& out) {
  const ToolConfig cfg = LoadConfig(a.config, a.workers);
  std::map<std::string, SceneFile> preds;
  for (const std::string& path : a.preds) {
    SceneFile s = LoadScene(path, SceneRole::kPrediction);
    const std::string id = s.scene_id;
    if (!preds.emplace(id, std::move(s)).second) {
      throw ValidationError(path + ": duplicate prediction scene '" + id + "'");
    }
  }
  std::vector<EvalScene> scenes;
  std::optional<Vocabulary> vocab;
  std::map<std::string, bool> seen;
  for (const std::string& path : a.gts) {
    const SceneFile gt = LoadScene(path, SceneRole::kGroundTruth);
    if (seen.count(gt.scene_id)) {
      throw ValidationError(path + ": duplicate ground-truth scene '" +
                            gt.scene_id + "'");
    }
    seen[gt.scene_id] = true;
    if (vocab && !(*vocab == gt.vocabulary)) {
      throw ValidationError(path + ": vocabulary differs from earlier files");
    }
    vocab = gt.vocabulary;
    const auto it = preds.find(gt.scene_id);
    if (it == preds.end()) {
      throw ValidationError(path + ": no prediction file for scene '" +
                            gt.scene_id + "'");
    }
    scenes.push_back(ToEvalScene(it->second, gt));
  }
  for (const auto& [id, unused] : preds) {
    if (!seen.count(id)) {
      throw ValidationError("prediction scene '" + id + "' has no ground truth");
    }
  }
  if (!vocab) throw ValidationError("no ground-truth files given");

  const EvalConfig eval_cfg = cfg.ToEvalConfig();
  const ApReport report = a.metric == "raster"
                              ? EvaluateRaster(scenes, *vocab, eval_cfg)
                              : EvaluateChamfer(scenes, *vocab, eval_cfg);
  EnsureParentDir(a.out);
  WriteTextFile(a.out, ReportToJson(report));
  const std::string csv = a.pr_csv.empty() ? SiblingPath(a.out, ".pr.csv") : a.pr_csv;
  EnsureParentDir(csv);
  WriteTextFile(csv, ReportToCsv(report));

  out << "AP_" << report.metric << " over " << scenes.size() << " scene(s)\n";
  for (const ClassReport& c : report.classes) {
    out << "  " << c.name << ": " << FormatNumber(c.mean_ap) << "\n";
  }
  out << "  mean: " << FormatNumber(report.mean_ap) << "\n";
  return kExitOk;
}

struct FitArgs {
  std::string target, init, config, out, trace, frames;
  std::optional<int> workers;
};

const MapElement& SingleElement(const SceneFile& scene, const std::string& path) {
  if (scene.elements.size() != 1) {
    throw ValidationError(path + ": expected exactly one element, found " +
                          std::to_string(scene.elements.size()));
  }
  return scene.elements[0].element;
}

void WriteLossTrace(const FitTrace& trace, const std::string& path) {
  std::ostringstream csv;
  csv << "iteration,loss\n";
  for (size_t i = 0; i < trace.loss.size(); ++i) {
    csv << i << ',' << FormatNumber(trace.loss[i]) << '\n';
  }
  EnsureParentDir(path);
  WriteTextFile(path, csv.str());
}

int Fit(const FitArgs& a, std::ostream& out) {
  const ToolConfig cfg = LoadConfig(a.config, a.workers);
  const SceneFile target_scene = LoadScene(a.target, SceneRole::kGroundTruth);
  const SceneFile init_scene = LoadScene(a.init, SceneRole::kGroundTruth);
  const MapElement& target = SingleElement(target_scene, a.target);
  const MapElement& init = SingleElement(init_scene, a.init);
  if (target.kind() != init.kind()) {
    throw ValidationError(a.init + ": init kind differs from the target kind");
  }

  FitConfig fit_cfg = cfg.ToFitConfig();
  if (!a.frames.empty() && fit_cfg.snapshot_every == 0) {
    fit_cfg.snapshot_every = kDefaultFrameInterval;
  }
  RasterOptions opts;
  opts.workers = cfg.workers;
  const SoftMask target_mask =
      cfg.fit_target == TargetMode::kSoft
          ? RenderSoft(target, cfg.grid, Softness(cfg.tau), opts)
          : ToSoftMask(RenderHard(target, cfg.grid, cfg.line_dilation_px,
                                  cfg.dilation_kernel));

  const std::string trace_path =
      a.trace.empty() ? SiblingPath(a.out, ".trace.csv") : a.trace;
  FitResult result = [&] {
    try {
      return FitElement(target_mask, init, fit_cfg);
    } catch (const FitError& e) {
      WriteLossTrace(e.trace(), trace_path);
      throw;
    }
  }();

  SceneFile fitted;
  fitted.scene_id = init_scene.scene_id;
  fitted.vocabulary = init_scene.vocabulary;
  fitted.elements.push_back({result.element, std::nullopt});
  EnsureParentDir(a.out);
  WriteScene(fitted, a.out);

  WriteLossTrace(result.trace, trace_path);

  if (!a.frames.empty()) {
    fs::create_directories(a.frames);
    for (const FitSnapshot& s : result.trace.snapshots) {
      char name[64];
      std::snprintf(name, sizeof(name), "frame_%05d.pgm", s.iteration);
      WritePgmFile(RenderSoft(init.kind(), s.points, cfg.grid,
                              Softness(cfg.tau), opts),
                   (fs::path(a.frames) / name).string());
    }
  }

  const double iou = MaskIou(
      RenderHard(result.element, cfg.grid, cfg.line_dilation_px, cfg.dilation_kernel),
      RenderHard(target, cfg.grid, cfg.line_dilation_px, cfg.dilation_kernel));
  out << "fit: " << result.trace.loss.size() << " iteration(s), best loss "
      << FormatNumber(result.best_loss) << " at iteration "
      << result.trace.best_iteration
      << (result.trace.converged ? " (converged)" : "") << ", hard IoU "
      << FormatNumber(iou) << "\n";
  return kExitOk;
}

}  // namespace

int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"maprast: soft rasterization, raster/chamfer AP and mask fitting "
               "for vectorized map elements"};
  app.require_subcommand(1);

  RasterizeArgs ra;
  CLI::App* rasterize = app.add_subcommand("rasterize", "Render every element of a scene");
  rasterize->add_option("--in", ra.in, "Scene JSON")->required();
  rasterize->add_option("--config", ra.config, "Config JSON");
  rasterize->add_option("--mode", ra.mode, "soft (PGM) or hard (PBM)")
      ->check(CLI::IsMember({"soft", "hard"}));
  rasterize->add_option("--out", ra.out, "Output directory")->required();
  rasterize->add_option("--workers", ra.workers, "Worker threads");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Average precision of predictions");
  eval->require_subcommand(1);
  for (const char* metric : {"raster", "chamfer"}) {
    CLI::App* sub = eval->add_subcommand(
        metric, std::string(metric) == "raster" ? "IoU-matched AP" : "Chamfer-matched AP");
    sub->add_option("--pred", ea.preds, "Prediction scene JSON files")->required();
    sub->add_option("--gt", ea.gts, "Ground-truth scene JSON files")->required();
    sub->add_option("--config", ea.config, "Config JSON");
    sub->add_option("--out", ea.out, "Report JSON")->required();
    sub->add_option("--pr-csv", ea.pr_csv, "PR curve CSV (default <out>.pr.csv)");
    sub->add_option("--workers", ea.workers, "Worker threads");
    sub->callback([&ea, metric] { ea.metric = metric; });
  }

  FitArgs fa;
  CLI::App* fit = app.add_subcommand("fit", "Fit an element to a rendered target");
  fit->add_option("--target", fa.target, "Scene JSON with the target element")->required();
  fit->add_option("--init", fa.init, "Scene JSON with the initial element")->required();
  fit->add_option("--config", fa.config, "Config JSON");
  fit->add_option("--out", fa.out, "Fitted element JSON")->required();
  fit->add_option("--trace", fa.trace, "Loss trace CSV (default <out>.trace.csv)");
  fit->add_option("--frames", fa.frames, "Directory for per-snapshot PGM frames");
  fit->add_option("--workers", fa.workers, "Worker threads");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("maprast");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rasterize->parsed()) return Rasterize(ra, out);
    if (eval->parsed()) return Evaluate(ea, out);
    if (fit->parsed()) return Fit(fa, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << "usage error: no command given\n";
  return kExitUsage;
}

}  // namespace maprast
