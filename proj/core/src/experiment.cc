// Copyright 2026 The approxdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "approxdet/experiment.h"

#include <algorithm>
#include <map>
#include <set>

#include "approxdet/analysis.h"
#include "approxdet/dataset.h"
#include "approxdet/fusion.h"
#include "approxdet/metrics.h"

namespace approxdet {
namespace {

using nlohmann::json;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::vector<Detection> fuse(const std::vector<Detection>& dets,
                            const std::vector<std::int64_t>& frames,
                            double conf_threshold) {
  std::map<std::int64_t, Frame> by_frame;
  for (std::int64_t f : frames) by_frame[f].frame_id = f;
  for (const Detection& d : dets) {
    Frame& f = by_frame[d.frame_id];
    f.frame_id = d.frame_id;
    f.detections.push_back(d);
  }
  FrameSequence seq;
  for (auto& [id, f] : by_frame) seq.push_back(std::move(f));
  FusionParams params;
  params.conf_threshold = conf_threshold;
  std::vector<Detection> out;
  for (const Frame& f : fuse_sequence(seq, params)) {
    out.insert(out.end(), f.detections.begin(), f.detections.end());
  }
  return out;
}

std::optional<double> safe_map(const std::map<std::string, double>& ap,
                               const std::vector<std::string>& set) {
  try {
    return mean_average_precision(ap, set);
  } catch (const EmptyClassSetError&) {
    return std::nullopt;
  }
}

std::string_view reference_name(ReferenceKind k) {
  return k == ReferenceKind::kLabels ? "labels" : "detections";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!in_unit_interval(conf_threshold) || !in_unit_interval(iou_threshold)) {
    throw ConfigError("thresholds must lie in [0, 1]");
  }
  if (!in_unit_interval(p_faulty)) throw ConfigError("p_faulty must lie in [0, 1]");
  if (p_faulty > 0.0 && setup != Setup::kApprox16Fault) {
    throw ConfigError("p_faulty requires the 16appfault setup");
  }
  if (threads == 0) throw ConfigError("threads must be positive");
  if (toy_mode()) {
    if (!reference.empty()) {
      throw ConfigError("a reference file needs a candidate file");
    }
    try {
      toy.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (reference.empty()) {
    throw ConfigError("a candidate file needs a reference file");
  }
}

ArithmeticConfig ExperimentConfig::arithmetic() const {
  if (setup == Setup::kApprox16Fault) {
    return ArithmeticConfig::approx16_fault(p_faulty, seed);
  }
  return {setup, {}};
}

json ExperimentConfig::to_json() const {
  json j = {{"setup", setup_name(setup)},
            {"p_faulty", p_faulty},
            {"seed", seed},
            {"conf_threshold", conf_threshold},
            {"iou_threshold", iou_threshold},
            {"fusion", fusion},
            {"generalize_vehicles", generalize_vehicles},
            {"reference_kind", reference_name(reference_kind)}};
  if (toy_mode()) {
    j["mode"] = "toy";
    j["toy"] = {{"scenes", toy.scenes},
                {"grid", toy.grid},
                {"cell_pixels", toy.cell_pixels},
                {"hidden_channels", toy.hidden_channels},
                {"cell_features", toy.cell_features},
                {"object_probability", toy.object_probability},
                {"noise_sigma", toy.noise_sigma},
                {"persistence", toy.persistence},
                {"calibration_scenes", toy.calibration_scenes},
                {"ridge_lambda", toy.ridge_lambda},
                {"seed", toy.seed}};
  } else {
    j["mode"] = "files";
    j["candidate"] = candidate.generic_string();
    j["reference"] = reference.generic_string();
  }
  return j;
}

EvalReport evaluate_detections(const ExperimentConfig& cfg,
                               std::vector<Detection> candidate,
                               std::vector<GroundTruthObject> reference,
                               const std::vector<std::int64_t>& frames) {
  const bool detection_reference = cfg.reference_kind == ReferenceKind::kDetections;
  if (cfg.fusion) {
    candidate = fuse(candidate, frames, cfg.conf_threshold);
    if (detection_reference) {
      std::vector<Detection> ref;
      for (const GroundTruthObject& g : reference) {
        ref.push_back({g.class_id, g.confidence.value_or(1.0), g.box, g.frame_id});
      }
      reference.clear();
      for (const Detection& d : fuse(ref, frames, cfg.conf_threshold)) {
        reference.push_back(as_ground_truth(d));
      }
    }
  }
  if (detection_reference) {
    std::erase_if(reference, [&](const GroundTruthObject& g) {
      return g.confidence && *g.confidence < cfg.conf_threshold;
    });
  }
  if (cfg.generalize_vehicles) {
    EvaluationInputs merged =
        generalize_classes(candidate, reference, ClassGeneralization::vehicles());
    candidate = std::move(merged.detections);
    reference = std::move(merged.ground_truth);
  }

  const MatchParams params{cfg.iou_threshold, cfg.conf_threshold};
  const MatchResult match = match_detections(candidate, reference, params);
  const APResult ap = evaluate_ap(candidate, reference, match);

  EvalReport r;
  r.config = cfg.to_json();
  r.row.setup = std::string(setup_name(cfg.setup));
  r.row.p_faulty = cfg.p_faulty;
  r.row.channel = !detection_reference ? "labelled" : (cfg.fusion ? "T" : "iT");
  r.row.tp = match.tp;
  r.row.fp = match.fp;
  r.row.fn = match.fn;
  std::vector<std::string> vehicles = vehicle_class_set();
  std::vector<std::string> vehicles_person = vehicle_and_person_class_set();
  if (cfg.generalize_vehicles) {
    vehicles = {std::string(kVehicleClass)};
    vehicles_person = {std::string(kVehicleClass), std::string(kPersonClass)};
  }
  r.row.map_vehicle = safe_map(ap.ap, vehicles);
  r.row.map_vehicle_person = safe_map(ap.ap, vehicles_person);
  r.ap = ap.ap;
  r.per_class = match.per_class;
  r.excluded_classes = ap.excluded_classes;
  r.confidence = confidence_histogram(candidate, reference, match);
  r.area = area_analysis(reference, match);
  return r;
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool detection_reference = cfg.reference_kind == ReferenceKind::kDetections;
  if (cfg.toy_mode()) {
    const ToyPipeline pipeline(cfg.toy);
    ToyRun run = pipeline.run(cfg.arithmetic(), cfg.threads);
    std::vector<GroundTruthObject> reference;
    if (detection_reference) {
      for (const Detection& d :
           pipeline.run(ArithmeticConfig::exact32(), cfg.threads).detections) {
        reference.push_back(as_ground_truth(d));
      }
    } else {
      reference = pipeline.ground_truth();
    }
    EvalReport r = evaluate_detections(cfg, std::move(run.detections),
                                       std::move(reference), pipeline.frames());
    if (cfg.setup == Setup::kApprox16Fault) r.fault_stats = run.stats;
    return r;
  }

  const auto candidate = load_dataset(cfg.candidate);
  const auto reference = load_dataset(cfg.reference);
  std::set<std::int64_t> frame_set;
  for (const auto& rec : candidate) frame_set.insert(rec.frame);
  for (const auto& rec : reference) frame_set.insert(rec.frame);
  std::vector<GroundTruthObject> gts;
  if (detection_reference) {
    for (const Detection& d : to_detections(reference)) gts.push_back(as_ground_truth(d));
  } else {
    gts = to_ground_truth(reference);
  }
  return evaluate_detections(cfg, to_detections(candidate), std::move(gts),
                             {frame_set.begin(), frame_set.end()});
}

std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base,
                                            std::span<const double> probabilities) {
  std::vector<ExperimentConfig> out;
  for (Setup s : kAllSetups) {
    ExperimentConfig c = base;
    c.setup = s;
    if (s != Setup::kApprox16Fault) {
      c.p_faulty = 0.0;
      out.push_back(c);
      continue;
    }
    for (double p : probabilities) {
      c.p_faulty = p;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<EvalReport> run_sweep(const ExperimentConfig& base,
                                  std::span<const double> probabilities) {
  std::vector<EvalReport> out;
  for (const ExperimentConfig& c : sweep_configs(base, probabilities)) {
    out.push_back(run_experiment(c));
  }
  return out;
}

}  // namespace approxdet
