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

// approxdet command line.
//
//   approxdet run       evaluate one configuration
//   approxdet sweep     every setup x fault probability
//   approxdet compare   diff two report.json files
//   approxdet convert-coco
//   approxdet propagate per-layer deviation of a workload vs 32full
//
// Exit codes: 0 ok, 1 compare found flagged deltas, 2 configuration
// error, 3 data error, 4 internal failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "approxdet/dataset.h"
#include "approxdet/experiment.h"
#include "approxdet/report.h"
#include "approxdet/workload.h"

namespace {

using approxdet::ConfigError;
using approxdet::DataError;
using approxdet::ExperimentConfig;

constexpr int kExitFlagged = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct CommonOptions {
  std::string setup = "32full";
  std::string reference_kind = "labels";
  std::string candidate;
  std::string reference;
  std::string out = "approxdet_out";
  ExperimentConfig cfg;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_setup) {
  if (with_setup) {
    app->add_option("--setup", o.setup,
                    "32full | 16full | 16approx | 16appfault")
        ->capture_default_str();
    app->add_option("--p-faulty", o.cfg.p_faulty,
                    "per-result mantissa bit flip probability (16appfault)");
  }
  app->add_option("--seed", o.cfg.seed, "fault seed")->capture_default_str();
  app->add_option("--conf-threshold", o.cfg.conf_threshold)->capture_default_str();
  app->add_option("--iou-threshold", o.cfg.iou_threshold)->capture_default_str();
  app->add_flag("--fusion", o.cfg.fusion, "fuse detections over three frames");
  app->add_flag("--generalize-vehicles", o.cfg.generalize_vehicles,
                "merge car/truck/motorbike/bus into Vehicle");
  app->add_option("--candidate", o.candidate,
                  "candidate detections (JSONL); omit for the toy pipeline");
  app->add_option("--reference", o.reference, "reference file (JSONL)");
  app->add_option("--reference-kind", o.reference_kind, "labels | detections")
      ->capture_default_str();
  app->add_option("--out", o.out, "output directory")->capture_default_str();
  app->add_option("--threads", o.cfg.threads)->capture_default_str();
  app->add_option("--toy-scenes", o.cfg.toy.scenes)->capture_default_str();
  app->add_option("--toy-seed", o.cfg.toy.seed)->capture_default_str();
  app->add_option("--toy-persistence", o.cfg.toy.persistence,
                  "probability an object survives into the next scene")
      ->capture_default_str();
}

ExperimentConfig finish(CommonOptions& o, bool with_setup) {
  ExperimentConfig cfg = o.cfg;
  try {
    if (with_setup) cfg.setup = approxdet::parse_setup(o.setup);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (o.reference_kind == "labels") {
    cfg.reference_kind = approxdet::ReferenceKind::kLabels;
  } else if (o.reference_kind == "detections") {
    cfg.reference_kind = approxdet::ReferenceKind::kDetections;
  } else {
    throw ConfigError("unknown reference kind '" + o.reference_kind + "'");
  }
  cfg.candidate = o.candidate;
  cfg.reference = o.reference;
  cfg.validate();
  return cfg;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"Approximate-arithmetic object detection experiments"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "evaluate one configuration");
  add_common(run, run_opts, true);

  CommonOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "all setups x fault probabilities");
  add_common(sweep, sweep_opts, false);

  std::string report_a, report_b;
  double tolerance = 0.01;
  CLI::App* compare = app.add_subcommand("compare", "diff two report.json files");
  compare->add_option("a", report_a)->required();
  compare->add_option("b", report_b)->required();
  compare->add_option("--tolerance", tolerance, "mAP/AP deltas up to this are ignored")
      ->capture_default_str();

  std::string coco_in, coco_out;
  CLI::App* coco = app.add_subcommand("convert-coco", "COCO JSON to JSONL records");
  coco->add_option("input", coco_in)->required();
  coco->add_option("output", coco_out)->required();

  std::string workload_path, prop_setup = "16approx";
  double prop_p = 0.0;
  std::uint64_t prop_seed = 0;
  unsigned prop_threads = 1;
  CLI::App* prop = app.add_subcommand("propagate", "per-layer deviation vs 32full");
  prop->add_option("workload", workload_path)->required();
  prop->add_option("--setup", prop_setup)->capture_default_str();
  prop->add_option("--p-faulty", prop_p);
  prop->add_option("--seed", prop_seed);
  prop->add_option("--threads", prop_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) {
    const ExperimentConfig cfg = finish(run_opts, true);
    const auto report = approxdet::run_experiment(cfg);
    approxdet::write_report_files(run_opts.out, report);
    approxdet::write_rows_csv(std::cout, std::span(&report, 1));
    return 0;
  }
  if (*sweep) {
    const ExperimentConfig cfg = finish(sweep_opts, false);
    const auto reports = approxdet::run_sweep(cfg);
    approxdet::write_sweep_files(sweep_opts.out, reports);
    approxdet::write_rows_csv(std::cout, reports);
    return 0;
  }
  if (*compare) {
    const auto diff = approxdet::compare_reports(read_json(report_a),
                                                 read_json(report_b), tolerance);
    approxdet::write_diff(std::cout, diff);
    return diff.any_flagged() ? kExitFlagged : 0;
  }
  if (*coco) {
    std::ifstream in(coco_in);
    if (!in) throw DataError("cannot open " + coco_in);
    approxdet::save_dataset(coco_out, approxdet::convert_coco(in));
    return 0;
  }
  if (*prop) {
    approxdet::ArithmeticConfig cfg;
    try {
      cfg.setup = approxdet::parse_setup(prop_setup);
      cfg.fault = {prop_p, prop_seed, std::nullopt};
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    approxdet::Workload w;
    try {
      w = approxdet::load_workload(workload_path);
    } catch (const std::exception& e) {
      throw DataError(e.what());
    }
    const auto rows = approxdet::error_propagation_report(
        approxdet::ArithmeticConfig::exact32(), cfg, w);
    std::cout << "layer,cells,affected_cells,max_relative,mean_relative,"
                 "mean_relative_affected\n";
    for (const auto& r : rows) {
      std::printf("%s,%zu,%zu,%.17g,%.17g,%.17g\n", r.name.c_str(), r.cells,
                  r.affected_cells, r.max_relative, r.mean_relative,
                  r.mean_relative_affected);
    }
    return 0;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const approxdet::SchemaMismatchError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
