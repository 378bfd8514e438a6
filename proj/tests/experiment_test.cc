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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "approxdet/dataset.h"
#include "approxdet/report.h"

namespace approxdet {
namespace {

namespace fs = std::filesystem;

ToyPipelineParams small_toy() {
  ToyPipelineParams p;
  p.scenes = 4;
  p.calibration_scenes = 6;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("approxdet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<Detection> sample_detections() {
  return {{"car", 0.9, {0.1, 0.1, 0.3, 0.3}, 0},
          {"truck", 0.8, {0.5, 0.5, 0.7, 0.7}, 0},
          {"person", 0.7, {0.2, 0.6, 0.3, 0.9}, 1},
          {"bus", 0.6, {0.6, 0.1, 0.9, 0.3}, 1}};
}

std::vector<GroundTruthObject> as_truth(const std::vector<Detection>& d) {
  std::vector<GroundTruthObject> g;
  for (const auto& x : d) g.push_back({x.class_id, x.box, x.frame_id, std::nullopt});
  return g;
}

TEST(ConfigTest, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.conf_threshold = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.p_faulty = 1e-3;
  EXPECT_THROW(c.validate(), ConfigError);
  c.setup = approxdet::Setup::kApprox16Fault;
  EXPECT_NO_THROW(c.validate());
  c = {};
  c.candidate = "x.jsonl";
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(ExperimentConfig{}.to_json().at("mode"), "toy");
}

TEST(EvaluateTest, IdentityGivesPerfectScores) {
  ExperimentConfig cfg;
  const auto d = sample_detections();
  const auto r = evaluate_detections(cfg, d, as_truth(d), {0, 1});
  EXPECT_EQ(r.row.tp, 4u);
  EXPECT_EQ(r.row.fp, 0u);
  EXPECT_EQ(r.row.fn, 0u);
  EXPECT_EQ(r.row.channel, "labelled");
  EXPECT_EQ(r.row.map_vehicle, 1.0);
  EXPECT_EQ(r.row.map_vehicle_person, 1.0);
}

TEST(EvaluateTest, MissingClassSetGivesNullMap) {
  ExperimentConfig cfg;
  std::vector<Detection> d = {{"dog", 0.9, {0.1, 0.1, 0.3, 0.3}, 0}};
  const auto r = evaluate_detections(cfg, d, as_truth(d), {0});
  EXPECT_FALSE(r.row.map_vehicle.has_value());
  EXPECT_TRUE(report_to_json(r).at("row").at("map_vehicle").is_null());
}

TEST(EvaluateTest, GeneralizationMergesVehicles) {
  ExperimentConfig cfg;
  cfg.generalize_vehicles = true;
  auto d = sample_detections();
  auto g = as_truth(d);
  d[0].class_id = "truck";
  const auto r = evaluate_detections(cfg, d, g, {0, 1});
  EXPECT_EQ(r.row.fp, 0u);
  EXPECT_EQ(r.ap.count("Vehicle"), 1u);
  EXPECT_EQ(r.row.map_vehicle, 1.0);
}

TEST(EvaluateTest, FusionChannelSuppressesSingleFrameFalseAlarm) {
  ExperimentConfig cfg;
  cfg.fusion = true;
  cfg.reference_kind = ReferenceKind::kDetections;
  std::vector<Detection> ref, cand;
  for (std::int64_t f = 0; f < 5; ++f) {
    ref.push_back({"car", 0.8, {0.1, 0.1, 0.3, 0.3}, f});
    cand.push_back(ref.back());
  }
  cand.push_back({"person", 0.95, {0.6, 0.6, 0.8, 0.8}, 2});
  std::vector<GroundTruthObject> ref_g;
  for (const auto& d : ref) ref_g.push_back(as_ground_truth(d));
  const auto fused = evaluate_detections(cfg, cand, ref_g, {0, 1, 2, 3, 4});
  EXPECT_EQ(fused.row.channel, "T");
  EXPECT_EQ(fused.row.fp, 0u);
  cfg.fusion = false;
  const auto raw = evaluate_detections(cfg, cand, ref_g, {0, 1, 2, 3, 4});
  EXPECT_EQ(raw.row.channel, "iT");
  EXPECT_EQ(raw.row.fp, 1u);
}

TEST(CompareTest, IdenticalReportsHaveEmptyDiff) {
  ExperimentConfig cfg;
  const auto d = sample_detections();
  const auto j = report_to_json(evaluate_detections(cfg, d, as_truth(d), {0, 1}));
  EXPECT_TRUE(compare_reports(j, j).empty());
}

TEST(CompareTest, OneExtraFalsePositive) {
  ExperimentConfig cfg;
  const auto d = sample_detections();
  auto d2 = d;
  d2.push_back({"car", 0.55, {0.8, 0.8, 0.9, 0.9}, 1});
  const auto a = report_to_json(evaluate_detections(cfg, d, as_truth(d), {0, 1}));
  const auto b = report_to_json(evaluate_detections(cfg, d2, as_truth(d), {0, 1}));
  const auto diff = compare_reports(a, b);
  bool saw_fp = false;
  for (const auto& f : diff.deltas) {
    if (f.field == "/row/fp") {
      saw_fp = true;
      EXPECT_EQ(f.delta, 1.0);
    }
  }
  EXPECT_TRUE(saw_fp);
  // The FP ranks below the TP so AP is unchanged.
  EXPECT_FALSE(diff.any_flagged());
  std::ostringstream out;
  write_diff(out, diff);
  EXPECT_NE(out.str().find("/row/fp"), std::string::npos);
}

TEST(CompareTest, ToleranceOnPrecisionFields) {
  nlohmann::json a = {{"schema", kReportSchema}, {"row", {{"map_vehicle", 0.50}}}};
  nlohmann::json b = a;
  b["row"]["map_vehicle"] = 0.505;
  EXPECT_TRUE(compare_reports(a, b).empty());
  b["row"]["map_vehicle"] = 0.52;
  const auto diff = compare_reports(a, b);
  ASSERT_EQ(diff.deltas.size(), 1u);
  EXPECT_TRUE(diff.any_flagged());
  EXPECT_FALSE(compare_reports(a, b, 0.05).any_flagged());
}

TEST(CompareTest, SchemaMismatch) {
  nlohmann::json a = {{"schema", kReportSchema}};
  nlohmann::json b = {{"schema", "approxdet.report/0"}};
  EXPECT_THROW(compare_reports(a, b), SchemaMismatchError);
}

TEST(ExperimentTest, ToyRunIsDeterministic) {
  ExperimentConfig cfg;
  cfg.setup = approxdet::Setup::kApprox16Fault;
  cfg.p_faulty = 1e-3;
  cfg.seed = 5;
  cfg.toy = small_toy();
  const auto a = report_to_json(run_experiment(cfg));
  cfg.threads = 3;
  const auto b = report_to_json(run_experiment(cfg));
  EXPECT_EQ(a.dump(), b.dump());
  ASSERT_TRUE(a.contains("fault_stats"));
  EXPECT_GT(a["fault_stats"]["results_produced"].get<std::uint64_t>(), 0u);
}

TEST(ExperimentTest, ReportFilesAreByteIdentical) {
  ExperimentConfig cfg;
  cfg.setup = approxdet::Setup::kApprox16;
  cfg.toy = small_toy();
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  write_report_files(d1, run_experiment(cfg));
  write_report_files(d2, run_experiment(cfg));
  for (const char* f : {"report.json", "report.csv", "confidence_hist.csv", "area_bins.csv"}) {
    ASSERT_TRUE(fs::exists(d1 / f)) << f;
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(ExperimentTest, SweepCoversSetupsAndProbabilities) {
  ExperimentConfig base;
  const auto cfgs = sweep_configs(base);
  ASSERT_EQ(cfgs.size(), 3u + kSweepProbabilities.size());
  EXPECT_EQ(cfgs[0].setup, approxdet::Setup::kExact32);
  EXPECT_EQ(cfgs.back().setup, approxdet::Setup::kApprox16Fault);
  EXPECT_EQ(cfgs.back().p_faulty, 1e-3);
}

TEST(ExperimentTest, FileModeSelfEvaluation) {
  const auto dir = scratch("files");
  const auto d = sample_detections();
  save_dataset(dir / "cand.jsonl", from_detections(d, {0, 1}));
  ExperimentConfig cfg;
  cfg.candidate = dir / "cand.jsonl";
  cfg.reference = dir / "cand.jsonl";
  cfg.reference_kind = ReferenceKind::kDetections;
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.row.tp, 4u);
  EXPECT_EQ(r.row.map_vehicle_person, 1.0);
  fs::remove_all(dir);
}

#ifdef APPROXDET_CLI_PATH
int cli(const std::string& args) {
  const std::string cmd = std::string(APPROXDET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(CliTest, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string out = (dir / "run").string();
  EXPECT_EQ(cli("run --setup 16approx --toy-scenes 2 --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "report.json"));
  EXPECT_EQ(cli("run --setup 16half"), 2);
  EXPECT_EQ(cli("run --setup 16full --p-faulty 0.1"), 2);
  EXPECT_EQ(cli("run --no-such-flag"), 2);
  EXPECT_EQ(cli("run --candidate " + (dir / "missing.jsonl").string() + " --reference " +
                (dir / "missing.jsonl").string()),
            3);
  const std::string rep = (dir / "run" / "report.json").string();
  EXPECT_EQ(cli("compare " + rep + " " + rep), 0);

  auto j = nlohmann::json::parse(slurp(rep));
  j["row"]["map_vehicle_person"] = 0.0;
  j["row"]["map_vehicle"] = -1.0;
  std::ofstream(dir / "other.json") << j.dump();
  EXPECT_EQ(cli("compare " + rep + " " + (dir / "other.json").string()), 1);
  j["schema"] = "something/else";
  std::ofstream(dir / "bad.json") << j.dump();
  EXPECT_EQ(cli("compare " + rep + " " + (dir / "bad.json").string()), 3);
  fs::remove_all(dir);
}
#endif

}  // namespace
}  // namespace approxdet
