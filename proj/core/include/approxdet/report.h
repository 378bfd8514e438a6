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

// Evaluation reports: one summary row per configuration plus per-class
// detail, analysis tables and fault counters. Serialized as JSON (full
// double precision) and CSV.

#ifndef APPROXDET_REPORT_H_
#define APPROXDET_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "approxdet/analysis.h"
#include "approxdet/fault.h"
#include "approxdet/metrics.h"

namespace approxdet {

inline constexpr const char* kReportSchema = "approxdet.report/1";

struct ReportRow {
  std::string setup;
  double p_faulty = 0.0;
  std::string channel;  // "labelled", "iT" or "T"
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Absent when no class of the set has ground truth.
  std::optional<double> map_vehicle;
  std::optional<double> map_vehicle_person;
};

struct EvalReport {
  nlohmann::json config;  // echo of the experiment configuration
  ReportRow row;
  std::map<std::string, double> ap;
  std::map<std::string, ClassCounts> per_class;
  std::vector<std::string> excluded_classes;
  std::optional<FaultStats> fault_stats;
  ConfidenceHistogram confidence;
  AreaBinning area;
};

nlohmann::json report_to_json(const EvalReport& report);

// Header plus one line per report.
void write_rows_csv(std::ostream& out, std::span<const EvalReport> reports);

// report.json, report.csv, confidence_hist.csv, area_bins.csv.
void write_report_files(const std::filesystem::path& dir, const EvalReport& report);

// JSON array of reports plus one combined CSV: sweep.json, sweep.csv.
void write_sweep_files(const std::filesystem::path& dir,
                       std::span<const EvalReport> reports);

class SchemaMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FieldDelta {
  std::string field;  // JSON pointer
  nlohmann::json a;   // null when absent
  nlohmann::json b;
  std::optional<double> delta;  // b - a for numeric fields
  bool flagged = false;         // mAP/AP change beyond the tolerance
};

struct ReportDiff {
  std::vector<FieldDelta> deltas;
  bool empty() const { return deltas.empty(); }
  bool any_flagged() const;
};

// Field-by-field comparison of two serialized reports. mAP and AP deltas
// with magnitude <= map_tolerance are dropped; larger ones are flagged.
// Throws SchemaMismatchError when the schemas differ.
ReportDiff compare_reports(const nlohmann::json& a, const nlohmann::json& b,
                           double map_tolerance = 0.01);

void write_diff(std::ostream& out, const ReportDiff& diff);

}  // namespace approxdet

#endif  // APPROXDET_REPORT_H_
