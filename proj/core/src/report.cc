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

#include "approxdet/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace approxdet {
namespace {

using nlohmann::json;

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void flatten(const json& j, const std::string& prefix,
             std::map<std::string, json>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix + "/" + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "/" + std::to_string(i), out);
    }
  } else {
    out[prefix] = j;
  }
}

bool is_precision_field(const std::string& field) {
  return field.find("/map_") != std::string::npos ||
         field.rfind("/ap/", 0) == 0;
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json j;
  j["schema"] = kReportSchema;
  j["config"] = report.config;
  const ReportRow& r = report.row;
  j["row"] = {{"setup", r.setup},
              {"p_faulty", r.p_faulty},
              {"channel", r.channel},
              {"tp", r.tp},
              {"fp", r.fp},
              {"fn", r.fn},
              {"map_vehicle", optional_json(r.map_vehicle)},
              {"map_vehicle_person", optional_json(r.map_vehicle_person)}};
  j["ap"] = json::object();
  for (const auto& [cls, ap] : report.ap) j["ap"][cls] = ap;
  j["per_class"] = json::object();
  for (const auto& [cls, c] : report.per_class) {
    j["per_class"][cls] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  }
  j["excluded_classes"] = report.excluded_classes;
  if (report.fault_stats) {
    const FaultStats& s = *report.fault_stats;
    j["fault_stats"] = {{"results_produced", s.results_produced},
                        {"faults_injected", s.faults_injected},
                        {"bit_histogram", s.bit_histogram}};
  } else {
    j["fault_stats"] = nullptr;
  }
  const ConfidenceHistogram& h = report.confidence;
  j["confidence_histogram"] = {{"edges", h.edges},
                               {"tp", h.tp},
                               {"fp", h.fp},
                               {"fn", h.fn},
                               {"fn_unscored", h.fn_unscored}};
  json bins = json::array();
  for (const AreaBin& b : report.area.bins) {
    bins.push_back({{"lower", b.lower},
                    {"upper", b.upper},
                    {"tp", b.tp},
                    {"fn", b.fn},
                    {"tp_percent", optional_json(b.tp_percent)}});
  }
  j["area_bins"] = std::move(bins);
  return j;
}

void write_rows_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "setup,p_faulty,channel,tp,fp,fn,map_vehicle,map_vehicle_person\n";
  for (const EvalReport& rep : reports) {
    const ReportRow& r = rep.row;
    out << r.setup << ',' << format_double(r.p_faulty) << ',' << r.channel << ','
        << r.tp << ',' << r.fp << ',' << r.fn << ',';
    if (r.map_vehicle) out << format_double(*r.map_vehicle);
    out << ',';
    if (r.map_vehicle_person) out << format_double(*r.map_vehicle_person);
    out << '\n';
  }
}

void write_report_files(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  open_for_write(dir / "report.json") << report_to_json(report).dump(2) << '\n';
  {
    auto out = open_for_write(dir / "report.csv");
    write_rows_csv(out, std::span(&report, 1));
  }
  {
    auto out = open_for_write(dir / "confidence_hist.csv");
    write_confidence_csv(out, report.confidence);
  }
  auto out = open_for_write(dir / "area_bins.csv");
  write_area_csv(out, report.area);
}

void write_sweep_files(const std::filesystem::path& dir,
                       std::span<const EvalReport> reports) {
  std::filesystem::create_directories(dir);
  json all = json::array();
  for (const EvalReport& r : reports) all.push_back(report_to_json(r));
  open_for_write(dir / "sweep.json") << all.dump(2) << '\n';
  auto out = open_for_write(dir / "sweep.csv");
  write_rows_csv(out, reports);
}

bool ReportDiff::any_flagged() const {
  for (const FieldDelta& d : deltas) {
    if (d.flagged) return true;
  }
  return false;
}

ReportDiff compare_reports(const json& a, const json& b, double map_tolerance) {
  const json sa = a.is_object() ? a.value("schema", json()) : json();
  const json sb = b.is_object() ? b.value("schema", json()) : json();
  if (sa != kReportSchema || sb != kReportSchema) {
    throw SchemaMismatchError("report schemas differ or are missing: " + sa.dump() +
                              " vs " + sb.dump());
  }
  std::map<std::string, json> fa, fb;
  flatten(a, "", fa);
  flatten(b, "", fb);
  std::set<std::string> fields;
  for (const auto& [k, v] : fa) fields.insert(k);
  for (const auto& [k, v] : fb) fields.insert(k);

  ReportDiff diff;
  for (const std::string& field : fields) {
    auto ia = fa.find(field);
    auto ib = fb.find(field);
    const json va = ia == fa.end() ? json() : ia->second;
    const json vb = ib == fb.end() ? json() : ib->second;
    if (va == vb) continue;
    FieldDelta d{field, va, vb, std::nullopt, false};
    if (va.is_number() && vb.is_number()) {
      d.delta = vb.get<double>() - va.get<double>();
      if (is_precision_field(field)) {
        if (std::fabs(*d.delta) <= map_tolerance) continue;
        d.flagged = true;
      }
    } else if (is_precision_field(field)) {
      d.flagged = true;
    }
    diff.deltas.push_back(std::move(d));
  }
  return diff;
}

void write_diff(std::ostream& out, const ReportDiff& diff) {
  for (const FieldDelta& d : diff.deltas) {
    out << (d.flagged ? "! " : "  ") << d.field << ": " << d.a.dump() << " -> "
        << d.b.dump();
    if (d.delta) out << " (" << format_double(*d.delta) << ')';
    out << '\n';
  }
}

}  // namespace approxdet
