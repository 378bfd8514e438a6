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

#include "approxdet/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace approxdet {
namespace {

double area_edge(std::size_t i, std::size_t decades, std::size_t per_decade) {
  return std::pow(10.0, -static_cast<double>(decades) +
                            static_cast<double>(i) / static_cast<double>(per_decade));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::size_t confidence_bin(double confidence, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  const double c = std::clamp(confidence, 0.0, 1.0);
  const auto k = static_cast<std::size_t>(c * static_cast<double>(bins));
  return std::min(k, bins - 1);
}

ConfidenceHistogram confidence_histogram(std::span<const Detection> dets,
                                         std::span<const GroundTruthObject> gts,
                                         const MatchResult& match,
                                         std::size_t bins) {
  ConfidenceHistogram h;
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
  }
  h.tp.assign(bins, 0);
  h.fp.assign(bins, 0);
  h.fn.assign(bins, 0);
  for (std::size_t d : match.ranking) {
    auto& column = match.detection_matched[d] ? h.tp : h.fp;
    ++column[confidence_bin(dets[d].confidence, bins)];
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (match.gt_matched[g]) continue;
    if (gts[g].confidence) {
      ++h.fn[confidence_bin(*gts[g].confidence, bins)];
    } else {
      ++h.fn_unscored;
    }
  }
  return h;
}

std::size_t area_bin(double area_ratio, std::size_t decades,
                     std::size_t per_decade) {
  const std::size_t n = decades * per_decade;
  if (!(area_ratio >= area_edge(0, decades, per_decade))) return 0;
  auto k = static_cast<std::size_t>(std::max(
      0.0, std::floor((std::log10(area_ratio) + static_cast<double>(decades)) *
                      static_cast<double>(per_decade))));
  k = std::min(k, n - 1);
  // Guard against log10 rounding at the edges.
  while (k > 0 && area_ratio < area_edge(k, decades, per_decade)) --k;
  while (k + 1 < n && area_ratio >= area_edge(k + 1, decades, per_decade)) ++k;
  return k + 1;
}

AreaBinning area_analysis(std::span<const GroundTruthObject> gts,
                          const MatchResult& match, std::size_t decades,
                          std::size_t per_decade) {
  if (decades == 0 || per_decade == 0) {
    throw std::invalid_argument("area binning needs positive decades and bins");
  }
  AreaBinning a;
  a.decades = decades;
  a.per_decade = per_decade;
  const std::size_t n = decades * per_decade;
  a.bins.push_back({0.0, area_edge(0, decades, per_decade), 0, 0, std::nullopt});
  for (std::size_t i = 0; i < n; ++i) {
    a.bins.push_back({area_edge(i, decades, per_decade),
                      i + 1 == n ? 1.0 : area_edge(i + 1, decades, per_decade), 0,
                      0, std::nullopt});
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    AreaBin& bin = a.bins[area_bin(gts[g].box.area(), decades, per_decade)];
    if (match.gt_matched[g]) {
      ++bin.tp;
    } else {
      ++bin.fn;
    }
  }
  for (AreaBin& bin : a.bins) {
    if (bin.tp + bin.fn > 0) {
      bin.tp_percent = 100.0 * static_cast<double>(bin.tp) /
                       static_cast<double>(bin.tp + bin.fn);
    }
  }
  return a;
}

ClassGeneralization::ClassGeneralization(std::map<std::string, std::string> mapping)
    : mapping_(std::move(mapping)) {
  for (const auto& [from, to] : mapping_) {
    if (mapping_.contains(to) && mapping_.at(to) != to) {
      throw std::invalid_argument("class mapping is not idempotent at '" + to + "'");
    }
  }
}

ClassGeneralization ClassGeneralization::vehicles() {
  std::map<std::string, std::string> m;
  for (std::string_view v : kVehicleClasses) {
    m.emplace(std::string(v), std::string(kVehicleClass));
  }
  return ClassGeneralization(std::move(m));
}

const std::string& ClassGeneralization::apply(const std::string& class_id) const {
  auto it = mapping_.find(class_id);
  return it == mapping_.end() ? class_id : it->second;
}

EvaluationInputs generalize_classes(std::span<const Detection> dets,
                                    std::span<const GroundTruthObject> gts,
                                    const ClassGeneralization& mapping) {
  EvaluationInputs out;
  out.detections.assign(dets.begin(), dets.end());
  out.ground_truth.assign(gts.begin(), gts.end());
  for (Detection& d : out.detections) d.class_id = mapping.apply(d.class_id);
  for (GroundTruthObject& g : out.ground_truth) g.class_id = mapping.apply(g.class_id);
  return out;
}

void write_confidence_csv(std::ostream& out, const ConfidenceHistogram& h) {
  out << "bin_lower,bin_upper,tp,fp,fn,fp_plus_fn\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ','
        << h.tp[i] << ',' << h.fp[i] << ',' << h.fn[i] << ','
        << h.fp[i] + h.fn[i] << '\n';
  }
  if (h.fn_unscored) out << "unscored,unscored,0,0," << h.fn_unscored << ','
                         << h.fn_unscored << '\n';
}

void write_area_csv(std::ostream& out, const AreaBinning& a) {
  out << "area_lower,area_upper,tp,fn,tp_percent\n";
  for (const AreaBin& b : a.bins) {
    out << format_double(b.lower) << ',' << format_double(b.upper) << ',' << b.tp
        << ',' << b.fn << ',';
    if (b.tp_percent) out << format_double(*b.tp_percent);
    out << '\n';
  }
}

}  // namespace approxdet
