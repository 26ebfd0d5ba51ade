// Copyright 2026 The skillpdf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "skillpdf/density.hpp"
#include "skillpdf/error.hpp"
#include "skillpdf/metrics.hpp"
#include "skillpdf/model.hpp"
#include "skillpdf/quadrature.hpp"

namespace skillpdf {

using Json = nlohmann::ordered_json;

// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::vector<double> export_grid(std::size_t points = kExportGridPoints) {
  return linspace(kSupportLo, kSupportHi, points);
}

inline void write_density_csv(std::ostream& out, const DensityEstimate& d,
                              std::size_t points = kExportGridPoints) {
  out << "x,density\n";
  for (double x : export_grid(points)) {
    out << format_double(x) << ',' << format_double(d(x)) << '\n';
  }
}

inline Json density_json(const DensityEstimate& d, std::size_t points = kExportGridPoints) {
  Json grid = Json::array();
  Json values = Json::array();
  for (double x : export_grid(points)) {
    grid.push_back(x);
    values.push_back(d(x));
  }
  return Json{{"grid", std::move(grid)},
              {"values", std::move(values)},
              {"h", d.bandwidth()},
              {"kernel", d.kernel().name()},
              {"truncated", d.truncated()}};
}

/// {players:[], edges:[{i,j,k,winfrac_ij}]}; winfrac_ij is the fraction of
/// the k games that j won against i. Players default to "0".."n-1".
inline Json observations_json(const ObservationMatrix& obs,
                              std::span<const std::string> players = {}) {
  Json names = Json::array();
  for (std::size_t i = 0; i < obs.n(); ++i) {
    names.push_back(i < players.size() ? players[i] : std::to_string(i));
  }
  Json edges = Json::array();
  const auto graph_edges = obs.graph().edges();
  for (std::size_t e = 0; e < graph_edges.size(); ++e) {
    edges.push_back(Json{{"i", graph_edges[e].i},
                         {"j", graph_edges[e].j},
                         {"k", obs.games()[e]},
                         {"wins_j", obs.wins()[e]},
                         {"winfrac_ij", obs.win_fraction(e)}});
  }
  return Json{{"players", std::move(names)}, {"p", obs.graph().p()}, {"edges", std::move(edges)}};
}

inline Json trial_json(const TrialResult& r) {
  return Json{{"n", r.n},
              {"p", r.p},
              {"k", r.k},
              {"seed", r.seed},
              {"rel_linf_risk", r.rel_linf_risk},
              {"l1_risk", r.l1_risk},
              {"rel_l2_risk", r.rel_l2_risk},
              {"ise", r.ise},
              {"skill_sup_error", r.skill_sup_error},
              {"converged", r.converged},
              {"retries", r.retries},
              {"iterations", r.iterations},
              {"bandwidth", r.bandwidth}};
}

inline Json config_json(const TrialConfig& c) {
  Json j{{"density", to_string(c.family)},
         {"delta", c.spec.delta},
         {"epsilon", c.spec.epsilon},
         {"b", c.spec.b},
         {"class_eta", c.spec.eta},
         {"L1", c.spec.L1},
         {"B", c.spec.B},
         {"n", c.n},
         {"p", c.p},
         {"k", c.k},
         {"bandwidth", to_string(c.bandwidth)},
         {"gamma", c.gamma},
         {"eta", c.eta},
         {"kernel", c.kernel},
         {"truncate", c.truncate}};
  if (c.fixed_skills) j["fixed_skills"] = *c.fixed_skills;
  return j;
}

inline Json report_json(const RiskReport& report) {
  Json j;
  j["grid"] = report.grid;
  j["trials_per_point"] = report.trials_per_point;
  j["base_seed"] = report.base_seed;
  j["aggregate"] = report.aggregate == Aggregate::Mean ? "mean" : "median";
  if (report.config) j["config"] = config_json(*report.config);
  Json status = Json::array();
  for (const auto& s : report.status) {
    status.push_back(Json{{"n", s.n},
                          {"succeeded", s.succeeded},
                          {"failed", s.failed},
                          {"nonconverged", s.nonconverged},
                          {"flagged", s.flagged}});
  }
  j["status"] = std::move(status);
  Json risks = Json::object();
  for (const auto& series : report.series) {
    Json points = Json::array();
    for (const auto& p : series.points) {
      points.push_back(Json{{"n", p.n}, {"value", p.value}, {"stderr", p.std_error}, {"trials", p.trials}});
    }
    Json entry{{"points", std::move(points)}};
    entry["exponent"] = std::isfinite(series.exponent) ? Json(series.exponent) : Json(nullptr);
    risks[to_string(series.type)] = std::move(entry);
  }
  j["risks"] = std::move(risks);
  Json trials = Json::array();
  for (const auto& per_point : report.trials) {
    Json list = Json::array();
    for (const auto& r : per_point) list.push_back(trial_json(r));
    trials.push_back(std::move(list));
  }
  j["trials"] = std::move(trials);
  return j;
}

// Grid table: risk_type,n,mean,stderr,trials.
inline void write_report_csv(std::ostream& out, const RiskReport& report) {
  out << "risk_type,n,mean,stderr,trials\n";
  for (const auto& series : report.series) {
    for (const auto& p : series.points) {
      out << to_string(series.type) << ',' << p.n << ',' << format_double(p.value) << ','
          << format_double(p.std_error) << ',' << p.trials << '\n';
    }
  }
}

/// Writes `content` to `path` via a sibling temporary and a rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace skillpdf
