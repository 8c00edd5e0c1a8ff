// Copyright 2026 The allres Authors
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

#include "allres/report.hpp"

#include <filesystem>
#include <fstream>

namespace allres {

using nlohmann::ordered_json;

ordered_json report_header(const std::string& command, GateKind kind, const RunConfig& config) {
  ordered_json j;
  j["schema"] = "allres.report";
  j["schema_version"] = kReportSchemaVersion;
  j["software_version"] = kSoftwareVersion;
  j["command"] = command;
  j["gate"] = std::string(to_string(kind));
  ordered_json echo = ordered_json::object();
  for (const ConfigKey& k : config_schema()) {
    const ConfigValue& v = config.get(k.name);
    echo[k.name] = v.word.empty() ? format_double(v.number) + (v.unit.empty() ? "" : " " + v.unit) : v.word;
  }
  j["config"] = std::move(echo);
  return j;
}

ordered_json schedule_json(const Schedule& schedule) {
  ordered_json steps = ordered_json::array();
  for (const PulseStep& s : schedule.steps) {
    ordered_json j;
    j["label"] = s.label;
    j["resonator"] = std::string(1, static_cast<char>('a' + s.addressed.resonator));
    j["transition"] = to_string(s.addressed.transition);
    j["pulse_area_over_pi"] = s.pulse_area / 3.14159265358979323846;
    j["duration_ns"] = s.duration;
    j["omega_ge_ghz"] = s.omega_ge / kTwoPi;
    ordered_json gge = ordered_json::array();
    ordered_json gef = ordered_json::array();
    for (std::size_t r = 0; r < s.g_ge.size(); ++r) {
      gge.push_back(s.g_ge[r] / kTwoPi * 1e3);
      gef.push_back(s.g_ef[r] / kTwoPi * 1e3);
    }
    j["g_ge_mhz"] = std::move(gge);
    j["g_ef_mhz"] = std::move(gef);
    steps.push_back(std::move(j));
  }
  ordered_json out;
  out["phase_convention"] = to_string(schedule.phase_convention);
  out["total_duration_ns"] = schedule.total_duration();
  out["steps"] = std::move(steps);
  return out;
}

ordered_json envelope_json(const std::vector<StepEnvelope>& steps) {
  ordered_json out = ordered_json::array();
  for (const StepEnvelope& e : steps) {
    ordered_json j;
    j["label"] = e.label;
    j["t_start_ns"] = e.t_start;
    j["t_end_ns"] = e.t_end;
    j["substeps"] = e.substeps;
    j["max_trace_error"] = e.max_trace_error;
    j["max_hermiticity_drift"] = e.max_hermiticity_drift;
    j["min_eigenvalue"] = e.min_eigenvalue;
    j["max_excitation_drift"] = e.max_excitation_drift;
    out.push_back(std::move(j));
  }
  return out;
}

ordered_json diagnostics_json(const std::vector<StepDiagnostics>& steps) {
  ordered_json out = ordered_json::array();
  for (const StepDiagnostics& d : steps) {
    ordered_json j;
    j["label"] = d.label;
    j["t_start_ns"] = d.t_start;
    j["t_end_ns"] = d.t_end;
    j["substeps"] = d.substeps;
    j["trace_error"] = d.trace_error;
    j["hermiticity_drift"] = d.hermiticity_drift;
    j["min_eigenvalue"] = d.min_eigenvalue;
    j["excitation_number"] = d.excitation_number;
    out.push_back(std::move(j));
  }
  return out;
}

std::string matrix_csv(const RMatrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ",";
      out += format_double(m(r, c));
    }
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

ordered_json deterministic_part(ordered_json report) {
  report.erase("wall_time_s");
  return report;
}

}  // namespace allres
