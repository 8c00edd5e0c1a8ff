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

// Result records (JSON, schema in docs/report_schema.md) and numeric tables.

#ifndef ALLRES_REPORT_HPP
#define ALLRES_REPORT_HPP

#include <string>

#include <json.hpp>

#include "allres/config.hpp"
#include "allres/experiments.hpp"
#include "allres/protocols.hpp"

namespace allres {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kSoftwareVersion = "1.0.0";

/// Common header: schema, version, command, gate and config echo.
nlohmann::ordered_json report_header(const std::string& command, GateKind kind, const RunConfig& config);

/// Per-step schedule description (addressing, area, couplings, frequencies).
nlohmann::ordered_json schedule_json(const Schedule& schedule);

nlohmann::ordered_json envelope_json(const std::vector<StepEnvelope>& steps);
nlohmann::ordered_json diagnostics_json(const std::vector<StepDiagnostics>& steps);

/// Comma-separated table, one matrix row per line, shortest round-trip numbers.
std::string matrix_csv(const RMatrix& m);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

/// Drops the fields that legitimately differ between identical runs (wall time).
nlohmann::ordered_json deterministic_part(nlohmann::ordered_json report);

}  // namespace allres

#endif  // ALLRES_REPORT_HPP
