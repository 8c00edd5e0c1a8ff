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

// Run configuration: a flat text file of `key = value [unit]` lines.
//
//   # comment
//   omega_a = 5.5 GHz
//   kappa_a_inv = 50 us      # lifetime; `inf` switches the channel off
//   table2_mode = sqrt2
//
// Values keep the unit they were written in, so echo() followed by parse()
// reproduces the configuration exactly.

#ifndef ALLRES_CONFIG_HPP
#define ALLRES_CONFIG_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "allres/dynamics.hpp"
#include "allres/experiments.hpp"
#include "allres/protocols.hpp"

namespace allres {

enum class ValueKind { Frequency, Lifetime, Time, Integer, Real, Word };

/// One configuration value as written: number plus unit, or a bare word.
struct ConfigValue {
  double number = 0.0;
  std::string unit;  // GHz/MHz/kHz, ns/ps/us/ms; empty for plain numbers
  std::string word;  // enum choices, true/false, inf

  friend bool operator==(const ConfigValue&, const ConfigValue&) = default;
};

struct ConfigKey {
  std::string name;
  ValueKind kind;
  std::vector<std::string> choices;  // Word keys only
  std::string help;
};

/// Every accepted key in echo order.
const std::vector<ConfigKey>& config_schema();

// Unit conversions between written values and internal units (rad/ns, ns).
double frequency_to_internal(double value, std::string_view unit);
double frequency_from_internal(double angular, std::string_view unit);
double time_to_ns(double value, std::string_view unit);
double time_from_ns(double ns, std::string_view unit);

class RunConfig {
 public:
  /// Built-in defaults.
  RunConfig();

  /// Throws ConfigError "<origin>:<line>: <key>: <problem>" on malformed input.
  static RunConfig parse(std::string_view text, std::string_view origin = "config");
  static RunConfig load(const std::string& path);

  /// Every key, one per line, in schema order.
  std::string echo() const;

  /// Replaces one value given as text ("5.5 GHz", "inf", "listed").
  void set(std::string_view key, std::string_view text);
  const ConfigValue& get(std::string_view key) const;

  GateParams gate_params() const;
  IntegratorConfig integrator() const;
  QuadratureSpec quadrature() const;
  int jobs() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  std::map<std::string, ConfigValue, std::less<>> values_;
};

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace allres

#endif  // ALLRES_CONFIG_HPP
