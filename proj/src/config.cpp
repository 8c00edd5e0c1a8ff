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

#include "allres/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace allres {

namespace {

struct Default {
  const char* key;
  const char* text;
};

// Defaults, in schema order.
constexpr Default kDefaults[] = {
    {"omega_a", "5.5 GHz"},         {"omega_b", "7 GHz"},          {"omega_c", "8 GHz"},
    {"kappa_a_inv", "50 us"},       {"kappa_b_inv", "50 us"},      {"kappa_c_inv", "50 us"},
    {"gamma_ge_inv", "50 us"},      {"gamma_ef_inv", "25 us"},     {"gamma_phi_e_inv", "50 us"},
    {"gamma_phi_f_inv", "50 us"},   {"anharmonicity", "800 MHz"},  {"fock_cutoff", "3"},
    {"g_min", "0.5 MHz"},           {"ef_ratio", "1.4142135623730951"},
    {"g_a_on", "45 MHz"},           {"g_b_on", "22 MHz"},          {"g_swap_b_ge", "22 MHz"},
    {"ccphase_g_1", "45 MHz"},      {"ccphase_g_2", "28 MHz"},     {"ccphase_g_3", "27 MHz"},
    {"ccphase_g_4", "24 MHz"},      {"ccphase_g_5", "20 MHz"},     {"ccphase_g_6", "29 MHz"},
    {"ccphase_g_7", "27 MHz"},      {"ccphase_g_8", "28 MHz"},     {"ccphase_g_9", "45 MHz"},
    {"table2_mode", "sqrt2"},       {"phase_convention", "literal"},
    {"ideal_couplings", "false"},   {"dt", "0.001 ns"},            {"quadrature_nodes", "8"},
    {"batch_size", "8"},            {"jobs", "1"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

bool parse_number(std::string_view s, double& out) {
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double frequency_scale(std::string_view unit) {
  if (unit == "GHz") return 1.0;
  if (unit == "MHz") return 1e-3;
  if (unit == "kHz") return 1e-6;
  throw ConfigError("unknown frequency unit '" + std::string(unit) + "' (expected GHz, MHz or kHz)");
}

double time_scale(std::string_view unit) {
  if (unit == "ns") return 1.0;
  if (unit == "ps") return 1e-3;
  if (unit == "us" || unit == "µs") return 1e3;
  if (unit == "ms") return 1e6;
  throw ConfigError("unknown time unit '" + std::string(unit) + "' (expected ps, ns, us, µs or ms)");
}

const ConfigKey& find_key(std::string_view name) {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == name; });
  if (it == schema.end()) throw ConfigError("unknown key");
  return *it;
}

ConfigValue parse_value(const ConfigKey& key, std::string_view text) {
  const auto tokens = split_ws(text);
  if (tokens.empty()) throw ConfigError("missing value");
  ConfigValue v;
  auto need = [&](std::size_t n, const char* what) {
    if (tokens.size() != n) throw ConfigError(std::string("expected ") + what + ", got '" + std::string(text) + "'");
  };
  switch (key.kind) {
    case ValueKind::Frequency:
      need(2, "<number> <GHz|MHz|kHz>");
      if (!parse_number(tokens[0], v.number)) throw ConfigError("not a number: '" + std::string(tokens[0]) + "'");
      frequency_scale(tokens[1]);
      v.unit = tokens[1];
      break;
    case ValueKind::Lifetime:
      if (tokens.size() == 1 && tokens[0] == "inf") {
        v.word = "inf";
        break;
      }
      need(2, "<number> <ns|us|ms> or inf");
      if (!parse_number(tokens[0], v.number)) throw ConfigError("not a number: '" + std::string(tokens[0]) + "'");
      if (v.number <= 0.0) throw ConfigError("lifetime must be > 0 (use inf to disable)");
      time_scale(tokens[1]);
      v.unit = tokens[1];
      break;
    case ValueKind::Time:
      need(2, "<number> <ps|ns|us|ms>");
      if (!parse_number(tokens[0], v.number)) throw ConfigError("not a number: '" + std::string(tokens[0]) + "'");
      if (v.number <= 0.0) throw ConfigError("must be > 0");
      time_scale(tokens[1]);
      v.unit = tokens[1];
      break;
    case ValueKind::Integer: {
      need(1, "an integer");
      long long n = 0;
      const auto [ptr, ec] = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), n);
      if (ec != std::errc() || ptr != tokens[0].data() + tokens[0].size()) {
        throw ConfigError("not an integer: '" + std::string(tokens[0]) + "'");
      }
      if (n < 1 || n > 1000000) throw ConfigError("out of range");
      v.number = static_cast<double>(n);
      break;
    }
    case ValueKind::Real:
      need(1, "a number");
      if (!parse_number(tokens[0], v.number)) throw ConfigError("not a number: '" + std::string(tokens[0]) + "'");
      break;
    case ValueKind::Word:
      need(1, "a single word");
      if (std::find(key.choices.begin(), key.choices.end(), tokens[0]) == key.choices.end()) {
        std::string all;
        for (const auto& c : key.choices) all += (all.empty() ? "" : ", ") + c;
        throw ConfigError("'" + std::string(tokens[0]) + "' is not one of " + all);
      }
      v.word = tokens[0];
      break;
  }
  return v;
}

std::string value_text(const ConfigValue& v) {
  if (!v.word.empty()) return v.word;
  std::string s = format_double(v.number);
  if (!v.unit.empty()) s += " " + v.unit;
  return s;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = [] {
    std::vector<ConfigKey> s;
    auto add = [&](std::string name, ValueKind kind, std::string help, std::vector<std::string> choices = {}) {
      s.push_back(ConfigKey{std::move(name), kind, std::move(choices), std::move(help)});
    };
    for (const char* r : {"a", "b", "c"}) add(std::string("omega_") + r, ValueKind::Frequency, "resonator frequency");
    for (const char* r : {"a", "b", "c"}) add(std::string("kappa_") + r + "_inv", ValueKind::Lifetime, "resonator photon lifetime");
    add("gamma_ge_inv", ValueKind::Lifetime, "qutrit |e> relaxation time");
    add("gamma_ef_inv", ValueKind::Lifetime, "qutrit |f> relaxation time");
    add("gamma_phi_e_inv", ValueKind::Lifetime, "qutrit |e> dephasing time");
    add("gamma_phi_f_inv", ValueKind::Lifetime, "qutrit |f> dephasing time");
    add("anharmonicity", ValueKind::Frequency, "omega_ge - omega_ef");
    add("fock_cutoff", ValueKind::Integer, "photon levels kept per resonator");
    add("g_min", ValueKind::Frequency, "residual GE coupling of idle resonators");
    add("ef_ratio", ValueKind::Real, "g_ef / g_ge of one resonator");
    add("g_a_on", ValueKind::Frequency, "GE coupling of r_a when on (c-phase, swap)");
    add("g_b_on", ValueKind::Frequency, "GE coupling of r_b when on (c-phase, swap)");
    add("g_swap_b_ge", ValueKind::Frequency, "GE coupling of r_b in the swap GE step");
    for (int i = 1; i <= 9; ++i) add("ccphase_g_" + std::to_string(i), ValueKind::Frequency, "cc-phase coupling table");
    add("table2_mode", ValueKind::Word, "cc-phase table reading", {"sqrt2", "listed"});
    add("phase_convention", ValueKind::Word, "coupling phase reference", {"literal", "accumulated"});
    add("ideal_couplings", ValueKind::Word, "zero every coupling but the addressed one", {"true", "false"});
    add("dt", ValueKind::Time, "RK4 step");
    add("quadrature_nodes", ValueKind::Integer, "quadrature nodes per angle");
    add("batch_size", ValueKind::Integer, "states advanced together");
    add("jobs", ValueKind::Integer, "worker threads");
    return s;
  }();
  return schema;
}

double frequency_to_internal(double value, std::string_view unit) {
  const double scale = frequency_scale(unit);
  return scale == 1.0 ? ghz(value) : kTwoPi * value * scale;
}

double frequency_from_internal(double angular, std::string_view unit) {
  return angular / kTwoPi / frequency_scale(unit);
}

double time_to_ns(double value, std::string_view unit) { return value * time_scale(unit); }

double time_from_ns(double ns, std::string_view unit) { return ns / time_scale(unit); }

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

RunConfig::RunConfig() {
  for (const auto& d : kDefaults) values_[d.key] = parse_value(find_key(d.key), d.text);
}

void RunConfig::set(std::string_view key, std::string_view text) {
  const ConfigKey* k = nullptr;
  try {
    k = &find_key(key);
  } catch (const ConfigError&) {
    throw ConfigError(std::string(key) + ": unknown key");
  }
  try {
    values_[k->name] = parse_value(*k, text);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

const ConfigValue& RunConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

RunConfig RunConfig::parse(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(where + key + ": duplicate key");
    try {
      cfg.set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    seen.push_back(key);
    if (end == text.size()) break;
  }
  try {
    cfg.gate_params().validate();
    cfg.integrator().validate();
    cfg.quadrature().validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string RunConfig::echo() const {
  std::string out;
  for (const ConfigKey& k : config_schema()) {
    out += k.name + " = " + value_text(values_.at(k.name)) + "\n";
  }
  return out;
}

GateParams RunConfig::gate_params() const {
  auto freq = [&](const char* key) {
    const ConfigValue& v = get(key);
    return frequency_to_internal(v.number, v.unit);
  };
  auto rate = [&](const std::string& key) {
    const ConfigValue& v = get(key);
    if (v.word == "inf") return 0.0;
    return 1.0 / time_to_ns(v.number, v.unit);
  };
  GateParams p;
  p.omega = {freq("omega_a"), freq("omega_b"), freq("omega_c")};
  p.kappa = {rate("kappa_a_inv"), rate("kappa_b_inv"), rate("kappa_c_inv")};
  p.qutrit.gamma_ge = rate("gamma_ge_inv");
  p.qutrit.gamma_ef = rate("gamma_ef_inv");
  p.qutrit.gamma_phi_e = rate("gamma_phi_e_inv");
  p.qutrit.gamma_phi_f = rate("gamma_phi_f_inv");
  p.qutrit.anharmonicity = freq("anharmonicity");
  p.fock_cutoff = static_cast<int>(get("fock_cutoff").number);
  p.g_min = freq("g_min");
  p.ef_ratio = get("ef_ratio").number;
  p.g_a_on = freq("g_a_on");
  p.g_b_on = freq("g_b_on");
  p.g_swap_b_ge = freq("g_swap_b_ge");
  for (std::size_t i = 0; i < p.ccphase_table.size(); ++i) {
    p.ccphase_table[i] = freq(("ccphase_g_" + std::to_string(i + 1)).c_str());
  }
  p.table2_mode = parse_table2_mode(get("table2_mode").word);
  p.phase_convention =
      get("phase_convention").word == "literal" ? PhaseConvention::Literal : PhaseConvention::Accumulated;
  p.ideal_couplings = get("ideal_couplings").word == "true";
  return p;
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  const ConfigValue& dt = get("dt");
  c.dt = time_to_ns(dt.number, dt.unit);
  c.batch_size = static_cast<int>(get("batch_size").number);
  return c;
}

QuadratureSpec RunConfig::quadrature() const { return QuadratureSpec{static_cast<int>(get("quadrature_nodes").number)}; }

int RunConfig::jobs() const { return static_cast<int>(get("jobs").number); }

}  // namespace allres
