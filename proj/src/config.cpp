// Copyright 2026 The asqlab Authors
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

#include "asqlab/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "asqlab/csv.hpp"

namespace asqlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(const std::string& name) {
  for (const ConfigKey& k : config_schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const ConfigKey& k : config_schema()) {
    if (k.name.rfind(section + ".", 0) == 0) return true;
  }
  return false;
}

// Number with an optional unit suffix; returns the bare number text.
std::string strip_unit(const ConfigKey& key, const std::string& value) {
  const auto space = value.find_first_of(" \t");
  if (space == std::string::npos) return value;
  const std::string number = value.substr(0, space);
  const std::string unit = trim(value.substr(space));
  if (unit != key.unit) {
    throw ConfigError("unit mismatch for " + key.name + ": expected " +
                      (key.unit.empty() ? std::string("no unit") : "'" + key.unit + "'") +
                      ", found '" + unit + "'");
  }
  return number;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  using K = ValueKind;
  static const std::vector<ConfigKey> schema = {
      {"rng_seed", K::Integer, "1", "", "seed of every random stream"},
      {"circuit.preset", K::Text, "main_text", "", "main_text or coupling_estimate"},
      {"circuit.e_c", K::Number, "0.284", "GHz", "charging energy"},
      {"circuit.e_j", K::Number, "13.1", "GHz", "reference junction Josephson energy"},
      {"circuit.e_0", K::Number, "0.211", "GHz", "spin-independent dot Josephson energy"},
      {"circuit.e_so", K::Number, "0.305", "GHz", "spin-dependent dot energy"},
      {"circuit.b_mT", K::Number, "0", "mT", "magnetic field"},
      {"circuit.phi_ext", K::Number, "0", "rad", "external reduced flux"},
      {"solver.n_charge", K::Integer, "40", "", "charge states -n..n"},
      {"solver.gauge", K::Text, "flux_on_dot", "", "flux_on_dot or flux_on_reference"},
      {"solver.k", K::Integer, "10", "", "number of eigenpairs kept"},
      {"sweep.axis", K::Text, "flux", "", "flux or field"},
      {"sweep.start", K::Number, "0", "", "first axis value, rad or mT"},
      {"sweep.stop", K::Number, "6.28318530718", "", "last axis value, rad or mT"},
      {"sweep.points", K::Integer, "401", "", "axis points"},
      {"sweep.g_factor", K::Number, "12.7", "", "effective g-factor"},
      {"sweep.theta", K::Number, "0", "rad", "field angle to the spin-orbit direction"},
      {"sweep.jobs", K::Integer, "1", "", "worker threads"},
      {"sweep.branch_a", K::Text, "t0_up", "", "first crossing branch, named at the first point"},
      {"sweep.branch_b", K::Text, "t1_down", "", "second crossing branch"},
      {"sweep.window", K::Number, "0.5", "GHz", "largest splitting reported as a crossing"},
      {"fit.model", K::Text, "", "", "model name"},
      {"fit.input", K::Text, "", "", "CSV path"},
      {"fit.bounds", K::Text, "", "", "name:lower:upper entries separated by ';'"},
      {"fit.x_min", K::Number, "-inf", "", "smallest x kept"},
      {"fit.x_max", K::Number, "inf", "", "largest x kept"},
      {"telegraph.dwell_s", K::Number, "59", "us", "mean singlet dwell"},
      {"telegraph.dwell_d", K::Number, "2800", "us", "mean doublet dwell"},
      {"telegraph.level_s", K::Number, "1", "", "singlet signal level"},
      {"telegraph.level_d", K::Number, "0", "", "doublet signal level"},
      {"telegraph.noise_sigma", K::Number, "0.1", "", "readout noise per bin"},
      {"telegraph.dt", K::Number, "4.3", "us", "bin width"},
      {"telegraph.duration", K::Number, "1", "s", "trace length"},
      {"telegraph.threshold", K::Number, "nan", "", "discriminator level, nan for the midpoint"},
      {"telegraph.bins", K::Integer, "200", "", "histogram bins"},
      {"telegraph.input", K::Text, "", "", "trace CSV path"},
      {"synth.params", K::Text, "", "", "name=value entries separated by ','"},
      {"synth.x_start", K::Number, "0", "", "first abscissa"},
      {"synth.x_stop", K::Number, "100", "", "last abscissa"},
      {"synth.points", K::Integer, "201", "", "samples"},
      {"synth.noise", K::Number, "0", "", "Gaussian noise, fraction of max |y| or shot sigma"},
      {"synth.relative", K::Integer, "0", "", "1 for multiplicative noise"},
      {"synth.separation", K::Number, "1", "", "distance between shot clouds"},
      {"bound.sigma_f_MHz", K::Number, "39.7", "MHz", "frequency noise"},
      {"bound.susceptibility", K::Number, "0.16", "", "GHz per control unit"},
      {"bound.unit", K::Text, "mV", "", "control unit label"},
      {"fidelity.ground", K::Text, "", "", "ground-state shot CSV"},
      {"fidelity.excited", K::Text, "", "", "excited-state shot CSV"},
  };
  return schema;
}

RunConfig::RunConfig() {
  for (const ConfigKey& k : config_schema()) values_[k.name] = {k.fallback, false};
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& where) {
  const std::string prefix = where.empty() ? "" : where + ": ";
  const ConfigKey* k = find_key(key);
  if (!k) throw ConfigError(prefix + "unknown key '" + key + "'");
  std::string v = trim(value);
  try {
    if (k->kind == ValueKind::Number) {
      v = strip_unit(*k, v);
      parse_number(v);
    } else if (k->kind == ValueKind::Integer) {
      long long i = 0;
      const auto res = std::from_chars(v.data(), v.data() + v.size(), i);
      if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError("expected an integer for " + key + ", found '" + v + "'");
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError(prefix + "expected a number for " + key + ", found '" + v + "'");
  }
  values_[key] = {v, true};
}

void RunConfig::load(std::istream& in, const std::string& source) {
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    set(full, line.substr(eq + 1), where);
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  load(in, path);
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "override");
}

bool RunConfig::is_set(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second.explicit_;
}

std::string RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second.text;
}

double RunConfig::number(const std::string& key) const { return parse_number(text(key)); }

long long RunConfig::integer(const std::string& key) const {
  const std::string v = text(key);
  long long i = 0;
  std::from_chars(v.data(), v.data() + v.size(), i);
  return i;
}

std::string RunConfig::dump() const {
  std::ostringstream out;
  for (const ConfigKey& k : config_schema()) out << k.name << " = " << text(k.name) << '\n';
  return out.str();
}

CircuitParams circuit_params(const RunConfig& cfg) {
  const std::string preset = cfg.text("circuit.preset");
  CircuitParams p;
  if (preset == "main_text") {
    p = presets::main_text();
  } else if (preset == "coupling_estimate") {
    p = presets::coupling_estimate();
  } else {
    throw ConfigError("circuit.preset: unknown preset '" + preset + "'");
  }
  if (cfg.is_set("circuit.e_c")) p.e_c = cfg.number("circuit.e_c");
  if (cfg.is_set("circuit.e_j")) p.e_j = cfg.number("circuit.e_j");
  if (cfg.is_set("circuit.e_0")) p.e_0 = cfg.number("circuit.e_0");
  if (cfg.is_set("circuit.e_so")) p.e_so = cfg.number("circuit.e_so");
  p.set_phi_ext(cfg.number("circuit.phi_ext"));
  p.zeeman = zeeman_from_field(cfg.number("circuit.b_mT"), cfg.number("sweep.g_factor"),
                               cfg.number("sweep.theta"));
  p.validate();
  return p;
}

BasisSpec basis_spec(const RunConfig& cfg) {
  BasisSpec b;
  const long long n = cfg.integer("solver.n_charge");
  if (n < 1) throw ConfigError("solver.n_charge must be positive");
  b.n_charge = static_cast<int>(n);
  const std::string gauge = cfg.text("solver.gauge");
  if (gauge == "flux_on_dot") {
    b.gauge = Gauge::FluxOnDot;
  } else if (gauge == "flux_on_reference") {
    b.gauge = Gauge::FluxOnReference;
  } else {
    throw ConfigError("solver.gauge: unknown gauge '" + gauge + "'");
  }
  validate(b);
  return b;
}

TelegraphSpec telegraph_spec(const RunConfig& cfg) {
  TelegraphSpec s;
  s.dwell_s = cfg.number("telegraph.dwell_s");
  s.dwell_d = cfg.number("telegraph.dwell_d");
  s.level_s = cfg.number("telegraph.level_s");
  s.level_d = cfg.number("telegraph.level_d");
  s.noise_sigma = cfg.number("telegraph.noise_sigma");
  s.dt = cfg.number("telegraph.dt");
  s.duration = cfg.number("telegraph.duration");
  s.rng_seed = static_cast<std::uint64_t>(cfg.integer("rng_seed"));
  s.validate();
  return s;
}

}  // namespace asqlab
