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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "asqlab/circuit.hpp"
#include "asqlab/telegraph.hpp"

namespace asqlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind { Number, Integer, Text };

struct ConfigKey {
  std::string name;  // "section.key", or "rng_seed" at top level
  ValueKind kind = ValueKind::Number;
  std::string fallback;
  std::string unit;  // accepted as an optional suffix on numbers
  std::string doc;
};

/// Every key the configuration accepts, in manifest order.
const std::vector<ConfigKey>& config_schema();

/// Resolved run configuration: schema defaults overlaid by a config file
/// and then by `section.key=value` overrides.
///
/// The file format is `[section]` headers followed by `key = value` lines;
/// `#` and `;` start comments. Keys before the first header are top level.
/// Unknown sections or keys, malformed lines and values that do not parse
/// as the key's kind raise ConfigError with the line number. A number may
/// carry the key's unit as a suffix ("0.284 GHz"); any other suffix is a
/// unit mismatch.
class RunConfig {
 public:
  RunConfig();

  void load(std::istream& in, const std::string& source = "<config>");
  void load_file(const std::string& path);
  /// "section.key=value".
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& where = "");

  bool is_set(const std::string& key) const;
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;

  /// `key = value` lines for every key, sorted as in the schema.
  std::string dump() const;

 private:
  struct Value {
    std::string text;
    bool explicit_ = false;
  };
  std::map<std::string, Value> values_;
};

/// [circuit] preset and energies, [circuit] b_mT / phi_ext and
/// [sweep] g_factor / theta.
CircuitParams circuit_params(const RunConfig& cfg);
BasisSpec basis_spec(const RunConfig& cfg);
TelegraphSpec telegraph_spec(const RunConfig& cfg);

}  // namespace asqlab
