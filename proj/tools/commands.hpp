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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "asqlab/config.hpp"

namespace asqlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

struct Invocation {
  std::string command;
  std::string argument;  // model name for `fit` and `synth`
  RunConfig config;
  std::filesystem::path out_dir = ".";
  unsigned jobs = 1;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writes its outputs and manifest.txt into out_dir and
/// returns the exit status. Errors propagate as exceptions.
int run(const Invocation& inv, std::ostream& log);

}  // namespace asqlab::cli
