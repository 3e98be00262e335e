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

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = asqlab::cli;

  CLI::App app{"asqlab: spectra, couplings and fits for a spin qubit coupled to a transmon"};
  std::string command;
  std::string argument;
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned jobs = 0;
  long long seed = -1;
  std::string out_dir = ".";

  app.add_option("command", command, "subcommand")
      ->required()
      ->check(CLI::IsMember(cli::command_names()));
  app.add_option("model", argument, "model for fit and synth (synth also takes 'shots')");
  app.add_option("--config", config_path, "INI-style configuration file");
  app.add_option("--set", overrides, "section.key=value override, repeatable");
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed, overrides rng_seed")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  try {
    cli::Invocation inv;
    inv.command = command;
    inv.argument = argument;
    if (!config_path.empty()) inv.config.load_file(config_path);
    for (const std::string& o : overrides) inv.config.apply_override(o);
    if (seed >= 0) inv.config.set("rng_seed", std::to_string(seed));
    if (jobs > 0) inv.config.set("sweep.jobs", std::to_string(jobs));
    const long long j = inv.config.integer("sweep.jobs");
    if (j < 1) throw std::invalid_argument("sweep.jobs must be positive");
    inv.jobs = static_cast<unsigned>(j);
    inv.out_dir = out_dir;
    return cli::run(inv, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "asqlab: error: " << e.what() << '\n';
    return cli::kExitError;
  }
}
