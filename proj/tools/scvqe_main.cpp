// Copyright 2026 The schwinger-cvqe Authors
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

// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure, 1 anything else.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scvqe/config.hpp"
#include "scvqe/error.hpp"

namespace {

int report(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent VQE for the lattice Schwinger model"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  const std::map<std::string, std::string> about{
      {"ed", "exact low-lying spectrum and observables"},
      {"cvqe", "train the concurrent variational circuit"},
      {"dispersion", "energy against pseudomomentum with branch labels"},
      {"massshift", "additive mass renormalization by bisection or grid scan"},
      {"zne", "noisy inference with zero-noise extrapolation"},
      {"decompose", "train, then compile the circuit to elementary gates"},
  };
  for (const auto& name : scvqe::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--preset", preset_name, "named parameter set");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    scvqe::RunConfig config;
    if (!preset_name.empty()) config = scvqe::preset(preset_name);
    if (!config_path.empty()) {
      config = scvqe::config_from_json(scvqe::io::read_json(config_path), config);
    }
    config.command = command;
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    if (out) config.out_dir = *out;
    scvqe::run(config, std::cout);
  } catch (const scvqe::InvalidArgument& e) {
    return report("config", e.what(), 2);
  } catch (const scvqe::FormatError& e) {
    return report("config", e.what(), 2);
  } catch (const scvqe::NumericalError& e) {
    return report("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 0;
}
