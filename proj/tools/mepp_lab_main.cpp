/*
 * Copyright 2026 the mepp-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mepplab/cli.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config (JSON)");
  cmd->add_option("--seed", args.seed, "Override the config seed");
  cmd->add_option("--threads", args.threads, "Worker count (fixed for determinism)");
  cmd->add_option("--out", args.out_dir, "Output directory for report + CSV artifacts");
}

nlohmann::json load_config(const std::string& command, const CommonArgs& args) {
  // Without --config the shipped defaults run as-is (they carry a seed);
  // a user-provided config must contain its own seed.
  nlohmann::json config = args.config_path.empty()
                              ? mepplab::cli::default_config(command)
                              : nlohmann::json::object();
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) {
      throw mepplab::ConfigError("cannot open config file '" + args.config_path + "'");
    }
    try {
      in >> config;
    } catch (const nlohmann::json::parse_error& err) {
      throw mepplab::ConfigError("config file '" + args.config_path +
                                 "' is not valid JSON: " + err.what());
    }
  }
  if (args.seed) config["seed"] = *args.seed;
  if (args.threads) config["threads"] = *args.threads;
  return config;
}

std::optional<std::string> resolve_out_dir(const CommonArgs& args) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("MEPP_LAB_OUT"); env && *env) {
    return std::string(env);
  }
  return std::string("mepp-lab-out");
}

int run(const std::string& command, const nlohmann::json& config,
        const CommonArgs& args) {
  const auto result = mepplab::cli::run_command(command, config, resolve_out_dir(args));
  std::cout << result.table;
  for (const auto& artifact : result.artifacts) {
    std::cout << "wrote " << artifact << "\n";
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mepp-lab: entropy-production admissibility experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<int> props;
  std::optional<double> box;

  CLI::App* verify = app.add_subcommand("verify", "Run the proposition suites");
  add_common_options(verify, args);
  verify->add_option("--prop", props, "Restrict to specific propositions (1,3,4,5)");
  verify->add_option("--box", box, "Box measure for the series-bound suite");
  // `verify props` reads naturally on the command line; accept and ignore it.
  std::string verify_positional;
  verify->add_option("props", verify_positional)->check(CLI::IsMember({"props"}));

  CLI::App* entropy_cmd = app.add_subcommand("entropy", "Entropy of one measure");
  add_common_options(entropy_cmd, args);
  CLI::App* restrict_cmd =
      app.add_subcommand("restrict", "Surface-restriction identity suite");
  add_common_options(restrict_cmd, args);
  CLI::App* flow_cmd = app.add_subcommand("flow", "Generate a trajectory");
  add_common_options(flow_cmd, args);
  CLI::App* select_cmd = app.add_subcommand("select", "Entropy-production selector");
  add_common_options(select_cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    std::string command;
    if (verify->parsed()) command = "verify";
    if (entropy_cmd->parsed()) command = "entropy";
    if (restrict_cmd->parsed()) command = "restrict";
    if (flow_cmd->parsed()) command = "flow";
    if (select_cmd->parsed()) command = "select";

    nlohmann::json config = load_config(command, args);
    if (command == "verify") {
      if (!props.empty()) config["props"] = props;
      if (box) {
        config["prop5"]["boxes"] = std::vector<double>{*box};
        if (props.empty()) config["props"] = std::vector<int>{5};
      }
    }
    return run(command, config, args);
  } catch (const mepplab::ConfigError& err) {
    nlohmann::json diagnostic{{"error", "config"}, {"detail", err.what()}};
    std::cerr << diagnostic.dump() << "\n";
    return mepplab::cli::kExitConfigError;
  } catch (const std::exception& err) {
    nlohmann::json diagnostic{{"error", "runtime"}, {"detail", err.what()}};
    std::cerr << diagnostic.dump() << "\n";
    return mepplab::cli::kExitFail;
  }
}
