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

#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>

#include "mepplab/cli.hpp"

using namespace mepplab;
using nlohmann::json;

namespace {

/// Small select config so CLI tests stay fast.
json small_select_config() {
  json config = json::object();
  config["seed"] = 1234;
  config["samples"] = 5000;
  config["surface_dim"] = 4;
  config["flow"] = {{"grid_size", 16}, {"viscosity", 0.1},
                    {"dt", 0.02},      {"t_end", 0.3},
                    {"initial", {{"preset", "taylor-green"}, {"amplitude", 1.0}}}};
  config["sample_times"] = {0.1, 0.2, 0.3};
  return config;
}

}  // namespace

TEST_CASE("unknown config keys are rejected by name") {
  json config{{"seed", 1}, {"bogus_key", 7}};
  try {
    cli::run_command("verify", config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("nested unknown keys carry their path") {
  json config{{"seed", 1}, {"prop5", {{"n_max", 20}, {"oops", 1}}}};
  try {
    cli::run_command("verify", config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("prop5.oops") != std::string::npos);
  }
}

TEST_CASE("a config without a seed fails naming the field") {
  json config{{"samples", 1000}};
  try {
    cli::run_command("entropy", config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("seed") != std::string::npos);
  }
}

TEST_CASE("schema version and thread counts are validated") {
  CHECK_THROWS_AS(cli::run_command("entropy", json{{"seed", 1}, {"schema_version", 2}}),
                  ConfigError);
  CHECK_THROWS_AS(cli::run_command("entropy", json{{"seed", 1}, {"threads", 0}}),
                  ConfigError);
  CHECK_THROWS_AS(cli::run_command("nonsense", json{{"seed", 1}}), ConfigError);
}

TEST_CASE("prop5-only verify run passes and reports the series bound") {
  json config{{"seed", 2}, {"props", {5}}, {"prop5", {{"boxes", {2.0}}, {"n_max", 20}}}};
  const auto result = cli::run_command("verify", config);
  CHECK(result.exit_code == cli::kExitPass);
  const auto& row = result.report.at("results").at("prop5").at("rows").at(0);
  CHECK(row.at("final_sum").get<double>() == Approx(std::exp(2.0)).epsilon(1e-7));
  CHECK(row.at("gap").get<double>() >= 0.0);
  CHECK(result.report.at("results").at("pass").get<bool>());
}

TEST_CASE("entropy command reports both estimators with tags") {
  json config{{"seed", 3},
              {"samples", 20000},
              {"surface", {{"dim", 3}, {"energy", 0.5}}},
              {"measure", {{"type", "vmf"}, {"kappa", 1.0}, {"axis", 0}}}};
  const auto result = cli::run_command("entropy", config);
  CHECK(result.exit_code == cli::kExitPass);
  const auto& res = result.report.at("results");
  CHECK(res.at("uniform_sampling").at("entropy").at("estimator") == "uniform-sampling");
  CHECK(res.at("importance_sampling").at("entropy").at("estimator") ==
        "importance-sampling");
  const double a = res.at("uniform_sampling").at("entropy").at("value").get<double>();
  const double b = res.at("importance_sampling").at("entropy").at("value").get<double>();
  const double sa = res.at("uniform_sampling").at("entropy").at("std_error").get<double>();
  const double sb =
      res.at("importance_sampling").at("entropy").at("std_error").get<double>();
  CHECK(std::fabs(a - b) <= 3.0 * std::hypot(sa, sb));
}

TEST_CASE("select command with the small config passes with winner uniform") {
  const auto result = cli::run_command("select", small_select_config());
  CHECK(result.exit_code == cli::kExitPass);
  CHECK(result.report.at("results").at("verdict") == "pass");
  CHECK(result.report.at("results").at("winner") == "uniform");
  CHECK_FALSE(result.report.at("results").at("physical_strictly_dominated").get<bool>());
  CHECK(result.table.find("winner: uniform") != std::string::npos);
}

TEST_CASE("inconclusive selections exit with the dedicated code") {
  json config = small_select_config();
  config["families"] = json::array(
      {json{{"name", "uniform"}, {"type", "uniform"}},
       json{{"name", "uniform-duplicate"}, {"type", "uniform"}}});
  const auto result = cli::run_command("select", config);
  CHECK(result.exit_code == cli::kExitInconclusive);
  CHECK(result.report.at("results").at("verdict") == "inconclusive");
}

TEST_CASE("reports embed config hash, seed, threads, and estimator tags") {
  json config{{"seed", 9},
              {"samples", 5000},
              {"surface", {{"dim", 2}, {"energy", 0.5}}},
              {"measure", {{"type", "polynomial-tilt"}, {"slope", 0.5}, {"axis", 0}}},
              {"estimator", "uniform-sampling"}};
  const auto result = cli::run_command("entropy", config);
  CHECK(result.report.contains("config_hash"));
  CHECK(result.report.at("config_hash").get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(result.report.at("seed") == 9);
  CHECK(result.report.at("threads") == 1);
  CHECK(result.report.at("config").at("samples") == 5000);
  const auto& est = result.report.at("results").at("uniform_sampling").at("entropy");
  CHECK(est.contains("std_error"));
  CHECK(est.at("estimator") == "uniform-sampling");
}

TEST_CASE("identical configs produce byte-identical reports") {
  const auto a = cli::run_command("select", small_select_config());
  const auto b = cli::run_command("select", small_select_config());
  CHECK(a.report.dump() == b.report.dump());

  json restrict_config{{"seed", 4}, {"samples", 20000}, {"dims", {1, 3}}};
  const auto c = cli::run_command("restrict", restrict_config);
  const auto d = cli::run_command("restrict", restrict_config);
  CHECK(c.report.dump() == d.report.dump());
}

TEST_CASE("flow command writes trajectory artifacts") {
  const auto dir =
      std::filesystem::temp_directory_path() / "mepplab-test-flow-artifacts";
  std::filesystem::remove_all(dir);
  json config{{"seed", 6},
              {"grid_size", 16},
              {"viscosity", 0.05},
              {"dt", 0.01},
              {"t_end", 0.1},
              {"sample_times", {0.05, 0.1}},
              {"surface_dim", 3},
              {"dump_coefficients", true}};
  const auto result = cli::run_command("flow", config, dir.string());
  CHECK(result.exit_code == cli::kExitPass);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  CHECK(std::filesystem::exists(dir / "coefficients_000.csv"));
  CHECK(std::filesystem::exists(dir / "coefficients_001.csv"));

  std::ifstream csv(dir / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "time,energy,dissipation");
  std::filesystem::remove_all(dir);
}

TEST_CASE("select command writes per-family series artifacts") {
  const auto dir =
      std::filesystem::temp_directory_path() / "mepplab-test-select-artifacts";
  std::filesystem::remove_all(dir);
  const auto result = cli::run_command("select", small_select_config(), dir.string());
  CHECK(result.exit_code == cli::kExitPass);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "series_uniform.csv"));
  CHECK(std::filesystem::exists(dir / "series_vmf-k2.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("spatially varying viscosity specs are rejected as config errors") {
  json config = small_select_config();
  config["flow"]["viscosity"] = json::array({0.1, 0.2});
  CHECK_THROWS_AS(cli::run_command("select", config), ConfigError);
}

TEST_CASE("default configs validate against their own schemas") {
  for (const char* command : {"verify", "entropy", "restrict", "flow", "select"}) {
    const json defaults = cli::default_config(command);
    CHECK(defaults.contains("seed"));
    CHECK(defaults.at("schema_version") == 1);
  }
}
