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

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mepplab/mepp.hpp"
#include "mepplab/restriction.hpp"

namespace mepplab::cli {

using nlohmann::json;

/// Exit codes of the experiment runner.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInconclusive = 3;

struct RunResult {
  int exit_code = kExitPass;
  json report;
  std::string table;
  std::vector<std::string> artifacts;
};

// ---------------------------------------------------------------------------
// Config validation helpers; every error names the offending field.
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key '" + context + item.key() + "'");
    }
  }
}

inline const json& require_field(const json& obj, const std::string& key,
                                 const std::string& context) {
  if (!obj.contains(key)) {
    throw ConfigError("missing required config field '" + context + key + "'");
  }
  return obj.at(key);
}

inline std::int64_t as_int(const json& v, const std::string& name) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError("config field '" + name + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline double as_number(const json& v, const std::string& name) {
  if (!v.is_number()) {
    throw ConfigError("config field '" + name + "' must be a number");
  }
  return v.get<double>();
}

inline bool as_bool(const json& v, const std::string& name) {
  if (!v.is_boolean()) {
    throw ConfigError("config field '" + name + "' must be a boolean");
  }
  return v.get<bool>();
}

inline std::string as_string(const json& v, const std::string& name) {
  if (!v.is_string()) {
    throw ConfigError("config field '" + name + "' must be a string");
  }
  return v.get<std::string>();
}

/// Merge user values over defaults, recursing into objects and rejecting
/// keys the defaults do not declare. Sections whose keys depend on a 'type'
/// discriminator (measure/family specs) are replaced wholesale and validated
/// downstream by the family parser.
inline bool is_open_section(const std::string& dotted) {
  return dotted == "measure";
}

inline json resolve_over_defaults(const json& defaults, const json& user,
                                  const std::string& context) {
  if (!user.is_object()) {
    throw ConfigError("config section '" + context + "' must be an object");
  }
  json resolved = defaults;
  for (const auto& item : user.items()) {
    if (!defaults.contains(item.key())) {
      throw ConfigError("unknown config key '" + context + item.key() + "'");
    }
    const json& def = defaults.at(item.key());
    if (def.is_object() && !def.empty() && !is_open_section(context + item.key())) {
      resolved[item.key()] =
          resolve_over_defaults(def, item.value(), context + item.key() + ".");
    } else {
      resolved[item.key()] = item.value();
    }
  }
  return resolved;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// FNV-1a 64-bit hash of the canonical (sorted-key) config serialization.
inline std::string config_hash(const json& resolved) {
  const std::string payload = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Default configs (also shipped under configs/)
// ---------------------------------------------------------------------------

inline json default_config(const std::string& command) {
  if (command == "verify") {
    return json{
        {"schema_version", 1},
        {"seed", 20260816},
        {"threads", 1},
        {"props", json::array({1, 3, 4, 5})},
        {"prop1", {{"n_max", 10}, {"energy", 0.5}, {"samples", 100000}}},
        {"prop3",
         {{"dims", json::array({1, 2, 3, 5, 10})},
          {"energy", 0.5},
          {"samples", 1000000}}},
        {"prop4",
         {{"dims", json::array({2, 3, 5})},
          {"energy", 0.5},
          {"random_candidates", 50},
          {"samples", 200000},
          {"vmf_kappas", json::array({0.5, 1.0, 2.0, 5.0})}}},
        {"prop5", {{"boxes", json::array({0.0, 1.0, 2.0})}, {"n_max", 20}}},
    };
  }
  if (command == "entropy") {
    return json{
        {"schema_version", 1},
        {"seed", 20260816},
        {"threads", 1},
        {"surface", {{"dim", 3}, {"energy", 0.5}}},
        {"measure", {{"type", "vmf"}, {"kappa", 1.0}, {"axis", 0}}},
        {"samples", 1000000},
        {"estimator", "both"},
    };
  }
  if (command == "restrict") {
    return json{
        {"schema_version", 1},
        {"seed", 20260816},
        {"threads", 1},
        {"dims", json::array({1, 2, 3, 5, 6})},
        {"energy", 0.5},
        {"functionals", json::array({"one", "norm2", "x1sq", "exp-x1"})},
        {"samples", 400000},
        {"fd_step_rel", 1e-3},
    };
  }
  if (command == "flow") {
    return json{
        {"schema_version", 1},
        {"seed", 20260816},
        {"threads", 1},
        {"grid_size", 16},
        {"viscosity", 0.05},
        {"dt", 0.01},
        {"t_end", 1.0},
        {"cfl", 0.5},
        {"dealiasing", "two-thirds"},
        {"initial",
         {{"preset", "taylor-green"},
          {"amplitude", 1.0},
          {"k", json::array({0, 0, 1})},
          {"polarization", 0},
          {"coefficient", 1.0},
          {"energy", 0.5},
          {"peak_wavenumber", 2.0},
          {"path", ""}}},
        {"sample_times",
         json::array({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0})},
        {"surface_dim", 6},
        {"dump_coefficients", false},
    };
  }
  if (command == "select") {
    return json{
        {"schema_version", 1},
        {"seed", 20260816},
        {"threads", 1},
        {"samples", 100000},
        {"surface_dim", 6},
        {"flow",
         {{"grid_size", 16},
          {"viscosity", 0.08},
          {"dt", 0.01},
          {"t_end", 0.5},
          {"cfl", 0.5},
          {"dealiasing", "two-thirds"},
          {"initial",
           {{"preset", "taylor-green"},
            {"amplitude", 1.0},
            {"k", json::array({0, 0, 1})},
            {"polarization", 0},
            {"coefficient", 1.0},
            {"energy", 0.5},
            {"peak_wavenumber", 2.0},
            {"path", ""}}}}},
        {"sample_times", json::array({0.05, 0.15, 0.25, 0.35, 0.45})},
        {"families",
         json::array(
             {json{{"name", "uniform"}, {"type", "uniform"}, {"indistinguishable", false}},
              json{{"name", "vmf-k2"}, {"type", "vmf"}, {"kappa", 2.0}, {"axis", 0}},
              json{{"name", "tilt-0.9"},
                   {"type", "polynomial-tilt"},
                   {"slope", 0.9},
                   {"axis", 1}},
              json{{"name", "mix-1.5-3"},
                   {"type", "vmf-mixture"},
                   {"kappa1", 1.5},
                   {"axis1", 0},
                   {"kappa2", 3.0},
                   {"axis2", 2},
                   {"weight", 0.5}}})},
    };
  }
  throw ConfigError("unknown command '" + command + "'");
}

// ---------------------------------------------------------------------------
// Family / measure construction from config specs
// ---------------------------------------------------------------------------

namespace detail {

inline CandidateFamily family_from_spec(const json& spec, std::uint64_t seed,
                                        const std::string& context) {
  if (!spec.is_object()) throw ConfigError("family spec must be an object: " + context);
  const std::string type = as_string(require_field(spec, "type", context), context + "type");
  const std::string name =
      spec.contains("name") ? as_string(spec.at("name"), context + "name") : type;

  if (type == "uniform") {
    reject_unknown_keys(spec, {"type", "name", "indistinguishable"}, context);
    const bool indist = spec.contains("indistinguishable")
                            ? as_bool(spec.at("indistinguishable"),
                                      context + "indistinguishable")
                            : false;
    return uniform_family(indist, name);
  }
  if (type == "vmf") {
    reject_unknown_keys(spec, {"type", "name", "kappa", "axis"}, context);
    const double kappa = as_number(require_field(spec, "kappa", context), context + "kappa");
    const int axis = spec.contains("axis")
                         ? static_cast<int>(as_int(spec.at("axis"), context + "axis"))
                         : 0;
    return vmf_family(kappa, axis, name);
  }
  if (type == "polynomial-tilt") {
    reject_unknown_keys(spec, {"type", "name", "slope", "axis"}, context);
    const double slope = as_number(require_field(spec, "slope", context), context + "slope");
    const int axis = spec.contains("axis")
                         ? static_cast<int>(as_int(spec.at("axis"), context + "axis"))
                         : 0;
    return tilt_family(slope, axis, name);
  }
  if (type == "vmf-mixture") {
    reject_unknown_keys(
        spec, {"type", "name", "kappa1", "axis1", "kappa2", "axis2", "weight"},
        context);
    const double kappa1 = as_number(require_field(spec, "kappa1", context), context + "kappa1");
    const double kappa2 = as_number(require_field(spec, "kappa2", context), context + "kappa2");
    const double weight = as_number(require_field(spec, "weight", context), context + "weight");
    const int axis1 = spec.contains("axis1")
                          ? static_cast<int>(as_int(spec.at("axis1"), context + "axis1"))
                          : 0;
    const int axis2 = spec.contains("axis2")
                          ? static_cast<int>(as_int(spec.at("axis2"), context + "axis2"))
                          : 1;
    return mixture_family(kappa1, axis1, kappa2, axis2, weight, name);
  }
  if (type == "tabulated") {
    reject_unknown_keys(spec, {"type", "name", "path", "normalize_samples"}, context);
    const std::string path = as_string(require_field(spec, "path", context), context + "path");
    const std::int64_t normalize_samples =
        spec.contains("normalize_samples")
            ? as_int(spec.at("normalize_samples"), context + "normalize_samples")
            : 100000;
    CandidateFamily family;
    family.name = name;
    family.builder = [path, normalize_samples, seed](const EnergySurface& surface) {
      CandidateMeasure raw = load_tabulated_csv(surface, path);
      return normalize(raw, normalize_samples, Rng::derive_seed(seed, 0x7ab)).measure;
    };
    return family;
  }
  if (type == "random") {
    reject_unknown_keys(spec, {"type", "name", "index"}, context);
    const int index = static_cast<int>(
        as_int(require_field(spec, "index", context), context + "index"));
    return random_candidate_family(seed, index);
  }
  throw ConfigError("unknown family type '" + type + "' at " + context);
}

inline flow::SpectralState initial_state_from_config(const json& flow_cfg,
                                                     std::uint64_t seed) {
  const int grid = static_cast<int>(as_int(flow_cfg.at("grid_size"), "grid_size"));
  const json& init = flow_cfg.at("initial");
  const std::string preset = as_string(init.at("preset"), "initial.preset");
  if (preset == "taylor-green") {
    return flow::taylor_green_state(grid, as_number(init.at("amplitude"), "initial.amplitude"));
  }
  if (preset == "single-mode") {
    const auto& karr = init.at("k");
    if (!karr.is_array() || karr.size() != 3) {
      throw ConfigError("config field 'initial.k' must be a 3-array");
    }
    std::array<int, 3> k{};
    for (int i = 0; i < 3; ++i) {
      k[static_cast<std::size_t>(i)] = static_cast<int>(
          as_int(karr.at(static_cast<std::size_t>(i)), "initial.k"));
    }
    return flow::single_mode_state(
        grid, k, static_cast<int>(as_int(init.at("polarization"), "initial.polarization")),
        as_number(init.at("coefficient"), "initial.coefficient"));
  }
  if (preset == "random-solenoidal") {
    return flow::random_solenoidal_state(
        grid, seed, as_number(init.at("energy"), "initial.energy"),
        as_number(init.at("peak_wavenumber"), "initial.peak_wavenumber"));
  }
  if (preset == "csv") {
    const std::string path = as_string(init.at("path"), "initial.path");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open initial-condition CSV '" + path + "'");
    return flow::state_from_coefficients_csv(in, grid);
  }
  throw ConfigError("unknown initial-condition preset '" + preset + "'");
}

inline flow::FlowParams flow_params_from_config(const json& flow_cfg) {
  flow::FlowParams params;
  params.viscosity = as_number(flow_cfg.at("viscosity"), "viscosity");
  params.dt = as_number(flow_cfg.at("dt"), "dt");
  params.t_end = as_number(flow_cfg.at("t_end"), "t_end");
  params.cfl = as_number(flow_cfg.at("cfl"), "cfl");
  params.dealiasing = as_string(flow_cfg.at("dealiasing"), "dealiasing");
  params.validate();
  return params;
}

inline json estimate_json(const EntropyEstimate& e) {
  return json{{"value", e.value},
              {"std_error", e.std_error},
              {"samples", e.samples},
              {"estimator", to_string(e.estimator)}};
}

inline json estimate_json(const McEstimate& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

namespace detail {

inline json run_verify_payload(const json& cfg, int& exit_code, std::string& table) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const int threads = static_cast<int>(cfg.at("threads").get<std::int64_t>());
  std::vector<int> props;
  for (const auto& p : cfg.at("props")) props.push_back(static_cast<int>(p.get<std::int64_t>()));
  for (int p : props) {
    if (p != 1 && p != 3 && p != 4 && p != 5) {
      throw ConfigError("config field 'props' admits only 1, 3, 4, 5");
    }
  }
  json results;
  bool all_pass = true;
  std::ostringstream tab;

  if (std::count(props.begin(), props.end(), 1) > 0) {
    const json& c = cfg.at("prop1");
    const int n_max = static_cast<int>(c.at("n_max").get<std::int64_t>());
    const double energy = c.at("energy").get<double>();
    const std::int64_t samples = c.at("samples").get<std::int64_t>();
    json chains = json::array();
    bool pass = true;
    int idx = 0;
    for (int n = 1; n <= n_max; ++n)
      for (int m = 1; m <= n; ++m)
        for (int l = 1; l <= m; ++l) {
          const auto rep = verify_projective_consistency(
              l, m, n, energy, samples, Rng::derive_seed(seed, static_cast<std::uint64_t>(idx++)));
          pass = pass && rep.pass;
          chains.push_back(json{{"l", l},
                                {"m", m},
                                {"n", n},
                                {"factor_ln", rep.factor_ln},
                                {"factor_composed", rep.factor_composed},
                                {"exact_pass", rep.exact_pass},
                                {"route_n", rep.route_n},
                                {"route_m_mapped", rep.route_m_mapped},
                                {"route_l_mapped", rep.route_l_mapped},
                                {"max_route_deviation", rep.max_route_deviation},
                                {"allowed_deviation", rep.allowed_deviation},
                                {"sampled_pass", rep.sampled_pass},
                                {"pass", rep.pass}});
        }
    results["prop1"] = json{{"chains", chains}, {"pass", pass}};
    all_pass = all_pass && pass;
    tab << "prop1  chains<=" << n_max << "  " << (pass ? "pass" : "FAIL") << "\n";
  }

  if (std::count(props.begin(), props.end(), 3) > 0) {
    const json& c = cfg.at("prop3");
    const double energy = c.at("energy").get<double>();
    const std::int64_t samples = c.at("samples").get<std::int64_t>();
    json rows = json::array();
    bool pass = true;
    int idx = 0;
    for (const auto& dim_json : c.at("dims")) {
      const int dim = static_cast<int>(dim_json.get<std::int64_t>());
      const auto rep = verify_prop3(make_surface(dim, energy), samples,
                                    Rng::derive_seed(seed, 0x300 + static_cast<std::uint64_t>(idx++)));
      pass = pass && rep.pass;
      rows.push_back(json{{"dim", dim},
                          {"closed_form_distinguishable", rep.distinguishable.closed_form},
                          {"estimate_distinguishable", estimate_json(rep.distinguishable.estimate)},
                          {"closed_form_indistinguishable", rep.indistinguishable.closed_form},
                          {"estimate_indistinguishable", estimate_json(rep.indistinguishable.estimate)},
                          {"pass", rep.pass}});
    }
    results["prop3"] = json{{"rows", rows}, {"pass", pass}};
    all_pass = all_pass && pass;
    tab << "prop3  dims " << c.at("dims").dump() << "  " << (pass ? "pass" : "FAIL") << "\n";
  }

  if (std::count(props.begin(), props.end(), 4) > 0) {
    const json& c = cfg.at("prop4");
    const double energy = c.at("energy").get<double>();
    const std::int64_t samples = c.at("samples").get<std::int64_t>();
    const int random_candidates =
        static_cast<int>(c.at("random_candidates").get<std::int64_t>());
    json per_dim = json::array();
    bool pass = true;
    for (const auto& dim_json : c.at("dims")) {
      const int dim = static_cast<int>(dim_json.get<std::int64_t>());
      std::vector<CandidateFamily> families;
      families.push_back(uniform_family());
      for (const auto& kappa_json : c.at("vmf_kappas")) {
        families.push_back(vmf_family(kappa_json.get<double>(), 0));
      }
      for (int i = 0; i < random_candidates; ++i) {
        families.push_back(random_candidate_family(Rng::derive_seed(seed, 0x400), i));
      }
      const auto rep = verify_prop4(families, make_surface(dim, energy), samples,
                                    Rng::derive_seed(seed, 0x410 + static_cast<std::uint64_t>(dim)),
                                    threads);
      pass = pass && rep.pass;
      json rows = json::array();
      for (const auto& row : rep.rows) {
        rows.push_back(json{{"family", row.family},
                            {"entropy", estimate_json(row.estimate)},
                            {"uniform_entropy", row.uniform_value},
                            {"gap", row.gap},
                            {"gap_std_error", row.gap_std_error},
                            {"pass", row.pass}});
      }
      per_dim.push_back(json{{"dim", dim},
                             {"violations", rep.violations},
                             {"rows", rows},
                             {"pass", rep.pass}});
    }
    results["prop4"] = json{{"per_dim", per_dim}, {"pass", pass}};
    all_pass = all_pass && pass;
    tab << "prop4  dominance sweep  " << (pass ? "pass" : "FAIL") << "\n";
  }

  if (std::count(props.begin(), props.end(), 5) > 0) {
    const json& c = cfg.at("prop5");
    const int n_max = static_cast<int>(c.at("n_max").get<std::int64_t>());
    json rows = json::array();
    bool pass = true;
    for (const auto& box_json : c.at("boxes")) {
      const auto rep = verify_prop5(box_json.get<double>(), n_max);
      pass = pass && rep.pass;
      rows.push_back(json{{"box_measure", rep.box_measure},
                          {"n_max", rep.n_max},
                          {"final_sum", rep.final_sum},
                          {"exp_box", rep.exp_box},
                          {"gap", rep.gap},
                          {"monotone", rep.monotone},
                          {"bounded", rep.bounded},
                          {"log_bounded", rep.log_bounded},
                          {"pass", rep.pass}});
    }
    results["prop5"] = json{{"rows", rows}, {"pass", pass}};
    all_pass = all_pass && pass;
    tab << "prop5  series bound  " << (pass ? "pass" : "FAIL") << "\n";
  }

  exit_code = all_pass ? kExitPass : kExitFail;
  results["pass"] = all_pass;
  tab << "verify verdict: " << (all_pass ? "pass" : "FAIL") << "\n";
  table = tab.str();
  return results;
}

inline json run_entropy_payload(const json& cfg, int& exit_code, std::string& table) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::int64_t samples = cfg.at("samples").get<std::int64_t>();
  const EnergySurface surface =
      make_surface(static_cast<int>(cfg.at("surface").at("dim").get<std::int64_t>()),
                   cfg.at("surface").at("energy").get<double>());
  CandidateFamily family = family_from_spec(cfg.at("measure"), seed, "measure.");
  const CandidateMeasure measure = family.builder(surface);
  const std::string estimator = cfg.at("estimator").get<std::string>();

  json results;
  results["uniform_entropy"] =
      estimate_json(uniform_entropy(surface, measure.indistinguishable));
  std::ostringstream tab;
  tab.precision(6);
  const auto run_one = [&](EstimatorKind kind, const char* key) {
    const EntropyEstimate est = entropy(measure, samples, Rng::derive_seed(seed, 0xe), kind);
    const EntropyEstimate gap = entropy_gap(measure, samples, Rng::derive_seed(seed, 0xe), kind);
    results[key] = json{{"entropy", estimate_json(est)}, {"gap", estimate_json(gap)}};
    tab << key << ": S = " << est.value << " +- " << est.std_error
        << ", gap = " << gap.value << "\n";
  };
  if (estimator == "uniform-sampling" || estimator == "both") {
    run_one(EstimatorKind::UniformSampling, "uniform_sampling");
  }
  if (estimator == "importance-sampling" || estimator == "both") {
    if (!measure.density.has_sampler()) {
      throw ConfigError("config field 'estimator': family '" +
                        measure.density.family + "' ships no importance sampler");
    }
    run_one(EstimatorKind::ImportanceSampling, "importance_sampling");
  }
  if (estimator != "uniform-sampling" && estimator != "importance-sampling" &&
      estimator != "both") {
    throw ConfigError("config field 'estimator' must be 'uniform-sampling', "
                      "'importance-sampling', or 'both'");
  }
  results["invariance"] = measure.density.invariance;
  exit_code = kExitPass;
  table = tab.str();
  return results;
}

inline json run_restrict_payload(const json& cfg, int& exit_code, std::string& table) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::int64_t samples = cfg.at("samples").get<std::int64_t>();
  const double energy = cfg.at("energy").get<double>();
  const double h_rel = cfg.at("fd_step_rel").get<double>();
  json rows = json::array();
  bool pass = true;
  int idx = 0;
  for (const auto& fn_json : cfg.at("functionals")) {
    const std::string fn_name = fn_json.get<std::string>();
    for (const auto& dim_json : cfg.at("dims")) {
      const int dim = static_cast<int>(dim_json.get<std::int64_t>());
      const double radius = std::sqrt(2.0 * energy);
      const BallIntegrand fn = functional_by_name(fn_name, radius);
      const std::uint64_t s = Rng::derive_seed(seed, static_cast<std::uint64_t>(idx++));
      const McEstimate restricted = surface_restrict(fn, dim, energy, samples, s, h_rel);
      const McEstimate oracle_est =
          surface_integral_oracle(fn, dim, energy, samples, Rng::derive_seed(s, 1));
      const double deviation = std::fabs(restricted.value - oracle_est.value);
      const double tolerance =
          std::max(3.0 * std::hypot(restricted.std_error, oracle_est.std_error),
                   1e-3 * std::fabs(oracle_est.value));
      const bool row_pass = deviation <= tolerance;
      pass = pass && row_pass;
      rows.push_back(json{{"functional", fn_name},
                          {"dim", dim},
                          {"surface_restrict", estimate_json(restricted)},
                          {"surface_integral_oracle", estimate_json(oracle_est)},
                          {"deviation", deviation},
                          {"tolerance", tolerance},
                          {"pass", row_pass}});
    }
  }
  exit_code = pass ? kExitPass : kExitFail;
  json results{{"rows", rows}, {"pass", pass}};
  std::ostringstream tab;
  tab << "restriction identity: " << rows.size() << " cases, "
      << (pass ? "pass" : "FAIL") << "\n";
  table = tab.str();
  return results;
}

inline json run_flow_payload(const json& cfg, int& exit_code, std::string& table,
                             flow::Trajectory* trajectory_out) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const flow::FlowParams params = flow_params_from_config(cfg);
  const flow::SpectralState initial = initial_state_from_config(cfg, seed);
  std::vector<double> sample_times;
  for (const auto& t : cfg.at("sample_times")) sample_times.push_back(t.get<double>());
  const int surface_dim = static_cast<int>(cfg.at("surface_dim").get<std::int64_t>());
  const bool dump = cfg.at("dump_coefficients").get<bool>();

  flow::Trajectory traj =
      flow::trajectory(initial, params, sample_times, surface_dim, dump);
  json samples = json::array();
  for (const auto& s : traj.samples) {
    samples.push_back(json{{"time", s.time},
                           {"energy", s.energy},
                           {"dissipation", s.dissipation},
                           {"surface_radius", s.surface.radius},
                           {"surface_area", s.surface.area}});
  }
  json results{{"samples", samples},
               {"surface_dim", surface_dim},
               {"viscosity", params.viscosity},
               {"grid_size", cfg.at("grid_size")}};
  exit_code = kExitPass;
  std::ostringstream tab;
  tab << "flow: " << traj.samples.size() << " samples";
  if (!traj.samples.empty()) {
    tab << ", E(t0) = " << traj.samples.front().energy
        << ", E(tN) = " << traj.samples.back().energy;
  }
  tab << "\n";
  table = tab.str();
  if (trajectory_out) *trajectory_out = std::move(traj);
  return results;
}

inline json run_select_payload(const json& cfg, int& exit_code, std::string& table,
                               SelectionReport* report_out) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const int threads = static_cast<int>(cfg.at("threads").get<std::int64_t>());
  const std::int64_t samples = cfg.at("samples").get<std::int64_t>();
  const int surface_dim = static_cast<int>(cfg.at("surface_dim").get<std::int64_t>());

  const json& flow_cfg = cfg.at("flow");
  const flow::FlowParams params = flow_params_from_config(flow_cfg);
  const flow::SpectralState initial = initial_state_from_config(flow_cfg, seed);
  std::vector<double> sample_times;
  for (const auto& t : cfg.at("sample_times")) sample_times.push_back(t.get<double>());
  const flow::Trajectory traj =
      flow::trajectory(initial, params, sample_times, surface_dim);

  std::vector<CandidateFamily> families;
  int family_idx = 0;
  for (const auto& spec : cfg.at("families")) {
    const std::uint64_t family_seed =
        Rng::derive_seed(seed, 0x900 + static_cast<std::uint64_t>(family_idx));
    families.push_back(family_from_spec(
        spec, family_seed, "families[" + std::to_string(family_idx) + "]."));
    ++family_idx;
  }

  const SelectionReport report = select(families, traj, samples, seed, threads);

  json fam_json = json::array();
  for (const auto& f : report.families) {
    json entropies = json::array();
    for (const auto& e : f.series.entropies) entropies.push_back(estimate_json(e));
    fam_json.push_back(json{{"name", f.name},
                            {"is_physical", f.is_physical},
                            {"invariance", f.invariance},
                            {"entropies", entropies},
                            {"rates", f.series.rates},
                            {"rate_std_errors", f.series.rate_std_errors},
                            {"gaps", f.gaps},
                            {"gap_std_errors", f.gap_std_errors},
                            {"time_averaged_entropy", f.time_averaged_entropy}});
  }
  json results{{"times", report.times},
               {"families", fam_json},
               {"dominance", report.dominance},
               {"winner", report.winner},
               {"verdict", to_string(report.verdict)},
               {"physical_strictly_dominated", report.physical_strictly_dominated},
               {"rate_ordering_consistent", report.rate_ordering_consistent},
               {"note", report.note}};

  switch (report.verdict) {
    case SelectionVerdict::Pass: exit_code = kExitPass; break;
    case SelectionVerdict::Fail: exit_code = kExitFail; break;
    case SelectionVerdict::Inconclusive: exit_code = kExitInconclusive; break;
  }

  std::ostringstream tab;
  tab << "selection over " << report.times.size() << " times, "
      << report.families.size() << " families\n";
  tab << "  verdict: " << to_string(report.verdict);
  if (!report.winner.empty()) tab << ", winner: " << report.winner;
  tab << "\n";
  for (const auto& f : report.families) {
    tab << "  " << f.name << (f.is_physical ? " [physical]" : "")
        << "  mean S = " << f.time_averaged_entropy << "\n";
  }
  table = tab.str();
  if (report_out) *report_out = report;
  return results;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Validate the config against the command's schema, run it, and write the
/// report plus CSV artifacts under out_dir (when given). Reports carry no
/// timestamps: identical (config, seed, threads) yield byte-identical JSON.
inline RunResult run_command(const std::string& command, const json& user_config,
                             const std::optional<std::string>& out_dir = std::nullopt) {
  const json defaults = default_config(command);
  if (!user_config.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  detail::require_field(user_config, "seed", "");
  json resolved = detail::resolve_over_defaults(defaults, user_config, "");
  if (!resolved.at("seed").is_number_integer() &&
      !resolved.at("seed").is_number_unsigned()) {
    throw ConfigError("config field 'seed' must be an integer");
  }
  if (resolved.at("schema_version").get<std::int64_t>() != 1) {
    throw ConfigError("config field 'schema_version' must be 1");
  }
  if (detail::as_int(resolved.at("threads"), "threads") < 1) {
    throw ConfigError("config field 'threads' must be >= 1");
  }

  RunResult result;
  int exit_code = kExitPass;
  std::string table;
  json payload;
  flow::Trajectory trajectory;
  SelectionReport selection;

  if (command == "verify") {
    payload = detail::run_verify_payload(resolved, exit_code, table);
  } else if (command == "entropy") {
    payload = detail::run_entropy_payload(resolved, exit_code, table);
  } else if (command == "restrict") {
    payload = detail::run_restrict_payload(resolved, exit_code, table);
  } else if (command == "flow") {
    payload = detail::run_flow_payload(resolved, exit_code, table, &trajectory);
  } else if (command == "select") {
    payload = detail::run_select_payload(resolved, exit_code, table, &selection);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }

  result.report = json{{"tool", "mepp-lab"},
                       {"command", command},
                       {"schema_version", resolved.at("schema_version")},
                       {"config", resolved},
                       {"config_hash", config_hash(resolved)},
                       {"seed", resolved.at("seed")},
                       {"threads", resolved.at("threads")},
                       {"results", payload}};
  result.exit_code = exit_code;
  result.table = table;

  if (out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(*out_dir);
    const auto write_text = [&](const std::string& name, const std::string& text) {
      const fs::path path = fs::path(*out_dir) / name;
      std::ofstream out(path, std::ios::binary);
      out << text;
      result.artifacts.push_back(path.string());
    };
    write_text("report.json", result.report.dump(2) + "\n");

    if (command == "flow") {
      std::ostringstream csv;
      flow::write_trajectory_csv(csv, trajectory);
      write_text("trajectory.csv", csv.str());
      for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        std::ostringstream coeffs;
        flow::write_coefficients_csv(coeffs, trajectory.states[i]);
        char name[48];
        std::snprintf(name, sizeof(name), "coefficients_%03zu.csv", i);
        write_text(name, coeffs.str());
      }
    }
    if (command == "select") {
      for (const auto& f : selection.families) {
        std::ostringstream csv;
        csv << "time,entropy,std_error,gap\n";
        csv.precision(17);
        for (std::size_t j = 0; j < selection.times.size(); ++j) {
          csv << selection.times[j] << ',' << f.series.entropies[j].value << ','
              << f.series.entropies[j].std_error << ',' << f.gaps[j] << '\n';
        }
        write_text("series_" + f.name + ".csv", csv.str());
      }
    }
    if (command == "verify" && payload.contains("prop4")) {
      std::ostringstream csv;
      csv << "dim,family,entropy,std_error,gap,pass\n";
      csv.precision(17);
      for (const auto& per_dim : payload.at("prop4").at("per_dim")) {
        for (const auto& row : per_dim.at("rows")) {
          csv << per_dim.at("dim").get<int>() << ','
              << row.at("family").get<std::string>() << ','
              << row.at("entropy").at("value").get<double>() << ','
              << row.at("entropy").at("std_error").get<double>() << ','
              << row.at("gap").get<double>() << ','
              << (row.at("pass").get<bool>() ? 1 : 0) << '\n';
        }
      }
      write_text("prop4_gaps.csv", csv.str());
    }
    if (command == "restrict") {
      std::ostringstream csv;
      csv << "functional,dim,restrict,oracle,deviation,tolerance,pass\n";
      csv.precision(17);
      for (const auto& row : payload.at("rows")) {
        csv << row.at("functional").get<std::string>() << ','
            << row.at("dim").get<int>() << ','
            << row.at("surface_restrict").at("value").get<double>() << ','
            << row.at("surface_integral_oracle").at("value").get<double>() << ','
            << row.at("deviation").get<double>() << ','
            << row.at("tolerance").get<double>() << ','
            << (row.at("pass").get<bool>() ? 1 : 0) << '\n';
      }
      write_text("restrict_results.csv", csv.str());
    }
  }
  return result;
}

}  // namespace mepplab::cli
