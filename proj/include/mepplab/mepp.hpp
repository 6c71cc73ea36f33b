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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mepplab/entropy.hpp"
#include "mepplab/flow.hpp"
#include "mepplab/projective.hpp"

namespace mepplab {

/// Experiment configuration problem (bad candidate set, missing fields, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run fn(i) for i in [0, count), optionally across worker threads. Tasks
/// write results by index and carry pre-derived seeds, so the outcome does
/// not depend on the worker count.
template <class Fn>
void parallel_for_index(std::int64_t count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t next = 0;
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads && next < count; ++t) {
    const std::int64_t begin = next;
    const std::int64_t end = std::min(count, begin + chunk);
    next = end;
    pool.emplace_back([begin, end, &fn] {
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Candidate families
// ---------------------------------------------------------------------------

/// A family of comparison measures: one probability measure per energy
/// surface along a trajectory.
struct CandidateFamily {
  std::string name;
  std::function<CandidateMeasure(const EnergySurface&)> builder;
  bool is_physical = false;
};

inline CandidateFamily uniform_family(bool indistinguishable = false,
                                      std::string name = "uniform") {
  CandidateFamily f;
  f.name = std::move(name);
  f.is_physical = true;
  f.builder = [indistinguishable](const EnergySurface& surface) {
    auto m = physical_measure(surface, indistinguishable);
    if (!m) throw std::domain_error("uniform_family: degenerate surface");
    return *m;
  };
  return f;
}

inline CandidateFamily vmf_family(double kappa, int axis, std::string name = "") {
  CandidateFamily f;
  f.name = name.empty() ? "vmf-k" + std::to_string(kappa) : std::move(name);
  f.builder = [kappa, axis](const EnergySurface& surface) {
    return vmf_measure(surface, axis_direction(surface.dim, axis % surface.dim),
                       kappa);
  };
  return f;
}

inline CandidateFamily tilt_family(double slope, int axis, std::string name = "") {
  CandidateFamily f;
  f.name = name.empty() ? "tilt-a" + std::to_string(slope) : std::move(name);
  f.builder = [slope, axis](const EnergySurface& surface) {
    return polynomial_tilt_measure(surface, axis % surface.dim, slope);
  };
  return f;
}

inline CandidateFamily mixture_family(double kappa1, int axis1, double kappa2,
                                      int axis2, double weight,
                                      std::string name = "") {
  CandidateFamily f;
  f.name = name.empty() ? "vmf-mixture" : std::move(name);
  f.builder = [=](const EnergySurface& surface) {
    return vmf_mixture_measure(
        surface, axis_direction(surface.dim, axis1 % surface.dim), kappa1,
        axis_direction(surface.dim, axis2 % surface.dim), kappa2, weight);
  };
  return f;
}

/// Random nonuniform competitor drawn across the shipped families; used for
/// the randomized sweeps. Deterministic per (seed, index).
inline CandidateFamily random_candidate_family(std::uint64_t seed, int index) {
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(index) + 101);
  const int kind = static_cast<int>(rng.next() % 4);
  const int axis = static_cast<int>(rng.next() % 16);
  const std::string tag = "#" + std::to_string(index);
  switch (kind) {
    case 0: {
      const double kappa = 0.2 + 4.8 * rng.uniform01();
      return vmf_family(kappa, axis, "vmf" + tag);
    }
    case 1: {
      const double kappa1 = 0.5 + 4.5 * rng.uniform01();
      const double kappa2 = 0.5 + 4.5 * rng.uniform01();
      const double weight = 0.2 + 0.6 * rng.uniform01();
      const int axis2 = static_cast<int>(rng.next() % 16);
      return mixture_family(kappa1, axis, kappa2, axis2, weight, "mix" + tag);
    }
    case 2: {
      const double slope = -1.8 + 3.6 * rng.uniform01();
      if (std::fabs(slope) < 0.05) return tilt_family(0.5, axis, "tilt" + tag);
      return tilt_family(slope, axis, "tilt" + tag);
    }
    default: {
      const std::uint64_t sub = rng.next();
      CandidateFamily f;
      f.name = "tabulated" + tag;
      f.builder = [sub](const EnergySurface& surface) {
        Rng local(sub);
        const int table_size = 48;
        std::vector<Point> points(table_size, Point(static_cast<std::size_t>(surface.dim)));
        std::vector<double> values(table_size);
        for (int i = 0; i < table_size; ++i) {
          sample_uniform_point(local, surface.dim, surface.radius, points[static_cast<std::size_t>(i)]);
          values[static_cast<std::size_t>(i)] = std::fabs(local.gaussian()) + 0.05;
        }
        auto raw = tabulated_measure(surface, std::move(points), std::move(values));
        raw.total_mass = std::numeric_limits<double>::quiet_NaN();
        return normalize(raw, 20000, sub ^ 0xbeef).measure;
      };
      return f;
    }
  }
}

// ---------------------------------------------------------------------------
// Proposition harnesses
// ---------------------------------------------------------------------------

struct Prop3Row {
  bool indistinguishable = false;
  double closed_form = 0.0;
  EntropyEstimate estimate;
  bool pass = false;
};

struct Prop3Report {
  int dim = 0;
  double energy = 0.0;
  Prop3Row distinguishable;
  Prop3Row indistinguishable;
  bool pass = false;
};

/// Monte Carlo entropy of the physical measure equals the log reference
/// mass, in both distinguishability flavors.
inline Prop3Report verify_prop3(const EnergySurface& surface, std::int64_t count,
                                std::uint64_t seed) {
  if (surface.degenerate()) throw std::domain_error("verify_prop3: degenerate surface");
  Prop3Report report;
  report.dim = surface.dim;
  report.energy = surface.energy;
  for (const bool indist : {false, true}) {
    Prop3Row row;
    row.indistinguishable = indist;
    row.closed_form = std::log(reference_mass(surface, indist));
    const auto measure = physical_measure(surface, indist);
    row.estimate = entropy(*measure, count, Rng::derive_seed(seed, indist ? 1 : 0));
    // The estimator is exact for constant densities (SE = 0); keep a small
    // arithmetic floor so the closed-form comparison is meaningful.
    row.pass = std::fabs(row.estimate.value - row.closed_form) <=
               3.0 * row.estimate.std_error + 1e-12;
    (indist ? report.indistinguishable : report.distinguishable) = row;
  }
  report.pass = report.distinguishable.pass && report.indistinguishable.pass;
  return report;
}

struct Prop4Row {
  std::string family;
  EntropyEstimate estimate;
  double uniform_value = 0.0;
  double gap = 0.0;
  double gap_std_error = 0.0;
  bool pass = false;  // entropy <= uniform + 3 SE
};

struct Prop4Report {
  int dim = 0;
  double energy = 0.0;
  std::vector<Prop4Row> rows;
  int violations = 0;
  bool pass = false;
};

/// Jensen dominance: every candidate's entropy is bounded by the uniform
/// entropy within 3 SE; gaps reported.
inline Prop4Report verify_prop4(const std::vector<CandidateFamily>& families,
                                const EnergySurface& surface, std::int64_t count,
                                std::uint64_t seed, int threads = 1) {
  if (families.empty()) throw ConfigError("verify_prop4: no candidate families");
  if (surface.degenerate()) throw std::domain_error("verify_prop4: degenerate surface");
  Prop4Report report;
  report.dim = surface.dim;
  report.energy = surface.energy;
  report.rows.resize(families.size());

  parallel_for_index(static_cast<std::int64_t>(families.size()), threads,
                     [&](std::int64_t i) {
                       const auto& family = families[static_cast<std::size_t>(i)];
                       Prop4Row row;
                       row.family = family.name;
                       const CandidateMeasure measure = family.builder(surface);
                       const double uniform_for_flavor =
                           uniform_entropy(surface, measure.indistinguishable).value;
                       row.uniform_value = uniform_for_flavor;
                       row.estimate = entropy(
                           measure, count,
                           Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
                       row.gap = uniform_for_flavor - row.estimate.value;
                       row.gap_std_error = row.estimate.std_error;
                       row.pass = row.estimate.value <=
                                  uniform_for_flavor + 3.0 * row.estimate.std_error + 1e-12;
                       report.rows[static_cast<std::size_t>(i)] = row;
                     });
  for (const auto& row : report.rows) {
    if (!row.pass) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

struct Prop5Report {
  double box_measure = 0.0;
  int n_max = 0;
  std::vector<double> partial_sums;
  bool monotone = false;
  bool bounded = false;      // every partial sum <= e^box
  bool log_bounded = false;  // log of every positive partial sum <= box
  double final_sum = 0.0;
  double exp_box = 0.0;
  double gap = 0.0;  // e^box - final partial sum, >= 0
  bool pass = false;
};

/// Partial sums of sum box^n / n! stay below e^box, increase monotonically,
/// and their logarithms stay below box. Long-double arithmetic.
inline Prop5Report verify_prop5(double box_measure, int n_max) {
  if (box_measure < 0.0) throw std::domain_error("verify_prop5: negative box measure");
  if (n_max < 1) throw std::domain_error("verify_prop5: n_max must be >= 1");
  Prop5Report report;
  report.box_measure = box_measure;
  report.n_max = n_max;
  const long double box = box_measure;
  const long double bound = std::exp(box);
  long double term = 1.0L;
  long double partial = 1.0L;
  report.partial_sums.push_back(static_cast<double>(partial));
  report.monotone = true;
  report.bounded = partial <= bound;
  report.log_bounded = std::log(partial) <= box;
  for (int n = 1; n <= n_max; ++n) {
    term *= box / n;
    const long double previous = partial;
    partial += term;
    report.partial_sums.push_back(static_cast<double>(partial));
    report.monotone = report.monotone && partial >= previous;
    report.bounded = report.bounded && partial <= bound;
    report.log_bounded = report.log_bounded && std::log(partial) <= box;
  }
  report.final_sum = static_cast<double>(partial);
  report.exp_box = static_cast<double>(bound);
  report.gap = static_cast<double>(bound - partial);
  report.pass = report.monotone && report.bounded && report.log_bounded &&
                report.gap >= 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Theorem-1 selector
// ---------------------------------------------------------------------------

enum class SelectionVerdict { Pass, Fail, Inconclusive };

inline std::string to_string(SelectionVerdict verdict) {
  switch (verdict) {
    case SelectionVerdict::Pass: return "pass";
    case SelectionVerdict::Fail: return "fail";
    case SelectionVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct FamilySeries {
  std::string name;
  bool is_physical = false;
  std::string invariance;
  ProductionSeries series;
  std::vector<double> gaps;  // uniform entropy minus entropy, per time
  std::vector<double> gap_std_errors;
  double time_averaged_entropy = 0.0;
};

struct SelectionReport {
  std::vector<double> times;
  std::vector<FamilySeries> families;
  /// dominance[a][b] = 1 when family a dominates family b (a is at least as
  /// entropic at every time and strictly beyond 3 SE at some time).
  std::vector<std::vector<int>> dominance;
  std::string winner;  // empty when inconclusive
  SelectionVerdict verdict = SelectionVerdict::Inconclusive;
  bool physical_strictly_dominated = false;
  bool rate_ordering_consistent = true;
  std::string note =
      "competitors are candidate measure families over a common trajectory, "
      "not alternative weak solutions";
};

/// Rank candidate families by fixed-time entropy along the trajectory and
/// select the winner by pointwise dominance. Pass iff the winner is the
/// physical family; within-SE comparisons yield an inconclusive outcome.
inline SelectionReport select(const std::vector<CandidateFamily>& families,
                              const flow::Trajectory& trajectory,
                              std::int64_t count, std::uint64_t seed,
                              int threads = 1) {
  if (families.size() < 2) {
    throw ConfigError("select: need at least 2 candidate families");
  }
  if (std::none_of(families.begin(), families.end(),
                   [](const CandidateFamily& f) { return f.is_physical; })) {
    throw ConfigError("select: no physical family present");
  }
  if (trajectory.samples.size() < 3) {
    throw ConfigError("select: trajectory must carry at least 3 sample times");
  }

  const std::size_t family_count = families.size();
  const std::size_t time_count = trajectory.samples.size();
  SelectionReport report;
  report.times.reserve(time_count);
  for (const auto& s : trajectory.samples) report.times.push_back(s.time);

  report.families.resize(family_count);
  std::vector<EntropyEstimate> flat(family_count * time_count);
  parallel_for_index(
      static_cast<std::int64_t>(family_count * time_count), threads,
      [&](std::int64_t task) {
        const std::size_t i = static_cast<std::size_t>(task) / time_count;
        const std::size_t j = static_cast<std::size_t>(task) % time_count;
        const CandidateMeasure measure =
            families[i].builder(trajectory.samples[j].surface);
        if (!measure.is_probability(1e-6)) {
          throw std::invalid_argument("select: family '" + families[i].name +
                                      "' built a non-probability measure");
        }
        flat[static_cast<std::size_t>(task)] = entropy(
            measure, count, Rng::derive_seed(seed, static_cast<std::uint64_t>(task)));
      });

  for (std::size_t i = 0; i < family_count; ++i) {
    FamilySeries fs;
    fs.name = families[i].name;
    fs.is_physical = families[i].is_physical;
    fs.invariance =
        families[i].builder(trajectory.samples[0].surface).density.invariance;
    fs.series.times = report.times;
    double mean = 0.0;
    for (std::size_t j = 0; j < time_count; ++j) {
      const EntropyEstimate& e = flat[i * time_count + j];
      fs.series.entropies.push_back(e);
      const double uniform_value =
          uniform_entropy(trajectory.samples[j].surface, false).value;
      fs.gaps.push_back(uniform_value - e.value);
      fs.gap_std_errors.push_back(e.std_error);
      mean += e.value;
    }
    fs.time_averaged_entropy = mean / static_cast<double>(time_count);
    central_difference_rates(fs.series);
    report.families[i] = std::move(fs);
  }

  const auto beats = [&](std::size_t a, std::size_t b, std::size_t t) {
    const EntropyEstimate& ea = report.families[a].series.entropies[t];
    const EntropyEstimate& eb = report.families[b].series.entropies[t];
    return ea.value - eb.value > 3.0 * std::hypot(ea.std_error, eb.std_error);
  };

  report.dominance.assign(family_count, std::vector<int>(family_count, 0));
  for (std::size_t a = 0; a < family_count; ++a) {
    for (std::size_t b = 0; b < family_count; ++b) {
      if (a == b) continue;
      bool ever_beats = false;
      bool never_beaten = true;
      for (std::size_t t = 0; t < time_count; ++t) {
        if (beats(a, b, t)) ever_beats = true;
        if (beats(b, a, t)) never_beaten = false;
      }
      report.dominance[a][b] = (ever_beats && never_beaten) ? 1 : 0;
    }
  }

  // Pointwise dominance must imply time-averaged ordering (arithmetic
  // consequence of the definition; surfaced in the report).
  for (std::size_t a = 0; a < family_count; ++a) {
    for (std::size_t b = 0; b < family_count; ++b) {
      if (report.dominance[a][b] == 1 &&
          !(report.families[a].time_averaged_entropy >
            report.families[b].time_averaged_entropy)) {
        report.rate_ordering_consistent = false;
      }
    }
  }

  std::size_t winner_index = family_count;
  for (std::size_t a = 0; a < family_count; ++a) {
    bool dominates_all = true;
    for (std::size_t b = 0; b < family_count; ++b) {
      if (a != b && report.dominance[a][b] != 1) dominates_all = false;
    }
    if (dominates_all) {
      winner_index = a;
      break;
    }
  }

  for (std::size_t a = 0; a < family_count; ++a) {
    if (!report.families[a].is_physical) continue;
    for (std::size_t b = 0; b < family_count; ++b) {
      if (a != b && report.dominance[b][a] == 1) {
        report.physical_strictly_dominated = true;
      }
    }
  }

  if (winner_index == family_count) {
    report.verdict = SelectionVerdict::Inconclusive;
    report.winner.clear();
  } else {
    report.winner = report.families[winner_index].name;
    report.verdict = report.families[winner_index].is_physical
                         ? SelectionVerdict::Pass
                         : SelectionVerdict::Fail;
  }
  return report;
}

}  // namespace mepplab
