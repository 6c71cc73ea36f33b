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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mepplab/measures.hpp"

namespace mepplab {

enum class EstimatorKind {
  ClosedForm,
  UniformSampling,
  ImportanceSampling,
  Degenerate,
};

inline std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::ClosedForm: return "closed-form";
    case EstimatorKind::UniformSampling: return "uniform-sampling";
    case EstimatorKind::ImportanceSampling: return "importance-sampling";
    case EstimatorKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

/// Entropy in nats with its Monte Carlo standard error. Closed-form values
/// carry std_error = 0; the degenerate sentinel marks zero-energy surfaces.
struct EntropyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  EstimatorKind estimator = EstimatorKind::ClosedForm;

  bool degenerate() const { return estimator == EstimatorKind::Degenerate; }

  static EntropyEstimate degenerate_surface() {
    return {std::numeric_limits<double>::quiet_NaN(), 0.0, 0,
            EstimatorKind::Degenerate};
  }
};

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Entropy of the physical (uniform) measure: log of the reference mass,
/// i.e. log(area) or log(area/n!). Exact.
inline EntropyEstimate uniform_entropy(const EnergySurface& surface,
                                       bool indistinguishable) {
  if (surface.degenerate()) return EntropyEstimate::degenerate_surface();
  double value = std::log(surface.area);
  if (indistinguishable) value -= log_factorial(surface.dim);
  return {value, 0.0, 0, EstimatorKind::ClosedForm};
}

/// Entropy of a probability measure relative to the surface reference:
/// -integral of rho log rho against the reference, with 0 log 0 = 0.
///
/// Uniform-sampling estimator: -(ref_mass/count) Sum rho(x_i) log rho(x_i)
/// over uniform surface points. Importance estimator: -mean log rho(y_i)
/// over mu-distributed points (requires the family's sampler).
inline EntropyEstimate entropy(const CandidateMeasure& measure,
                               std::int64_t count, std::uint64_t seed,
                               EstimatorKind kind = EstimatorKind::UniformSampling) {
  if (measure.surface.degenerate()) return EntropyEstimate::degenerate_surface();
  if (!measure.is_probability(1e-6)) {
    throw std::invalid_argument(
        "entropy: measure is not a probability measure; normalize first");
  }
  if (count < 1) throw std::domain_error("entropy: count must be >= 1");

  const DensityFn eval = measure.density.eval;
  if (kind == EstimatorKind::UniformSampling) {
    const McEstimate mc = reference_integral(
        measure.surface, measure.indistinguishable, count, seed,
        [&eval](std::span<const double> x) { return -xlogx(eval(x)); });
    return {mc.value, mc.std_error, mc.samples, EstimatorKind::UniformSampling};
  }
  if (kind == EstimatorKind::ImportanceSampling) {
    if (!measure.density.has_sampler()) {
      throw std::invalid_argument(
          "entropy: family ships no importance sampler; use uniform sampling");
    }
    Rng rng = Rng::stream(seed, 1);
    Point y(static_cast<std::size_t>(measure.surface.dim));
    RunningStat stat;
    for (std::int64_t i = 0; i < count; ++i) {
      measure.density.draw(rng, y);
      stat.push(-std::log(eval(std::span<const double>(y))));
    }
    const McEstimate mc = stat.estimate();
    return {mc.value, mc.std_error, mc.samples, EstimatorKind::ImportanceSampling};
  }
  throw std::invalid_argument("entropy: unsupported estimator kind");
}

/// Entropy of a finite (not necessarily unit-mass) measure eta:
///   S = log eta(V) - (1/eta(V)) Integral rho log rho dv,
/// both integrals estimated from one uniform sample set; standard error by
/// the delta method with the sample covariance.
inline EntropyEstimate finite_measure_entropy(const CandidateMeasure& measure,
                                              std::int64_t count,
                                              std::uint64_t seed) {
  if (measure.surface.degenerate()) return EntropyEstimate::degenerate_surface();
  if (count < 1) throw std::domain_error("finite_measure_entropy: count must be >= 1");
  const double ref = reference_mass(measure);
  const DensityFn eval = measure.density.eval;

  Rng rng = Rng::stream(seed, 0);
  Point x(static_cast<std::size_t>(measure.surface.dim));
  RunningStat2 stat;
  for (std::int64_t i = 0; i < count; ++i) {
    sample_uniform_point(rng, measure.surface.dim, measure.surface.radius, x);
    const double rho = eval(std::span<const double>(x));
    stat.push(rho, xlogx(rho));
  }
  const double mass = ref * stat.mean_x();
  const double integral = ref * stat.mean_y();
  if (!(mass > 0.0)) {
    throw std::domain_error("finite_measure_entropy: total mass is not positive");
  }
  const double value = std::log(mass) - integral / mass;

  const double inv_n = 1.0 / static_cast<double>(count);
  const double dS_dmass = 1.0 / mass + integral / (mass * mass);
  const double dS_dint = -1.0 / mass;
  const double var = dS_dmass * dS_dmass * ref * ref * stat.var_x() * inv_n +
                     dS_dint * dS_dint * ref * ref * stat.var_y() * inv_n +
                     2.0 * dS_dmass * dS_dint * ref * ref * stat.cov() * inv_n;
  return {value, std::sqrt(std::max(0.0, var)), count,
          EstimatorKind::UniformSampling};
}

/// Entropy gap = uniform_entropy - entropy(measure), the KL divergence of the
/// measure from the physical measure; nonnegative up to sampling error.
inline EntropyEstimate entropy_gap(const CandidateMeasure& measure,
                                   std::int64_t count, std::uint64_t seed,
                                   EstimatorKind kind = EstimatorKind::UniformSampling) {
  const EntropyEstimate reference =
      uniform_entropy(measure.surface, measure.indistinguishable);
  if (reference.degenerate()) return reference;
  const EntropyEstimate s = entropy(measure, count, seed, kind);
  return {reference.value - s.value, s.std_error, s.samples, s.estimator};
}

/// Entropies along a time grid and the entropy production rate by central
/// differences on interior points.
struct ProductionSeries {
  std::vector<double> times;
  std::vector<EntropyEstimate> entropies;
  std::vector<double> rates;            // interior points, |times| - 2 values
  std::vector<double> rate_std_errors;  // propagated from the entropy SEs
};

/// Fill rates/rate_std_errors from times/entropies by central differences.
inline void central_difference_rates(ProductionSeries& series) {
  series.rates.clear();
  series.rate_std_errors.clear();
  for (std::size_t i = 1; i + 1 < series.times.size(); ++i) {
    const double dt = series.times[i + 1] - series.times[i - 1];
    series.rates.push_back(
        (series.entropies[i + 1].value - series.entropies[i - 1].value) / dt);
    const double se = std::hypot(series.entropies[i + 1].std_error,
                                 series.entropies[i - 1].std_error);
    series.rate_std_errors.push_back(se / dt);
  }
}

inline ProductionSeries production_rate(
    const std::vector<std::pair<double, CandidateMeasure>>& series,
    std::int64_t count, std::uint64_t seed,
    EstimatorKind kind = EstimatorKind::UniformSampling) {
  if (series.size() < 3) {
    throw std::domain_error("production_rate: need at least 3 time points");
  }
  ProductionSeries out;
  out.times.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.times.push_back(series[i].first);
    if (i > 0 && !(series[i].first > series[i - 1].first)) {
      throw std::domain_error("production_rate: times must be strictly increasing");
    }
  }
  out.entropies.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    // One seed stream per time point; evaluation order cannot change results.
    out.entropies.push_back(
        entropy(series[i].second, count, Rng::derive_seed(seed, i), kind));
  }
  central_difference_rates(out);
  return out;
}

}  // namespace mepplab
