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
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mepplab/measures.hpp"
#include "mepplab/special.hpp"
#include "mepplab/stats.hpp"

namespace mepplab {

/// A continuous functional of the velocity coefficients, defined on the
/// closed ball (so it can be restricted to any radius).
struct BallIntegrand {
  std::string name;
  std::function<double(std::span<const double>)> f;
};

/// Monte Carlo integral of f over the ball of the given radius against
/// Lebesgue measure: volume times the mean over uniform ball points.
inline McEstimate ball_integral(const BallIntegrand& integrand, int dim,
                                double radius, std::int64_t count,
                                std::uint64_t seed) {
  if (dim < 1) throw std::domain_error("ball_integral: dim must be >= 1");
  if (!(radius > 0.0)) throw std::domain_error("ball_integral: radius must be > 0");
  if (count < 1) throw std::domain_error("ball_integral: count must be >= 1");
  const double volume = ball_volume(dim, radius);
  Rng rng = Rng::stream(seed, 0);
  Point dir(static_cast<std::size_t>(dim));
  Point x(static_cast<std::size_t>(dim));
  RunningStat stat;
  for (std::int64_t i = 0; i < count; ++i) {
    sample_uniform_point(rng, dim, 1.0, dir);
    const double s = radius * std::pow(rng.uniform01(),
                                       1.0 / static_cast<double>(dim));
    for (std::size_t j = 0; j < dir.size(); ++j) x[j] = s * dir[j];
    stat.push(integrand.f(std::span<const double>(x)));
  }
  return stat.estimate(volume);
}

/// Restriction of a functional to the energy surface, evaluated as the
/// radial derivative of the ball integral at r = r(e).
///
/// Central differences with one Richardson extrapolation level; common
/// random numbers across the four radii (a fixed cloud of unit directions
/// and radial quantiles rescaled per radius), so the Monte Carlo noise
/// cancels in the difference instead of swamping it.
inline McEstimate surface_restrict(const BallIntegrand& integrand, int dim,
                                   double energy, std::int64_t count,
                                   std::uint64_t seed, double h_rel = 1e-3) {
  if (dim < 1) throw std::domain_error("surface_restrict: dim must be >= 1");
  if (energy < 0.0) throw std::domain_error("surface_restrict: negative energy");
  if (energy == 0.0) return {0.0, 0.0, 0};  // degenerate-surface sentinel
  if (count < 1) throw std::domain_error("surface_restrict: count must be >= 1");
  if (!(h_rel > 0.0) || h_rel >= 0.5) {
    throw std::domain_error("surface_restrict: h_rel outside (0, 0.5)");
  }

  const double r = std::sqrt(2.0 * energy);
  const double h = h_rel * r;
  Rng rng = Rng::stream(seed, 0);
  Point dir(static_cast<std::size_t>(dim));
  Point x(static_cast<std::size_t>(dim));
  RunningStat stat;

  const auto sample_at = [&](double rho, double quantile) {
    const double s = rho * std::pow(quantile, 1.0 / static_cast<double>(dim));
    for (std::size_t i = 0; i < dir.size(); ++i) x[i] = s * dir[i];
    return ball_volume(dim, rho) * integrand.f(std::span<const double>(x));
  };

  for (std::int64_t i = 0; i < count; ++i) {
    sample_uniform_point(rng, dim, 1.0, dir);
    const double q = rng.uniform01();
    const double d_h = (sample_at(r + h, q) - sample_at(r - h, q)) / (2.0 * h);
    const double d_h2 =
        (sample_at(r + 0.5 * h, q) - sample_at(r - 0.5 * h, q)) / h;
    stat.push((4.0 * d_h2 - d_h) / 3.0);
  }
  return stat.estimate();
}

/// Direct Monte Carlo of the surface integral against the surface Lebesgue
/// measure: area times the mean over uniform sphere points. Independent
/// check of the radial-derivative route.
inline McEstimate surface_integral_oracle(const BallIntegrand& integrand,
                                          int dim, double energy,
                                          std::int64_t count,
                                          std::uint64_t seed) {
  if (dim < 1) throw std::domain_error("surface_integral_oracle: dim must be >= 1");
  if (energy < 0.0) throw std::domain_error("surface_integral_oracle: negative energy");
  if (energy == 0.0) return {0.0, 0.0, 0};  // degenerate-surface sentinel
  if (count < 1) throw std::domain_error("surface_integral_oracle: count must be >= 1");
  const double r = std::sqrt(2.0 * energy);
  const double area = sphere_area(dim, r);
  Rng rng = Rng::stream(seed, 0);
  Point x(static_cast<std::size_t>(dim));
  RunningStat stat;
  for (std::int64_t i = 0; i < count; ++i) {
    sample_uniform_point(rng, dim, r, x);
    stat.push(integrand.f(std::span<const double>(x)));
  }
  return stat.estimate(area);
}

/// Named test functionals selectable from experiment configs. `scale` is the
/// surface radius used by the exponential functional.
inline BallIntegrand functional_by_name(const std::string& name, double scale = 1.0) {
  if (name == "one") {
    return {name, [](std::span<const double>) { return 1.0; }};
  }
  if (name == "norm2") {
    return {name, [](std::span<const double> x) {
              double s = 0.0;
              for (double c : x) s += c * c;
              return s;
            }};
  }
  if (name == "x1sq") {
    return {name, [](std::span<const double> x) { return x[0] * x[0]; }};
  }
  if (name == "x1odd") {
    return {name, [](std::span<const double> x) { return x[0]; }};
  }
  if (name == "exp-x1") {
    if (!(scale > 0.0)) throw std::domain_error("functional_by_name: scale must be > 0");
    return {name, [scale](std::span<const double> x) {
              return std::exp(x[0] / scale);
            }};
  }
  throw std::invalid_argument("functional_by_name: unknown functional '" + name + "'");
}

}  // namespace mepplab
