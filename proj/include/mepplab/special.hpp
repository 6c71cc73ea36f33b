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
#include <numbers>
#include <stdexcept>

#include "mepplab/quadrature.hpp"

namespace mepplab {

/// n! as an exact 64-bit integer; defined for 0 <= n <= 20.
inline std::uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial_u64: n outside [0,20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative n");
  if (n <= 20) return std::log(static_cast<double>(factorial_u64(n)));
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Surface measure of the sphere of given radius in `dim` dimensions:
/// 2 pi^{d/2} r^{d-1} / Gamma(d/2). For dim == 1 this is the two-point
/// counting measure, value 2 for any radius.
inline double sphere_area(int dim, double radius) {
  if (dim < 1) throw std::domain_error("sphere_area: dim must be >= 1");
  if (radius < 0.0) throw std::domain_error("sphere_area: negative radius");
  if (dim == 1) return 2.0;
  const double d = static_cast<double>(dim);
  const double log_area = std::numbers::ln2 + 0.5 * d * std::log(std::numbers::pi) -
                          std::lgamma(0.5 * d) + (d - 1.0) * std::log(radius);
  return radius == 0.0 ? 0.0 : std::exp(log_area);
}

/// Volume of the ball of given radius: pi^{d/2} r^d / Gamma(d/2 + 1).
inline double ball_volume(int dim, double radius) {
  if (dim < 1) throw std::domain_error("ball_volume: dim must be >= 1");
  if (radius < 0.0) throw std::domain_error("ball_volume: negative radius");
  if (radius == 0.0) return 0.0;
  const double d = static_cast<double>(dim);
  return std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0) +
                  d * std::log(radius));
}

/// log I_nu(x) by the ascending power series. Converges quickly for the
/// moderate arguments used here (x <= ~60); nu >= 0.
inline double log_modified_bessel_i(double nu, double x) {
  if (x < 0.0 || nu < 0.0) throw std::domain_error("log_modified_bessel_i: bad args");
  if (x == 0.0) {
    if (nu == 0.0) return 0.0;
    return -std::numeric_limits<double>::infinity();
  }
  const double log_half_x = std::log(0.5 * x);
  // Sum terms in log space relative to the running maximum.
  double log_term = nu * log_half_x - std::lgamma(nu + 1.0);
  double log_sum = log_term;
  for (int k = 1; k < 500; ++k) {
    log_term += 2.0 * log_half_x - std::log(static_cast<double>(k)) -
                std::log(nu + static_cast<double>(k));
    const double hi = std::max(log_sum, log_term);
    log_sum = hi + std::log1p(std::exp(std::min(log_sum, log_term) - hi));
    if (log_term < log_sum - 40.0) break;
  }
  return log_sum;
}

/// Integral of sin^p over [0, pi]: sqrt(pi) Gamma((p+1)/2) / Gamma(p/2 + 1).
inline double sin_power_integral(int p) {
  if (p < 0) throw std::domain_error("sin_power_integral: negative power");
  const double pd = static_cast<double>(p);
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (pd + 1.0)) -
                  std::lgamma(0.5 * pd + 1.0));
}

/// Area fraction of the polar cap {u : u . e >= cos(theta)} of the unit
/// sphere S^{dim-1}, theta in [0, pi]. dim == 1 treats the sphere as the
/// two-point set {+1, -1}.
inline double sphere_cap_fraction(int dim, double theta) {
  if (dim < 1) throw std::domain_error("sphere_cap_fraction: dim must be >= 1");
  if (theta < 0.0 || theta > std::numbers::pi + 1e-12) {
    throw std::domain_error("sphere_cap_fraction: theta outside [0, pi]");
  }
  if (dim == 1) {
    // cos(theta) threshold crosses -1 only at theta == pi.
    if (theta >= std::numbers::pi) return 1.0;
    return 0.5;
  }
  const int p = dim - 2;
  const auto integrand = [p](double phi) {
    return p == 0 ? 1.0 : std::pow(std::sin(phi), p);
  };
  const double numer = adaptive_simpson(integrand, 0.0, theta, 1e-14);
  return numer / sin_power_integral(p);
}

/// Inverse of sphere_cap_fraction in theta, by bisection. For dim == 1 only
/// fractions 0.5 and 1.0 are attainable; anything else is a domain error.
inline double cap_angle_for_fraction(int dim, double fraction) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::domain_error("cap_angle_for_fraction: fraction outside [0,1]");
  }
  if (dim == 1) {
    if (std::fabs(fraction - 0.5) < 1e-12) return 0.5 * std::numbers::pi;
    if (std::fabs(fraction - 1.0) < 1e-12) return std::numbers::pi;
    throw std::domain_error("cap_angle_for_fraction: dim 1 admits fractions 1/2 and 1");
  }
  if (fraction == 0.0) return 0.0;
  if (fraction == 1.0) return std::numbers::pi;
  return bisect(
      [dim, fraction](double theta) {
        return sphere_cap_fraction(dim, theta) - fraction;
      },
      0.0, std::numbers::pi);
}

}  // namespace mepplab
