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

// Test-side oracles. Deliberately independent of the library: only <cmath>,
// fixed-grid composite Simpson, latitude integrals. Used to compute the
// frozen expected values in oracle_values.hpp (generator:
// make_oracle_values.cpp) and for runtime cross-checks.

#pragma once

#include <cmath>
#include <stdexcept>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Composite Simpson on [a,b] with n subintervals (n even).
template <class F>
double simpson(const F& f, double a, double b, int n = 1 << 14) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

/// Surface measure of the unit sphere in d dimensions.
inline double unit_sphere_area(int d) {
  if (d == 1) return 2.0;
  return 2.0 * std::pow(kPi, 0.5 * d) / std::exp(std::lgamma(0.5 * d));
}

/// Z(d, kappa) = integral of exp(kappa u.e) over the unit sphere S^{d-1}.
inline double vmf_normalizer(int d, double kappa) {
  if (d == 1) return 2.0 * std::cosh(kappa);
  const int p = d - 2;
  const double equator = unit_sphere_area(d - 1);
  return equator * simpson(
                       [kappa, p](double theta) {
                         const double s = std::sin(theta);
                         return std::exp(kappa * std::cos(theta)) *
                                (p == 0 ? 1.0 : std::pow(s, p));
                       },
                       0.0, kPi);
}

/// Mean resultant cos-colatitude of the vMF distribution on S^{d-1}.
inline double vmf_mean_cos(int d, double kappa) {
  if (d == 1) return std::tanh(kappa);
  const int p = d - 2;
  const double equator = unit_sphere_area(d - 1);
  const double num = equator * simpson(
                                   [kappa, p](double theta) {
                                     const double s = std::sin(theta);
                                     return std::cos(theta) *
                                            std::exp(kappa * std::cos(theta)) *
                                            (p == 0 ? 1.0 : std::pow(s, p));
                                   },
                                   0.0, kPi);
  return num / vmf_normalizer(d, kappa);
}

/// KL divergence of vMF(kappa) from the uniform distribution on S^{d-1};
/// equal to the entropy gap log|S| - S(vMF). Radius-independent.
inline double vmf_entropy_gap(int d, double kappa) {
  if (kappa == 0.0) return 0.0;
  return kappa * vmf_mean_cos(d, kappa) - std::log(vmf_normalizer(d, kappa)) +
         std::log(unit_sphere_area(d));
}

/// vMF mass of the polar cap {u.e >= cos(theta_cap)} around the mode.
inline double vmf_cap_mass(int d, double kappa, double theta_cap) {
  if (d == 1) {
    const double z = 2.0 * std::cosh(kappa);
    double mass = std::exp(kappa) / z;                       // +e point
    if (theta_cap >= kPi) mass += std::exp(-kappa) / z;      // -e point
    return mass;
  }
  const int p = d - 2;
  const double equator = unit_sphere_area(d - 1);
  const double num = equator * simpson(
                                   [kappa, p](double theta) {
                                     const double s = std::sin(theta);
                                     return std::exp(kappa * std::cos(theta)) *
                                            (p == 0 ? 1.0 : std::pow(s, p));
                                   },
                                   0.0, theta_cap);
  return num / vmf_normalizer(d, kappa);
}

/// Uniform area fraction of the polar cap with colatitude theta.
inline double uniform_cap_fraction(int d, double theta) {
  if (d == 1) return theta >= kPi ? 1.0 : 0.5;
  const int p = d - 2;
  const auto f = [p](double phi) {
    const double s = std::sin(phi);
    return p == 0 ? 1.0 : std::pow(s, p);
  };
  return simpson(f, 0.0, theta) / simpson(f, 0.0, kPi);
}

}  // namespace oracle
