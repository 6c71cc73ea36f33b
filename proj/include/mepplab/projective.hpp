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
#include <stdexcept>
#include <string>

#include "mepplab/config_space.hpp"
#include "mepplab/measures.hpp"
#include "mepplab/special.hpp"
#include "mepplab/stats.hpp"

namespace mepplab {

/// Result of checking one restriction chain l <= m <= n: the factor algebra
/// exactly, and the measure consistency on matched test sets by sampling.
struct ChainConsistencyReport {
  int dim_l = 0, dim_m = 0, dim_n = 0;
  double energy = 0.0;

  // factor(l<-m) * factor(m<-n) == factor(l<-n), exact rational arithmetic
  std::string factor_lm, factor_mn, factor_ln, factor_composed;
  bool exact_pass = false;

  // Caps of equal distinguishable Lebesgue measure per dimension; the
  // indistinguishable measures of corresponding sets must agree after the
  // factorial scalings. Route values are mu_dim(A_dim) = estimate/dim!.
  double cap_measure_target = 0.0;
  McEstimate cap_l, cap_m, cap_n;  // distinguishable Lebesgue estimates
  double route_n = 0.0;            // mu_n(A_n)
  double route_m_mapped = 0.0;     // (m!/n!) mu_m(A_m)
  double route_l_mapped = 0.0;     // (l!/n!) mu_l(A_l)
  double max_route_deviation = 0.0;
  double allowed_deviation = 0.0;  // 3 combined SE, scaled
  bool sampled_pass = false;

  bool pass = false;
};

namespace detail {

/// Polar cap about the first coordinate axis whose distinguishable surface
/// measure equals `target_mass`, as an indicator on the radius-r sphere.
inline PointPredicate cap_indicator(int dim, double radius, double target_mass) {
  const double area = sphere_area(dim, radius);
  const double fraction = target_mass / area;
  if (fraction <= 0.0 || fraction > 1.0) {
    throw std::domain_error("cap_indicator: target mass exceeds surface area");
  }
  const double theta = cap_angle_for_fraction(dim, fraction);
  const double cos_threshold = std::cos(theta);
  return [cos_threshold, radius](std::span<const double> x) {
    return x[0] >= cos_threshold * radius - 1e-15;
  };
}

}  // namespace detail

/// Check the projective consistency of a chain of cylinder dimensions
/// l <= m <= n at a common energy. The factor composition is exact (zero
/// tolerance); the measure consistency compares Monte Carlo estimates of
/// matched-measure caps through the factorial scalings within 3 combined SE.
inline ChainConsistencyReport verify_projective_consistency(
    int l, int m, int n, double energy = 0.5, std::int64_t count = 100000,
    std::uint64_t seed = 1) {
  if (!(1 <= l && l <= m && m <= n)) {
    throw std::domain_error("verify_projective_consistency: need 1 <= l <= m <= n");
  }
  if (!(energy > 0.0)) {
    throw std::domain_error("verify_projective_consistency: energy must be > 0");
  }

  ChainConsistencyReport report;
  report.dim_l = l;
  report.dim_m = m;
  report.dim_n = n;
  report.energy = energy;

  const RestrictionMap map_lm = restriction_map(m, l);
  const RestrictionMap map_mn = restriction_map(n, m);
  const RestrictionMap map_ln = restriction_map(n, l);
  const RestrictionMap composed = compose(map_mn, map_lm);
  report.factor_lm = map_lm.factor.value.to_string();
  report.factor_mn = map_mn.factor.value.to_string();
  report.factor_ln = map_ln.factor.value.to_string();
  report.factor_composed = composed.factor.value.to_string();
  report.exact_pass = map_lm.factor.exact && map_mn.factor.exact &&
                      composed.factor.value == map_ln.factor.value;

  // Matched test sets: caps with the same absolute distinguishable measure
  // in every dimension of the chain. On the two-point surface (dim 1) only
  // measure-1 sets exist, which also fits every higher dimension at e ~ 0.5.
  const EnergySurface surf_l = make_surface(l, energy);
  const EnergySurface surf_m = make_surface(m, energy);
  const EnergySurface surf_n = make_surface(n, energy);
  double target = 1.0;
  if (l > 1) {
    target = 0.45 * std::min({surf_l.area, surf_m.area, surf_n.area});
  } else if (std::min({surf_l.area, surf_m.area, surf_n.area}) < 1.0) {
    throw std::domain_error(
        "verify_projective_consistency: energy too small for a dim-1 chain");
  }
  report.cap_measure_target = target;

  const auto estimate_cap = [&](const EnergySurface& surf, std::uint64_t stream) {
    const auto lebesgue = reference_measure(surf, /*indistinguishable=*/false);
    return measure_of_set(*lebesgue, detail::cap_indicator(surf.dim, surf.radius, target),
                          count, seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  };
  report.cap_l = estimate_cap(surf_l, 0);
  report.cap_m = estimate_cap(surf_m, 1);
  report.cap_n = estimate_cap(surf_n, 2);

  // Indistinguishable route values; all should equal target/n!.
  const double inv_nfac = std::exp(-log_factorial(n));
  report.route_n = report.cap_n.value * inv_nfac;
  report.route_m_mapped =
      map_mn.factor.to_double() * report.cap_m.value * std::exp(-log_factorial(m));
  report.route_l_mapped =
      map_ln.factor.to_double() * report.cap_l.value * std::exp(-log_factorial(l));

  const double se_n = report.cap_n.std_error * inv_nfac;
  const double se_m = report.cap_m.std_error * map_mn.factor.to_double() *
                      std::exp(-log_factorial(m));
  const double se_l = report.cap_l.std_error * map_ln.factor.to_double() *
                      std::exp(-log_factorial(l));
  const double dev_mn = std::fabs(report.route_n - report.route_m_mapped);
  const double dev_ln = std::fabs(report.route_n - report.route_l_mapped);
  report.max_route_deviation = std::max(dev_mn, dev_ln);
  const double allowed_mn = 3.0 * std::hypot(se_n, se_m);
  const double allowed_ln = 3.0 * std::hypot(se_n, se_l);
  report.allowed_deviation = std::max(allowed_mn, allowed_ln);
  report.sampled_pass = dev_mn <= allowed_mn + 1e-15 && dev_ln <= allowed_ln + 1e-15;

  report.pass = report.exact_pass && report.sampled_pass;
  return report;
}

}  // namespace mepplab
