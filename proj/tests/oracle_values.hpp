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

// Frozen expected values, computed with the independent quadrature oracle in
// oracles.hpp (generator: make_oracle_values.cpp). The n=3 kappa=1 gap agrees
// with the closed form kappa coth(kappa) - 1 - log(sinh(kappa)/kappa) to
// 2e-13, and the hemisphere mass with (e^2-1)/(e^2-e^-2) to 6e-15.

#pragma once

#include <stdexcept>

namespace oracle {

struct VmfGapValue {
  int dim;
  double kappa;
  double gap;  // KL divergence of vMF(kappa) from uniform, in nats
};

inline constexpr VmfGapValue kVmfGaps[] = {
    {2, 0.5, 0.059700087104921362},
    {2, 1.0, 0.21047560738935567},
    {2, 2.0, 0.57155577444503614},
    {2, 5.0, 1.1622339093979166},
    {3, 0.5, 0.040651852256409438},
    {3, 1.0, 0.15159592392812327},
    {3, 2.0, 0.47940924940088081},
    {3, 5.0, 1.3030845138645581},
    {5, 0.5, 0.024735408543414827},
    {5, 1.0, 0.095915760797216087},
    {5, 2.0, 0.34269928427915497},
    {5, 5.0, 1.2857768449007199},
};

inline double frozen_vmf_gap(int dim, double kappa) {
  for (const auto& v : kVmfGaps) {
    if (v.dim == dim && v.kappa == kappa) return v.gap;
  }
  throw std::out_of_range("frozen_vmf_gap: no frozen value for this (dim, kappa)");
}

/// vMF(kappa=2) mass of the hemisphere around its mode on S^2.
inline constexpr double kVmfHemisphereMass_n3_k2 = 0.88079707797788787;

/// Uniform cap fraction on S^4 at colatitude 1 rad.
inline constexpr double kCapFraction_n5_theta1 = 0.13420542191164389;

/// Chi-square 0.99 quantile for 11 degrees of freedom (12-bin uniformity
/// test at the 1% level); standard table constant.
inline constexpr double kChiSq99Df11 = 24.72497031098184;

}  // namespace oracle
