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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mepplab/rational.hpp"
#include "mepplab/special.hpp"

namespace mepplab {

/// Requested basis dimension exceeds the number of admissible modes.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

/// One real divergence-free Fourier mode on the periodic cube [0,2pi)^3.
/// polarization in 0..3 encodes (transverse axis, phase):
///   bit 0 -> which of the two unit vectors orthogonal to k,
///   bit 1 -> 0: cos(k.x), 1: sin(k.x).
struct BasisMode {
  std::array<int, 3> wavevector{};
  int polarization = 0;
  std::array<double, 3> axis{};  // unit polarization vector, axis . k == 0

  bool is_sine() const { return (polarization & 2) != 0; }
};

/// Ordered orthonormal divergence-free spectral basis; spans the cylinder
/// subspaces used throughout. Immutable after construction.
struct BasisSpec {
  int grid_size = 0;
  int dim = 0;
  std::vector<BasisMode> modes;
  std::string ordering = "ksq-lex-polarization";

  /// Evaluate basis element i at a point of the cube; orthonormal under the
  /// L2 inner product on [0,2pi)^3.
  std::array<double, 3> evaluate(int i, const std::array<double, 3>& x) const {
    const BasisMode& m = modes.at(static_cast<std::size_t>(i));
    const double phase = m.wavevector[0] * x[0] + m.wavevector[1] * x[1] +
                         m.wavevector[2] * x[2];
    const double volume = std::pow(2.0 * std::numbers::pi, 3);
    const double amp = std::sqrt(2.0 / volume) *
                       (m.is_sine() ? std::sin(phase) : std::cos(phase));
    return {amp * m.axis[0], amp * m.axis[1], amp * m.axis[2]};
  }
};

namespace detail {

inline std::array<long long, 3> cross(const std::array<long long, 3>& a,
                                      const std::array<long long, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline std::array<double, 3> normalized(const std::array<long long, 3>& v) {
  const double norm = std::sqrt(static_cast<double>(v[0] * v[0] + v[1] * v[1] +
                                                    v[2] * v[2]));
  return {v[0] / norm, v[1] / norm, v[2] / norm};
}

/// Two unit vectors orthogonal to integer k, built from integer cross
/// products so k . axis is exactly zero in floating point.
inline std::array<std::array<double, 3>, 2> transverse_axes(
    const std::array<int, 3>& k) {
  const std::array<long long, 3> kk = {k[0], k[1], k[2]};
  int pick = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(k[i]) < std::abs(k[pick])) pick = i;
  }
  std::array<long long, 3> axis = {0, 0, 0};
  axis[pick] = 1;
  const auto e1 = cross(kk, axis);
  const auto e2 = cross(kk, e1);
  return {normalized(e1), normalized(e2)};
}

inline bool lexicographically_positive(const std::array<int, 3>& k) {
  if (k[0] != 0) return k[0] > 0;
  if (k[1] != 0) return k[1] > 0;
  return k[2] > 0;
}

}  // namespace detail

/// Number of admissible real modes for a given grid size: four per canonical
/// nonzero wavevector with per-axis wavenumbers up to floor((grid-1)/2).
inline std::int64_t basis_capacity(int grid_size) {
  if (grid_size < 3) throw std::domain_error("basis_capacity: grid_size must be >= 3");
  const int kmax = (grid_size - 1) / 2;
  std::int64_t canonical = 0;
  for (int kx = -kmax; kx <= kmax; ++kx)
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kz = -kmax; kz <= kmax; ++kz) {
        if (detail::lexicographically_positive({kx, ky, kz})) ++canonical;
      }
  return 4 * canonical;
}

/// Build the first `dim` modes in the declared total order: ascending |k|^2,
/// then lexicographic wavevector, polarization index last. Deterministic:
/// identical inputs yield identical mode lists.
inline BasisSpec build_basis(int grid_size, std::int64_t dim) {
  if (grid_size < 3) throw std::domain_error("build_basis: grid_size must be >= 3");
  if (dim < 1) throw std::domain_error("build_basis: dim must be >= 1");
  const std::int64_t capacity = basis_capacity(grid_size);
  if (dim > capacity) {
    throw CapacityError("build_basis: dim " + std::to_string(dim) +
                        " exceeds " + std::to_string(capacity) +
                        " admissible modes for grid_size " +
                        std::to_string(grid_size));
  }

  const int kmax = (grid_size - 1) / 2;
  std::vector<std::array<int, 3>> wavevectors;
  for (int kx = -kmax; kx <= kmax; ++kx)
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kz = -kmax; kz <= kmax; ++kz) {
        if (detail::lexicographically_positive({kx, ky, kz})) {
          wavevectors.push_back({kx, ky, kz});
        }
      }
  std::sort(wavevectors.begin(), wavevectors.end(),
            [](const auto& a, const auto& b) {
              const int na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
              const int nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
              return std::tie(na, a[0], a[1], a[2]) <
                     std::tie(nb, b[0], b[1], b[2]);
            });

  BasisSpec spec;
  spec.grid_size = grid_size;
  spec.dim = static_cast<int>(dim);
  spec.modes.reserve(static_cast<std::size_t>(dim));
  for (const auto& k : wavevectors) {
    const auto axes = detail::transverse_axes(k);
    for (int pol = 0; pol < 4 && std::ssize(spec.modes) < dim; ++pol) {
      spec.modes.push_back({k, pol, axes[static_cast<std::size_t>(pol & 1)]});
    }
    if (std::ssize(spec.modes) == dim) break;
  }
  return spec;
}

/// Gram matrix of the basis by trapezoidal quadrature on a uniform grid
/// (exact for trigonometric polynomials once quad_grid > 2 max|k|).
inline std::vector<std::vector<double>> gram_matrix(const BasisSpec& basis,
                                                    int quad_grid) {
  if (quad_grid < 2) throw std::domain_error("gram_matrix: quad_grid must be >= 2");
  const int n = basis.dim;
  const double h = 2.0 * std::numbers::pi / quad_grid;
  const double cell = h * h * h;
  std::vector<std::vector<double>> gram(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::array<double, 3> x{};
  for (int ix = 0; ix < quad_grid; ++ix) {
    x[0] = ix * h;
    for (int iy = 0; iy < quad_grid; ++iy) {
      x[1] = iy * h;
      for (int iz = 0; iz < quad_grid; ++iz) {
        x[2] = iz * h;
        std::vector<std::array<double, 3>> values(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = basis.evaluate(i, x);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            const auto& a = values[static_cast<std::size_t>(i)];
            const auto& b = values[static_cast<std::size_t>(j)];
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                cell * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
          }
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          gram[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return gram;
}

/// Fixed-time energy surface: the sphere of coefficient vectors with kinetic
/// energy e in an n-dimensional cylinder subspace. radius = sqrt(2e) under an
/// orthonormal basis; e == 0 degenerates to a single point.
struct EnergySurface {
  int dim = 0;
  double energy = 0.0;
  double radius = 0.0;
  double area = 0.0;

  bool degenerate() const { return radius <= 0.0; }
};

inline EnergySurface make_surface(int dim, double energy) {
  if (dim < 1) throw std::domain_error("make_surface: dim must be >= 1");
  if (energy < 0.0) throw std::domain_error("make_surface: negative energy");
  EnergySurface s;
  s.dim = dim;
  s.energy = energy;
  s.radius = std::sqrt(2.0 * energy);
  s.area = s.degenerate() ? 0.0 : sphere_area(dim, s.radius);
  return s;
}

/// Scaling factor carried by a restriction map between cylinder dimensions:
/// to_dim!/from_dim!. Exact rational up to from_dim = 20; log-space real
/// beyond that (documented precision loss).
struct RestrictionFactor {
  bool exact = true;
  Rational value = Rational::one();
  double log_value = 0.0;

  double to_double() const {
    return exact ? value.to_double() : std::exp(log_value);
  }
};

/// Map from the n-dimensional cylinder structure onto the m-dimensional one,
/// m <= n, carrying the m!/n! factor.
struct RestrictionMap {
  int from_dim = 0;
  int to_dim = 0;
  RestrictionFactor factor;
};

inline RestrictionMap restriction_map(int from_dim, int to_dim) {
  if (to_dim < 1 || to_dim > from_dim) {
    throw std::domain_error("restriction_map: need 1 <= to_dim <= from_dim");
  }
  RestrictionMap map;
  map.from_dim = from_dim;
  map.to_dim = to_dim;
  map.factor.log_value = log_factorial(to_dim) - log_factorial(from_dim);
  if (from_dim <= 20) {
    map.factor.exact = true;
    map.factor.value = Rational(factorial_u64(to_dim), factorial_u64(from_dim));
  } else {
    map.factor.exact = false;
  }
  return map;
}

/// Composition: apply `first` (n -> m), then `second` (m -> l), yielding the
/// n -> l map with factor l!/n!.
inline RestrictionMap compose(const RestrictionMap& first,
                              const RestrictionMap& second) {
  if (second.from_dim != first.to_dim) {
    throw std::domain_error("compose: dimension mismatch");
  }
  RestrictionMap map;
  map.from_dim = first.from_dim;
  map.to_dim = second.to_dim;
  map.factor.log_value = first.factor.log_value + second.factor.log_value;
  if (first.factor.exact && second.factor.exact) {
    map.factor.exact = true;
    map.factor.value = first.factor.value * second.factor.value;
  } else {
    map.factor.exact = false;
  }
  return map;
}

}  // namespace mepplab
