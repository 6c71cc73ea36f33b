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

#include <cmath>
#include <numbers>

#include "mepplab/config_space.hpp"

using namespace mepplab;

TEST_CASE("smallest admissible basis is the lowest wavevector") {
  const BasisSpec basis = build_basis(3, 1);
  REQUIRE(basis.dim == 1);
  REQUIRE(basis.modes.size() == 1);
  CHECK(basis.modes[0].wavevector == std::array<int, 3>{0, 0, 1});
  CHECK(basis.modes[0].polarization == 0);
}

TEST_CASE("identical inputs build identical mode lists") {
  const BasisSpec a = build_basis(5, 24);
  const BasisSpec b = build_basis(5, 24);
  REQUIRE(a.modes.size() == b.modes.size());
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    CHECK(a.modes[i].wavevector == b.modes[i].wavevector);
    CHECK(a.modes[i].polarization == b.modes[i].polarization);
    CHECK(a.modes[i].axis == b.modes[i].axis);
  }
}

TEST_CASE("every retained mode is exactly divergence-free") {
  const BasisSpec basis = build_basis(5, 48);
  for (const auto& mode : basis.modes) {
    const double dot = mode.wavevector[0] * mode.axis[0] +
                       mode.wavevector[1] * mode.axis[1] +
                       mode.wavevector[2] * mode.axis[2];
    CHECK(dot == 0.0);
  }
}

TEST_CASE("mode ordering is by |k|^2 then lexicographic, polarization last") {
  const BasisSpec basis = build_basis(5, 64);
  for (std::size_t i = 1; i < basis.modes.size(); ++i) {
    const auto& a = basis.modes[i - 1];
    const auto& b = basis.modes[i];
    const auto key = [](const BasisMode& m) {
      const auto& k = m.wavevector;
      return std::make_tuple(k[0] * k[0] + k[1] * k[1] + k[2] * k[2], k[0], k[1],
                             k[2], m.polarization);
    };
    CHECK(key(a) < key(b));
  }
}

TEST_CASE("grid 4 basis of six modes has identity Gram matrix") {
  const BasisSpec basis = build_basis(4, 6);
  REQUIRE(basis.modes.size() == 6);
  const auto gram = gram_matrix(basis, 4);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      CHECK(std::fabs(gram[i][j] - expected) <= 1e-12);
    }
  }
}

TEST_CASE("orthonormality holds out to 64 modes on an adequate grid") {
  const BasisSpec basis = build_basis(5, 64);
  int max_abs_k = 0;
  for (const auto& m : basis.modes) {
    for (int c : m.wavevector) max_abs_k = std::max(max_abs_k, std::abs(c));
  }
  const int quad = 2 * max_abs_k + 1;
  const auto gram = gram_matrix(basis, quad);
  double worst = 0.0;
  for (int i = 0; i < basis.dim; ++i) {
    for (int j = 0; j < basis.dim; ++j) {
      worst = std::max(worst, std::fabs(gram[i][j] - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("requesting more modes than the grid admits is a capacity error") {
  CHECK_THROWS_AS(build_basis(3, 1000000), CapacityError);
  CHECK_THROWS_AS(build_basis(2, 1), std::domain_error);
}

TEST_CASE("energy surfaces carry sqrt(2e) radii and closed-form areas") {
  const EnergySurface s3 = make_surface(3, 0.5);
  CHECK(s3.radius == Approx(1.0).epsilon(1e-15));
  CHECK(s3.area == Approx(4.0 * std::numbers::pi).epsilon(1e-13));

  const EnergySurface s2 = make_surface(2, 0.5);
  CHECK(s2.area == Approx(2.0 * std::numbers::pi).epsilon(1e-13));

  const EnergySurface s1 = make_surface(1, 0.5);
  CHECK(s1.area == 2.0);
}

TEST_CASE("zero energy degenerates; negative energy is a domain error") {
  const EnergySurface s = make_surface(5, 0.0);
  CHECK(s.degenerate());
  CHECK_THROWS_AS(make_surface(3, -0.1), std::domain_error);
  CHECK_THROWS_AS(make_surface(0, 1.0), std::domain_error);
}

TEST_CASE("surface area satisfies the two-dimension recursion") {
  for (double r : {0.7, 1.0, 2.3}) {
    for (int n = 3; n <= 32; ++n) {
      const double expected =
          2.0 * std::numbers::pi * r * r * sphere_area(n - 2, r) / (n - 2);
      CHECK(sphere_area(n, r) == Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("restriction factors are exact rationals") {
  const RestrictionMap m32 = restriction_map(3, 2);
  CHECK(m32.factor.value == Rational(1, 3));

  const RestrictionMap identity = restriction_map(7, 7);
  CHECK(identity.factor.value == Rational::one());

  const RestrictionMap m21 = restriction_map(2, 1);
  const RestrictionMap composed = compose(m32, m21);
  CHECK(composed.from_dim == 3);
  CHECK(composed.to_dim == 1);
  CHECK(composed.factor.value == Rational(1, 6));

  const RestrictionMap chain =
      compose(restriction_map(5, 3), restriction_map(3, 2));
  CHECK(chain.factor.value == Rational(1, 60));
}

TEST_CASE("factor composition is exact for every chain up to dimension 10") {
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= n; ++m) {
      for (int l = 1; l <= m; ++l) {
        const auto lhs = compose(restriction_map(n, m), restriction_map(m, l));
        const auto rhs = restriction_map(n, l);
        CHECK(lhs.factor.value == rhs.factor.value);
      }
    }
  }
}

TEST_CASE("factors beyond dimension 20 switch to log space consistently") {
  const RestrictionMap exact = restriction_map(20, 10);
  CHECK(exact.factor.exact);
  const RestrictionMap big = restriction_map(25, 10);
  CHECK_FALSE(big.factor.exact);
  const double expected = std::lgamma(11.0) - std::lgamma(26.0);
  CHECK(big.factor.log_value == Approx(expected).epsilon(1e-12));

  const auto composed = compose(restriction_map(25, 21), restriction_map(21, 10));
  CHECK_FALSE(composed.factor.exact);
  CHECK(composed.factor.log_value == Approx(expected).epsilon(1e-12));
}

TEST_CASE("invalid restriction dimensions are domain errors") {
  CHECK_THROWS_AS(restriction_map(3, 4), std::domain_error);
  CHECK_THROWS_AS(restriction_map(3, 0), std::domain_error);
}
