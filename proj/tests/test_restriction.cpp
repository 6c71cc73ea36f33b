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

#include "mepplab/restriction.hpp"

using namespace mepplab;

TEST_CASE("ball integrals of constants recover volumes") {
  const BallIntegrand one = functional_by_name("one");
  const McEstimate b3 = ball_integral(one, 3, 1.0, 50000, 3);
  CHECK(b3.value == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-12));
  CHECK(b3.std_error <= 1e-12);  // constant integrand

  const McEstimate b1 = ball_integral(one, 1, 2.0, 20000, 4);
  CHECK(b1.value == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ball integral of |x|^2 on the unit disk is pi/2") {
  const BallIntegrand norm2 = functional_by_name("norm2");
  const McEstimate b = ball_integral(norm2, 2, 1.0, 400000, 5);
  CHECK(std::fabs(b.value - 0.5 * std::numbers::pi) <= 3.0 * b.std_error);
}

TEST_CASE("surface restriction of the constant functional gives the area") {
  const BallIntegrand one = functional_by_name("one");
  const McEstimate r3 = surface_restrict(one, 3, 0.5, 100000, 7);
  CHECK(std::fabs(r3.value - 4.0 * std::numbers::pi) <=
        std::max(3.0 * r3.std_error, 1e-3 * 4.0 * std::numbers::pi));

  // One dimension: the ball integral is 2 rho, derivative exactly 2.
  const McEstimate r1 = surface_restrict(one, 1, 0.37, 1000, 8);
  CHECK(r1.value == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("surface restriction of |x|^2 matches the radial closed form") {
  const BallIntegrand norm2 = functional_by_name("norm2");
  const McEstimate r = surface_restrict(norm2, 3, 0.5, 400000, 9);
  CHECK(std::fabs(r.value - 4.0 * std::numbers::pi) <=
        std::max(3.0 * r.std_error, 1e-3 * 4.0 * std::numbers::pi));
}

TEST_CASE("surface integral oracle handles symmetry cases") {
  const McEstimate total =
      surface_integral_oracle(functional_by_name("one"), 3, 0.5, 10000, 11);
  CHECK(total.value == Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(total.std_error <= 1e-12);

  const McEstimate odd =
      surface_integral_oracle(functional_by_name("x1odd"), 3, 0.5, 200000, 12);
  CHECK(std::fabs(odd.value) <= 3.0 * odd.std_error);

  const McEstimate x1sq =
      surface_integral_oracle(functional_by_name("x1sq"), 3, 0.5, 400000, 13);
  CHECK(std::fabs(x1sq.value - 4.0 * std::numbers::pi / 3.0) <=
        3.0 * x1sq.std_error);
}

TEST_CASE("restriction identity holds for all test functionals and dimensions") {
  const double energy = 0.5;
  const double radius = std::sqrt(2.0 * energy);
  int stream = 0;
  for (const char* name : {"one", "norm2", "x1sq", "exp-x1"}) {
    for (int dim : {1, 2, 3, 5, 6}) {
      const BallIntegrand fn = functional_by_name(name, radius);
      const McEstimate restricted =
          surface_restrict(fn, dim, energy, 200000, 100 + stream);
      const McEstimate oracle =
          surface_integral_oracle(fn, dim, energy, 200000, 200 + stream);
      ++stream;
      const double tolerance =
          std::max(3.0 * std::hypot(restricted.std_error, oracle.std_error),
                   1e-3 * std::fabs(oracle.value));
      INFO(name << " dim " << dim);
      CHECK(std::fabs(restricted.value - oracle.value) <= tolerance);
    }
  }
}

TEST_CASE("finite differences converge at better than second order") {
  // exp(x1/r) has nonvanishing higher radial derivatives; with common random
  // numbers the Richardson-extrapolated stencil shows its full order.
  const double energy = 0.5;
  const double radius = std::sqrt(2.0 * energy);
  const BallIntegrand fn = functional_by_name("exp-x1", radius);
  const std::uint64_t seed = 4242;
  const double d_h = surface_restrict(fn, 3, energy, 200000, seed, 4e-2).value;
  const double d_h2 = surface_restrict(fn, 3, energy, 200000, seed, 2e-2).value;
  const double d_h4 = surface_restrict(fn, 3, energy, 200000, seed, 1e-2).value;
  const double coarse = std::fabs(d_h - d_h2);
  const double fine = std::fabs(d_h2 - d_h4);
  REQUIRE(fine > 0.0);
  const double order = std::log2(coarse / fine);
  CHECK(order >= 2.0);

  // Halving h changes the estimate by less than the coarse FD error term.
  CHECK(fine <= coarse);
}

TEST_CASE("degenerate energy yields the sentinel and bad input throws") {
  const BallIntegrand one = functional_by_name("one");
  const McEstimate sentinel = surface_restrict(one, 3, 0.0, 100, 1);
  CHECK(sentinel.samples == 0);
  CHECK_THROWS_AS(surface_restrict(one, 3, -1.0, 100, 1), std::domain_error);
  CHECK_THROWS_AS(ball_integral(one, 3, 0.0, 100, 1), std::domain_error);
  CHECK_THROWS_AS(functional_by_name("nope"), std::invalid_argument);
}
