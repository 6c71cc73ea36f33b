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
#include <sstream>

#include "mepplab/flow.hpp"

using namespace mepplab;

TEST_CASE("single shear mode decays at the exact viscous rate") {
  const double nu = 0.1;
  const double dt = 0.05;
  flow::FlowParams params;
  params.viscosity = nu;
  params.dt = dt;
  params.t_end = 100.0 * dt;

  flow::SpectralState state = flow::single_mode_state(16, {0, 0, 1}, 0, 1.0);
  const double e0 = flow::energy(state);
  REQUIRE(e0 == Approx(0.5).epsilon(1e-12));
  for (int i = 0; i < 100; ++i) state = flow::step(state, params);

  const double expected = e0 * std::exp(-2.0 * nu * state.time);
  CHECK(state.time == Approx(100 * dt).epsilon(1e-12));
  CHECK(std::fabs(flow::energy(state) - expected) / expected <= 1e-8);
}

TEST_CASE("sine-phase single mode decays identically") {
  const double nu = 0.2;
  flow::FlowParams params;
  params.viscosity = nu;
  params.dt = 0.02;
  params.t_end = 1.0;
  flow::SpectralState state = flow::single_mode_state(16, {1, 1, 0}, 2, 0.7);
  const double e0 = flow::energy(state);
  for (int i = 0; i < 50; ++i) state = flow::step(state, params);
  const double expected = e0 * std::exp(-2.0 * nu * 2.0 * state.time);  // |k|^2 = 2
  CHECK(std::fabs(flow::energy(state) - expected) / expected <= 1e-8);
}

TEST_CASE("inviscid Taylor-Green energy drifts below 1e-10 over 200 steps") {
  flow::FlowParams params;
  params.viscosity = 0.0;
  params.dt = 1e-3;
  params.t_end = 1.0;
  flow::SpectralState state = flow::taylor_green_state(16, 1.0);
  const double e0 = flow::energy(state);
  for (int i = 0; i < 200; ++i) state = flow::step(state, params);
  CHECK(std::fabs(flow::energy(state) - e0) / e0 <= 1e-10);
}

TEST_CASE("zero state is a fixed point") {
  flow::FlowParams params;
  params.viscosity = 0.05;
  params.dt = 0.1;
  params.t_end = 1.0;
  flow::SpectralState state = flow::zero_state(16);
  state = flow::step(state, params);
  CHECK(flow::energy(state) == 0.0);
}

TEST_CASE("state invariants hold after stepping") {
  flow::FlowParams params;
  params.viscosity = 0.01;
  params.dt = 5e-3;
  params.t_end = 1.0;
  flow::SpectralState state = flow::random_solenoidal_state(16, 99, 0.5);
  for (int i = 0; i < 10; ++i) state = flow::step(state, params);
  CHECK(flow::divergence_residual(state) <= 1e-12);
  CHECK(flow::reality_residual(state) <= 1e-12);
}

TEST_CASE("spectral energy equals grid quadrature by Parseval") {
  const flow::SpectralState state = flow::random_solenoidal_state(16, 123, 0.5);
  const double spectral = flow::energy(state);
  const double physical = flow::energy_physical(state);
  CHECK(std::fabs(spectral - physical) <= 1e-10 * std::max(1.0, spectral));

  CHECK(flow::energy(flow::zero_state(16)) == 0.0);
  CHECK(flow::energy(flow::single_mode_state(16, {0, 1, 0}, 1, 1.0)) ==
        Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dissipation closed forms") {
  const flow::SpectralState state = flow::single_mode_state(16, {0, 0, 1}, 0, 1.0);
  CHECK(flow::dissipation(state, 0.0) == 0.0);
  CHECK(flow::dissipation(state, 0.1) == Approx(0.1).epsilon(1e-12));
}

TEST_CASE("energy budget closes along a viscous Taylor-Green trajectory") {
  flow::FlowParams params;
  params.viscosity = 0.05;
  params.dt = 2e-3;
  params.t_end = 1.0;
  const flow::SpectralState initial = flow::taylor_green_state(16, 1.0);
  std::vector<double> times;
  for (int i = 0; i <= 500; ++i) times.push_back(i * 2e-3);
  const flow::Trajectory traj = flow::trajectory(initial, params, times, 6);

  // Simpson integral of the dissipation series (uniform grid, even count).
  const std::size_t m = traj.samples.size();
  REQUIRE(m == 501);
  double integral = traj.samples.front().dissipation + traj.samples.back().dissipation;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    integral += traj.samples[i].dissipation * (i % 2 == 1 ? 4.0 : 2.0);
  }
  integral *= 2e-3 / 3.0;

  const double e0 = traj.samples.front().energy;
  const double delta = traj.samples.back().energy - e0;
  CHECK(std::fabs(delta + integral) <= 1e-6 * e0);
}

TEST_CASE("step halving shows at least 3.7th-order convergence") {
  const double nu = 0.15;
  const double t_end = 1.0;
  const auto final_energy_error = [&](double dt) {
    flow::FlowParams params;
    params.viscosity = nu;
    params.dt = dt;
    params.t_end = t_end;
    flow::SpectralState state = flow::single_mode_state(16, {0, 0, 1}, 0, 1.0);
    const double e0 = flow::energy(state);
    const int steps = static_cast<int>(std::round(t_end / dt));
    for (int i = 0; i < steps; ++i) state = flow::step(state, params);
    return std::fabs(flow::energy(state) - e0 * std::exp(-2.0 * nu * t_end));
  };
  const double coarse = final_energy_error(0.2);
  const double fine = final_energy_error(0.1);
  REQUIRE(fine > 0.0);
  const double order = std::log2(coarse / fine);
  CHECK(order >= 3.7);
}

TEST_CASE("viscous trajectories have strictly decreasing energy") {
  flow::FlowParams params;
  params.viscosity = 0.08;
  params.dt = 0.01;
  params.t_end = 0.5;
  const flow::SpectralState initial = flow::taylor_green_state(16, 1.0);
  const flow::Trajectory traj =
      flow::trajectory(initial, params, {0.1, 0.2, 0.3, 0.4, 0.5}, 6);
  REQUIRE(traj.samples.size() == 5);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].energy < traj.samples[i - 1].energy);
    CHECK(traj.samples[i].surface.dim == 6);
    CHECK(traj.samples[i].surface.radius ==
          Approx(std::sqrt(2.0 * traj.samples[i].energy)).epsilon(1e-12));
  }
}

TEST_CASE("inviscid trajectories conserve sampled energies") {
  flow::FlowParams params;
  params.viscosity = 0.0;
  params.dt = 2e-3;
  params.t_end = 0.2;
  const flow::SpectralState initial = flow::taylor_green_state(16, 1.0);
  const flow::Trajectory traj =
      flow::trajectory(initial, params, {0.05, 0.1, 0.15, 0.2}, 4);
  const double e0 = traj.samples.front().energy;
  for (const auto& s : traj.samples) {
    CHECK(std::fabs(s.energy - e0) <= 1e-10 * e0);
  }
}

TEST_CASE("empty sample times yield an empty trajectory") {
  flow::FlowParams params;
  params.viscosity = 0.1;
  params.dt = 0.01;
  params.t_end = 1.0;
  const flow::Trajectory traj =
      flow::trajectory(flow::taylor_green_state(16, 1.0), params, {}, 6);
  CHECK(traj.samples.empty());
}

TEST_CASE("CFL violations reject the step and report the admissible dt") {
  flow::FlowParams params;
  params.viscosity = 0.0;
  params.dt = 10.0;  // far beyond the CFL bound for an order-one velocity
  params.t_end = 20.0;
  const flow::SpectralState state = flow::taylor_green_state(16, 1.0);
  try {
    flow::step(state, params);
    FAIL("expected StepRejected");
  } catch (const flow::StepRejected& err) {
    CHECK(err.admissible_dt > 0.0);
    CHECK(err.admissible_dt < params.dt);
    CHECK(err.admissible_dt ==
          Approx(flow::admissible_dt(state, params)).epsilon(1e-9));
  }
}

TEST_CASE("trajectory CSV and coefficient round trips") {
  flow::FlowParams params;
  params.viscosity = 0.05;
  params.dt = 0.01;
  params.t_end = 0.1;
  const flow::SpectralState initial = flow::single_mode_state(16, {0, 0, 1}, 0, 1.0);
  const flow::Trajectory traj =
      flow::trajectory(initial, params, {0.05, 0.1}, 3, /*keep_states=*/true);

  std::ostringstream csv;
  flow::write_trajectory_csv(csv, traj);
  const std::string text = csv.str();
  CHECK(text.rfind("time,energy,dissipation\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  std::ostringstream coeffs;
  flow::write_coefficients_csv(coeffs, initial);
  std::istringstream in(coeffs.str());
  const flow::SpectralState reloaded = flow::state_from_coefficients_csv(in, 16);
  CHECK(flow::energy(reloaded) == Approx(flow::energy(initial)).epsilon(1e-12));
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t s = 0; s < initial.site_count(); ++s) {
      worst = std::max(worst, std::abs(initial.u_hat[c][s] - reloaded.u_hat[c][s]));
    }
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("parameter validation rejects unsupported settings") {
  flow::FlowParams params;
  params.dt = -1.0;
  CHECK_THROWS_AS(params.validate(), std::domain_error);
  params.dt = 0.01;
  params.dealiasing = "none";
  CHECK_THROWS_AS(params.validate(), std::domain_error);
  CHECK_THROWS_AS(flow::zero_state(15), std::domain_error);
  CHECK_THROWS_AS(flow::single_mode_state(16, {0, 0, 6}, 0, 1.0), std::domain_error);
}
