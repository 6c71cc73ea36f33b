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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mepplab/config_space.hpp"
#include "mepplab/rng.hpp"

namespace mepplab::flow {

using Cplx = std::complex<double>;

/// Periodic cube side and volume; the box is [0, 2pi)^3 so wavenumbers are
/// integers.
inline constexpr double kBoxLength = 2.0 * std::numbers::pi;
inline const double kBoxVolume = kBoxLength * kBoxLength * kBoxLength;

// ---------------------------------------------------------------------------
// Radix-2 complex FFT
// ---------------------------------------------------------------------------

/// Iterative in-place radix-2 FFT for power-of-two sizes. Forward transform
/// normalizes by 1/n, so spectral values are mode amplitudes.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) {
      throw std::domain_error("Fft: size must be a power of two >= 2");
    }
    log2n_ = 0;
    while ((1 << log2n_) < n) ++log2n_;
    bitrev_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n_; ++b) r |= ((i >> b) & 1) << (log2n_ - 1 - b);
      bitrev_[static_cast<std::size_t>(i)] = r;
    }
    roots_.resize(static_cast<std::size_t>(n / 2));
    for (int j = 0; j < n / 2; ++j) {
      const double angle = -2.0 * std::numbers::pi * j / n;
      roots_[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
    }
  }

  int size() const { return n_; }

  void transform(Cplx* data, bool inverse) const {
    for (int i = 0; i < n_; ++i) {
      const int r = bitrev_[static_cast<std::size_t>(i)];
      if (i < r) std::swap(data[i], data[r]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
      const int half = len >> 1;
      const int step = n_ / len;
      for (int start = 0; start < n_; start += len) {
        for (int j = 0; j < half; ++j) {
          Cplx w = roots_[static_cast<std::size_t>(j * step)];
          if (inverse) w = std::conj(w);
          const Cplx odd = data[start + half + j] * w;
          const Cplx even = data[start + j];
          data[start + j] = even + odd;
          data[start + half + j] = even - odd;
        }
      }
    }
    if (!inverse) {
      const double inv = 1.0 / n_;
      for (int i = 0; i < n_; ++i) data[i] *= inv;
    }
  }

 private:
  int n_;
  int log2n_;
  std::vector<int> bitrev_;
  std::vector<Cplx> roots_;
};

// ---------------------------------------------------------------------------
// Spectral state
// ---------------------------------------------------------------------------

/// Spectral velocity field on an N^3 grid: complex amplitudes per mode and
/// component, divergence-free and Hermitian (real field) by construction.
struct SpectralState {
  int grid_size = 0;
  double time = 0.0;
  std::array<std::vector<Cplx>, 3> u_hat;

  std::size_t site_count() const {
    const auto n = static_cast<std::size_t>(grid_size);
    return n * n * n;
  }
};

/// Integer wavenumber for a grid index.
inline int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }

inline std::size_t site(int i, int j, int k, int n) {
  return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(j)) * static_cast<std::size_t>(n) +
         static_cast<std::size_t>(k);
}

/// Largest retained wavenumber under the two-thirds rule.
inline int dealias_limit(int grid_size) { return grid_size / 3; }

struct FlowParams {
  double viscosity = 0.0;  // constant; spatially varying viscosity is out of scope
  double dt = 1e-2;
  double t_end = 1.0;
  std::string dealiasing = "two-thirds";
  double cfl = 0.5;

  void validate() const {
    if (!(dt > 0.0)) throw std::domain_error("FlowParams: dt must be > 0");
    if (!(t_end > 0.0)) throw std::domain_error("FlowParams: t_end must be > 0");
    if (viscosity < 0.0) throw std::domain_error("FlowParams: negative viscosity");
    if (dealiasing != "two-thirds") {
      throw std::domain_error("FlowParams: only two-thirds dealiasing is supported");
    }
    if (!(cfl > 0.0)) throw std::domain_error("FlowParams: cfl must be > 0");
  }
};

/// Time step exceeds the CFL-admissible step; carries the admissible dt.
struct StepRejected : std::runtime_error {
  double admissible_dt;
  explicit StepRejected(double adm)
      : std::runtime_error("step rejected by CFL check; admissible dt = " +
                           std::to_string(adm)),
        admissible_dt(adm) {}
};

namespace detail {

inline void fft3(std::vector<Cplx>& a, int n, bool inverse) {
  const Fft plan(n);
  std::vector<Cplx> line(static_cast<std::size_t>(n));
  // z axis: contiguous lines
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) plan.transform(&a[site(i, j, 0, n)], inverse);
  // y axis
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) line[static_cast<std::size_t>(j)] = a[site(i, j, k, n)];
      plan.transform(line.data(), inverse);
      for (int j = 0; j < n; ++j) a[site(i, j, k, n)] = line[static_cast<std::size_t>(j)];
    }
  // x axis
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = a[site(i, j, k, n)];
      plan.transform(line.data(), inverse);
      for (int i = 0; i < n; ++i) a[site(i, j, k, n)] = line[static_cast<std::size_t>(i)];
    }
}

inline void apply_dealias_mask(std::array<std::vector<Cplx>, 3>& u_hat, int n) {
  const int kc = dealias_limit(n);
  for (int i = 0; i < n; ++i) {
    const int kx = wavenumber(i, n);
    for (int j = 0; j < n; ++j) {
      const int ky = wavenumber(j, n);
      for (int k = 0; k < n; ++k) {
        const int kz = wavenumber(k, n);
        const bool keep = std::abs(kx) <= kc && std::abs(ky) <= kc &&
                          std::abs(kz) <= kc &&
                          2 * std::abs(kx) < n && 2 * std::abs(ky) < n &&
                          2 * std::abs(kz) < n;
        if (!keep) {
          const std::size_t s = site(i, j, k, n);
          u_hat[0][s] = u_hat[1][s] = u_hat[2][s] = 0.0;
        }
      }
    }
  }
}

/// Divergence-free (Leray) projection, diagonal in Fourier space:
/// u_hat -= k (k . u_hat) / |k|^2. The k = 0 mode is left untouched.
inline void apply_projection(std::array<std::vector<Cplx>, 3>& u_hat, int n) {
  for (int i = 0; i < n; ++i) {
    const int kx = wavenumber(i, n);
    for (int j = 0; j < n; ++j) {
      const int ky = wavenumber(j, n);
      for (int k = 0; k < n; ++k) {
        const int kz = wavenumber(k, n);
        const int k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0) continue;
        const std::size_t s = site(i, j, k, n);
        const Cplx kd = (static_cast<double>(kx) * u_hat[0][s] +
                         static_cast<double>(ky) * u_hat[1][s] +
                         static_cast<double>(kz) * u_hat[2][s]) /
                        static_cast<double>(k2);
        u_hat[0][s] -= static_cast<double>(kx) * kd;
        u_hat[1][s] -= static_cast<double>(ky) * kd;
        u_hat[2][s] -= static_cast<double>(kz) * kd;
      }
    }
  }
}

/// Enforce u_hat(-k) = conj(u_hat(k)) exactly (the field is real).
inline void apply_reality(std::array<std::vector<Cplx>, 3>& u_hat, int n) {
  for (int i = 0; i < n; ++i) {
    const int ip = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      const int jp = (n - j) % n;
      for (int k = 0; k < n; ++k) {
        const int kp = (n - k) % n;
        const std::size_t s = site(i, j, k, n);
        const std::size_t sp = site(ip, jp, kp, n);
        if (s > sp) continue;
        for (auto& comp : u_hat) {
          if (s == sp) {
            comp[s] = Cplx(comp[s].real(), 0.0);
          } else {
            const Cplx avg = 0.5 * (comp[s] + std::conj(comp[sp]));
            comp[s] = avg;
            comp[sp] = std::conj(avg);
          }
        }
      }
    }
  }
}

struct RhsResult {
  std::array<std::vector<Cplx>, 3> value;
  double max_speed = 0.0;
};

/// Right-hand side of the projected momentum equation in rotational form:
/// d u_hat/dt = P[(u x omega)^] - nu |k|^2 u_hat, nonlinear term evaluated
/// pseudo-spectrally with two-thirds dealiasing.
inline RhsResult eval_rhs(const SpectralState& state, double viscosity) {
  const int n = state.grid_size;
  const std::size_t sites = state.site_count();

  // vorticity in spectral space: omega_hat = i k x u_hat
  std::array<std::vector<Cplx>, 3> w_hat;
  for (auto& c : w_hat) c.assign(sites, 0.0);
  for (int i = 0; i < n; ++i) {
    const double kx = wavenumber(i, n);
    for (int j = 0; j < n; ++j) {
      const double ky = wavenumber(j, n);
      for (int k = 0; k < n; ++k) {
        const double kz = wavenumber(k, n);
        const std::size_t s = site(i, j, k, n);
        const Cplx ux = state.u_hat[0][s];
        const Cplx uy = state.u_hat[1][s];
        const Cplx uz = state.u_hat[2][s];
        const Cplx iunit(0.0, 1.0);
        w_hat[0][s] = iunit * (ky * uz - kz * uy);
        w_hat[1][s] = iunit * (kz * ux - kx * uz);
        w_hat[2][s] = iunit * (kx * uy - ky * ux);
      }
    }
  }

  std::array<std::vector<Cplx>, 3> u_phys = state.u_hat;
  for (auto& c : u_phys) fft3(c, n, /*inverse=*/true);
  for (auto& c : w_hat) fft3(c, n, /*inverse=*/true);

  double max_speed2 = 0.0;
  std::array<std::vector<Cplx>, 3> s_hat;
  for (auto& c : s_hat) c.assign(sites, 0.0);
  for (std::size_t s = 0; s < sites; ++s) {
    const double ux = u_phys[0][s].real();
    const double uy = u_phys[1][s].real();
    const double uz = u_phys[2][s].real();
    const double wx = w_hat[0][s].real();
    const double wy = w_hat[1][s].real();
    const double wz = w_hat[2][s].real();
    s_hat[0][s] = uy * wz - uz * wy;
    s_hat[1][s] = uz * wx - ux * wz;
    s_hat[2][s] = ux * wy - uy * wx;
    max_speed2 = std::max(max_speed2, ux * ux + uy * uy + uz * uz);
  }
  for (auto& c : s_hat) fft3(c, n, /*inverse=*/false);
  apply_dealias_mask(s_hat, n);
  apply_projection(s_hat, n);
  apply_reality(s_hat, n);

  RhsResult out;
  out.max_speed = std::sqrt(max_speed2);
  out.value = std::move(s_hat);
  if (viscosity > 0.0) {
    for (int i = 0; i < n; ++i) {
      const int kx = wavenumber(i, n);
      for (int j = 0; j < n; ++j) {
        const int ky = wavenumber(j, n);
        for (int k = 0; k < n; ++k) {
          const int kz = wavenumber(k, n);
          const double k2 = kx * kx + ky * ky + kz * kz;
          const std::size_t s = site(i, j, k, n);
          for (int c = 0; c < 3; ++c) {
            out.value[static_cast<std::size_t>(c)][s] -=
                viscosity * k2 * state.u_hat[static_cast<std::size_t>(c)][s];
          }
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Largest CFL-admissible time step for the current state.
inline double admissible_dt(const SpectralState& state, const FlowParams& params) {
  auto u_phys = state.u_hat;
  for (auto& c : u_phys) detail::fft3(c, state.grid_size, true);
  double max_speed2 = 0.0;
  for (std::size_t s = 0; s < state.site_count(); ++s) {
    const double ux = u_phys[0][s].real();
    const double uy = u_phys[1][s].real();
    const double uz = u_phys[2][s].real();
    max_speed2 = std::max(max_speed2, ux * ux + uy * uy + uz * uz);
  }
  const double max_speed = std::sqrt(max_speed2);
  if (max_speed == 0.0) return std::numeric_limits<double>::infinity();
  const double dx = kBoxLength / state.grid_size;
  return params.cfl * dx / max_speed;
}

/// One explicit fourth-order (classical RK4) update. Rejects the step when
/// it violates the CFL bound, carrying the admissible dt.
inline SpectralState step(const SpectralState& state, const FlowParams& params) {
  params.validate();
  const int n = state.grid_size;
  const double dt = params.dt;

  const auto k1 = detail::eval_rhs(state, params.viscosity);
  if (k1.max_speed > 0.0) {
    const double dx = kBoxLength / n;
    const double adm = params.cfl * dx / k1.max_speed;
    if (dt > adm * (1.0 + 1e-12)) throw StepRejected(adm);
  }

  const auto advanced = [&](const SpectralState& base, double scale,
                            const detail::RhsResult& slope) {
    SpectralState next = base;
    for (int c = 0; c < 3; ++c) {
      auto& dst = next.u_hat[static_cast<std::size_t>(c)];
      const auto& src = slope.value[static_cast<std::size_t>(c)];
      for (std::size_t s = 0; s < dst.size(); ++s) dst[s] += scale * src[s];
    }
    return next;
  };

  const auto k2 = detail::eval_rhs(advanced(state, 0.5 * dt, k1), params.viscosity);
  const auto k3 = detail::eval_rhs(advanced(state, 0.5 * dt, k2), params.viscosity);
  SpectralState mid = advanced(state, dt, k3);
  mid.time = state.time + dt;
  const auto k4 = detail::eval_rhs(mid, params.viscosity);

  SpectralState next = state;
  next.time = state.time + dt;
  for (int c = 0; c < 3; ++c) {
    auto& dst = next.u_hat[static_cast<std::size_t>(c)];
    for (std::size_t s = 0; s < dst.size(); ++s) {
      dst[s] += dt / 6.0 *
                (k1.value[static_cast<std::size_t>(c)][s] +
                 2.0 * k2.value[static_cast<std::size_t>(c)][s] +
                 2.0 * k3.value[static_cast<std::size_t>(c)][s] +
                 k4.value[static_cast<std::size_t>(c)][s]);
    }
  }
  detail::apply_reality(next.u_hat, n);
  return next;
}

/// Kinetic energy from Parseval: e = (V/2) Sum |u_hat|^2, equal to the
/// physical-space integral of u^2/2 over the box.
inline double energy(const SpectralState& state) {
  double sum = 0.0;
  for (const auto& c : state.u_hat) {
    for (const Cplx& v : c) sum += std::norm(v);
  }
  return 0.5 * kBoxVolume * sum;
}

/// Grid-quadrature route to the same energy, for Parseval cross-checks.
inline double energy_physical(const SpectralState& state) {
  auto u_phys = state.u_hat;
  for (auto& c : u_phys) detail::fft3(c, state.grid_size, true);
  double sum = 0.0;
  for (const auto& c : u_phys) {
    for (const Cplx& v : c) sum += v.real() * v.real();
  }
  const double cell = std::pow(kBoxLength / state.grid_size, 3);
  return 0.5 * cell * sum;
}

/// Viscous dissipation rate: nu V Sum |k|^2 |u_hat|^2 = -dE/dt along exact
/// trajectories.
inline double dissipation(const SpectralState& state, double viscosity) {
  if (viscosity == 0.0) return 0.0;
  const int n = state.grid_size;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int kx = wavenumber(i, n);
    for (int j = 0; j < n; ++j) {
      const int ky = wavenumber(j, n);
      for (int k = 0; k < n; ++k) {
        const int kz = wavenumber(k, n);
        const double k2 = kx * kx + ky * ky + kz * kz;
        const std::size_t s = site(i, j, k, n);
        for (const auto& c : state.u_hat) sum += k2 * std::norm(c[s]);
      }
    }
  }
  return viscosity * kBoxVolume * sum;
}

/// Divergence-free residual, max over modes of |k . u_hat| / max|u_hat|.
inline double divergence_residual(const SpectralState& state) {
  const int n = state.grid_size;
  double max_div = 0.0;
  double max_amp = 0.0;
  for (int i = 0; i < n; ++i) {
    const double kx = wavenumber(i, n);
    for (int j = 0; j < n; ++j) {
      const double ky = wavenumber(j, n);
      for (int k = 0; k < n; ++k) {
        const double kz = wavenumber(k, n);
        const std::size_t s = site(i, j, k, n);
        const Cplx div = kx * state.u_hat[0][s] + ky * state.u_hat[1][s] +
                         kz * state.u_hat[2][s];
        max_div = std::max(max_div, std::abs(div));
        for (const auto& c : state.u_hat) max_amp = std::max(max_amp, std::abs(c[s]));
      }
    }
  }
  return max_amp > 0.0 ? max_div / max_amp : 0.0;
}

/// Reality residual, max over modes of |u_hat(k) - conj(u_hat(-k))|.
inline double reality_residual(const SpectralState& state) {
  const int n = state.grid_size;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ip = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      const int jp = (n - j) % n;
      for (int k = 0; k < n; ++k) {
        const int kp = (n - k) % n;
        const std::size_t s = site(i, j, k, n);
        const std::size_t sp = site(ip, jp, kp, n);
        for (const auto& c : state.u_hat) {
          worst = std::max(worst, std::abs(c[s] - std::conj(c[sp])));
        }
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrajectorySample {
  double time = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  EnergySurface surface;
};

struct Trajectory {
  int surface_dim = 0;
  double viscosity = 0.0;
  std::vector<TrajectorySample> samples;
  std::vector<SpectralState> states;  // populated only when requested
};

/// Integrate from the initial state and record samples at the given times,
/// each with the energy surface at the configured cylinder dimension.
/// Empty sample_times yields an empty trajectory without integrating.
inline Trajectory trajectory(const SpectralState& initial, const FlowParams& params,
                             const std::vector<double>& sample_times,
                             int surface_dim, bool keep_states = false) {
  params.validate();
  if (surface_dim < 1) throw std::domain_error("trajectory: surface_dim must be >= 1");
  Trajectory out;
  out.surface_dim = surface_dim;
  out.viscosity = params.viscosity;
  if (sample_times.empty()) return out;

  const double t0 = initial.time;
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (i > 0 && !(sample_times[i] > sample_times[i - 1])) {
      throw std::domain_error("trajectory: sample times must be strictly increasing");
    }
    if (sample_times[i] < t0 - 1e-12 || sample_times[i] > t0 + params.t_end + 1e-12) {
      throw std::domain_error("trajectory: sample time outside [t0, t0 + t_end]");
    }
  }

  SpectralState current = initial;
  for (double target : sample_times) {
    while (current.time < target - 1e-12) {
      FlowParams local = params;
      local.dt = std::min(params.dt, target - current.time);
      current = step(current, local);
    }
    TrajectorySample sample;
    sample.time = current.time;
    sample.energy = energy(current);
    sample.dissipation = dissipation(current, params.viscosity);
    sample.surface = make_surface(surface_dim, sample.energy);
    out.samples.push_back(sample);
    if (keep_states) out.states.push_back(current);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

inline SpectralState zero_state(int grid_size) {
  if (grid_size < 4 || (grid_size & (grid_size - 1)) != 0) {
    throw std::domain_error("zero_state: grid_size must be a power of two >= 4");
  }
  SpectralState state;
  state.grid_size = grid_size;
  const auto n = static_cast<std::size_t>(grid_size);
  for (auto& c : state.u_hat) c.assign(n * n * n, 0.0);
  return state;
}

/// A single divergence-free mode with the basis-mode convention of
/// config_space: coefficient `coeff` of the orthonormal element
/// sqrt(2/V) trig(k.x) axis. Energy is coeff^2/2.
inline SpectralState single_mode_state(int grid_size, const std::array<int, 3>& k,
                                       int polarization, double coeff) {
  SpectralState state = zero_state(grid_size);
  const int kc = dealias_limit(grid_size);
  if (k == std::array<int, 3>{0, 0, 0}) {
    throw std::domain_error("single_mode_state: zero wavevector");
  }
  for (int c : k) {
    if (std::abs(c) > kc) {
      throw std::domain_error("single_mode_state: wavevector outside dealiased band");
    }
  }
  if (polarization < 0 || polarization > 3) {
    throw std::domain_error("single_mode_state: polarization outside 0..3");
  }
  const auto axes = mepplab::detail::transverse_axes(k);
  const auto& axis = axes[static_cast<std::size_t>(polarization & 1)];
  const bool sine = (polarization & 2) != 0;
  const double amplitude = coeff * std::sqrt(2.0 / kBoxVolume);

  const int n = grid_size;
  const auto wrap = [n](int w) { return ((w % n) + n) % n; };
  const std::size_t s_plus = site(wrap(k[0]), wrap(k[1]), wrap(k[2]), n);
  const std::size_t s_minus = site(wrap(-k[0]), wrap(-k[1]), wrap(-k[2]), n);
  for (int c = 0; c < 3; ++c) {
    const double a = 0.5 * amplitude * axis[static_cast<std::size_t>(c)];
    if (sine) {
      state.u_hat[static_cast<std::size_t>(c)][s_plus] = Cplx(0.0, -a);
      state.u_hat[static_cast<std::size_t>(c)][s_minus] = Cplx(0.0, a);
    } else {
      state.u_hat[static_cast<std::size_t>(c)][s_plus] = Cplx(a, 0.0);
      state.u_hat[static_cast<std::size_t>(c)][s_minus] = Cplx(a, 0.0);
    }
  }
  return state;
}

/// Taylor-Green-type vortex, filled in physical space and transformed.
inline SpectralState taylor_green_state(int grid_size, double amplitude) {
  SpectralState state = zero_state(grid_size);
  const int n = grid_size;
  std::array<std::vector<Cplx>, 3> u_phys;
  for (auto& c : u_phys) c.assign(state.site_count(), 0.0);
  const double h = kBoxLength / n;
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    for (int j = 0; j < n; ++j) {
      const double y = j * h;
      for (int k = 0; k < n; ++k) {
        const double z = k * h;
        const std::size_t s = site(i, j, k, n);
        u_phys[0][s] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
        u_phys[1][s] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
        u_phys[2][s] = 0.0;
      }
    }
  }
  for (auto& c : u_phys) detail::fft3(c, n, false);
  state.u_hat = std::move(u_phys);
  detail::apply_dealias_mask(state.u_hat, n);
  detail::apply_projection(state.u_hat, n);
  detail::apply_reality(state.u_hat, n);
  return state;
}

/// Random solenoidal field with a smooth spectral envelope, normalized to
/// the target energy. Deterministic per seed.
inline SpectralState random_solenoidal_state(int grid_size, std::uint64_t seed,
                                             double target_energy = 0.5,
                                             double peak_wavenumber = 2.0) {
  if (!(target_energy > 0.0)) {
    throw std::domain_error("random_solenoidal_state: target energy must be > 0");
  }
  SpectralState state = zero_state(grid_size);
  const int n = grid_size;
  const int kc = dealias_limit(grid_size);
  Rng rng = Rng::stream(seed, 0xf10);
  for (int kx = -kc; kx <= kc; ++kx) {
    for (int ky = -kc; ky <= kc; ++ky) {
      for (int kz = -kc; kz <= kc; ++kz) {
        const std::array<int, 3> k = {kx, ky, kz};
        if (!mepplab::detail::lexicographically_positive(k)) continue;
        const double k2 = kx * kx + ky * ky + kz * kz;
        const double envelope = std::exp(-k2 / (peak_wavenumber * peak_wavenumber));
        const auto wrap = [n](int w) { return ((w % n) + n) % n; };
        const std::size_t s_plus = site(wrap(kx), wrap(ky), wrap(kz), n);
        const std::size_t s_minus = site(wrap(-kx), wrap(-ky), wrap(-kz), n);
        for (int c = 0; c < 3; ++c) {
          const Cplx value(envelope * rng.gaussian(), envelope * rng.gaussian());
          state.u_hat[static_cast<std::size_t>(c)][s_plus] = value;
          state.u_hat[static_cast<std::size_t>(c)][s_minus] = std::conj(value);
        }
      }
    }
  }
  detail::apply_projection(state.u_hat, n);
  detail::apply_reality(state.u_hat, n);
  const double e0 = energy(state);
  if (!(e0 > 0.0)) throw std::runtime_error("random_solenoidal_state: empty spectrum");
  const double scale = std::sqrt(target_energy / e0);
  for (auto& c : state.u_hat) {
    for (auto& v : c) v *= scale;
  }
  return state;
}

// ---------------------------------------------------------------------------
// CSV interfaces
// ---------------------------------------------------------------------------

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time,energy,dissipation\n";
  out.precision(17);
  for (const auto& s : traj.samples) {
    out << s.time << ',' << s.energy << ',' << s.dissipation << '\n';
  }
}

/// Spectral coefficient dump: one row per mode and component with
/// |amplitude| above the threshold.
inline void write_coefficients_csv(std::ostream& out, const SpectralState& state,
                                   double threshold = 1e-14) {
  out << "kx,ky,kz,component,re,im\n";
  out.precision(17);
  const int n = state.grid_size;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t s = site(i, j, k, n);
        for (int c = 0; c < 3; ++c) {
          const Cplx v = state.u_hat[static_cast<std::size_t>(c)][s];
          if (std::abs(v) <= threshold) continue;
          out << wavenumber(i, n) << ',' << wavenumber(j, n) << ','
              << wavenumber(k, n) << ',' << c << ',' << v.real() << ','
              << v.imag() << '\n';
        }
      }
}

/// Read a coefficient CSV (as written above) into a state; the result is
/// projected, dealiased, and reality-symmetrized.
inline SpectralState state_from_coefficients_csv(std::istream& in, int grid_size) {
  SpectralState state = zero_state(grid_size);
  const int n = grid_size;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped && line.rfind("kx,", 0) == 0) {
      header_skipped = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 6) {
      throw std::invalid_argument("state_from_coefficients_csv: row has wrong arity");
    }
    const int kx = static_cast<int>(row[0]);
    const int ky = static_cast<int>(row[1]);
    const int kz = static_cast<int>(row[2]);
    const int c = static_cast<int>(row[3]);
    if (c < 0 || c > 2) throw std::invalid_argument("coefficient component outside 0..2");
    const auto wrap = [n](int w) { return ((w % n) + n) % n; };
    state.u_hat[static_cast<std::size_t>(c)][site(wrap(kx), wrap(ky), wrap(kz), n)] =
        Cplx(row[4], row[5]);
  }
  detail::apply_dealias_mask(state.u_hat, n);
  detail::apply_projection(state.u_hat, n);
  detail::apply_reality(state.u_hat, n);
  return state;
}

}  // namespace mepplab::flow
