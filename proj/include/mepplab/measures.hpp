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
#include <cmath>
#include <cstdint>
#include <functional>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mepplab/config_space.hpp"
#include "mepplab/quadrature.hpp"
#include "mepplab/rng.hpp"
#include "mepplab/special.hpp"
#include "mepplab/stats.hpp"

namespace mepplab {

using Point = std::vector<double>;
using DensityFn = std::function<double(std::span<const double>)>;
/// Draws one point on the surface into `out`; used by importance estimators.
using SamplerFn = std::function<void(Rng&, std::span<double>)>;

/// A density with respect to the surface reference measure v_e, tagged with
/// its family, parameters, and declared (not enforced) invariance group.
struct Density {
  std::string family;
  std::vector<double> params;
  std::string invariance = "none declared";
  DensityFn eval;
  SamplerFn draw;  // empty when the family ships no importance sampler

  bool has_sampler() const { return static_cast<bool>(draw); }
};

/// A measure on an energy surface, represented by its density with respect
/// to the surface reference measure. The reference is the surface Lebesgue
/// measure for distinguishable measures and that measure divided by n! for
/// indistinguishable ones; total_mass = integral of the density against the
/// reference (1 for probability measures).
struct CandidateMeasure {
  EnergySurface surface;
  Density density;
  double total_mass = 1.0;
  bool indistinguishable = false;

  bool is_probability(double tol = 1e-9) const {
    return std::fabs(total_mass - 1.0) <= tol;
  }
};

/// Mass of the reference measure: surface area, or area/n! with the
/// indistinguishability division.
inline double reference_mass(const EnergySurface& surface, bool indistinguishable) {
  if (surface.degenerate()) return 0.0;
  if (!indistinguishable) return surface.area;
  return std::exp(std::log(surface.area) - log_factorial(surface.dim));
}

inline double reference_mass(const CandidateMeasure& measure) {
  return reference_mass(measure.surface, measure.indistinguishable);
}

// ---------------------------------------------------------------------------
// Uniform sphere sampling
// ---------------------------------------------------------------------------

/// One point uniform on the sphere of radius r in `dim` dimensions
/// (isotropic Gaussian, normalized, scaled).
inline void sample_uniform_point(Rng& rng, int dim, double radius,
                                 std::span<double> out) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double g = rng.gaussian();
      out[static_cast<std::size_t>(i)] = g;
      norm2 += g * g;
    }
  } while (norm2 == 0.0);
  const double scale = radius / std::sqrt(norm2);
  for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] *= scale;
}

/// i.i.d. uniform points on the surface, deterministic per seed. Degenerate
/// surface yields the empty sentinel.
inline std::vector<Point> sample_uniform(const EnergySurface& surface,
                                         std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw std::domain_error("sample_uniform: count must be >= 1");
  if (surface.degenerate()) return {};
  Rng rng = Rng::stream(seed, 0);
  std::vector<Point> points(static_cast<std::size_t>(count),
                            Point(static_cast<std::size_t>(surface.dim)));
  for (auto& p : points) sample_uniform_point(rng, surface.dim, surface.radius, p);
  return points;
}

/// Monte Carlo integral of g against the reference measure:
/// ref_mass * mean over uniform surface points.
template <class G>
McEstimate reference_integral(const EnergySurface& surface, bool indistinguishable,
                              std::int64_t count, std::uint64_t seed, G&& g) {
  if (count < 1) throw std::domain_error("reference_integral: count must be >= 1");
  if (surface.degenerate()) return {0.0, 0.0, 0};
  const double ref = reference_mass(surface, indistinguishable);
  Rng rng = Rng::stream(seed, 0);
  Point x(static_cast<std::size_t>(surface.dim));
  RunningStat stat;
  for (std::int64_t i = 0; i < count; ++i) {
    sample_uniform_point(rng, surface.dim, surface.radius, x);
    stat.push(g(std::span<const double>(x)));
  }
  return stat.estimate(ref);
}

// ---------------------------------------------------------------------------
// Physical (uniform) measure and reference measure
// ---------------------------------------------------------------------------

/// The physical measure: constant density 1/reference-mass, total mass 1.
/// Returns the degenerate-surface sentinel (nullopt) when r == 0.
inline std::optional<CandidateMeasure> physical_measure(const EnergySurface& surface,
                                                        bool indistinguishable) {
  if (surface.degenerate()) return std::nullopt;
  const double density_value = 1.0 / reference_mass(surface, indistinguishable);
  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "uniform";
  m.density.params = {density_value};
  m.density.invariance = "orthogonal group O(n) and coefficient permutations";
  m.density.eval = [density_value](std::span<const double>) { return density_value; };
  const int dim = surface.dim;
  const double radius = surface.radius;
  m.density.draw = [dim, radius](Rng& rng, std::span<double> out) {
    sample_uniform_point(rng, dim, radius, out);
  };
  m.total_mass = 1.0;
  m.indistinguishable = indistinguishable;
  return m;
}

/// The reference measure itself as a finite measure: density identically 1,
/// total mass = reference mass (area or area/n!).
inline std::optional<CandidateMeasure> reference_measure(const EnergySurface& surface,
                                                         bool indistinguishable) {
  if (surface.degenerate()) return std::nullopt;
  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "uniform";
  m.density.params = {1.0};
  m.density.invariance = "orthogonal group O(n) and coefficient permutations";
  m.density.eval = [](std::span<const double>) { return 1.0; };
  const int dim = surface.dim;
  const double radius = surface.radius;
  m.density.draw = [dim, radius](Rng& rng, std::span<double> out) {
    sample_uniform_point(rng, dim, radius, out);
  };
  m.total_mass = reference_mass(surface, indistinguishable);
  m.indistinguishable = indistinguishable;
  return m;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

struct NormalizeResult {
  CandidateMeasure measure;
  McEstimate mass;  // the Monte Carlo mass estimate used for the rescale
};

/// Rescale a finite measure to a probability measure, estimating the total
/// mass by Monte Carlo against the reference measure.
inline NormalizeResult normalize(const CandidateMeasure& measure,
                                 std::int64_t count, std::uint64_t seed) {
  if (measure.surface.degenerate()) {
    throw std::domain_error("normalize: degenerate surface");
  }
  const DensityFn eval = measure.density.eval;
  const McEstimate mass = reference_integral(
      measure.surface, measure.indistinguishable, count, seed,
      [&eval](std::span<const double> x) { return eval(x); });
  if (!(mass.value > 0.0)) {
    throw std::domain_error("normalize: estimated total mass is not positive");
  }
  NormalizeResult result{measure, mass};
  const double inv = 1.0 / mass.value;
  result.measure.density.eval = [eval, inv](std::span<const double> x) {
    return inv * eval(x);
  };
  result.measure.density.family = measure.density.family;
  result.measure.total_mass = 1.0;
  return result;
}

// ---------------------------------------------------------------------------
// Symmetrization over the coefficient-interchange group
// ---------------------------------------------------------------------------

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(identity);
  } while (std::next_permutation(identity.begin(), identity.end()));
  return perms;
}

/// Exact-orbit threshold: n! <= 720 terms are summed exactly; beyond that the
/// orbit is subsampled.
inline constexpr int kExactOrbitMaxDim = 6;
inline constexpr int kSampledOrbitSize = 720;

/// Average of the density over the permutation orbit, flagged
/// indistinguishable: the reference measure switches to v/n!, so the total
/// mass of a distinguishable input is divided by n! (the orbit-quotient
/// bookkeeping). Exact orbit sum for n <= 6; for larger n the orbit is
/// averaged over 720 seeded random permutations, with the sample count and
/// seed recorded in params.
inline CandidateMeasure symmetrize(const CandidateMeasure& measure,
                                   std::uint64_t seed = 0) {
  const int n = measure.surface.dim;
  CandidateMeasure out = measure;
  const DensityFn base = measure.density.eval;

  std::shared_ptr<const std::vector<std::vector<int>>> perms;
  if (n <= kExactOrbitMaxDim) {
    perms = std::make_shared<const std::vector<std::vector<int>>>(all_permutations(n));
    out.density.family = measure.density.family + "+symmetrized";
    out.density.params = measure.density.params;
  } else {
    auto sampled = std::make_shared<std::vector<std::vector<int>>>();
    sampled->reserve(kSampledOrbitSize);
    Rng rng = Rng::stream(seed, 0x5e7);
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int k = 0; k < kSampledOrbitSize; ++k) {
      // Fisher-Yates with the library engine.
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
      }
      sampled->push_back(p);
    }
    perms = sampled;
    out.density.family = measure.density.family + "+symmetrized-sampled";
    out.density.params = measure.density.params;
    out.density.params.push_back(static_cast<double>(kSampledOrbitSize));
    out.density.params.push_back(static_cast<double>(seed));
  }

  out.density.eval = [base, perms](std::span<const double> x) {
    thread_local Point scratch;
    scratch.resize(x.size());
    double sum = 0.0;
    for (const auto& p : *perms) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        scratch[i] = x[p[i] >= 0 ? static_cast<std::size_t>(p[i]) : 0];
      }
      sum += base(std::span<const double>(scratch));
    }
    return sum / static_cast<double>(perms->size());
  };
  out.density.draw = SamplerFn{};  // orbit averages ship no importance sampler
  out.density.invariance = "coefficient permutations (by construction)";

  if (!measure.indistinguishable) {
    out.indistinguishable = true;
    out.total_mass =
        std::exp(std::log(measure.total_mass) - log_factorial(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measures of sets
// ---------------------------------------------------------------------------

using PointPredicate = std::function<bool(std::span<const double>)>;

/// Monte Carlo estimate of measure(A) for a sampling-measurable indicator.
inline McEstimate measure_of_set(const CandidateMeasure& measure,
                                 const PointPredicate& indicator,
                                 std::int64_t count, std::uint64_t seed) {
  const DensityFn eval = measure.density.eval;
  return reference_integral(measure.surface, measure.indistinguishable, count,
                            seed, [&](std::span<const double> x) {
                              return indicator(x) ? eval(x) : 0.0;
                            });
}

// ---------------------------------------------------------------------------
// von Mises-Fisher family
// ---------------------------------------------------------------------------

/// log of the unit-sphere normalizer Z_n(kappa) = integral of
/// exp(kappa u.mu) over S^{n-1} (surface measure).
inline double vmf_log_normalizer(int dim, double kappa) {
  if (dim < 1) throw std::domain_error("vmf_log_normalizer: dim must be >= 1");
  if (kappa < 0.0) throw std::domain_error("vmf_log_normalizer: negative kappa");
  if (dim == 1) {
    return std::numbers::ln2 + std::log(std::cosh(kappa));
  }
  if (kappa == 0.0) return std::log(sphere_area(dim, 1.0));
  const double nu = 0.5 * dim - 1.0;
  return 0.5 * dim * std::log(2.0 * std::numbers::pi) +
         log_modified_bessel_i(nu, kappa) - nu * std::log(kappa);
}

namespace detail {

/// Marsaglia-Tsang gamma variate, shape alpha > 0, unit scale.
inline double gamma_variate(Rng& rng, double alpha) {
  if (alpha < 1.0) {
    const double u = rng.uniform01();
    return gamma_variate(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double beta_variate(Rng& rng, double alpha, double beta) {
  const double a = gamma_variate(rng, alpha);
  const double b = gamma_variate(rng, beta);
  return a / (a + b);
}

/// Wood's rejection sampler for the cos-colatitude marginal of a vMF
/// distribution on S^{dim-1}, dim >= 2.
inline double vmf_cos_marginal(Rng& rng, int dim, double kappa) {
  const double dm1 = static_cast<double>(dim - 1);
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1)) / dm1;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
  for (;;) {
    const double z = beta_variate(rng, 0.5 * dm1, 0.5 * dm1);
    const double t = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform01();
    if (kappa * t + dm1 * std::log(1.0 - x0 * t) - c >= std::log(u)) return t;
  }
}

/// Unit vector orthogonal to mu, uniform on the equatorial subsphere.
inline void tangent_direction(Rng& rng, std::span<const double> mu,
                              std::span<double> out) {
  const std::size_t n = mu.size();
  double norm2 = 0.0;
  do {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = rng.gaussian();
      dot += out[i] * mu[i];
    }
    norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] -= dot * mu[i];
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t i = 0; i < n; ++i) out[i] *= inv;
}

}  // namespace detail

/// vMF probability measure on the surface with mean direction mu (unit
/// vector) and concentration kappa; density with respect to the surface
/// Lebesgue measure. Ships the tangent-normal importance sampler.
inline CandidateMeasure vmf_measure(const EnergySurface& surface,
                                    const Point& mean_direction, double kappa) {
  if (surface.degenerate()) throw std::domain_error("vmf_measure: degenerate surface");
  if (std::ssize(mean_direction) != surface.dim) {
    throw std::invalid_argument("vmf_measure: mean direction has wrong dimension");
  }
  if (kappa < 0.0) throw std::domain_error("vmf_measure: negative kappa");
  Point mu = mean_direction;
  double norm = std::sqrt(std::inner_product(mu.begin(), mu.end(), mu.begin(), 0.0));
  if (norm == 0.0) throw std::invalid_argument("vmf_measure: zero mean direction");
  for (auto& c : mu) c /= norm;

  const int dim = surface.dim;
  const double radius = surface.radius;
  // log density = kappa (mu.x)/r - log Z_unit - (n-1) log r
  const double log_norm = vmf_log_normalizer(dim, kappa) +
                          (dim - 1) * std::log(radius);

  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "von-mises-fisher";
  m.density.params = {kappa};
  m.density.invariance = "rotations fixing the mean direction";
  m.density.eval = [mu, kappa, radius, log_norm](std::span<const double> x) {
    double dot = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) dot += mu[i] * x[i];
    return std::exp(kappa * dot / radius - log_norm);
  };
  m.density.draw = [mu, kappa, dim, radius](Rng& rng, std::span<double> out) {
    if (dim == 1) {
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * kappa));
      const double sign = rng.uniform01() < p_plus ? 1.0 : -1.0;
      out[0] = sign * mu[0] * radius;
      return;
    }
    if (kappa == 0.0) {
      sample_uniform_point(rng, dim, radius, out);
      return;
    }
    const double t = detail::vmf_cos_marginal(rng, dim, kappa);
    thread_local Point tangent;
    tangent.resize(static_cast<std::size_t>(dim));
    detail::tangent_direction(rng, mu, tangent);
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int i = 0; i < dim; ++i) {
      out[static_cast<std::size_t>(i)] =
          radius * (t * mu[static_cast<std::size_t>(i)] +
                    s * tangent[static_cast<std::size_t>(i)]);
    }
  };
  m.total_mass = 1.0;
  m.indistinguishable = false;
  return m;
}

inline Point axis_direction(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw std::invalid_argument("axis outside [0, dim)");
  Point mu(static_cast<std::size_t>(dim), 0.0);
  mu[static_cast<std::size_t>(axis)] = 1.0;
  return mu;
}

/// Two-component vMF mixture; importance sampler picks a component.
inline CandidateMeasure vmf_mixture_measure(const EnergySurface& surface,
                                            const Point& mu1, double kappa1,
                                            const Point& mu2, double kappa2,
                                            double weight) {
  if (weight < 0.0 || weight > 1.0) {
    throw std::domain_error("vmf_mixture_measure: weight outside [0,1]");
  }
  CandidateMeasure a = vmf_measure(surface, mu1, kappa1);
  CandidateMeasure b = vmf_measure(surface, mu2, kappa2);
  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "vmf-mixture";
  m.density.params = {kappa1, kappa2, weight};
  m.density.invariance = "none declared";
  const DensityFn ea = a.density.eval, eb = b.density.eval;
  m.density.eval = [ea, eb, weight](std::span<const double> x) {
    return weight * ea(x) + (1.0 - weight) * eb(x);
  };
  const SamplerFn da = a.density.draw, db = b.density.draw;
  m.density.draw = [da, db, weight](Rng& rng, std::span<double> out) {
    if (rng.uniform01() < weight) {
      da(rng, out);
    } else {
      db(rng, out);
    }
  };
  m.total_mass = 1.0;
  m.indistinguishable = false;
  return m;
}

// ---------------------------------------------------------------------------
// Polynomial tilt family: density proportional to max(0, 1 + a x_axis / r)
// ---------------------------------------------------------------------------

/// Mass of (1 + a u_axis)_+ against the unit-sphere surface measure.
inline double tilt_unit_mass(int dim, double slope) {
  const double a = slope;
  if (dim == 1) return std::max(0.0, 1.0 + a) + std::max(0.0, 1.0 - a);
  if (std::fabs(a) <= 1.0) return sphere_area(dim, 1.0);  // odd part integrates out
  const int p = dim - 2;
  const double equator = dim == 2 ? 2.0 : sphere_area(dim - 1, 1.0);
  const auto integrand = [a, p](double phi) {
    const double v = 1.0 + a * std::cos(phi);
    if (v <= 0.0) return 0.0;
    return p == 0 ? v : v * std::pow(std::sin(phi), p);
  };
  return equator * adaptive_simpson(integrand, 0.0, std::numbers::pi, 1e-13);
}

/// Clipped linear tilt along a coordinate axis, normalized to a probability
/// measure; rejection sampler against the uniform proposal.
inline CandidateMeasure polynomial_tilt_measure(const EnergySurface& surface,
                                                int axis, double slope) {
  if (surface.degenerate()) {
    throw std::domain_error("polynomial_tilt_measure: degenerate surface");
  }
  if (axis < 0 || axis >= surface.dim) {
    throw std::invalid_argument("polynomial_tilt_measure: axis outside [0, dim)");
  }
  const int dim = surface.dim;
  const double radius = surface.radius;
  const double mass =
      tilt_unit_mass(dim, slope) * std::pow(radius, dim - 1);
  if (!(mass > 0.0)) {
    throw std::domain_error("polynomial_tilt_measure: tilt vanishes everywhere");
  }

  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "polynomial-tilt";
  m.density.params = {static_cast<double>(axis), slope};
  m.density.invariance = "rotations fixing the tilt axis";
  m.density.eval = [axis, slope, radius, mass](std::span<const double> x) {
    const double v = 1.0 + slope * x[static_cast<std::size_t>(axis)] / radius;
    return v > 0.0 ? v / mass : 0.0;
  };
  const double bound = 1.0 + std::fabs(slope);
  m.density.draw = [axis, slope, dim, radius, bound](Rng& rng, std::span<double> out) {
    for (;;) {
      sample_uniform_point(rng, dim, radius, out);
      const double v = 1.0 + slope * out[static_cast<std::size_t>(axis)] / radius;
      if (v > 0.0 && rng.uniform01() * bound < v) return;
    }
  };
  m.total_mass = 1.0;
  m.indistinguishable = false;
  return m;
}

// ---------------------------------------------------------------------------
// Tabulated densities (CSV-loadable), nearest-neighbor evaluation
// ---------------------------------------------------------------------------

/// Density defined by (point, value) rows; evaluation returns the value of
/// the nearest tabulated point. No importance sampler; total mass unknown
/// until normalized.
inline CandidateMeasure tabulated_measure(const EnergySurface& surface,
                                          std::vector<Point> points,
                                          std::vector<double> values) {
  if (surface.degenerate()) throw std::domain_error("tabulated_measure: degenerate surface");
  if (points.empty() || points.size() != values.size()) {
    throw std::invalid_argument("tabulated_measure: point/value count mismatch");
  }
  for (const auto& p : points) {
    if (std::ssize(p) != surface.dim) {
      throw std::invalid_argument("tabulated_measure: point has wrong dimension");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw std::domain_error("tabulated_measure: negative density value");
  }
  auto pts = std::make_shared<const std::vector<Point>>(std::move(points));
  auto val = std::make_shared<const std::vector<double>>(std::move(values));

  CandidateMeasure m;
  m.surface = surface;
  m.density.family = "tabulated";
  m.density.invariance = "none declared";
  m.density.eval = [pts, val](std::span<const double> x) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const auto& p = (*pts)[i];
      double d2 = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const double d = p[j] - x[j];
        d2 += d * d;
      }
      if (d2 < best) {
        best = d2;
        arg = i;
      }
    }
    return (*val)[arg];
  };
  m.total_mass = std::numeric_limits<double>::quiet_NaN();  // unknown until normalized
  m.indistinguishable = false;
  return m;
}

/// CSV rows: x_1,...,x_n,density. Blank lines and '#' comments skipped.
inline CandidateMeasure load_tabulated_csv(const EnergySurface& surface,
                                           std::istream& in) {
  std::vector<Point> points;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (std::ssize(row) != surface.dim + 1) {
      throw std::invalid_argument("load_tabulated_csv: row has wrong arity");
    }
    values.push_back(row.back());
    row.pop_back();
    points.push_back(std::move(row));
  }
  return tabulated_measure(surface, std::move(points), std::move(values));
}

inline CandidateMeasure load_tabulated_csv(const EnergySurface& surface,
                                           const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabulated_csv: cannot open " + path);
  return load_tabulated_csv(surface, in);
}

}  // namespace mepplab
