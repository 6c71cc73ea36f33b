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

namespace mepplab {

/// A Monte Carlo estimate: value, standard error of the mean, sample count.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Welford running mean/variance accumulator.
class RunningStat {
 public:
  void push(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double sd() const { return std::sqrt(variance()); }
  /// Standard error of the mean.
  double se() const {
    return n_ > 0 ? sd() / std::sqrt(static_cast<double>(n_)) : 0.0;
  }

  McEstimate estimate(double scale = 1.0) const {
    return {scale * mean(), std::fabs(scale) * se(), n_};
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Paired accumulator with covariance, for delta-method error propagation.
class RunningStat2 {
 public:
  void push(double x, double y) {
    ++n_;
    const double dx = x - mean_x_;
    const double dy = y - mean_y_;
    const double inv = 1.0 / static_cast<double>(n_);
    mean_x_ += dx * inv;
    mean_y_ += dy * inv;
    m2x_ += dx * (x - mean_x_);
    m2y_ += dy * (y - mean_y_);
    cxy_ += dx * (y - mean_y_);
  }

  std::int64_t count() const { return n_; }
  double mean_x() const { return mean_x_; }
  double mean_y() const { return mean_y_; }
  double var_x() const { return n_ > 1 ? m2x_ / static_cast<double>(n_ - 1) : 0.0; }
  double var_y() const { return n_ > 1 ? m2y_ / static_cast<double>(n_ - 1) : 0.0; }
  double cov() const { return n_ > 1 ? cxy_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::int64_t n_ = 0;
  double mean_x_ = 0.0, mean_y_ = 0.0;
  double m2x_ = 0.0, m2y_ = 0.0, cxy_ = 0.0;
};

}  // namespace mepplab
