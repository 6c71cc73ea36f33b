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

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mepplab {

/// Exact nonnegative rational on 64-bit numerator/denominator, gcd-reduced.
/// Multiplication goes through 128-bit intermediates and throws on overflow
/// rather than silently losing exactness.
class Rational {
 public:
  Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    reduce();
  }

  static Rational one() { return Rational(1, 1); }

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }

  Rational operator*(const Rational& other) const {
    // Cross-reduce first so in-range results never overflow spuriously.
    const std::uint64_t g1 = std::gcd(num_, other.den_);
    const std::uint64_t g2 = std::gcd(other.num_, den_);
    const unsigned __int128 n = static_cast<unsigned __int128>(num_ / g1) *
                                (other.num_ / g2);
    const unsigned __int128 d = static_cast<unsigned __int128>(den_ / g2) *
                                (other.den_ / g1);
    if (n > UINT64_MAX || d > UINT64_MAX) {
      throw std::overflow_error("Rational: product exceeds 64-bit range");
    }
    return Rational(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
  }

  bool operator==(const Rational& other) const = default;

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void reduce() {
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace mepplab
