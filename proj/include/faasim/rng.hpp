/*
 * Copyright 2026 The faasim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace faasim {

/// Distribution spec accepted by draw(). Lognormal is parameterized by the
/// underlying normal's (mu, sigma).
struct DistSpec {
  enum class Kind { Constant, Exponential, Lognormal };

  Kind kind = Kind::Constant;
  double value = 0.0;  // constant
  double rate = 1.0;   // exponential, per microsecond
  double mu = 0.0;     // lognormal
  double sigma = 1.0;  // lognormal

  static DistSpec constant(double v) { return {Kind::Constant, v, 1.0, 0.0, 1.0}; }
  static DistSpec exponential(double rate) { return {Kind::Exponential, 0.0, rate, 0.0, 1.0}; }
  static DistSpec lognormal(double mu, double sigma) {
    return {Kind::Lognormal, 0.0, 1.0, mu, sigma};
  }
  static DistSpec lognormal_with_median(double median, double sigma);
  static DistSpec lognormal_with_mean(double mean, double sigma);

  double mean() const;
  /// Same family and shape, rescaled to the given mean.
  DistSpec with_mean(double mean) const;
  /// Throws InvalidDistribution on non-positive rate/sigma or negative values.
  void validate() const;

  bool operator==(const DistSpec&) const = default;
};

std::string_view to_string(DistSpec::Kind kind);

/// Counter-based random stream: value k depends only on (seed, stream_id, k),
/// so independent components never perturb each other's draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& stream_id() const noexcept { return id_; }
  std::uint64_t index() const noexcept { return index_; }

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double next_uniform();

 private:
  std::uint64_t seed_;
  std::string id_;
  std::uint64_t key_;
  std::uint64_t index_ = 0;
};

double draw(RngStream& stream, const DistSpec& dist);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace faasim
