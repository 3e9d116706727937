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

#include "faasim/netmodel.hpp"
#include "faasim/rng.hpp"
#include "faasim/types.hpp"

namespace faasim {

/// Base (bypass-path) compute time of a function.
struct ServiceTimeModel {
  enum class Kind { Constant, Lognormal };

  Kind kind = Kind::Lognormal;
  double median_us = 120.0;
  double sigma = 0.25;

  static ServiceTimeModel constant(double us) { return {Kind::Constant, us, 0.0}; }
  static ServiceTimeModel lognormal(double median, double sigma) {
    return {Kind::Lognormal, median, sigma};
  }

  DistSpec dist() const;
  double mean() const;
  void validate() const;
  bool operator==(const ServiceTimeModel&) const = default;
};

/// Draws execution times for one function. The base draw and the kernel
/// jitter come from separate streams, so two backends run with the same seed
/// see the same base sequence.
class ServiceSampler {
 public:
  ServiceSampler(std::uint64_t seed, const std::string& function, ServiceTimeModel model);

  /// Integer execution time on `kind`, rounded half-up.
  Micros sample(PathKind kind, const ComputeParams& cparams);

  const ServiceTimeModel& model() const noexcept { return model_; }

 private:
  ServiceTimeModel model_;
  RngStream base_;
  RngStream jitter_;
};

}  // namespace faasim
