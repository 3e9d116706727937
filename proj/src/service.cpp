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

#include "faasim/service.hpp"

#include <cmath>

namespace faasim {

DistSpec ServiceTimeModel::dist() const {
  if (kind == Kind::Constant) return DistSpec::constant(median_us);
  return DistSpec::lognormal_with_median(median_us, sigma);
}

double ServiceTimeModel::mean() const {
  if (kind == Kind::Constant) return median_us;
  return median_us * std::exp(0.5 * sigma * sigma);
}

void ServiceTimeModel::validate() const {
  if (!(median_us > 0.0)) throw ConfigError("service median_us must be positive");
  if (kind == Kind::Lognormal && !(sigma > 0.0)) {
    throw InvalidDistribution("service lognormal sigma must be positive");
  }
}

ServiceSampler::ServiceSampler(std::uint64_t seed, const std::string& function,
                               ServiceTimeModel model)
    : model_(model), base_(seed, "service/" + function), jitter_(seed, "jitter/" + function) {
  model_.validate();
}

Micros ServiceSampler::sample(PathKind kind, const ComputeParams& cparams) {
  const double base = draw(base_, model_.dist());
  return round_half_up(service_time(kind, base, cparams, jitter_));
}

}  // namespace faasim
