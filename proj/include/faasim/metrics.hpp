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
#include <span>
#include <vector>

#include "faasim/controlplane.hpp"
#include "faasim/types.hpp"

namespace faasim {

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample, p = 0
/// giving the minimum. Throws EmptySamples on empty input.
Micros percentile(std::span<const Micros> samples, double p);

struct CdfPoint {
  Micros latency_us = 0;
  double cum_frac = 0.0;
};

/// Empirical CDF, one row per distinct value. The last cum_frac is exactly 1.
std::vector<CdfPoint> empirical_cdf(std::span<const Micros> samples);

struct LatencySample {
  Micros e2e_us = 0;
  Micros exec_us = 0;
  Micros queue_us = 0;
  Micros hops_us = 0;
  InvocationStatus status = InvocationStatus::Pending;

  static LatencySample from(const InvocationRecord& rec);
};

struct SweepPoint {
  double rate_rps = 0.0;
  Micros p50_us = 0;
  Micros p99_us = 0;
  double reject_frac = 0.0;
  bool saturated = false;
  std::uint64_t measured = 0;  // post-warmup invocations
};

/// (kernel - bypass) / kernel * 100.
double reduction_pct(double kernel, double bypass);

/// Highest rate of the leading run of unsaturated points; 0 when the first
/// point is already saturated.
double max_unsaturated_rate(std::span<const SweepPoint> points);

std::vector<Micros> e2e_of(std::span<const InvocationRecord> records);
std::vector<Micros> exec_of(std::span<const InvocationRecord> records);

}  // namespace faasim
