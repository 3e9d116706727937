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


#include "faasim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace faasim {

Micros percentile(std::span<const Micros> samples, double p) {
  if (samples.empty()) throw EmptySamples("percentile of an empty sample set");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw ContractViolation("percentile rank out of range: " + std::to_string(p));
  }
  std::vector<Micros> v(samples.begin(), samples.end());
  const auto n = v.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
  return v[rank - 1];
}

std::vector<CdfPoint> empirical_cdf(std::span<const Micros> samples) {
  if (samples.empty()) throw EmptySamples("CDF of an empty sample set");
  std::vector<Micros> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  std::vector<CdfPoint> out;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out.push_back({v[i], static_cast<double>(i + 1) / n});
  }
  out.back().cum_frac = 1.0;
  return out;
}

LatencySample LatencySample::from(const InvocationRecord& rec) {
  return {rec.e2e_us(), rec.exec_us, rec.queue_us, rec.hops_us(), rec.status};
}

double reduction_pct(double kernel, double bypass) {
  if (kernel == 0.0) return 0.0;
  return (kernel - bypass) / kernel * 100.0;
}

double max_unsaturated_rate(std::span<const SweepPoint> points) {
  double best = 0.0;
  for (const auto& p : points) {
    if (p.saturated) break;
    best = p.rate_rps;
  }
  return best;
}

std::vector<Micros> e2e_of(std::span<const InvocationRecord> records) {
  std::vector<Micros> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.status == InvocationStatus::Ok) out.push_back(r.e2e_us());
  }
  return out;
}

std::vector<Micros> exec_of(std::span<const InvocationRecord> records) {
  std::vector<Micros> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.status == InvocationStatus::Ok) out.push_back(r.exec_us);
  }
  return out;
}

}  // namespace faasim
