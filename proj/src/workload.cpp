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


#include "faasim/workload.hpp"

#include <cmath>
#include <limits>

#include "faasim/rng.hpp"

namespace faasim {

namespace {
constexpr Micros kForever = std::numeric_limits<Micros>::max();
}

std::string_view to_string(WorkloadMode mode) {
  return mode == WorkloadMode::SequentialClosedLoop ? "sequential" : "open-loop";
}

WorkloadMode workload_mode_from_string(std::string_view text) {
  if (text == "sequential" || text == "closed-loop") return WorkloadMode::SequentialClosedLoop;
  if (text == "open-loop" || text == "poisson") return WorkloadMode::OpenLoopPoisson;
  throw ConfigError("unknown workload mode: " + std::string(text));
}

void WorkloadSpec::validate() const {
  if (function.empty()) throw ConfigError("workload.function must be set");
  if (count < 1) throw ConfigError("workload.count must be >= 1");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) throw ConfigError("workload.rates must be positive");
    if (i > 0 && !(rates[i] > rates[i - 1])) {
      throw ConfigError("workload.rates must be strictly increasing");
    }
  }
  if (duration_us <= 0) throw ConfigError("workload.duration_us must be positive");
  if (warmup_frac < 0.0 || warmup_frac >= 1.0) throw ConfigError("warmup_frac must be in [0, 1)");
  if (reject_limit < 0.0 || tail_limit <= 0.0) throw ConfigError("invalid saturation limits");
}

void wait_until_ready(Platform& platform, const std::string& function) {
  if (!platform.manager().deployed(function)) throw NoSuchFunction(function);
  Engine& engine = platform.engine();
  while (!platform.ready_time(function)) {
    if (engine.empty()) {
      throw ContractViolation("function " + function + " has no pending instance");
    }
    engine.run_until(engine.next_time());
  }
}

std::vector<InvocationRecord> run_sequential(const WorkloadSpec& spec, Platform& platform) {
  spec.validate();
  wait_until_ready(platform, spec.function);

  std::vector<InvocationRecord> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  int issued = 0;
  Platform::CompletionFn on_done;
  auto issue = [&](Micros at) {
    ++issued;
    platform.invoke(spec.function, at, spec.payload_bytes, spec.response_bytes, on_done);
  };
  on_done = [&](const InvocationRecord& rec) {
    out.push_back(rec);
    if (issued < spec.count) issue(platform.engine().now());
  };
  issue(platform.engine().now());
  platform.engine().run_to_idle(kForever);
  return out;
}

SweepPoint run_rate(const WorkloadSpec& spec, Platform& platform, double rate_rps,
                    Micros zero_load_p50) {
  spec.validate();
  if (!(rate_rps > 0.0)) throw ContractViolation("offered rate must be positive");
  wait_until_ready(platform, spec.function);

  Engine& engine = platform.engine();
  const Micros start = engine.now();
  const Micros end = start + spec.duration_us;
  const Micros measure_from =
      start + round_half_up(spec.warmup_frac * static_cast<double>(spec.duration_us));
  const std::size_t first = platform.invocations().size();

  RngStream arrivals(platform.seed(), "arrivals/" + spec.function);
  const DistSpec gap = DistSpec::exponential(rate_rps / 1e6);
  double t = static_cast<double>(start);
  for (;;) {
    t += draw(arrivals, gap);
    const Micros at = round_half_up(t);
    if (at > end) break;
    engine.run_until(at);
    platform.invoke(spec.function, at, spec.payload_bytes, spec.response_bytes);
  }
  engine.run_to_idle(kForever);

  SweepPoint point;
  point.rate_rps = rate_rps;
  std::vector<Micros> e2e;
  std::uint64_t rejected = 0;
  const auto& recs = platform.invocations();
  for (std::size_t i = first; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (r.submit_t < measure_from) continue;
    ++point.measured;
    if (r.status == InvocationStatus::Ok) {
      e2e.push_back(r.e2e_us());
    } else {
      ++rejected;
    }
  }
  if (point.measured > 0) {
    point.reject_frac = static_cast<double>(rejected) / static_cast<double>(point.measured);
  }
  if (e2e.empty()) {
    point.saturated = true;
    return point;
  }
  point.p50_us = percentile(e2e, 50);
  point.p99_us = percentile(e2e, 99);
  point.saturated = point.reject_frac > spec.reject_limit ||
                    static_cast<double>(point.p99_us) >
                        spec.tail_limit * static_cast<double>(zero_load_p50);
  return point;
}

OpenLoopResult run_open_loop(const WorkloadSpec& spec, const PlatformFactory& factory) {
  spec.validate();
  if (spec.rates.empty()) throw ConfigError("open-loop workload needs at least one rate");
  OpenLoopResult result;
  {
    auto reference = factory();
    const auto recs = run_sequential(spec, *reference);
    result.zero_load_p50 = percentile(e2e_of(recs), 50);
  }
  for (double rate : spec.rates) {
    auto platform = factory();
    result.points.push_back(run_rate(spec, *platform, rate, result.zero_load_p50));
  }
  return result;
}

Micros measure_cold_start(Platform& platform, const FunctionSpec& spec) {
  const Micros deployed_at = platform.engine().now();
  platform.deploy_function(spec);
  wait_until_ready(platform, spec.name);
  return *platform.ready_time(spec.name) - deployed_at;
}

}  // namespace faasim
