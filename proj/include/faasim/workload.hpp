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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "faasim/controlplane.hpp"
#include "faasim/metrics.hpp"
#include "faasim/types.hpp"

namespace faasim {

enum class WorkloadMode { SequentialClosedLoop, OpenLoopPoisson };

std::string_view to_string(WorkloadMode mode);
WorkloadMode workload_mode_from_string(std::string_view text);

struct WorkloadSpec {
  WorkloadMode mode = WorkloadMode::SequentialClosedLoop;
  std::string function = "aes";
  /// Closed-loop invocation count; also sizes the zero-load reference run.
  int count = 100;
  /// Open-loop offered rates in requests per second, strictly increasing.
  std::vector<double> rates;
  Micros duration_us = 500'000;
  std::uint64_t payload_bytes = 600;
  std::uint64_t response_bytes = 600;
  /// Leading fraction of each open-loop run excluded from statistics.
  double warmup_frac = 0.1;
  /// A rate is saturated above this reject fraction...
  double reject_limit = 0.01;
  /// ...or when p99 exceeds this multiple of the zero-load p50.
  double tail_limit = 50.0;

  void validate() const;
};

/// Advances the platform until `function` has a live instance.
void wait_until_ready(Platform& platform, const std::string& function);

/// Closed loop: invocation i+1 is submitted when i completes. Returns the
/// records in completion order.
std::vector<InvocationRecord> run_sequential(const WorkloadSpec& spec, Platform& platform);

/// Poisson arrivals at `rate_rps` for spec.duration_us, then drains.
SweepPoint run_rate(const WorkloadSpec& spec, Platform& platform, double rate_rps,
                    Micros zero_load_p50);

/// Returns a fresh platform with the workload function deployed.
using PlatformFactory = std::function<std::unique_ptr<Platform>()>;

struct OpenLoopResult {
  Micros zero_load_p50 = 0;
  std::vector<SweepPoint> points;
};

/// Every rate, and the zero-load reference, runs on its own fresh platform.
OpenLoopResult run_open_loop(const WorkloadSpec& spec, const PlatformFactory& factory);

/// Deploys `spec` now and returns the time until its first instance is live.
Micros measure_cold_start(Platform& platform, const FunctionSpec& spec);

}  // namespace faasim
