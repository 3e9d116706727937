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

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faasim/config.hpp"
#include "faasim/controlplane.hpp"
#include "faasim/metrics.hpp"
#include "faasim/workload.hpp"

namespace faasim {

/// The run config specialized to one backend.
PlatformConfig platform_for(const RunConfig& cfg, PathKind kind);
FunctionSpec function_for(const FunctionSpec& spec, PathKind kind);

/// Both backends start their workload at the same instant, after the slower
/// of the two cold starts.
Micros warm_start_us(const RunConfig& cfg);

/// Fresh platform with every configured function deployed at t = 0 and the
/// clock advanced to warm_start_us().
std::unique_ptr<Platform> make_warm_platform(const RunConfig& cfg, PathKind kind);

struct BackendSequential {
  PathKind kind = PathKind::Bypass;
  std::vector<InvocationRecord> records;
  Micros e2e_p50 = 0;
  Micros e2e_p99 = 0;
  Micros exec_p50 = 0;
  Micros exec_p99 = 0;
  /// Filled when the platform config asks for them.
  Trace trace;
  std::vector<SchedulerTraceRow> scheduler_trace;
};

struct ComparisonReport {
  BackendSequential kernel;
  BackendSequential bypass;
  /// Same order as CalibrationTargets: e2e median, e2e p99, exec median, exec p99.
  std::array<double, 4> reductions{};
  std::uint64_t invariant_checks = 0;

  double e2e_median_reduction() const { return reductions[0]; }
  double e2e_p99_reduction() const { return reductions[1]; }
  double exec_median_reduction() const { return reductions[2]; }
  double exec_p99_reduction() const { return reductions[3]; }
};

/// Sequential closed-loop run on each backend with the same seed.
ComparisonReport compare_backends(const RunConfig& cfg);

struct BackendSweep {
  PathKind kind = PathKind::Bypass;
  OpenLoopResult result;
  double max_unsaturated_rps = 0.0;
};

struct SweepReport {
  BackendSweep kernel;
  BackendSweep bypass;
  double throughput_ratio = 0.0;
  /// Kernel backend's max unsaturated rate; latency ratios are taken here.
  double comparison_rate = 0.0;
  double p50_ratio = 0.0;
  double p99_ratio = 0.0;
};

SweepReport sweep_backends(const RunConfig& cfg);

struct CalibrationResult {
  PathParams net;
  ComputeParams compute;
  std::array<double, 4> achieved{};
  std::array<double, 4> residual{};
  double objective = 0.0;
  int rounds = 0;
  int evaluations = 0;
  /// Every active residual is within tolerance.
  bool converged = false;
  std::vector<std::string> notes;
};

/// Coordinate descent in log space over cfg.calibration.free, minimizing
/// the squared error of the active reductions against `targets`.
CalibrationResult calibrate(const RunConfig& cfg, const CalibrationTargets& targets);

RunConfig with_params(RunConfig cfg, const PathParams& net, const ComputeParams& compute);

struct ColdStartReport {
  Micros bypass_us = 0;
  Micros kernel_us = 0;
};

/// Cold start of the workload function on each backend, deployed at t = 0.
ColdStartReport cold_starts(const RunConfig& cfg);

struct ReproduceReport {
  RunConfig effective;
  std::optional<CalibrationResult> calibration;
  std::optional<ComparisonReport> comparison;
  std::optional<SweepReport> sweep;
  std::optional<ColdStartReport> coldstart;
};

/// Calibrates when enabled, then runs all three experiments.
ReproduceReport reproduce(const RunConfig& cfg);

}  // namespace faasim
