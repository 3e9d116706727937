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

#include "faasim/rng.hpp"
#include "faasim/types.hpp"

namespace faasim {

/// Per-packet path costs in microseconds. Defaults are calibration
/// starting points, not measurements.
struct PathParams {
  double trap_cost = 0.5;
  double ctx_switch_cost = 3.0;
  double interrupt_cost = 2.0;
  double poll_dispatch_cost = 0.2;
  double copy_cost_per_kb = 0.3;
  /// Propagation, serialization and RPC framing.
  double wire_cost = 5.0;

  void validate() const;
  bool operator==(const PathParams&) const = default;
};

/// Compute-side difference between the backends. Bypass always runs at
/// factor 1 with no jitter.
struct ComputeParams {
  double mux_overhead_factor = 1.546;
  DistSpec jitter = DistSpec::exponential(1.0 / 40.0);

  void validate() const;
  bool operator==(const ComputeParams&) const = default;
};

double one_way_packet_cost(PathKind kind, std::uint64_t payload_bytes, const PathParams& params);

/// Both legs of one RPC. Handler compute is charged by the instance model.
double rpc_cost(PathKind kind, std::uint64_t req_bytes, std::uint64_t resp_bytes,
                const PathParams& params);

/// Integer-microsecond charge for one RPC hop.
inline Micros rpc_hop_us(PathKind kind, std::uint64_t req_bytes, std::uint64_t resp_bytes,
                         const PathParams& params) {
  return round_half_up(rpc_cost(kind, req_bytes, resp_bytes, params));
}

/// Kernel-path receive wakeup charged when a container instance takes a request.
inline double kernel_wakeup_cost(const PathParams& params) {
  return params.interrupt_cost + params.ctx_switch_cost;
}

/// Bypass: `base`. KernelStack: base * mux_overhead_factor + a jitter draw.
/// Only KernelStack consumes from `rng`.
double service_time(PathKind kind, double base_us, const ComputeParams& cparams, RngStream& rng);

}  // namespace faasim
