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

#include "faasim/netmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace faasim {

std::string_view to_string(PathKind kind) {
  return kind == PathKind::Bypass ? "Bypass" : "KernelStack";
}

PathKind path_kind_from_string(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bypass" || lower == "junction") return PathKind::Bypass;
  if (lower == "kernel" || lower == "kernelstack" || lower == "kernel-stack" ||
      lower == "container") {
    return PathKind::KernelStack;
  }
  throw ConfigError("unknown path kind: " + std::string(text));
}

void PathParams::validate() const {
  const double fields[] = {trap_cost,          ctx_switch_cost, interrupt_cost,
                           poll_dispatch_cost, copy_cost_per_kb, wire_cost};
  for (double f : fields) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw ConfigError("path parameters must be finite and non-negative");
    }
  }
}

void ComputeParams::validate() const {
  if (!(mux_overhead_factor >= 1.0) || !std::isfinite(mux_overhead_factor)) {
    throw ConfigError("mux_overhead_factor must be >= 1");
  }
  jitter.validate();
  if (jitter.kind == DistSpec::Kind::Constant && jitter.value < 0.0) {
    throw InvalidDistribution("jitter must be non-negative");
  }
}

double one_way_packet_cost(PathKind kind, std::uint64_t payload_bytes, const PathParams& p) {
  const double copy = p.copy_cost_per_kb * (static_cast<double>(payload_bytes) / 1024.0);
  if (kind == PathKind::Bypass) return p.wire_cost + p.poll_dispatch_cost + copy;
  return p.wire_cost + p.trap_cost + p.interrupt_cost + p.ctx_switch_cost + copy;
}

double rpc_cost(PathKind kind, std::uint64_t req_bytes, std::uint64_t resp_bytes,
                const PathParams& params) {
  return one_way_packet_cost(kind, req_bytes, params) +
         one_way_packet_cost(kind, resp_bytes, params);
}

double service_time(PathKind kind, double base_us, const ComputeParams& cparams,
                    RngStream& rng) {
  if (base_us < 0.0) throw ContractViolation("service base time must be non-negative");
  if (kind == PathKind::Bypass) return base_us;
  const double jitter = std::max(0.0, draw(rng, cparams.jitter));
  return base_us * cparams.mux_overhead_factor + jitter;
}

}  // namespace faasim
