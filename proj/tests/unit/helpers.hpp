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
#include <vector>

#include "faasim/config.hpp"
#include "faasim/controlplane.hpp"
#include "faasim/netmodel.hpp"

namespace faasim::testing {

inline PathParams zero_path() {
  PathParams p;
  p.trap_cost = p.ctx_switch_cost = p.interrupt_cost = 0.0;
  p.poll_dispatch_cost = p.copy_cost_per_kb = p.wire_cost = 0.0;
  return p;
}

inline ComputeParams no_overhead_compute() {
  ComputeParams c;
  c.mux_overhead_factor = 1.0;
  c.jitter = DistSpec::constant(0.0);
  return c;
}

inline FunctionSpec fn(const std::string& name, double service_us = 100.0, int max_cores = 1,
                       ScaleMechanism m = ScaleMechanism::RaiseCoreCap,
                       PathKind backend = PathKind::Bypass) {
  FunctionSpec f;
  f.name = name;
  f.service = ServiceTimeModel::constant(service_us);
  f.max_cores = max_cores;
  f.scale_mechanism = m;
  f.backend = backend;
  return f;
}

/// Run config with every overhead zeroed and constant service time.
inline RunConfig zero_overhead_config(double service_us = 100.0) {
  RunConfig cfg;
  cfg.platform.net = zero_path();
  cfg.platform.compute = no_overhead_compute();
  cfg.functions = {fn("aes", service_us, 8)};
  cfg.platform.check_invariants = true;
  return cfg;
}

/// Tiny deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform integer in [lo, hi].
  int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_;
};

}  // namespace faasim::testing
