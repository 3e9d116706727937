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


#include "faasim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace faasim {

namespace {

constexpr double kLogFloor = 1e-3;

double get_param(const PathParams& n, const ComputeParams& c, CalibParam p) {
  switch (p) {
    case CalibParam::WireCost: return n.wire_cost;
    case CalibParam::InterruptCost: return n.interrupt_cost;
    case CalibParam::CtxSwitchCost: return n.ctx_switch_cost;
    case CalibParam::JitterMean: return c.jitter.mean();
    case CalibParam::MuxFactor: return c.mux_overhead_factor;
  }
  return 0.0;
}

void set_param(PathParams& n, ComputeParams& c, CalibParam p, double v) {
  switch (p) {
    case CalibParam::WireCost: n.wire_cost = v; break;
    case CalibParam::InterruptCost: n.interrupt_cost = v; break;
    case CalibParam::CtxSwitchCost: n.ctx_switch_cost = v; break;
    case CalibParam::JitterMean: c.jitter = c.jitter.with_mean(v); break;
    case CalibParam::MuxFactor: c.mux_overhead_factor = std::max(1.0, v); break;
  }
}

BackendSequential run_backend(const RunConfig& cfg, PathKind kind, std::uint64_t& checks) {
  auto platform = make_warm_platform(cfg, kind);
  BackendSequential out;
  out.kind = kind;
  out.records = run_sequential(cfg.workload, *platform);
  const auto e2e = e2e_of(out.records);
  const auto exec = exec_of(out.records);
  out.e2e_p50 = percentile(e2e, 50);
  out.e2e_p99 = percentile(e2e, 99);
  out.exec_p50 = percentile(exec, 50);
  out.exec_p99 = percentile(exec, 99);
  checks += platform->invariant_checks();
  if (cfg.platform.record_trace) out.trace = platform->engine().trace();
  if (cfg.platform.record_scheduler_trace) out.scheduler_trace = platform->scheduler().trace();
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

PlatformConfig platform_for(const RunConfig& cfg, PathKind kind) {
  PlatformConfig p = cfg.platform;
  p.kind = kind;
  return p;
}

FunctionSpec function_for(const FunctionSpec& spec, PathKind kind) {
  FunctionSpec f = spec;
  f.backend = kind;
  return f;
}

Micros warm_start_us(const RunConfig& cfg) {
  return std::max(cfg.platform.junction_init_us, cfg.platform.container_startup_us);
}

std::unique_ptr<Platform> make_warm_platform(const RunConfig& cfg, PathKind kind) {
  auto platform = std::make_unique<Platform>(platform_for(cfg, kind), cfg.seed);
  for (const auto& f : cfg.functions) platform->deploy_function(function_for(f, kind));
  platform->engine().run_until(warm_start_us(cfg));
  return platform;
}

ComparisonReport compare_backends(const RunConfig& cfg) {
  cfg.validate();
  ComparisonReport r;
  r.kernel = run_backend(cfg, PathKind::KernelStack, r.invariant_checks);
  r.bypass = run_backend(cfg, PathKind::Bypass, r.invariant_checks);
  const auto red = [](Micros k, Micros b) {
    return reduction_pct(static_cast<double>(k), static_cast<double>(b));
  };
  r.reductions = {red(r.kernel.e2e_p50, r.bypass.e2e_p50), red(r.kernel.e2e_p99, r.bypass.e2e_p99),
                  red(r.kernel.exec_p50, r.bypass.exec_p50),
                  red(r.kernel.exec_p99, r.bypass.exec_p99)};
  return r;
}

SweepReport sweep_backends(const RunConfig& cfg) {
  cfg.validate();
  SweepReport r;
  for (PathKind kind : {PathKind::KernelStack, PathKind::Bypass}) {
    BackendSweep& b = kind == PathKind::Bypass ? r.bypass : r.kernel;
    b.kind = kind;
    b.result = run_open_loop(cfg.workload, [&cfg, kind] { return make_warm_platform(cfg, kind); });
    b.max_unsaturated_rps = max_unsaturated_rate(b.result.points);
  }
  if (r.kernel.max_unsaturated_rps > 0.0) {
    r.throughput_ratio = r.bypass.max_unsaturated_rps / r.kernel.max_unsaturated_rps;
    r.comparison_rate = r.kernel.max_unsaturated_rps;
    const auto at = [&](const BackendSweep& b) {
      return *std::find_if(b.result.points.begin(), b.result.points.end(),
                           [&](const SweepPoint& p) { return p.rate_rps == r.comparison_rate; });
    };
    const SweepPoint k = at(r.kernel);
    const SweepPoint b = at(r.bypass);
    if (b.p50_us > 0) r.p50_ratio = static_cast<double>(k.p50_us) / static_cast<double>(b.p50_us);
    if (b.p99_us > 0) r.p99_ratio = static_cast<double>(k.p99_us) / static_cast<double>(b.p99_us);
  }
  return r;
}

RunConfig with_params(RunConfig cfg, const PathParams& net, const ComputeParams& compute) {
  cfg.platform.net = net;
  cfg.platform.compute = compute;
  return cfg;
}

CalibrationResult calibrate(const RunConfig& cfg, const CalibrationTargets& targets) {
  cfg.validate();
  const auto& opt = cfg.calibration;
  CalibrationResult best;
  best.net = cfg.platform.net;
  best.compute = cfg.platform.compute;

  const auto evaluate = [&](CalibrationResult& c) {
    const auto report = compare_backends(with_params(cfg, c.net, c.compute));
    ++best.evaluations;
    c.objective = 0.0;
    for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
      c.achieved[i] = report.reductions[i];
      c.residual[i] = report.reductions[i] - targets.value[i];
      if (targets.active[i]) c.objective += c.residual[i] * c.residual[i];
    }
  };
  const auto within = [&](const CalibrationResult& c) {
    for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
      if (targets.active[i] && std::abs(c.residual[i]) > opt.tolerance_pp) return false;
    }
    return true;
  };

  evaluate(best);
  double step = opt.initial_step;
  while (!within(best) && best.rounds < opt.max_rounds && step >= opt.min_step) {
    bool improved = false;
    for (CalibParam p : opt.free) {
      for (double dir : {1.0, -1.0}) {
        CalibrationResult cand = best;
        const double x = std::max(get_param(cand.net, cand.compute, p), kLogFloor);
        set_param(cand.net, cand.compute, p, x * std::exp(dir * step));
        evaluate(cand);
        if (cand.objective < best.objective) {
          cand.evaluations = best.evaluations;
          cand.rounds = best.rounds;
          best = cand;
          improved = true;
          break;
        }
      }
    }
    ++best.rounds;
    if (!improved) step *= 0.5;
  }
  best.converged = within(best);

  best.notes.push_back("fit on " + std::to_string(cfg.workload.count) +
                       " sequential invocations per backend, seed " + std::to_string(cfg.seed));
  best.notes.push_back("jitter family " + std::string(to_string(best.compute.jitter.kind)) +
                       (best.compute.jitter.kind == DistSpec::Kind::Lognormal
                            ? ", sigma fixed at " + fmt(best.compute.jitter.sigma)
                            : std::string()));
  std::string fitted = "fitted:";
  for (CalibParam p : opt.free) {
    fitted += " " + std::string(to_string(p)) + "=" + fmt(get_param(best.net, best.compute, p));
  }
  best.notes.push_back(fitted);
  best.notes.push_back("wire_cost includes RPC serialization and framing");
  best.notes.push_back("all fitted values are model constants, not hardware measurements");
  return best;
}

ColdStartReport cold_starts(const RunConfig& cfg) {
  cfg.validate();
  ColdStartReport r;
  for (PathKind kind : {PathKind::Bypass, PathKind::KernelStack}) {
    Platform platform(platform_for(cfg, kind), cfg.seed);
    const Micros us = measure_cold_start(platform, function_for(cfg.target_function(), kind));
    (kind == PathKind::Bypass ? r.bypass_us : r.kernel_us) = us;
  }
  return r;
}

ReproduceReport reproduce(const RunConfig& cfg) {
  cfg.validate();
  ReproduceReport r;
  r.effective = cfg;
  if (cfg.calibration.enabled) {
    r.calibration = calibrate(cfg, cfg.targets);
    r.effective = with_params(cfg, r.calibration->net, r.calibration->compute);
  }
  r.comparison = compare_backends(r.effective);
  if (!r.effective.workload.rates.empty()) r.sweep = sweep_backends(r.effective);
  r.coldstart = cold_starts(r.effective);
  return r;
}

}  // namespace faasim
