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
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faasim/engine.hpp"
#include "faasim/instance.hpp"
#include "faasim/netmodel.hpp"
#include "faasim/scheduler.hpp"
#include "faasim/service.hpp"
#include "faasim/types.hpp"

namespace faasim {

enum class ScaleMechanism { MultiProcess, RaiseCoreCap, NewInstance };

std::string_view to_string(ScaleMechanism m);
ScaleMechanism scale_mechanism_from_string(std::string_view text);

struct FunctionSpec {
  std::string name;
  ServiceTimeModel service;
  /// Per-uProc (or per-process thread) core cap.
  int max_cores = 1;
  ScaleMechanism scale_mechanism = ScaleMechanism::RaiseCoreCap;
  PathKind backend = PathKind::Bypass;

  double base_service_us() const noexcept { return service.median_us; }
  void validate() const;
};

/// Surrogate for (local IP, port): there is no IP stack in the simulation.
struct Endpoint {
  InstanceId instance_id = 0;
  std::uint16_t port = 0;

  std::string to_string() const;
  bool operator==(const Endpoint&) const = default;
};

struct ReplicaRecord {
  std::string function;
  int replicas = 0;
  Endpoint endpoint;
  std::vector<InstanceId> instance_ids;

  bool operator==(const ReplicaRecord&) const = default;
};

enum class InvocationStatus { Pending, Ok, NoSuchFunction, OverloadRejected };

std::string_view to_string(InvocationStatus s);

struct InvocationRecord {
  InvocationId id = 0;
  std::string function;
  Micros submit_t = 0;
  Micros gateway_t = 0;
  Micros provider_t = 0;
  Micros instance_t = 0;
  Micros start_t = 0;
  Micros complete_t = 0;
  std::vector<Micros> hop_costs;
  Micros exec_us = 0;
  Micros queue_us = 0;
  InvocationStatus status = InvocationStatus::Pending;
  InstanceId instance_id = 0;

  Micros e2e_us() const noexcept { return complete_t - submit_t; }
  Micros hops_us() const noexcept;
};

/// Invocation log CSV, skipping records still pending.
void write_invocation_log(std::ostream& out, const std::vector<InvocationRecord>& records);

/// Host-level platform settings shared by both backends.
struct PlatformConfig {
  /// Path kind of every RPC leg: gateway and provider run on the same backend.
  PathKind kind = PathKind::Bypass;
  PathParams net;
  ComputeParams compute;
  SchedulerConfig scheduler;
  Micros junction_init_us = 3400;
  Micros container_startup_us = 250000;
  /// Fixed OS core share of each container.
  int container_cores = 2;
  std::size_t queue_cap = 1024;
  int max_instances = 64;
  /// Re-check conservation and core invariants after every event.
  bool check_invariants = false;
  bool record_trace = false;
  bool record_scheduler_trace = false;

  void validate() const;
};

/// Authoritative function table (the junctiond / containerd analogue).
/// Owns every instance on the host.
class FunctionManager {
 public:
  FunctionManager(Engine& engine, const PlatformConfig& config, JunctionScheduler& scheduler,
                  RequestSink& sink, std::uint64_t seed);
  ~FunctionManager();

  /// Creates the first instance; it becomes ready after its init time.
  /// `on_ready` fires when any instance of the function turns live.
  void deploy(const FunctionSpec& spec, std::function<void(const std::string&)> on_ready);
  /// Returns true when anything changed.
  bool scale(const std::string& name, int new_scale,
             std::function<void(const std::string&)> on_ready);
  void remove(const std::string& name);

  bool deployed(const std::string& name) const { return deployments_.count(name) != 0; }
  /// Current record from live state; nullopt for unknown names.
  std::optional<ReplicaRecord> lookup(const std::string& name) const;
  int scale_of(const std::string& name) const;
  const FunctionSpec& spec(const std::string& name) const;
  std::vector<InstanceId> instances_of(const std::string& name) const;

  Instance& instance(InstanceId id);
  const Instance& instance(InstanceId id) const;
  bool has_instance(InstanceId id) const { return instances_.count(id) != 0; }
  const std::map<InstanceId, std::unique_ptr<Instance>>& all_instances() const {
    return instances_;
  }
  std::size_t active_instance_count() const;

  /// Stops retired instances that have drained and have nothing inbound.
  void reap(const std::map<InstanceId, int>& inbound);

 private:
  struct Deployment {
    FunctionSpec spec;
    int scale = 1;
    std::vector<InstanceId> instances;  // active, in creation order
  };

  InstanceId create_instance(const Deployment& d,
                             const std::function<void(const std::string&)>& on_ready);
  Micros init_time(PathKind backend) const;

  Engine& engine_;
  const PlatformConfig& config_;
  JunctionScheduler& scheduler_;
  RequestSink& sink_;
  std::uint64_t seed_;
  InstanceId next_id_ = 1;
  std::map<std::string, Deployment> deployments_;
  std::map<std::string, std::unique_ptr<ServiceSampler>> samplers_;
  std::map<InstanceId, std::unique_ptr<Instance>> instances_;
};

/// Provider-side cache of replica count and endpoint per function. Filled on
/// the first resolve, kept current by write-through on the gateway write
/// path. Unknown names are never cached.
class ProviderCache {
 public:
  explicit ProviderCache(const FunctionManager& manager) : manager_(manager) {}

  /// Throws NoSuchFunction when the manager has no deployment.
  ReplicaRecord resolve(const std::string& name);

  /// Write-through: refresh an existing entry from the manager, drop it when
  /// the function is gone.
  void on_write(const std::string& name);

  std::optional<ReplicaRecord> cached(const std::string& name) const;
  std::uint64_t manager_queries(const std::string& name) const;
  std::uint64_t total_manager_queries() const noexcept { return total_queries_; }
  std::uint64_t hits() const noexcept { return hits_; }

 private:
  const FunctionManager& manager_;
  std::map<std::string, ReplicaRecord> cache_;
  std::map<std::string, std::uint64_t> queries_;
  std::uint64_t total_queries_ = 0;
  std::uint64_t hits_ = 0;
};

/// One worker host: gateway, provider (with its cache), function manager,
/// Junction scheduler and instances, all on one simulated clock.
class Platform : private RequestSink {
 public:
  using CompletionFn = std::function<void(const InvocationRecord&)>;
  using ResolveObserver = std::function<void(const std::string&, const ReplicaRecord*)>;

  Platform(PlatformConfig config, std::uint64_t seed);
  ~Platform() override;
  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  Engine& engine() noexcept { return engine_; }
  const PlatformConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  PathKind kind() const noexcept { return config_.kind; }

  // Gateway-mediated writes.
  ReplicaRecord deploy_function(const FunctionSpec& spec);
  ReplicaRecord scale_function(const std::string& name, int new_scale);
  void remove_function(const std::string& name);

  /// Provider lookup through the cache.
  ReplicaRecord provider_resolve(const std::string& name);

  /// Submits an invocation entering the gateway at `at` (>= now).
  InvocationId invoke(const std::string& function, Micros at, std::uint64_t req_bytes,
                      std::uint64_t resp_bytes, CompletionFn on_done = {});

  const InvocationRecord& record(InvocationId id) const { return records_.at(id); }
  const std::vector<InvocationRecord>& invocations() const noexcept { return records_; }

  /// Time at which the function's first instance turned live, if it has.
  std::optional<Micros> ready_time(const std::string& name) const;

  const FunctionManager& manager() const noexcept { return manager_; }
  FunctionManager& manager() noexcept { return manager_; }
  const ProviderCache& cache() const noexcept { return cache_; }
  JunctionScheduler& scheduler() noexcept { return scheduler_; }
  const JunctionScheduler& scheduler() const noexcept { return scheduler_; }

  std::uint64_t injected() const noexcept { return injected_; }
  std::uint64_t completed() const noexcept { return completed_; }
  std::uint64_t rejected() const noexcept { return rejected_; }
  std::uint64_t in_flight() const noexcept;
  std::uint64_t invariant_checks() const noexcept { return checks_; }
  /// Throws ContractViolation on any broken conservation or core invariant.
  void check_invariants() const;

  void set_resolve_observer(ResolveObserver obs) { resolve_observer_ = std::move(obs); }

  /// Writes the invocation log CSV.
  void write_invocation_log(std::ostream& out) const;

 private:
  void on_service_start(InvocationId inv, Micros start, Micros exec_us) override;
  void on_service_complete(InvocationId inv, Micros now) override;

  void at_gateway(InvocationId id);
  void at_provider(InvocationId id);
  void at_instance(InvocationId id, InstanceId target);
  void finish(InvocationId id, InvocationStatus status, Micros now);
  void on_instance_ready(const std::string& name);
  InstanceId pick_instance(const ReplicaRecord& rec);

  PlatformConfig config_;
  std::uint64_t seed_;
  Engine engine_;
  JunctionScheduler scheduler_;
  FunctionManager manager_;
  ProviderCache cache_;

  struct Payload {
    std::uint64_t req = 0;
    std::uint64_t resp = 0;
  };
  std::vector<InvocationRecord> records_;
  std::vector<Payload> payloads_;
  std::map<InvocationId, CompletionFn> callbacks_;
  std::map<std::string, std::uint64_t> round_robin_;
  std::map<InstanceId, int> inbound_;
  std::map<std::string, Micros> first_ready_;
  ResolveObserver resolve_observer_;

  std::uint64_t injected_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t rejected_ = 0;
  std::uint64_t in_transit_ = 0;
  std::uint64_t checks_ = 0;
};

}  // namespace faasim
