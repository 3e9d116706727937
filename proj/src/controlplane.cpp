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

#include "faasim/controlplane.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>

namespace faasim {

namespace {

constexpr std::uint16_t kFunctionPort = 8080;

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(ScaleMechanism m) {
  switch (m) {
    case ScaleMechanism::MultiProcess: return "multi-process";
    case ScaleMechanism::RaiseCoreCap: return "raise-core-cap";
    case ScaleMechanism::NewInstance: return "new-instance";
  }
  return "unknown";
}

ScaleMechanism scale_mechanism_from_string(std::string_view text) {
  const std::string t = lowercase(text);
  if (t == "multi-process" || t == "multiprocess") return ScaleMechanism::MultiProcess;
  if (t == "raise-core-cap" || t == "raisecorecap") return ScaleMechanism::RaiseCoreCap;
  if (t == "new-instance" || t == "newinstance") return ScaleMechanism::NewInstance;
  throw ConfigError("unknown scale mechanism: " + std::string(text));
}

std::string_view to_string(InvocationStatus s) {
  switch (s) {
    case InvocationStatus::Pending: return "pending";
    case InvocationStatus::Ok: return "ok";
    case InvocationStatus::NoSuchFunction: return "no-such-function";
    case InvocationStatus::OverloadRejected: return "overload-rejected";
  }
  return "unknown";
}

void FunctionSpec::validate() const {
  if (name.empty()) throw ConfigError("function name must not be empty");
  if (max_cores < 1) throw ConfigError("function " + name + ": max_cores must be >= 1");
  service.validate();
}

std::string Endpoint::to_string() const {
  return "inst-" + std::to_string(instance_id) + ":" + std::to_string(port);
}

Micros InvocationRecord::hops_us() const noexcept {
  return std::accumulate(hop_costs.begin(), hop_costs.end(), Micros{0});
}

void write_invocation_log(std::ostream& out, const std::vector<InvocationRecord>& records) {
  out << "id,function,submit_us,complete_us,e2e_us,exec_us,hop1_us,hop2_us,hop3_us,queue_us,"
         "status\n";
  for (const auto& r : records) {
    if (r.status == InvocationStatus::Pending) continue;
    out << r.id << ',' << r.function << ',' << r.submit_t << ',' << r.complete_t << ','
        << r.e2e_us() << ',' << r.exec_us;
    for (std::size_t h = 0; h < 3; ++h) {
      out << ',';
      if (h < r.hop_costs.size()) out << r.hop_costs[h];
    }
    out << ',' << r.queue_us << ',' << to_string(r.status) << '\n';
  }
}

void PlatformConfig::validate() const {
  net.validate();
  compute.validate();
  scheduler.validate();
  if (junction_init_us < 0 || container_startup_us < 0) {
    throw ConfigError("init times must be non-negative");
  }
  if (container_cores < 1) throw ConfigError("container_cores must be >= 1");
  if (queue_cap < 1) throw ConfigError("queue_cap must be >= 1");
  if (max_instances < 1) throw ConfigError("max_instances must be >= 1");
}

// ---------------------------------------------------------------------------
// FunctionManager

FunctionManager::FunctionManager(Engine& engine, const PlatformConfig& config,
                                 JunctionScheduler& scheduler, RequestSink& sink,
                                 std::uint64_t seed)
    : engine_(engine), config_(config), scheduler_(scheduler), sink_(sink), seed_(seed) {}

FunctionManager::~FunctionManager() = default;

Micros FunctionManager::init_time(PathKind backend) const {
  return backend == PathKind::Bypass ? config_.junction_init_us : config_.container_startup_us;
}

std::size_t FunctionManager::active_instance_count() const {
  std::size_t n = 0;
  for (const auto& [name, d] : deployments_) n += d.instances.size();
  return n;
}

InstanceId FunctionManager::create_instance(
    const Deployment& d, const std::function<void(const std::string&)>& on_ready) {
  const FunctionSpec& spec = d.spec;
  auto& sampler = samplers_[spec.name];
  if (!sampler) sampler = std::make_unique<ServiceSampler>(seed_, spec.name, spec.service);

  InstanceContext ctx{&engine_, &sink_, &config_.compute, &config_.net, config_.queue_cap};
  const InstanceId id = next_id_++;
  std::unique_ptr<Instance> inst;
  if (spec.backend == PathKind::Bypass) {
    inst = std::make_unique<JunctionInstance>(id, spec.name, ctx, *sampler, scheduler_, 1,
                                              spec.max_cores);
  } else {
    inst = std::make_unique<ContainerInstance>(id, spec.name, ctx, *sampler,
                                               config_.container_cores, 1, spec.max_cores);
  }
  instances_.emplace(id, std::move(inst));
  const std::string name = spec.name;
  engine_.schedule(engine_.now() + init_time(spec.backend), EventKind::InstanceReady, id,
                   [this, id, name, on_ready] {
                     instances_.at(id)->mark_ready(engine_.now());
                     if (on_ready) on_ready(name);
                   });
  return id;
}

void FunctionManager::deploy(const FunctionSpec& spec,
                             std::function<void(const std::string&)> on_ready) {
  spec.validate();
  if (deployed(spec.name)) throw AlreadyDeployed(spec.name);
  if (active_instance_count() + 1 > static_cast<std::size_t>(config_.max_instances)) {
    throw CapacityExhausted("host instance limit " + std::to_string(config_.max_instances) +
                            " reached deploying " + spec.name);
  }
  Deployment d{spec, 1, {}};
  d.instances.push_back(create_instance(d, on_ready));
  deployments_.emplace(spec.name, std::move(d));
}

bool FunctionManager::scale(const std::string& name, int new_scale,
                            std::function<void(const std::string&)> on_ready) {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) throw NoSuchFunction(name);
  if (new_scale < 1) throw ContractViolation("scale must be >= 1, got " + std::to_string(new_scale));
  Deployment& d = it->second;
  if (new_scale == d.scale) return false;
  const Micros now = engine_.now();

  switch (d.spec.scale_mechanism) {
    case ScaleMechanism::MultiProcess: {
      Instance& inst = *instances_.at(d.instances.front());
      if (auto* j = dynamic_cast<JunctionInstance*>(&inst)) {
        j->set_uproc_count(new_scale, now);
      } else {
        dynamic_cast<ContainerInstance&>(inst).set_procs(new_scale, now);
      }
      break;
    }
    case ScaleMechanism::RaiseCoreCap: {
      Instance& inst = *instances_.at(d.instances.front());
      if (auto* j = dynamic_cast<JunctionInstance*>(&inst)) {
        if (new_scale > config_.scheduler.usable()) {
          throw CapacityExhausted("core cap " + std::to_string(new_scale) + " exceeds " +
                                  std::to_string(config_.scheduler.usable()) + " usable cores");
        }
        j->set_uproc_core_cap(new_scale, now);
      } else {
        dynamic_cast<ContainerInstance&>(inst).set_threads_per_proc(new_scale, now);
      }
      break;
    }
    case ScaleMechanism::NewInstance: {
      const int current = static_cast<int>(d.instances.size());
      if (new_scale > current) {
        const auto extra = static_cast<std::size_t>(new_scale - current);
        if (active_instance_count() + extra > static_cast<std::size_t>(config_.max_instances)) {
          throw CapacityExhausted("host instance limit " + std::to_string(config_.max_instances) +
                                  " reached scaling " + name);
        }
        for (std::size_t i = 0; i < extra; ++i) d.instances.push_back(create_instance(d, on_ready));
      } else {
        while (static_cast<int>(d.instances.size()) > new_scale) {
          instances_.at(d.instances.back())->retire();
          d.instances.pop_back();
        }
      }
      break;
    }
  }
  d.scale = new_scale;
  return true;
}

void FunctionManager::remove(const std::string& name) {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) throw NoSuchFunction(name);
  for (InstanceId id : it->second.instances) instances_.at(id)->retire();
  deployments_.erase(it);
}

std::optional<ReplicaRecord> FunctionManager::lookup(const std::string& name) const {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) return std::nullopt;
  const Deployment& d = it->second;
  const bool per_process = d.spec.scale_mechanism == ScaleMechanism::MultiProcess;
  ReplicaRecord rec;
  rec.function = name;
  for (InstanceId id : d.instances) {
    const Instance& inst = *instances_.at(id);
    if (!inst.ready()) continue;
    rec.instance_ids.push_back(id);
    rec.replicas += inst.replicas(per_process);
  }
  const InstanceId first = rec.instance_ids.empty() ? d.instances.front() : rec.instance_ids.front();
  rec.endpoint = Endpoint{first, kFunctionPort};
  return rec;
}

int FunctionManager::scale_of(const std::string& name) const {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) throw NoSuchFunction(name);
  return it->second.scale;
}

const FunctionSpec& FunctionManager::spec(const std::string& name) const {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) throw NoSuchFunction(name);
  return it->second.spec;
}

std::vector<InstanceId> FunctionManager::instances_of(const std::string& name) const {
  auto it = deployments_.find(name);
  if (it == deployments_.end()) throw NoSuchFunction(name);
  return it->second.instances;
}

Instance& FunctionManager::instance(InstanceId id) { return *instances_.at(id); }
const Instance& FunctionManager::instance(InstanceId id) const { return *instances_.at(id); }

void FunctionManager::reap(const std::map<InstanceId, int>& inbound) {
  for (auto it = instances_.begin(); it != instances_.end();) {
    const Instance& inst = *it->second;
    auto in = inbound.find(it->first);
    const bool idle_link = in == inbound.end() || in->second == 0;
    // Booting instances still own a pending ready event.
    if (inst.retired() && inst.ready() && inst.drained() && idle_link) {
      it = instances_.erase(it);
    } else {
      ++it;
    }
  }
}

// ---------------------------------------------------------------------------
// ProviderCache

ReplicaRecord ProviderCache::resolve(const std::string& name) {
  if (auto it = cache_.find(name); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  ++queries_[name];
  ++total_queries_;
  auto rec = manager_.lookup(name);
  if (!rec) throw NoSuchFunction(name);
  cache_[name] = *rec;
  return *rec;
}

void ProviderCache::on_write(const std::string& name) {
  auto it = cache_.find(name);
  if (it == cache_.end()) return;
  if (auto rec = manager_.lookup(name)) {
    it->second = *rec;
  } else {
    cache_.erase(it);
  }
}

std::optional<ReplicaRecord> ProviderCache::cached(const std::string& name) const {
  auto it = cache_.find(name);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t ProviderCache::manager_queries(const std::string& name) const {
  auto it = queries_.find(name);
  return it == queries_.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// Platform

Platform::Platform(PlatformConfig config, std::uint64_t seed)
    : config_((config.validate(), std::move(config))),
      seed_(seed),
      scheduler_(engine_, config_.scheduler),
      manager_(engine_, config_, scheduler_, *this, seed),
      cache_(manager_) {
  engine_.set_trace_recording(config_.record_trace);
  scheduler_.set_trace_recording(config_.record_scheduler_trace);
  engine_.set_observer([this](const TraceEntry& e) {
    if (e.kind == EventKind::ServiceComplete || e.kind == EventKind::PacketArrival ||
        e.kind == EventKind::InstanceReady) {
      manager_.reap(inbound_);
    }
    if (config_.check_invariants) check_invariants();
  });
}

Platform::~Platform() = default;

ReplicaRecord Platform::deploy_function(const FunctionSpec& spec) {
  manager_.deploy(spec, [this](const std::string& n) { on_instance_ready(n); });
  first_ready_.erase(spec.name);
  cache_.on_write(spec.name);
  return *manager_.lookup(spec.name);
}

ReplicaRecord Platform::scale_function(const std::string& name, int new_scale) {
  if (manager_.scale(name, new_scale, [this](const std::string& n) { on_instance_ready(n); })) {
    cache_.on_write(name);
  }
  // Handlers may call back into here; instances are only destroyed outside them.
  if (!engine_.dispatching()) manager_.reap(inbound_);
  return *manager_.lookup(name);
}

void Platform::remove_function(const std::string& name) {
  manager_.remove(name);
  first_ready_.erase(name);
  cache_.on_write(name);
  if (!engine_.dispatching()) manager_.reap(inbound_);
}

void Platform::on_instance_ready(const std::string& name) {
  if (manager_.deployed(name) && first_ready_.count(name) == 0) first_ready_[name] = engine_.now();
  cache_.on_write(name);
}

std::optional<Micros> Platform::ready_time(const std::string& name) const {
  auto it = first_ready_.find(name);
  if (it == first_ready_.end()) return std::nullopt;
  return it->second;
}

ReplicaRecord Platform::provider_resolve(const std::string& name) { return cache_.resolve(name); }

InvocationId Platform::invoke(const std::string& function, Micros at, std::uint64_t req_bytes,
                              std::uint64_t resp_bytes, CompletionFn on_done) {
  const InvocationId id = records_.size();
  InvocationRecord rec;
  rec.id = id;
  rec.function = function;
  rec.submit_t = at;
  records_.push_back(std::move(rec));
  payloads_.push_back({req_bytes, resp_bytes});
  if (on_done) callbacks_.emplace(id, std::move(on_done));
  ++injected_;
  ++in_transit_;
  engine_.schedule(at, EventKind::LoadArrival, id, [this, id] { at_gateway(id); });
  return id;
}

void Platform::at_gateway(InvocationId id) {
  const Payload p = payloads_[id];
  // RPC #1 client -> gateway; both legs are pre-charged on the way in.
  const Micros hop1 = rpc_hop_us(config_.kind, p.req, p.resp, config_.net);
  records_[id].hop_costs.push_back(hop1);
  engine_.schedule(engine_.now() + hop1, EventKind::RpcComplete, id, [this, id] {
    auto& rec = records_[id];
    rec.gateway_t = engine_.now();
    const Payload q = payloads_[id];
    // RPC #2 gateway -> provider.
    const Micros hop2 = rpc_hop_us(config_.kind, q.req, q.resp, config_.net);
    rec.hop_costs.push_back(hop2);
    engine_.schedule(engine_.now() + hop2, EventKind::RpcComplete, id,
                     [this, id] { at_provider(id); });
  });
}

InstanceId Platform::pick_instance(const ReplicaRecord& rec) {
  if (rec.instance_ids.empty()) return rec.endpoint.instance_id;
  const std::uint64_t turn = round_robin_[rec.function]++;
  return rec.instance_ids[turn % rec.instance_ids.size()];
}

void Platform::at_provider(InvocationId id) {
  auto& rec = records_[id];
  rec.provider_t = engine_.now();
  ReplicaRecord target;
  try {
    target = cache_.resolve(rec.function);
  } catch (const NoSuchFunction&) {
    if (resolve_observer_) resolve_observer_(rec.function, nullptr);
    --in_transit_;
    finish(id, InvocationStatus::NoSuchFunction, engine_.now());
    return;
  }
  if (resolve_observer_) resolve_observer_(rec.function, &target);
  const InstanceId inst = pick_instance(target);
  const Payload p = payloads_[id];
  // RPC #3 provider -> function instance.
  const Micros hop3 = rpc_hop_us(config_.kind, p.req, p.resp, config_.net);
  rec.hop_costs.push_back(hop3);
  ++inbound_[inst];
  engine_.schedule(engine_.now() + hop3, EventKind::PacketArrival, id,
                   [this, id, inst] { at_instance(id, inst); });
}

void Platform::at_instance(InvocationId id, InstanceId target) {
  --inbound_[target];
  --in_transit_;
  auto& rec = records_[id];
  rec.instance_t = engine_.now();
  rec.instance_id = target;
  if (!manager_.instance(target).enqueue(id, engine_.now())) {
    finish(id, InvocationStatus::OverloadRejected, engine_.now());
  }
}

void Platform::on_service_start(InvocationId inv, Micros start, Micros exec_us) {
  auto& rec = records_[inv];
  rec.start_t = start;
  rec.exec_us = exec_us;
  rec.queue_us = start - rec.instance_t;
}

void Platform::on_service_complete(InvocationId inv, Micros now) {
  finish(inv, InvocationStatus::Ok, now);
}

void Platform::finish(InvocationId id, InvocationStatus status, Micros now) {
  auto& rec = records_[id];
  rec.complete_t = now;
  rec.status = status;
  if (status == InvocationStatus::OverloadRejected) {
    ++rejected_;
  } else {
    ++completed_;
  }
  if (auto it = callbacks_.find(id); it != callbacks_.end()) {
    auto fn = std::move(it->second);
    callbacks_.erase(it);
    fn(records_[id]);
  }
}

std::uint64_t Platform::in_flight() const noexcept {
  std::uint64_t n = in_transit_;
  for (const auto& [id, inst] : manager_.all_instances()) {
    n += inst->queued() + static_cast<std::uint64_t>(inst->in_service());
  }
  return n;
}

void Platform::check_invariants() const {
  ++const_cast<Platform*>(this)->checks_;
  const std::uint64_t flight = in_flight();
  if (injected_ != completed_ + rejected_ + flight) {
    throw ContractViolation("conservation broken at t=" + std::to_string(engine_.now()) +
                            ": injected=" + std::to_string(injected_) +
                            " completed=" + std::to_string(completed_) +
                            " rejected=" + std::to_string(rejected_) +
                            " in_flight=" + std::to_string(flight));
  }
  int granted = 0;
  for (const auto& [id, inst] : manager_.all_instances()) {
    inst->check_invariants();
    if (const auto* j = dynamic_cast<const JunctionInstance*>(inst.get())) granted += j->allocated();
  }
  if (granted > config_.scheduler.usable()) {
    throw ContractViolation("scheduler granted " + std::to_string(granted) + " cores of " +
                            std::to_string(config_.scheduler.usable()) + " usable");
  }
}

void Platform::write_invocation_log(std::ostream& out) const {
  faasim::write_invocation_log(out, records_);
}

}  // namespace faasim
