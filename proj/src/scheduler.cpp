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

#include "faasim/scheduler.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>

namespace faasim {

int demand(const InstanceSignals& s) {
  const int want = s.runnable_threads + (s.eventq_pending > 0 ? 1 : 0);
  return std::max(0, std::min(s.cap, want));
}

void SchedulerConfig::validate() const {
  if (usable() < 1) throw ConfigError("scheduler needs at least one usable core");
  if (reserved < 0) throw ConfigError("reserved cores must be non-negative");
  if (tick_us <= 0) throw ConfigError("tick_us must be positive");
  if (timeslice_us < tick_us) throw ConfigError("timeslice_us must be >= tick_us");
}

int CoreAllocation::total() const {
  int sum = 0;
  for (const auto& [id, c] : cores) sum += c;
  return sum;
}

int CoreAllocation::at(InstanceId id) const {
  auto it = cores.find(id);
  return it == cores.end() ? 0 : it->second;
}

CoreAllocation allocate_cores(std::span<const InstanceSignals> signals, int usable) {
  std::vector<int> floors(signals.size(), 0);
  return allocate_cores(signals, usable, floors);
}

CoreAllocation allocate_cores(std::span<const InstanceSignals> signals, int usable,
                              std::span<const int> floors) {
  if (floors.size() != signals.size()) {
    throw ContractViolation("allocate_cores: floors/signals size mismatch");
  }
  CoreAllocation out;
  std::vector<int> want(signals.size());
  std::vector<int> grant(signals.size());
  int remaining = std::max(0, usable);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    want[i] = demand(signals[i]);
    grant[i] = std::clamp(floors[i], 0, want[i]);
    remaining -= grant[i];
  }
  if (remaining < 0) throw ContractViolation("allocate_cores: floors exceed usable cores");

  // Min-heap on (grant, instance_id).
  using Key = std::tuple<int, InstanceId, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (grant[i] < want[i]) heap.emplace(grant[i], signals[i].instance_id, i);
  }
  while (remaining > 0 && !heap.empty()) {
    auto [g, id, i] = heap.top();
    heap.pop();
    ++grant[i];
    --remaining;
    if (grant[i] < want[i]) heap.emplace(grant[i], id, i);
  }
  for (std::size_t i = 0; i < signals.size(); ++i) out.cores[signals[i].instance_id] = grant[i];
  return out;
}

JunctionScheduler::JunctionScheduler(Engine& engine, SchedulerConfig config)
    : engine_(engine), config_(config) {
  config_.validate();
}

void JunctionScheduler::add_instance(SchedulableInstance& instance) {
  instances_[instance.id()] = &instance;
}

void JunctionScheduler::remove_instance(InstanceId id) {
  instances_.erase(id);
  polled_.erase(id);
}

void JunctionScheduler::signal_eventq(InstanceId id) {
  auto it = instances_.find(id);
  if (it == instances_.end()) {
    throw ContractViolation("signal_eventq: unknown instance " + std::to_string(id));
  }
  it->second->raise_event();
  polled_.insert(id);
  wake(engine_.now());
}

void JunctionScheduler::notify(InstanceId id) {
  if (instances_.count(id) == 0) {
    throw ContractViolation("notify: unknown instance " + std::to_string(id));
  }
  polled_.insert(id);
  wake(engine_.now());
}

void JunctionScheduler::wake(Micros at) {
  if (tick_pending_) return;
  tick_pending_ = true;
  engine_.schedule(at, EventKind::SchedulerTick, 0, [this] {
    tick_pending_ = false;
    tick(engine_.now());
    if (!polled_.empty()) wake(engine_.now() + config_.tick_us);
  });
}

int JunctionScheduler::allocated_total() const {
  int sum = 0;
  for (InstanceId id : polled_) sum += instances_.at(id)->signals().allocated;
  return sum;
}

CoreAllocation JunctionScheduler::tick(Micros now) {
  ++ticks_;
  // A dormant scheduler starts a new quantum on wakeup.
  if (polled_.empty()) fresh_quantum_ = true;
  const bool boundary = fresh_quantum_ || now - quantum_start_ >= config_.timeslice_us;
  if (boundary) {
    quantum_start_ = now;
    fresh_quantum_ = false;
  }

  std::vector<InstanceSignals> sig;
  sig.reserve(polled_.size());
  for (InstanceId id : polled_) sig.push_back(instances_.at(id)->signals());

  // Between quantum boundaries nobody loses a core it still has demand for.
  std::vector<int> floors(sig.size(), 0);
  if (!boundary) {
    for (std::size_t i = 0; i < sig.size(); ++i) {
      floors[i] = std::min(sig[i].allocated, demand(sig[i]));
    }
  }
  CoreAllocation target = allocate_cores(sig, config_.usable(), floors);
  target.tick_t = now;

  std::uint64_t ops = kTickBaseOps;
  for (const auto& s : sig) {
    ops += kOpsPerCore * static_cast<std::uint64_t>(std::max(s.allocated, target.at(s.instance_id)));
  }
  target.tick_ops = ops;
  last_ops_ = ops;

  for (const auto& s : sig) {
    const int want = target.at(s.instance_id);
    if (want < s.allocated) {
      instances_.at(s.instance_id)->revoke_cores(s.allocated - want, now);
      events_.push_back({now, s.instance_id, SchedulerEvent::Kind::Preempt, s.allocated - want});
    }
  }
  int free_cores = config_.usable() - allocated_total();
  for (const auto& s : sig) {
    if (free_cores <= 0) break;
    auto* inst = instances_.at(s.instance_id);
    const int have = inst->signals().allocated;
    const int want = target.at(s.instance_id);
    if (want > have) {
      const int add = std::min(want - have, free_cores);
      free_cores -= add;
      inst->grant_cores(add, now);
      events_.push_back({now, s.instance_id, SchedulerEvent::Kind::Grant, add});
    }
  }

  for (auto it = polled_.begin(); it != polled_.end();) {
    const InstanceSignals s = instances_.at(*it)->signals();
    if (record_trace_) trace_.push_back({now, *it, s.allocated, demand(s), ops});
    if (s.allocated == 0 && demand(s) == 0) {
      it = polled_.erase(it);
    } else {
      ++it;
    }
  }
  return target;
}

void JunctionScheduler::write_trace_csv(std::ostream& out) const {
  out << "tick_us,instance_id,allocated,demand,tick_ops\n";
  for (const auto& r : trace_) {
    out << r.tick_us << ',' << r.instance_id << ',' << r.allocated << ',' << r.demand << ','
        << r.tick_ops << '\n';
  }
}

}  // namespace faasim
