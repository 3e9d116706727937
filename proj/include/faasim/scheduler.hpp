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
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "faasim/engine.hpp"
#include "faasim/types.hpp"

namespace faasim {

struct InstanceSignals {
  InstanceId instance_id = 0;
  int runnable_threads = 0;
  int eventq_pending = 0;
  int allocated = 0;
  int cap = 1;
};

/// min(cap, runnable_threads + (eventq_pending > 0 ? 1 : 0)): pending I/O
/// wakes exactly one core.
int demand(const InstanceSignals& s);

struct SchedulerConfig {
  int total_cores = 10;
  int reserved = 1;
  Micros timeslice_us = 100;
  Micros tick_us = 5;

  int usable() const noexcept { return total_cores - reserved; }
  void validate() const;
};

struct CoreAllocation {
  std::map<InstanceId, int> cores;
  Micros tick_t = 0;
  std::uint64_t tick_ops = 0;

  int total() const;
  int at(InstanceId id) const;
};

/// Integer max-min water-filling: one core at a time to the instance with
/// the smallest grant among those with unmet demand, ties to the lower id.
CoreAllocation allocate_cores(std::span<const InstanceSignals> signals, int usable);

/// Same, starting from per-instance floors (each clamped to its demand).
/// The floors must fit in `usable`.
CoreAllocation allocate_cores(std::span<const InstanceSignals> signals, int usable,
                              std::span<const int> floors);

/// What the scheduler needs from an instance it manages.
class SchedulableInstance {
 public:
  virtual ~SchedulableInstance() = default;
  virtual InstanceId id() const = 0;
  virtual InstanceSignals signals() const = 0;
  /// One more undelivered NIC event notification.
  virtual void raise_event() = 0;
  /// Add cores to the grant; the instance may start work at `now`.
  virtual void grant_cores(int cores, Micros now) = 0;
  /// Take cores back. Idle cores go immediately; busy ones are released when
  /// their request completes.
  virtual void revoke_cores(int cores, Micros now) = 0;
};

struct SchedulerEvent {
  enum class Kind { Grant, Preempt };
  Micros time = 0;
  InstanceId instance_id = 0;
  Kind kind = Kind::Grant;
  int cores = 0;
};

struct SchedulerTraceRow {
  Micros tick_us = 0;
  InstanceId instance_id = 0;
  int allocated = 0;
  int demand = 0;
  std::uint64_t tick_ops = 0;
};

/// Centralized core scheduler running on a reserved core. Only instances
/// with a grant or a demand are polled; parked instances cost nothing per
/// tick and re-enter through signal_eventq().
class JunctionScheduler {
 public:
  /// Fixed and per-core bookkeeping costs of one tick.
  static constexpr std::uint64_t kTickBaseOps = 1;
  static constexpr std::uint64_t kOpsPerCore = 1;

  JunctionScheduler(Engine& engine, SchedulerConfig config);

  const SchedulerConfig& config() const noexcept { return config_; }

  void add_instance(SchedulableInstance& instance);
  void remove_instance(InstanceId id);
  bool has_instance(InstanceId id) const { return instances_.count(id) != 0; }

  /// Throws ContractViolation for an unknown instance.
  void signal_eventq(InstanceId id);
  /// Re-polls an instance whose demand may have changed without a new event.
  void notify(InstanceId id);

  /// One polling pass: re-read signals, recompute, preempt and grant.
  /// Normally driven by scheduler-tick events.
  CoreAllocation tick(Micros now);

  std::size_t polled_count() const noexcept { return polled_.size(); }
  std::size_t instance_count() const noexcept { return instances_.size(); }
  std::uint64_t tick_count() const noexcept { return ticks_; }
  std::uint64_t last_tick_ops() const noexcept { return last_ops_; }
  bool awake() const noexcept { return tick_pending_; }
  int allocated_total() const;

  const std::vector<SchedulerEvent>& events() const noexcept { return events_; }
  void set_trace_recording(bool on) noexcept { record_trace_ = on; }
  const std::vector<SchedulerTraceRow>& trace() const noexcept { return trace_; }
  void write_trace_csv(std::ostream& out) const;

 private:
  void wake(Micros at);

  Engine& engine_;
  SchedulerConfig config_;
  std::map<InstanceId, SchedulableInstance*> instances_;
  std::set<InstanceId> polled_;
  bool tick_pending_ = false;
  Micros quantum_start_ = 0;
  bool fresh_quantum_ = true;
  std::uint64_t ticks_ = 0;
  std::uint64_t last_ops_ = 0;
  std::vector<SchedulerEvent> events_;
  bool record_trace_ = false;
  std::vector<SchedulerTraceRow> trace_;
};

}  // namespace faasim
