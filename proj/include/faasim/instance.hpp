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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "faasim/engine.hpp"
#include "faasim/netmodel.hpp"
#include "faasim/scheduler.hpp"
#include "faasim/service.hpp"
#include "faasim/types.hpp"

namespace faasim {

/// Receives request lifecycle callbacks from instances.
class RequestSink {
 public:
  virtual ~RequestSink() = default;
  virtual void on_service_start(InvocationId inv, Micros start, Micros exec_us) = 0;
  virtual void on_service_complete(InvocationId inv, Micros now) = 0;
};

/// Shared dependencies of every instance on one host.
struct InstanceContext {
  Engine* engine = nullptr;
  RequestSink* sink = nullptr;
  const ComputeParams* compute = nullptr;
  const PathParams* net = nullptr;
  std::size_t queue_cap = 1024;
};

/// A function instance: FIFO admission onto a bounded number of cores.
/// Requests held before the instance is ready wait in the same queue.
class Instance {
 public:
  Instance(InstanceId id, std::string function, PathKind kind, InstanceContext ctx,
           ServiceSampler& sampler);
  virtual ~Instance() = default;
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;

  InstanceId instance_id() const noexcept { return id_; }
  const std::string& function() const noexcept { return function_; }
  PathKind kind() const noexcept { return kind_; }

  bool ready() const noexcept { return ready_; }
  Micros ready_at() const noexcept { return ready_at_; }
  /// Marks the instance live and starts draining anything already queued.
  void mark_ready(Micros now);

  /// False (and counted as rejected) when the queue already holds queue_cap requests.
  bool enqueue(InvocationId inv, Micros now);

  std::size_t queued() const noexcept { return queue_.size(); }
  int in_service() const noexcept { return in_service_; }
  std::uint64_t enqueued_count() const noexcept { return enqueued_; }
  std::uint64_t completed_count() const noexcept { return completed_; }
  std::uint64_t rejected_count() const noexcept { return rejected_; }
  int peak_in_service() const noexcept { return peak_in_service_; }

  bool retired() const noexcept { return retired_; }
  void retire() noexcept { retired_ = true; }
  bool drained() const noexcept { return queue_.empty() && in_service_ == 0; }

  /// Current bound on concurrently served requests.
  virtual int concurrency_limit() const = 0;
  /// Replica count this instance contributes to its function.
  virtual int replicas(bool per_process) const = 0;
  /// Throws ContractViolation when an instance-level invariant is broken.
  virtual void check_invariants() const;

 protected:
  void admit(Micros now);
  virtual Micros admission_delay() const { return 0; }
  virtual void after_enqueue(Micros /*now*/) {}
  virtual void on_ready(Micros now) { admit(now); }
  virtual void on_dequeue() {}
  virtual void on_started(InvocationId /*inv*/) {}
  virtual void on_finished(InvocationId /*inv*/) {}

  InstanceContext ctx_;

 private:
  void complete(InvocationId inv, Micros now);

  InstanceId id_;
  std::string function_;
  PathKind kind_;
  ServiceSampler& sampler_;
  bool ready_ = false;
  Micros ready_at_ = 0;
  bool retired_ = false;
  std::deque<InvocationId> queue_;
  int in_service_ = 0;
  int peak_in_service_ = 0;
  std::uint64_t enqueued_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t rejected_ = 0;
};

/// User-level process inside a Junction instance.
struct UProc {
  int uproc_id = 0;
  int max_cores = 1;
  int runnable_threads = 0;
  bool exiting = false;
};

/// Junction-style instance: uProcs sharing one user-space kernel, a packet
/// queue, an event queue, and whatever cores the scheduler grants.
class JunctionInstance final : public Instance, public SchedulableInstance {
 public:
  JunctionInstance(InstanceId id, std::string function, InstanceContext ctx,
                   ServiceSampler& sampler, JunctionScheduler& scheduler, int uprocs,
                   int max_cores_per_uproc);
  ~JunctionInstance() override;

  // SchedulableInstance
  InstanceId id() const override { return instance_id(); }
  InstanceSignals signals() const override;
  void raise_event() override { ++eventq_pending_; }
  void grant_cores(int cores, Micros now) override;
  void revoke_cores(int cores, Micros now) override;

  int concurrency_limit() const override { return std::min(allocated_ - preempt_pending_, cap()); }
  int replicas(bool per_process) const override;
  void check_invariants() const override;

  /// Spawns or stops uProcs until `count` are live. Stopping uProcs finish
  /// their in-flight requests first.
  void set_uproc_count(int count, Micros now);
  /// Sets every live uProc's core cap.
  void set_uproc_core_cap(int cores, Micros now);

  int cap() const;
  int queue_pairs() const;
  int allocated() const noexcept { return allocated_; }
  int eventq_pending() const noexcept { return eventq_pending_; }
  int live_uprocs() const;
  const std::vector<UProc>& uprocs() const noexcept { return uprocs_; }
  /// Cores the scheduler still has to reclaim from busy threads.
  int preempt_pending() const noexcept { return preempt_pending_; }

 protected:
  void after_enqueue(Micros now) override;
  void on_dequeue() override;
  void on_started(InvocationId inv) override;
  void on_finished(InvocationId inv) override;
  void on_ready(Micros now) override;

 private:
  void prune_exited();

  JunctionScheduler& scheduler_;
  std::vector<UProc> uprocs_;
  int next_uproc_id_ = 0;
  int eventq_pending_ = 0;
  int allocated_ = 0;
  int preempt_pending_ = 0;
  std::map<InvocationId, int> running_on_;
};

/// Container on the kernel network stack with a fixed OS core share. Each
/// admitted request first pays the interrupt + context-switch wakeup.
class ContainerInstance final : public Instance {
 public:
  ContainerInstance(InstanceId id, std::string function, InstanceContext ctx,
                    ServiceSampler& sampler, int cores, int procs, int threads_per_proc);

  int concurrency_limit() const override;
  int replicas(bool per_process) const override;
  void check_invariants() const override;

  int cores() const noexcept { return cores_; }
  int procs() const noexcept { return procs_; }
  int threads_per_proc() const noexcept { return threads_per_proc_; }
  void set_procs(int procs, Micros now);
  void set_threads_per_proc(int threads, Micros now);

 protected:
  Micros admission_delay() const override;

 private:
  int cores_;
  int procs_;
  int threads_per_proc_;
};

}  // namespace faasim
