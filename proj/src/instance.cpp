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

#include "faasim/instance.hpp"

#include <algorithm>
#include <string>

namespace faasim {

Instance::Instance(InstanceId id, std::string function, PathKind kind, InstanceContext ctx,
                   ServiceSampler& sampler)
    : ctx_(ctx), id_(id), function_(std::move(function)), kind_(kind), sampler_(sampler) {}

void Instance::mark_ready(Micros now) {
  ready_ = true;
  ready_at_ = now;
  on_ready(now);
}

bool Instance::enqueue(InvocationId inv, Micros now) {
  ++enqueued_;
  if (queue_.size() >= ctx_.queue_cap) {
    ++rejected_;
    return false;
  }
  queue_.push_back(inv);
  after_enqueue(now);
  admit(now);
  return true;
}

void Instance::admit(Micros now) {
  if (!ready_) return;
  while (!queue_.empty() && in_service_ < concurrency_limit()) {
    const InvocationId inv = queue_.front();
    queue_.pop_front();
    on_dequeue();
    ++in_service_;
    peak_in_service_ = std::max(peak_in_service_, in_service_);
    on_started(inv);
    const Micros start = now + admission_delay();
    const Micros exec = sampler_.sample(kind_, *ctx_.compute);
    ctx_.sink->on_service_start(inv, start, exec);
    ctx_.engine->schedule(start + exec, EventKind::ServiceComplete, inv,
                          [this, inv] { complete(inv, ctx_.engine->now()); });
  }
}

void Instance::complete(InvocationId inv, Micros now) {
  --in_service_;
  ++completed_;
  on_finished(inv);
  ctx_.sink->on_service_complete(inv, now);
  admit(now);
}

void Instance::check_invariants() const {
  const auto accounted = completed_ + rejected_ + queue_.size() + static_cast<std::uint64_t>(in_service_);
  if (enqueued_ != accounted) {
    throw ContractViolation("instance " + std::to_string(id_) +
                            ": request conservation broken (enqueued=" + std::to_string(enqueued_) +
                            ")");
  }
  if (in_service_ < 0) throw ContractViolation("negative in-service count");
}

// ---------------------------------------------------------------------------

JunctionInstance::JunctionInstance(InstanceId id, std::string function, InstanceContext ctx,
                                   ServiceSampler& sampler, JunctionScheduler& scheduler,
                                   int uprocs, int max_cores_per_uproc)
    : Instance(id, std::move(function), PathKind::Bypass, ctx, sampler), scheduler_(scheduler) {
  if (uprocs < 1 || max_cores_per_uproc < 1) {
    throw ContractViolation("junction instance needs >= 1 uProc with >= 1 core");
  }
  for (int i = 0; i < uprocs; ++i) uprocs_.push_back({next_uproc_id_++, max_cores_per_uproc, 0});
  scheduler_.add_instance(*this);
}

JunctionInstance::~JunctionInstance() { scheduler_.remove_instance(instance_id()); }

int JunctionInstance::cap() const {
  int total = 0;
  for (const auto& u : uprocs_) total += u.exiting ? u.runnable_threads : u.max_cores;
  return std::max(total, 1);
}

int JunctionInstance::queue_pairs() const {
  int pairs = 1;
  for (const auto& u : uprocs_) {
    if (!u.exiting) pairs = std::max(pairs, u.max_cores);
  }
  return pairs;
}

int JunctionInstance::live_uprocs() const {
  return static_cast<int>(std::count_if(uprocs_.begin(), uprocs_.end(),
                                        [](const UProc& u) { return !u.exiting; }));
}

int JunctionInstance::replicas(bool per_process) const {
  if (!ready()) return 0;
  return per_process ? live_uprocs() : 1;
}

InstanceSignals JunctionInstance::signals() const {
  InstanceSignals s;
  s.instance_id = instance_id();
  s.runnable_threads = in_service();
  // A booting instance cannot run anything yet.
  s.eventq_pending = ready() ? eventq_pending_ : 0;
  s.allocated = allocated_;
  s.cap = cap();
  return s;
}

void JunctionInstance::grant_cores(int cores, Micros now) {
  // A grant supersedes any preemption still in progress.
  preempt_pending_ = 0;
  allocated_ += cores;
  admit(now);
}

void JunctionInstance::revoke_cores(int cores, Micros /*now*/) {
  // `cores` counts from allocated_, which still includes pending preemptions.
  const int extra = cores - preempt_pending_;
  if (extra <= 0) {
    preempt_pending_ = cores;
    return;
  }
  const int idle = std::max(0, allocated_ - preempt_pending_ - in_service());
  const int release = std::min(extra, idle);
  allocated_ -= release;
  preempt_pending_ += extra - release;
}

void JunctionInstance::after_enqueue(Micros /*now*/) { scheduler_.signal_eventq(instance_id()); }

void JunctionInstance::on_ready(Micros now) {
  if (queued() > 0) scheduler_.notify(instance_id());
  admit(now);
}

void JunctionInstance::on_dequeue() {
  if (eventq_pending_ > 0) --eventq_pending_;
}

void JunctionInstance::on_started(InvocationId inv) {
  // Least-loaded live uProc with a free thread slot.
  UProc* best = nullptr;
  for (auto& u : uprocs_) {
    if (u.exiting || u.runnable_threads >= u.max_cores) continue;
    if (best == nullptr || u.runnable_threads < best->runnable_threads) best = &u;
  }
  if (best == nullptr) {
    throw ContractViolation("junction instance " + std::to_string(instance_id()) +
                            ": no uProc thread slot for admitted request");
  }
  ++best->runnable_threads;
  running_on_[inv] = best->uproc_id;
}

void JunctionInstance::on_finished(InvocationId inv) {
  auto it = running_on_.find(inv);
  if (it != running_on_.end()) {
    for (auto& u : uprocs_) {
      if (u.uproc_id == it->second) --u.runnable_threads;
    }
    running_on_.erase(it);
  }
  prune_exited();
  if (preempt_pending_ > 0) {
    --preempt_pending_;
    --allocated_;
  }
}

void JunctionInstance::prune_exited() {
  std::erase_if(uprocs_, [](const UProc& u) { return u.exiting && u.runnable_threads == 0; });
}

void JunctionInstance::set_uproc_count(int count, Micros now) {
  if (count < 1) throw ContractViolation("uProc count must be >= 1");
  const int per = uprocs_.empty() ? 1 : uprocs_.front().max_cores;
  int live = live_uprocs();
  while (live < count) {
    uprocs_.push_back({next_uproc_id_++, per, 0});
    ++live;
  }
  for (auto it = uprocs_.rbegin(); it != uprocs_.rend() && live > count; ++it) {
    if (!it->exiting) {
      it->exiting = true;
      --live;
    }
  }
  prune_exited();
  if (ready()) scheduler_.notify(instance_id());
  admit(now);
}

void JunctionInstance::set_uproc_core_cap(int cores, Micros now) {
  if (cores < 1) throw ContractViolation("uProc core cap must be >= 1");
  for (auto& u : uprocs_) {
    if (!u.exiting) u.max_cores = cores;
  }
  if (ready()) scheduler_.notify(instance_id());
  admit(now);
}

void JunctionInstance::check_invariants() const {
  Instance::check_invariants();
  if (in_service() > allocated_) {
    throw ContractViolation("junction instance " + std::to_string(instance_id()) +
                            " serves more requests than granted cores");
  }
  if (allocated_ < 0 || preempt_pending_ < 0 || preempt_pending_ > allocated_) {
    throw ContractViolation("junction instance core accounting broken");
  }
}

// ---------------------------------------------------------------------------

ContainerInstance::ContainerInstance(InstanceId id, std::string function, InstanceContext ctx,
                                     ServiceSampler& sampler, int cores, int procs,
                                     int threads_per_proc)
    : Instance(id, std::move(function), PathKind::KernelStack, ctx, sampler),
      cores_(cores),
      procs_(procs),
      threads_per_proc_(threads_per_proc) {
  if (cores < 1 || procs < 1 || threads_per_proc < 1) {
    throw ContractViolation("container needs >= 1 core, process and thread");
  }
}

int ContainerInstance::concurrency_limit() const {
  return std::min(cores_, procs_ * threads_per_proc_);
}

int ContainerInstance::replicas(bool per_process) const {
  if (!ready()) return 0;
  return per_process ? procs_ : 1;
}

Micros ContainerInstance::admission_delay() const {
  return round_half_up(kernel_wakeup_cost(*ctx_.net));
}

void ContainerInstance::set_procs(int procs, Micros now) {
  if (procs < 1) throw ContractViolation("container process count must be >= 1");
  procs_ = procs;
  admit(now);
}

void ContainerInstance::set_threads_per_proc(int threads, Micros now) {
  if (threads < 1) throw ContractViolation("thread count must be >= 1");
  threads_per_proc_ = threads;
  admit(now);
}

void ContainerInstance::check_invariants() const {
  Instance::check_invariants();
  if (in_service() > cores_) {
    throw ContractViolation("container " + std::to_string(instance_id()) +
                            " serves more requests than its cores");
  }
}

}  // namespace faasim
