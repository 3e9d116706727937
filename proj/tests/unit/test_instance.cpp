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


#include <gtest/gtest.h>

#include <map>
#include <memory>
#include <vector>

#include "faasim/instance.hpp"
#include "helpers.hpp"

namespace faasim {
namespace {

struct Timing {
  Micros start = -1;
  Micros exec = -1;
  Micros complete = -1;
};

class RecordingSink : public RequestSink {
 public:
  void on_service_start(InvocationId inv, Micros start, Micros exec) override {
    t[inv].start = start;
    t[inv].exec = exec;
  }
  void on_service_complete(InvocationId inv, Micros now) override {
    t[inv].complete = now;
    order.push_back(inv);
  }
  std::map<InvocationId, Timing> t;
  std::vector<InvocationId> order;
};

/// One host with the sink, parameters and scheduler wired up.
struct Host {
  explicit Host(SchedulerConfig sc = {10, 1, 100, 5}, std::size_t cap = 1024)
      : sched(engine, sc) {
    net = testing::zero_path();
    compute = testing::no_overhead_compute();
    queue_cap = cap;
  }
  InstanceContext ctx() { return {&engine, &sink, &compute, &net, queue_cap}; }
  ServiceSampler& sampler(double us) {
    samplers.push_back(std::make_unique<ServiceSampler>(1, "f", ServiceTimeModel::constant(us)));
    return *samplers.back();
  }
  std::unique_ptr<JunctionInstance> junction(InstanceId id, int cores, double us = 100.0) {
    return std::make_unique<JunctionInstance>(id, "f", ctx(), sampler(us), sched, 1, cores);
  }
  std::unique_ptr<ContainerInstance> container(InstanceId id, int cores, double us = 100.0) {
    return std::make_unique<ContainerInstance>(id, "f", ctx(), sampler(us), cores, 1, cores);
  }

  Engine engine;
  JunctionScheduler sched;
  RecordingSink sink;
  PathParams net;
  ComputeParams compute;
  std::size_t queue_cap;
  std::vector<std::unique_ptr<ServiceSampler>> samplers;
};

TEST(JunctionInstance, IdleInstanceStartsWithinOneTick) {
  Host h;
  auto j = h.junction(1, 4);
  j->mark_ready(0);
  h.engine.run_until(1000);
  ASSERT_TRUE(j->enqueue(7, 1000));
  h.engine.run_until(2000);
  ASSERT_GE(h.sink.t[7].start, 1000);
  EXPECT_LE(h.sink.t[7].start, 1000 + h.sched.config().tick_us);
  EXPECT_EQ(h.sink.t[7].complete - h.sink.t[7].start, 100);
}

TEST(Instance, FullQueueRejects) {
  Host h({10, 1, 100, 5}, 2);
  auto c = h.container(1, 1);
  c->mark_ready(0);
  EXPECT_TRUE(c->enqueue(1, 0));  // straight into service
  EXPECT_TRUE(c->enqueue(2, 0));
  EXPECT_TRUE(c->enqueue(3, 0));
  EXPECT_EQ(c->queued(), 2u);
  EXPECT_FALSE(c->enqueue(4, 0));
  EXPECT_EQ(c->rejected_count(), 1u);
  EXPECT_NO_THROW(c->check_invariants());
}

TEST(Instance, UnitCapacityIsFifo) {
  Host h;
  auto c = h.container(1, 1);
  c->mark_ready(0);
  c->enqueue(10, 0);
  c->enqueue(11, 0);
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.order, (std::vector<InvocationId>{10, 11}));
  EXPECT_EQ(h.sink.t[11].start, h.sink.t[10].complete);
}

TEST(Instance, BypassChargesBase) {
  Host h;
  auto j = h.junction(1, 1);
  j->mark_ready(0);
  j->enqueue(1, 0);
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.t[1].exec, 100);
  EXPECT_EQ(h.sink.t[1].complete, h.sink.t[1].start + 100);
}

TEST(Instance, KernelFactorRoundedToWholeMicros) {
  Host h;
  h.compute.mux_overhead_factor = 1.546;
  auto c = h.container(1, 1);
  c->mark_ready(0);
  c->enqueue(1, 0);
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.t[1].exec, 155);
}

TEST(Instance, ContainerWakeupChargedBeforeService) {
  Host h;
  h.net.interrupt_cost = 2.0;
  h.net.ctx_switch_cost = 3.0;
  auto c = h.container(1, 1);
  c->mark_ready(0);
  c->enqueue(1, 0);
  c->enqueue(2, 0);
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.t[1].start, 5);
  EXPECT_EQ(h.sink.t[1].complete, 105);
  EXPECT_EQ(h.sink.t[2].start, 110);
}

TEST(Instance, TwoServersThreeRequests) {
  for (bool junction : {false, true}) {
    Host h;
    std::unique_ptr<Instance> inst;
    if (junction) {
      inst = h.junction(1, 2);
    } else {
      inst = h.container(1, 2);
    }
    inst->mark_ready(0);
    for (InvocationId i = 1; i <= 3; ++i) inst->enqueue(i, 0);
    h.engine.run_until(1000);
    // pending I/O wakes one core per tick, so Junction ramps up
    const Micros ramp = junction ? h.sched.config().tick_us : 0;
    EXPECT_EQ(h.sink.t[1].complete, 100) << junction;
    EXPECT_EQ(h.sink.t[2].complete, 100 + ramp) << junction;
    EXPECT_EQ(h.sink.t[3].complete, 200) << junction;
  }
}

TEST(Instance, HeldUntilReady) {
  Host h;
  auto j = h.junction(1, 2);
  j->enqueue(1, 0);
  h.engine.run_until(500);
  EXPECT_EQ(h.sink.t.count(1), 0u);
  EXPECT_EQ(j->allocated(), 0);
  j->mark_ready(500);
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.t[1].start, 500);
}

TEST(JunctionInstance, PreemptionOnlySlowsAdmission) {
  Host h({5, 1, 100, 5});
  auto a = h.junction(1, 4);
  auto b = h.junction(2, 4);
  a->mark_ready(0);
  b->mark_ready(0);
  h.engine.set_observer([&](const TraceEntry&) {
    a->check_invariants();
    b->check_invariants();
    ASSERT_LE(a->allocated() + b->allocated(), 4);
  });
  for (InvocationId i = 1; i <= 12; ++i) a->enqueue(i, 0);
  h.engine.run_until(20);
  ASSERT_EQ(a->in_service(), 4);
  for (InvocationId i = 101; i <= 104; ++i) b->enqueue(i, 20);

  int a_peak_late = 0;
  while (!h.engine.empty()) {
    h.engine.run_until(h.engine.next_time());
    // Pending I/O asks for one more core per quantum, so B reaches its fair
    // share at the second boundary and keeps it until its queue runs dry.
    const Micros now = h.engine.now();
    if (now > 205 && now < 305) a_peak_late = std::max(a_peak_late, a->in_service());
  }
  for (const auto& [inv, t] : h.sink.t) {
    EXPECT_EQ(t.complete - t.start, 100) << "request " << inv << " was interrupted";
  }
  EXPECT_LE(a_peak_late, 2);
  EXPECT_LT(h.sink.t[101].start, 300);
  EXPECT_EQ(h.sink.order.size(), 16u);
}

TEST(JunctionInstance, UProcScalingAndQueuePairs) {
  Host h;
  auto j = h.junction(1, 2);
  j->mark_ready(0);
  EXPECT_EQ(j->queue_pairs(), 2);
  j->set_uproc_count(3, 0);
  EXPECT_EQ(j->live_uprocs(), 3);
  EXPECT_EQ(j->cap(), 6);
  EXPECT_EQ(j->replicas(true), 3);
  EXPECT_EQ(j->replicas(false), 1);
  j->set_uproc_core_cap(4, 0);
  EXPECT_EQ(j->queue_pairs(), 4);
  EXPECT_EQ(j->cap(), 12);
  j->set_uproc_count(1, 0);
  EXPECT_EQ(j->live_uprocs(), 1);
  EXPECT_EQ(j->cap(), 4);
}

TEST(JunctionInstance, StoppingUProcFinishesInFlightWork) {
  Host h;
  auto j = h.junction(1, 1);
  j->mark_ready(0);
  j->set_uproc_count(2, 0);
  j->enqueue(1, 0);
  j->enqueue(2, 0);
  h.engine.run_until(10);
  ASSERT_EQ(j->in_service(), 2);
  j->set_uproc_count(1, 10);
  EXPECT_EQ(j->cap(), 2);  // exiting uProc still runs its thread
  h.engine.run_until(1000);
  EXPECT_EQ(h.sink.order.size(), 2u);
  EXPECT_EQ(j->uprocs().size(), 1u);
  EXPECT_EQ(j->cap(), 1);
}

TEST(Instance, ConservationUnderRandomLoad) {
  testing::Gen g(33);
  Host h({10, 1, 100, 5}, 8);
  auto j = h.junction(1, 3, 50);
  auto c = h.container(2, 2, 70);
  j->mark_ready(0);
  c->mark_ready(0);
  h.engine.set_observer([&](const TraceEntry&) {
    j->check_invariants();
    c->check_invariants();
  });
  InvocationId next = 0;
  for (int step = 0; step < 3000; ++step) {
    const Micros at = h.engine.now() + g.range(0, 30);
    h.engine.run_until(at);
    (g.range(0, 1) == 0 ? static_cast<Instance&>(*j) : *c).enqueue(next++, at);
    ASSERT_NO_THROW(j->check_invariants());
  }
  h.engine.run_to_idle(1'000'000'000);
  EXPECT_EQ(j->completed_count() + j->rejected_count() + c->completed_count() + c->rejected_count(),
            next);
  EXPECT_GT(j->rejected_count() + c->rejected_count(), 0u);
}

TEST(Instance, SequentialBackendEquivalenceWithZeroOverheads) {
  Host hj, hc;
  auto j = hj.junction(1, 8, 100);
  auto c = hc.container(1, 8, 100);
  j->mark_ready(0);
  c->mark_ready(0);
  for (InvocationId i = 0; i < 50; ++i) {
    const Micros at = 1000 + static_cast<Micros>(i) * 400;
    hj.engine.run_until(at);
    hc.engine.run_until(at);
    j->enqueue(i, at);
    c->enqueue(i, at);
  }
  hj.engine.run_to_idle(1'000'000);
  hc.engine.run_to_idle(1'000'000);
  for (InvocationId i = 0; i < 50; ++i) {
    EXPECT_EQ(hj.sink.t[i].start, hc.sink.t[i].start);
    EXPECT_EQ(hj.sink.t[i].complete, hc.sink.t[i].complete);
  }
}

}  // namespace
}  // namespace faasim
