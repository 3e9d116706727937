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

#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "../oracles/cache_script.hpp"
#include "faasim/controlplane.hpp"
#include "helpers.hpp"

namespace faasim {
namespace {

using testing::fn;

PlatformConfig zero_config(PathKind kind = PathKind::Bypass) {
  PlatformConfig c;
  c.kind = kind;
  c.net = testing::zero_path();
  c.compute = testing::no_overhead_compute();
  c.check_invariants = true;
  return c;
}

void drain(Platform& p) { p.engine().run_to_idle(std::numeric_limits<Micros>::max()); }

TEST(Gateway, DeployedFunctionTakesThreeHops) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  p.engine().run_until(5000);
  const auto id = p.invoke("aes", 5000, 600, 600);
  drain(p);
  const auto& r = p.record(id);
  EXPECT_EQ(r.status, InvocationStatus::Ok);
  ASSERT_EQ(r.hop_costs.size(), 3u);
  const Micros hop = rpc_hop_us(PathKind::Bypass, 600, 600, PathParams{});
  for (Micros h : r.hop_costs) EXPECT_EQ(h, hop);
  EXPECT_EQ(r.gateway_t, r.submit_t + hop);
  EXPECT_EQ(r.provider_t, r.gateway_t + hop);
  EXPECT_EQ(r.instance_t, r.provider_t + hop);
  EXPECT_LE(r.instance_t, r.start_t);
  EXPECT_LE(r.start_t, r.complete_t);
}

TEST(Gateway, UnknownFunctionShortCircuits) {
  Platform p(PlatformConfig{}, 1);
  const auto id = p.invoke("nope", 0, 600, 600);
  drain(p);
  const auto& r = p.record(id);
  EXPECT_EQ(r.status, InvocationStatus::NoSuchFunction);
  EXPECT_EQ(r.hop_costs.size(), 2u);
  EXPECT_EQ(r.complete_t, r.provider_t);
  EXPECT_EQ(p.completed(), 1u);
  EXPECT_EQ(p.in_flight(), 0u);
}

std::string run_pair(std::uint64_t seed) {
  Platform p(PlatformConfig{}, seed);
  p.deploy_function(fn("aes", 120, 2));
  p.engine().run_until(4000);
  const auto a = p.invoke("aes", 4000, 600, 600);
  const auto b = p.invoke("aes", 4000, 600, 600);
  drain(p);
  EXPECT_NE(a, b);
  EXPECT_EQ(p.record(a).status, InvocationStatus::Ok);
  EXPECT_EQ(p.record(b).status, InvocationStatus::Ok);
  std::ostringstream os;
  p.write_invocation_log(os);
  os << p.engine().trace().digest;
  return os.str();
}

TEST(Gateway, SimultaneousInvocationsAreDeterministic) {
  EXPECT_EQ(run_pair(3), run_pair(3));
}

TEST(Provider, SecondResolveHits) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  const auto first = p.provider_resolve("aes");
  const auto second = p.provider_resolve("aes");
  EXPECT_EQ(first, second);
  EXPECT_EQ(p.cache().manager_queries("aes"), 1u);
  EXPECT_EQ(p.cache().hits(), 1u);
}

TEST(Provider, UnknownNameIsNotCached) {
  Platform p(PlatformConfig{}, 1);
  EXPECT_THROW(p.provider_resolve("ghost"), NoSuchFunction);
  EXPECT_FALSE(p.cache().cached("ghost").has_value());
  EXPECT_THROW(p.provider_resolve("ghost"), NoSuchFunction);
  EXPECT_EQ(p.cache().manager_queries("ghost"), 2u);
}

TEST(Provider, ScaleUpdatesCacheOnWritePath) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes", 100, 1, ScaleMechanism::NewInstance));
  p.engine().run_until(4000);
  EXPECT_EQ(p.provider_resolve("aes").replicas, 1);
  p.scale_function("aes", 2);
  p.engine().run_until(8000);
  const auto r = p.provider_resolve("aes");
  EXPECT_EQ(r.replicas, 2);
  EXPECT_EQ(r.instance_ids.size(), 2u);
  EXPECT_EQ(p.cache().manager_queries("aes"), 1u);
}

TEST(Provider, RemoveDropsEntry) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  p.provider_resolve("aes");
  p.remove_function("aes");
  EXPECT_FALSE(p.cache().cached("aes").has_value());
  EXPECT_THROW(p.provider_resolve("aes"), NoSuchFunction);
}

TEST(Manager, BypassReadyAfterInit) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  p.engine().run_until(3399);
  EXPECT_FALSE(p.ready_time("aes").has_value());
  p.engine().run_until(3400);
  EXPECT_EQ(p.ready_time("aes"), 3400);
}

TEST(Manager, ContainerReadyAfterStartup) {
  PlatformConfig c;
  c.kind = PathKind::KernelStack;
  c.container_startup_us = 250000;
  Platform p(c, 1);
  p.deploy_function(fn("aes", 100, 1, ScaleMechanism::RaiseCoreCap, PathKind::KernelStack));
  drain(p);
  EXPECT_EQ(p.ready_time("aes"), 250000);
}

TEST(Manager, DuplicateDeployRejected) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  EXPECT_THROW(p.deploy_function(fn("aes")), AlreadyDeployed);
}

TEST(Manager, HostInstanceLimit) {
  PlatformConfig c;
  c.max_instances = 2;
  Platform p(c, 1);
  p.deploy_function(fn("a", 100, 1, ScaleMechanism::NewInstance));
  p.deploy_function(fn("b"));
  EXPECT_THROW(p.deploy_function(fn("c")), CapacityExhausted);
  EXPECT_THROW(p.scale_function("a", 2), CapacityExhausted);
  EXPECT_EQ(p.manager().scale_of("a"), 1);
}

TEST(Manager, ScaleErrors) {
  Platform p(PlatformConfig{}, 1);
  EXPECT_THROW(p.scale_function("ghost", 2), NoSuchFunction);
  p.deploy_function(fn("aes"));
  EXPECT_THROW(p.scale_function("aes", 0), ContractViolation);
  EXPECT_THROW(p.scale_function("aes", 64), CapacityExhausted);  // beyond usable cores
}

TEST(Manager, MultiProcessScaleSpawnsUProcs) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes", 100, 1, ScaleMechanism::MultiProcess));
  p.engine().run_until(4000);
  const auto r = p.scale_function("aes", 3);
  EXPECT_EQ(r.replicas, 3);
  ASSERT_EQ(r.instance_ids.size(), 1u);
  const auto& j = dynamic_cast<const JunctionInstance&>(p.manager().instance(r.instance_ids[0]));
  EXPECT_EQ(j.live_uprocs(), 3);
}

TEST(Manager, RaiseCoreCapKeepsOneReplica) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes"));
  p.engine().run_until(4000);
  const auto r = p.scale_function("aes", 4);
  EXPECT_EQ(r.replicas, 1);
  const auto& j = dynamic_cast<const JunctionInstance&>(p.manager().instance(r.instance_ids[0]));
  for (const auto& u : j.uprocs()) EXPECT_EQ(u.max_cores, 4);
  EXPECT_EQ(j.queue_pairs(), 4);
}

TEST(Manager, ScaleToCurrentIsNoOp) {
  Platform p(PlatformConfig{}, 1);
  p.deploy_function(fn("aes", 100, 1, ScaleMechanism::NewInstance));
  p.engine().run_until(4000);
  const auto before = p.provider_resolve("aes");
  const auto scheduled = p.engine().scheduled_count();
  const auto after = p.scale_function("aes", 1);
  EXPECT_EQ(p.engine().scheduled_count(), scheduled);
  EXPECT_EQ(before, after);
}

TEST(Manager, ContainerScaling) {
  PlatformConfig c;
  c.kind = PathKind::KernelStack;
  c.container_startup_us = 1000;
  Platform p(c, 1);
  p.deploy_function(fn("mp", 100, 1, ScaleMechanism::MultiProcess, PathKind::KernelStack));
  p.engine().run_until(2000);
  EXPECT_EQ(p.scale_function("mp", 3).replicas, 3);
}

TEST(Platform, EndToEndDecompositionIsExact) {
  for (PathKind kind : {PathKind::Bypass, PathKind::KernelStack}) {
    PlatformConfig c;
    c.kind = kind;
    c.container_startup_us = 1000;
    c.check_invariants = true;
    Platform p(c, 9);
    FunctionSpec f = fn("aes", 120, 2);
    f.service = ServiceTimeModel::lognormal(120, 0.25);
    f.backend = kind;
    p.deploy_function(f);
    p.engine().run_until(5000);
    testing::Gen g(4);
    Micros t = 5000;
    for (int i = 0; i < 2000; ++i) {
      t += g.range(0, 150);
      p.invoke("aes", t, 600, 600);
    }
    drain(p);
    ASSERT_EQ(p.completed() + p.rejected(), 2000u);
    for (const auto& r : p.invocations()) {
      ASSERT_EQ(r.status, InvocationStatus::Ok);
      ASSERT_EQ(r.e2e_us(), r.hops_us() + r.queue_us + r.exec_us);
      ASSERT_LE(r.submit_t, r.gateway_t);
      ASSERT_LE(r.gateway_t, r.provider_t);
      ASSERT_LE(r.provider_t, r.instance_t);
      ASSERT_LE(r.instance_t, r.complete_t);
    }
    EXPECT_GT(p.invariant_checks(), 0u);
  }
}

TEST(Platform, RequestsBeforeReadyWaitInQueue) {
  Platform p(zero_config(), 1);
  p.deploy_function(fn("aes"));
  const auto id = p.invoke("aes", 10, 0, 0);
  drain(p);
  const auto& r = p.record(id);
  EXPECT_EQ(r.status, InvocationStatus::Ok);
  EXPECT_EQ(r.start_t, 3400);
  EXPECT_EQ(r.queue_us, 3390);
}

TEST(Platform, OverloadRejectionAfterThreeHops) {
  PlatformConfig c = zero_config();
  c.queue_cap = 1;
  Platform p(c, 1);
  p.deploy_function(fn("aes", 1000));
  p.engine().run_until(4000);
  for (int i = 0; i < 4; ++i) p.invoke("aes", 4000, 0, 0);
  drain(p);
  // No core is granted before the next tick, so only the first one queues.
  EXPECT_EQ(p.rejected(), 3u);
  for (const auto& r : p.invocations()) {
    if (r.status == InvocationStatus::OverloadRejected) {
      EXPECT_EQ(r.hop_costs.size(), 3u);
      EXPECT_EQ(r.complete_t, r.instance_t);
    }
  }
}

TEST(Platform, RoundRobinAcrossInstances) {
  Platform p(zero_config(), 1);
  p.deploy_function(fn("aes", 100, 1, ScaleMechanism::NewInstance));
  p.scale_function("aes", 3);
  p.engine().run_until(4000);
  for (int i = 0; i < 6; ++i) p.invoke("aes", 4000 + i * 1000, 0, 0);
  drain(p);
  std::map<InstanceId, int> per;
  for (const auto& r : p.invocations()) ++per[r.instance_id];
  ASSERT_EQ(per.size(), 3u);
  for (const auto& [id, n] : per) EXPECT_EQ(n, 2);
}

TEST(Platform, ScaleDownDrainsRetiredInstances) {
  Platform p(zero_config(), 1);
  p.deploy_function(fn("aes", 500, 1, ScaleMechanism::NewInstance));
  p.scale_function("aes", 3);
  p.engine().run_until(4000);
  for (int i = 0; i < 9; ++i) p.invoke("aes", 4000, 0, 0);
  p.engine().run_until(4001);
  p.scale_function("aes", 1);
  drain(p);
  EXPECT_EQ(p.completed(), 9u);
  EXPECT_EQ(p.manager().all_instances().size(), 1u);
  EXPECT_EQ(p.scheduler().instance_count(), 1u);
}

TEST(Platform, RemoveWhileBusyCompletesInFlight) {
  Platform p(zero_config(), 1);
  p.deploy_function(fn("aes", 500));
  p.engine().run_until(4000);
  p.invoke("aes", 4000, 0, 0);
  p.engine().run_until(4100);
  p.remove_function("aes");
  const auto late = p.invoke("aes", 4100, 0, 0);
  drain(p);
  EXPECT_EQ(p.record(0).status, InvocationStatus::Ok);
  EXPECT_EQ(p.record(late).status, InvocationStatus::NoSuchFunction);
  EXPECT_TRUE(p.manager().all_instances().empty());
}

TEST(Platform, InvocationLogFormat) {
  Platform p(zero_config(), 1);
  p.deploy_function(fn("aes"));
  p.engine().run_until(4000);
  p.invoke("aes", 4000, 0, 0);
  p.invoke("ghost", 4000, 0, 0);
  drain(p);
  std::ostringstream os;
  p.write_invocation_log(os);
  EXPECT_EQ(os.str(),
            "id,function,submit_us,complete_us,e2e_us,exec_us,hop1_us,hop2_us,hop3_us,queue_us,"
            "status\n"
            "0,aes,4000,4100,100,100,0,0,0,0,ok\n"
            "1,ghost,4000,4000,0,0,0,0,,0,no-such-function\n");
}

TEST(ProviderCache, MatchesAuthoritativeTableOnRandomScripts) {
  for (PathKind kind : {PathKind::Bypass, PathKind::KernelStack}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      PlatformConfig c;
      c.kind = kind;
      c.container_startup_us = 2000;
      c.max_instances = 10;
      c.check_invariants = true;
      Platform p(c, seed);
      const auto st = oracle::run_cache_script(p, seed, 600);
      EXPECT_EQ(st.mismatches, 0);
      EXPECT_EQ(st.cache_mismatches, 0);
      EXPECT_LE(st.max_misses_between_writes, 1u);
      EXPECT_EQ(st.hops_violations, 0u);
      EXPECT_GT(st.resolves, 50);
      EXPECT_GT(st.invocations, 50u);
    }
  }
}

}  // namespace
}  // namespace faasim
