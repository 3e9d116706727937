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

#include <algorithm>
#include <vector>

#include "faasim/netmodel.hpp"
#include "faasim/service.hpp"
#include "helpers.hpp"

namespace faasim {
namespace {

using testing::zero_path;

constexpr PathKind kKinds[] = {PathKind::KernelStack, PathKind::Bypass};

TEST(NetModel, AllZeroParamsCostNothing) {
  for (PathKind k : kKinds) {
    for (std::uint64_t bytes : {0u, 600u, 1u << 20}) {
      EXPECT_EQ(one_way_packet_cost(k, bytes, zero_path()), 0.0);
    }
  }
}

TEST(NetModel, PathsCoincideWithoutKernelOverheads) {
  PathParams p = zero_path();
  p.wire_cost = 7.0;
  p.copy_cost_per_kb = 0.4;
  for (std::uint64_t bytes : {0u, 600u, 4096u}) {
    EXPECT_DOUBLE_EQ(one_way_packet_cost(PathKind::KernelStack, bytes, p),
                     one_way_packet_cost(PathKind::Bypass, bytes, p));
  }
}

TEST(NetModel, DefaultTableFormulas) {
  const PathParams p;
  const double copy = 0.3 * 600.0 / 1024.0;
  const double kernel = 5.0 + 0.5 + 2.0 + 3.0 + copy;
  const double bypass = 5.0 + 0.2 + copy;
  EXPECT_DOUBLE_EQ(one_way_packet_cost(PathKind::KernelStack, 600, p), kernel);
  EXPECT_DOUBLE_EQ(one_way_packet_cost(PathKind::Bypass, 600, p), bypass);
  EXPECT_GT(kernel, bypass);
}

TEST(NetModel, RpcIsSumOfLegs) {
  PathParams p = zero_path();
  p.wire_cost = 10.0;
  EXPECT_DOUBLE_EQ(rpc_cost(PathKind::Bypass, 0, 0, p), 20.0);
  EXPECT_DOUBLE_EQ(rpc_cost(PathKind::KernelStack, 0, 0, p), 20.0);
  const PathParams d;
  for (PathKind k : kKinds) {
    EXPECT_DOUBLE_EQ(rpc_cost(k, 600, 600, d), 2.0 * one_way_packet_cost(k, 600, d));
    EXPECT_DOUBLE_EQ(rpc_cost(k, 100, 900, d),
                     one_way_packet_cost(k, 100, d) + one_way_packet_cost(k, 900, d));
  }
}

TEST(NetModel, HopIsRoundedHalfUp) {
  PathParams p = zero_path();
  p.wire_cost = 1.25;
  EXPECT_EQ(rpc_hop_us(PathKind::Bypass, 0, 0, p), 3);  // 2.5 -> 3
  p.wire_cost = 1.2;
  EXPECT_EQ(rpc_hop_us(PathKind::Bypass, 0, 0, p), 2);
}

TEST(NetModel, StrictDominanceProperty) {
  testing::Gen g(101);
  for (int i = 0; i < 2000; ++i) {
    PathParams p;
    p.wire_cost = g.uniform() * 50;
    p.copy_cost_per_kb = g.uniform() * 2;
    p.poll_dispatch_cost = g.uniform() * 2;
    p.trap_cost = g.uniform() * 3;
    p.interrupt_cost = g.uniform() * 3;
    p.ctx_switch_cost = g.uniform() * 3;
    if (p.trap_cost + p.interrupt_cost + p.ctx_switch_cost <= p.poll_dispatch_cost) continue;
    const auto bytes = static_cast<std::uint64_t>(g.range(0, 100000));
    ASSERT_GT(one_way_packet_cost(PathKind::KernelStack, bytes, p),
              one_way_packet_cost(PathKind::Bypass, bytes, p));
  }
}

TEST(NetModel, MonotoneInPayloadAndParameters) {
  testing::Gen g(202);
  for (int i = 0; i < 1000; ++i) {
    PathParams p;
    p.wire_cost = g.uniform() * 20;
    p.copy_cost_per_kb = g.uniform();
    const auto a = static_cast<std::uint64_t>(g.range(0, 5000));
    const auto b = a + static_cast<std::uint64_t>(g.range(0, 5000));
    for (PathKind k : kKinds) {
      ASSERT_LE(one_way_packet_cost(k, a, p), one_way_packet_cost(k, b, p));
      ASSERT_LE(rpc_cost(k, a, a, p), rpc_cost(k, b, b, p));
      PathParams q = p;
      double* fields[] = {&q.trap_cost, &q.ctx_switch_cost, &q.interrupt_cost,
                          &q.poll_dispatch_cost, &q.copy_cost_per_kb, &q.wire_cost};
      *fields[g.range(0, 5)] += g.uniform() * 5;
      ASSERT_LE(one_way_packet_cost(k, a, p), one_way_packet_cost(k, a, q));
    }
  }
}

TEST(NetModel, ZeroOverheadServiceTimesMatch) {
  ComputeParams c = testing::no_overhead_compute();
  RngStream r(1, "j");
  EXPECT_EQ(service_time(PathKind::KernelStack, 100.0, c, r), 100.0);
  EXPECT_EQ(service_time(PathKind::Bypass, 100.0, c, r), 100.0);
}

TEST(NetModel, FactorGivesMedianExecReduction) {
  ComputeParams c;
  c.mux_overhead_factor = 1.546;
  c.jitter = DistSpec::constant(0.0);
  RngStream r(1, "j");
  const double kernel = service_time(PathKind::KernelStack, 100.0, c, r);
  EXPECT_NEAR(kernel, 154.6, 1e-9);
  EXPECT_NEAR((kernel - 100.0) / kernel * 100.0, 35.3, 0.05);
  EXPECT_EQ(service_time(PathKind::Bypass, 100.0, c, r), 100.0);
}

TEST(NetModel, ExponentialJitterTailExceedsMedian) {
  const ComputeParams c;  // factor 1.546, exponential jitter mean 40
  RngStream r(77, "jitter");
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) {
    const double s = service_time(PathKind::KernelStack, 100.0, c, r);
    ASSERT_GE(s, 100.0);
    v.push_back(s);
  }
  std::sort(v.begin(), v.end());
  EXPECT_GT(v[98999], v[49999]);
}

TEST(NetModel, BypassNeverDraws) {
  const ComputeParams c;
  RngStream r(3, "j");
  service_time(PathKind::Bypass, 50.0, c, r);
  EXPECT_EQ(r.index(), 0u);
}

TEST(NetModel, ValidationRejectsNegativeAndSubunitFactor) {
  PathParams p;
  p.wire_cost = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  ComputeParams c;
  c.mux_overhead_factor = 0.9;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(NetModel, PathKindNames) {
  EXPECT_EQ(path_kind_from_string("bypass"), PathKind::Bypass);
  EXPECT_EQ(path_kind_from_string("KernelStack"), PathKind::KernelStack);
  EXPECT_EQ(path_kind_from_string("kernel"), PathKind::KernelStack);
  EXPECT_THROW(path_kind_from_string("rdma"), ConfigError);
}

TEST(ServiceSampler, KernelFactorRoundsHalfUp) {
  ComputeParams c;
  c.mux_overhead_factor = 1.546;
  c.jitter = DistSpec::constant(0.0);
  ServiceSampler s(1, "aes", ServiceTimeModel::constant(100.0));
  EXPECT_EQ(s.sample(PathKind::KernelStack, c), 155);
  EXPECT_EQ(s.sample(PathKind::Bypass, c), 100);
}

TEST(ServiceSampler, BackendsSeeTheSameBaseSequence) {
  ComputeParams c = testing::no_overhead_compute();
  ServiceSampler a(8, "aes", ServiceTimeModel::lognormal(120, 0.25));
  ServiceSampler b(8, "aes", ServiceTimeModel::lognormal(120, 0.25));
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.sample(PathKind::KernelStack, c), b.sample(PathKind::Bypass, c));
  }
}

}  // namespace
}  // namespace faasim
