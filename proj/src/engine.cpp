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

#include "faasim/engine.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

namespace faasim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::RpcComplete: return "rpc-complete";
    case EventKind::SchedulerTick: return "scheduler-tick";
    case EventKind::InstanceReady: return "instance-ready";
    case EventKind::ServiceComplete: return "service-complete";
    case EventKind::LoadArrival: return "load-arrival";
  }
  return "unknown";
}

namespace {

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void Trace::append(const TraceEntry& entry, bool keep) {
  digest = fnv_mix(digest, static_cast<std::uint64_t>(entry.time));
  digest = fnv_mix(digest, static_cast<std::uint64_t>(entry.kind));
  digest = fnv_mix(digest, entry.detail);
  if (keep) entries.push_back(entry);
}

void Trace::write_csv(std::ostream& out) const {
  out << "time_us,kind,detail\n";
  for (const auto& e : entries) {
    out << e.time << ',' << to_string(e.kind) << ',' << e.detail << '\n';
  }
}

void VirtualClock::advance_to(Micros t) {
  if (t < now_) {
    throw ContractViolation("virtual clock cannot move backwards: now=" + std::to_string(now_) +
                            " requested=" + std::to_string(t));
  }
  now_ = t;
}

std::uint64_t Engine::schedule(Micros fire_at, EventKind kind, std::uint64_t detail,
                               Handler handler) {
  if (fire_at < clock_.now()) {
    throw ContractViolation("event scheduled in the past: fire_at=" + std::to_string(fire_at) +
                            " now=" + std::to_string(clock_.now()));
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{fire_at, seq, kind, detail, std::move(handler)});
  ++scheduled_;
  return seq;
}

Micros Engine::next_time() const {
  return queue_.empty() ? std::numeric_limits<Micros>::max() : queue_.top().fire_at;
}

void Engine::dispatch_one(Trace* segment) {
  // Moving out of top() is safe because the element is popped right after.
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  clock_.advance_to(ev.fire_at);
  ++dispatched_;
  const TraceEntry entry{ev.fire_at, ev.kind, ev.detail};
  trace_.append(entry, record_);
  if (segment != nullptr) segment->append(entry, record_);
  {
    struct Flag {
      bool& f;
      explicit Flag(bool& b) : f(b) { f = true; }
      ~Flag() { f = false; }
    } in_handler(dispatching_);
    if (ev.handler) ev.handler();
  }
  if (observer_) observer_(entry);
}

Trace Engine::run_until(Micros t_end) {
  if (t_end < clock_.now()) {
    throw ContractViolation("run_until target in the past: t_end=" + std::to_string(t_end) +
                            " now=" + std::to_string(clock_.now()));
  }
  Trace segment;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) dispatch_one(&segment);
  clock_.advance_to(t_end);
  return segment;
}

std::uint64_t Engine::run_to_idle(Micros limit) {
  std::uint64_t n = 0;
  while (!queue_.empty() && queue_.top().fire_at <= limit) {
    dispatch_one(nullptr);
    ++n;
  }
  return n;
}

}  // namespace faasim
