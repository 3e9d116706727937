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
#include <queue>
#include <string_view>
#include <vector>

#include "faasim/types.hpp"

namespace faasim {

enum class EventKind : std::uint8_t {
  PacketArrival,
  RpcComplete,
  SchedulerTick,
  InstanceReady,
  ServiceComplete,
  LoadArrival,
};

std::string_view to_string(EventKind kind);

struct TraceEntry {
  Micros time = 0;
  EventKind kind = EventKind::LoadArrival;
  std::uint64_t detail = 0;

  bool operator==(const TraceEntry&) const = default;
};

/// Dispatch record of a run. `digest` folds every dispatch even when
/// entry recording is switched off.
struct Trace {
  std::vector<TraceEntry> entries;
  std::uint64_t digest = 0xcbf29ce484222325ULL;

  void append(const TraceEntry& entry, bool keep);
  void write_csv(std::ostream& out) const;
};

/// Monotone virtual clock.
class VirtualClock {
 public:
  Micros now() const noexcept { return now_; }
  void advance_to(Micros t);

 private:
  Micros now_ = 0;
};

/// Single-threaded discrete-event engine. Events fire in (fire_at, seq)
/// order; seq is assigned at scheduling time.
class Engine {
 public:
  using Handler = std::function<void()>;
  /// Called after every dispatch; used by invariant checkers.
  using Observer = std::function<void(const TraceEntry&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Micros now() const noexcept { return clock_.now(); }

  /// Throws ContractViolation if `fire_at` is in the past.
  std::uint64_t schedule(Micros fire_at, EventKind kind, std::uint64_t detail, Handler handler);

  /// Dispatches every event with fire_at <= t_end and leaves the clock at t_end.
  Trace run_until(Micros t_end);
  /// Dispatches until the queue is empty or `limit` is reached; returns the
  /// number of dispatched events. The clock stays at the last dispatch.
  std::uint64_t run_to_idle(Micros limit);

  /// True while an event handler runs.
  bool dispatching() const noexcept { return dispatching_; }
  bool empty() const noexcept { return queue_.empty(); }
  std::size_t pending() const noexcept { return queue_.size(); }
  std::uint64_t scheduled_count() const noexcept { return scheduled_; }
  std::uint64_t dispatched_count() const noexcept { return dispatched_; }
  Micros next_time() const;

  void set_trace_recording(bool on) noexcept { record_ = on; }
  const Trace& trace() const noexcept { return trace_; }
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  struct Event {
    Micros fire_at;
    std::uint64_t seq;
    EventKind kind;
    std::uint64_t detail;
    Handler handler;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.fire_at != b.fire_at ? a.fire_at > b.fire_at : a.seq > b.seq;
    }
  };

  void dispatch_one(Trace* segment);

  VirtualClock clock_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t dispatched_ = 0;
  bool record_ = true;
  bool dispatching_ = false;
  Trace trace_;
  Observer observer_;
};

}  // namespace faasim
