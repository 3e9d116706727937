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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "faasim/config.hpp"
#include "faasim/controlplane.hpp"

namespace faasim {

/// One scripted write or load action at a virtual time.
struct ScenarioAction {
  enum class Op { Deploy, Scale, Remove, InvokeBurst };
  Micros at = 0;
  Op op = Op::Deploy;
  std::string function;
  std::optional<FunctionSpec> spec;  // deploy
  int scale = 1;                     // scale
  int count = 1;                     // invoke-burst
  Micros interval_us = 0;            // invoke-burst
};

std::string_view to_string(ScenarioAction::Op op);

struct Scenario {
  std::optional<PathKind> backend;  // defaults to the platform kind
  std::vector<ScenarioAction> actions;

  /// {"backend": ..., "actions": [{"at", "op", ...}]}.
  static Scenario from_json(const nlohmann::json& doc);
};

struct ActionOutcome {
  Micros at = 0;
  std::string op;
  std::string function;
  /// Empty on success, otherwise the error code.
  std::string error;
  std::optional<ReplicaRecord> record;
};

struct ScenarioResult {
  std::vector<ActionOutcome> outcomes;
  std::unique_ptr<Platform> platform;  // drained, for inspection
};

/// Applies the actions in time order (stable for ties) and drains the
/// platform. Failed writes are recorded, not thrown.
ScenarioResult run_scenario(const RunConfig& cfg, const Scenario& scenario);

nlohmann::json outcomes_json(const std::vector<ActionOutcome>& outcomes);

}  // namespace faasim
