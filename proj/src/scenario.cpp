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


#include "faasim/scenario.hpp"

#include <algorithm>
#include <limits>

#include "faasim/experiments.hpp"

namespace faasim {

using nlohmann::json;

std::string_view to_string(ScenarioAction::Op op) {
  switch (op) {
    case ScenarioAction::Op::Deploy: return "deploy";
    case ScenarioAction::Op::Scale: return "scale";
    case ScenarioAction::Op::Remove: return "remove";
    case ScenarioAction::Op::InvokeBurst: return "invoke-burst";
  }
  return "unknown";
}

Scenario Scenario::from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("actions") || !doc.at("actions").is_array()) {
    throw ConfigError("scenario needs an \"actions\" array");
  }
  Scenario s;
  if (doc.contains("backend")) s.backend = path_kind_from_string(doc.at("backend").get<std::string>());
  for (const auto& a : doc.at("actions")) {
    ScenarioAction act;
    act.at = a.value("at", Micros{0});
    const std::string op = a.value("op", "");
    if (op == "deploy") {
      act.op = ScenarioAction::Op::Deploy;
      // Reuse the config parser for the function body.
      json cfg = {{"functions", json::array({a.at("function")})},
                  {"workload", {{"function", a.at("function").value("name", "")}}}};
      act.spec = RunConfig::from_json(cfg).functions.front();
      act.function = act.spec->name;
    } else if (op == "scale") {
      act.op = ScenarioAction::Op::Scale;
      act.function = a.at("function").get<std::string>();
      act.scale = a.at("scale").get<int>();
    } else if (op == "remove") {
      act.op = ScenarioAction::Op::Remove;
      act.function = a.at("function").get<std::string>();
    } else if (op == "invoke-burst") {
      act.op = ScenarioAction::Op::InvokeBurst;
      act.function = a.at("function").get<std::string>();
      act.count = a.value("count", 1);
      act.interval_us = a.value("interval_us", Micros{0});
      if (act.count < 0 || act.interval_us < 0) throw ConfigError("bad invoke-burst");
    } else {
      throw ConfigError("unknown scenario op: " + op);
    }
    if (act.at < 0) throw ConfigError("scenario action time must be non-negative");
    s.actions.push_back(std::move(act));
  }
  return s;
}

ScenarioResult run_scenario(const RunConfig& cfg, const Scenario& scenario) {
  const PathKind kind = scenario.backend.value_or(cfg.platform.kind);
  ScenarioResult result;
  result.platform = std::make_unique<Platform>(platform_for(cfg, kind), cfg.seed);
  Platform& p = *result.platform;

  auto actions = scenario.actions;
  std::stable_sort(actions.begin(), actions.end(),
                   [](const ScenarioAction& a, const ScenarioAction& b) { return a.at < b.at; });
  const auto req = cfg.workload.payload_bytes;
  const auto resp = cfg.workload.response_bytes;
  for (const auto& a : actions) {
    p.engine().run_until(a.at);
    ActionOutcome out{a.at, std::string(to_string(a.op)), a.function, {}, std::nullopt};
    try {
      switch (a.op) {
        case ScenarioAction::Op::Deploy:
          out.record = p.deploy_function(function_for(*a.spec, kind));
          break;
        case ScenarioAction::Op::Scale:
          out.record = p.scale_function(a.function, a.scale);
          break;
        case ScenarioAction::Op::Remove:
          p.remove_function(a.function);
          break;
        case ScenarioAction::Op::InvokeBurst:
          for (int k = 0; k < a.count; ++k) p.invoke(a.function, a.at + k * a.interval_us, req, resp);
          break;
      }
    } catch (const Error& e) {
      out.error = e.code();
    }
    result.outcomes.push_back(std::move(out));
  }
  p.engine().run_to_idle(std::numeric_limits<Micros>::max());
  return result;
}

json outcomes_json(const std::vector<ActionOutcome>& outcomes) {
  json arr = json::array();
  for (const auto& o : outcomes) {
    json j = {{"at", o.at}, {"op", o.op}, {"function", o.function}};
    if (!o.error.empty()) j["error"] = o.error;
    if (o.record) {
      j["replicas"] = o.record->replicas;
      j["endpoint"] = o.record->endpoint.to_string();
      j["instance_ids"] = o.record->instance_ids;
    }
    arr.push_back(j);
  }
  return arr;
}

}  // namespace faasim
