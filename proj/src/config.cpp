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


#include "faasim/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

#include "faasim/rng.hpp"

namespace faasim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, v] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key " + std::string(where) + "." + key);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for ") + key + ": " + e.what());
  }
}

DistSpec dist_from_json(const json& j, std::string_view where) {
  check_keys(j, where, {"kind", "value", "mean", "median", "rate", "mu", "sigma"});
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") return DistSpec::constant(j.value("value", j.value("mean", 0.0)));
  if (kind == "exponential") {
    if (j.contains("rate")) return DistSpec::exponential(j.at("rate").get<double>());
    const double mean = j.value("mean", 40.0);
    if (!(mean > 0.0)) throw InvalidDistribution("exponential mean must be positive");
    return DistSpec::exponential(1.0 / mean);
  }
  if (kind == "lognormal") {
    const double sigma = j.value("sigma", 1.0);
    if (!(sigma > 0.0)) throw InvalidDistribution("lognormal sigma must be positive");
    if (j.contains("mu")) return DistSpec::lognormal(j.at("mu").get<double>(), sigma);
    if (j.contains("median")) return DistSpec::lognormal_with_median(j.at("median").get<double>(), sigma);
    return DistSpec::lognormal_with_mean(j.value("mean", 40.0), sigma);
  }
  throw ConfigError("unknown distribution kind: " + kind);
}

ServiceTimeModel service_from_json(const json& j) {
  check_keys(j, "service", {"kind", "median_us", "sigma"});
  ServiceTimeModel m;
  const std::string kind = j.value("kind", "lognormal");
  if (kind == "constant") {
    m.kind = ServiceTimeModel::Kind::Constant;
    m.sigma = 0.0;
  } else if (kind != "lognormal") {
    throw ConfigError("unknown service kind: " + kind);
  }
  read(j, "median_us", m.median_us);
  read(j, "sigma", m.sigma);
  return m;
}

json service_to_json(const ServiceTimeModel& m) {
  json j = {{"kind", m.kind == ServiceTimeModel::Kind::Constant ? "constant" : "lognormal"},
            {"median_us", m.median_us}};
  if (m.kind == ServiceTimeModel::Kind::Lognormal) j["sigma"] = m.sigma;
  return j;
}

FunctionSpec function_from_json(const json& j) {
  check_keys(j, "functions[]", {"name", "service", "max_cores", "scale_mechanism", "backend"});
  FunctionSpec f;
  read(j, "name", f.name);
  if (j.contains("service")) f.service = service_from_json(j.at("service"));
  read(j, "max_cores", f.max_cores);
  if (j.contains("scale_mechanism")) {
    f.scale_mechanism = scale_mechanism_from_string(j.at("scale_mechanism").get<std::string>());
  }
  if (j.contains("backend")) f.backend = path_kind_from_string(j.at("backend").get<std::string>());
  return f;
}

json function_to_json(const FunctionSpec& f) {
  return {{"name", f.name},
          {"service", service_to_json(f.service)},
          {"max_cores", f.max_cores},
          {"scale_mechanism", std::string(to_string(f.scale_mechanism))},
          {"backend", std::string(backend_label(f.backend))}};
}

}  // namespace

std::string_view CalibrationTargets::name(std::size_t i) {
  static constexpr std::array<std::string_view, kCount> kNames{
      "e2e_median", "e2e_p99", "exec_median", "exec_p99"};
  return kNames.at(i);
}

std::string_view to_string(CalibParam p) {
  switch (p) {
    case CalibParam::WireCost: return "wire_cost";
    case CalibParam::InterruptCost: return "interrupt_cost";
    case CalibParam::CtxSwitchCost: return "ctx_switch_cost";
    case CalibParam::JitterMean: return "jitter_mean";
    case CalibParam::MuxFactor: return "mux_overhead_factor";
  }
  return "unknown";
}

CalibParam calib_param_from_string(std::string_view text) {
  for (auto p : {CalibParam::WireCost, CalibParam::InterruptCost, CalibParam::CtxSwitchCost,
                 CalibParam::JitterMean, CalibParam::MuxFactor}) {
    if (to_string(p) == text) return p;
  }
  throw ConfigError("unknown calibration parameter: " + std::string(text));
}

json to_json(const DistSpec& d) {
  switch (d.kind) {
    case DistSpec::Kind::Constant: return {{"kind", "constant"}, {"value", d.value}};
    case DistSpec::Kind::Exponential: return {{"kind", "exponential"}, {"mean", d.mean()}};
    case DistSpec::Kind::Lognormal:
      return {{"kind", "lognormal"}, {"mean", d.mean()}, {"sigma", d.sigma}};
  }
  return {};
}

json to_json(const PathParams& p) {
  return {{"trap_cost", p.trap_cost},
          {"ctx_switch_cost", p.ctx_switch_cost},
          {"interrupt_cost", p.interrupt_cost},
          {"poll_dispatch_cost", p.poll_dispatch_cost},
          {"copy_cost_per_kb", p.copy_cost_per_kb},
          {"wire_cost", p.wire_cost}};
}

json to_json(const ComputeParams& c) {
  return {{"mux_overhead_factor", c.mux_overhead_factor}, {"jitter", to_json(c.jitter)}};
}

const FunctionSpec& RunConfig::target_function() const {
  for (const auto& f : functions) {
    if (f.name == workload.function) return f;
  }
  throw ConfigError("workload function " + workload.function + " is not defined");
}

void RunConfig::validate() const {
  platform.validate();
  std::set<std::string> names;
  for (const auto& f : functions) {
    f.validate();
    if (!names.insert(f.name).second) throw ConfigError("duplicate function " + f.name);
  }
  workload.validate();
  target_function();
  if (calibration.max_rounds < 0 || !(calibration.initial_step > 0.0) ||
      !(calibration.min_step > 0.0) || calibration.tolerance_pp < 0.0) {
    throw ConfigError("invalid calibration options");
  }
}

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["platform"] = {{"kind", std::string(backend_label(platform.kind))},
                   {"junction_init_us", platform.junction_init_us},
                   {"container_startup_us", platform.container_startup_us},
                   {"container_cores", platform.container_cores},
                   {"queue_cap", platform.queue_cap},
                   {"max_instances", platform.max_instances},
                   {"check_invariants", platform.check_invariants}};
  j["net"] = faasim::to_json(platform.net);
  j["compute"] = faasim::to_json(platform.compute);
  j["scheduler"] = {{"total_cores", platform.scheduler.total_cores},
                    {"reserved", platform.scheduler.reserved},
                    {"timeslice_us", platform.scheduler.timeslice_us},
                    {"tick_us", platform.scheduler.tick_us}};
  j["functions"] = json::array();
  for (const auto& f : functions) j["functions"].push_back(function_to_json(f));
  j["workload"] = {{"mode", std::string(to_string(workload.mode))},
                   {"function", workload.function},
                   {"count", workload.count},
                   {"rates", workload.rates},
                   {"duration_us", workload.duration_us},
                   {"payload_bytes", workload.payload_bytes},
                   {"response_bytes", workload.response_bytes},
                   {"warmup_frac", workload.warmup_frac},
                   {"reject_limit", workload.reject_limit},
                   {"tail_limit", workload.tail_limit}};
  json targets_j = json::object();
  for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
    if (targets.active[i]) targets_j[std::string(CalibrationTargets::name(i))] = targets.value[i];
  }
  json free_j = json::array();
  for (auto p : calibration.free) free_j.push_back(std::string(to_string(p)));
  j["calibration"] = {{"enabled", calibration.enabled},
                      {"targets", targets_j},
                      {"free", free_j},
                      {"max_rounds", calibration.max_rounds},
                      {"initial_step", calibration.initial_step},
                      {"min_step", calibration.min_step},
                      {"tolerance_pp", calibration.tolerance_pp}};
  j["out_dir"] = out_dir;
  return j;
}

RunConfig RunConfig::from_json(const json& doc) {
  check_keys(doc, "config", {"seed", "platform", "net", "compute", "scheduler", "functions",
                             "workload", "calibration", "out_dir"});
  RunConfig c;
  read(doc, "seed", c.seed);
  read(doc, "out_dir", c.out_dir);
  if (auto it = doc.find("platform"); it != doc.end()) {
    check_keys(*it, "platform", {"kind", "junction_init_us", "container_startup_us",
                                 "container_cores", "queue_cap", "max_instances",
                                 "check_invariants"});
    if (it->contains("kind")) c.platform.kind = path_kind_from_string(it->at("kind").get<std::string>());
    read(*it, "junction_init_us", c.platform.junction_init_us);
    read(*it, "container_startup_us", c.platform.container_startup_us);
    read(*it, "container_cores", c.platform.container_cores);
    read(*it, "queue_cap", c.platform.queue_cap);
    read(*it, "max_instances", c.platform.max_instances);
    read(*it, "check_invariants", c.platform.check_invariants);
  }
  if (auto it = doc.find("net"); it != doc.end()) {
    check_keys(*it, "net", {"trap_cost", "ctx_switch_cost", "interrupt_cost",
                            "poll_dispatch_cost", "copy_cost_per_kb", "wire_cost"});
    auto& n = c.platform.net;
    read(*it, "trap_cost", n.trap_cost);
    read(*it, "ctx_switch_cost", n.ctx_switch_cost);
    read(*it, "interrupt_cost", n.interrupt_cost);
    read(*it, "poll_dispatch_cost", n.poll_dispatch_cost);
    read(*it, "copy_cost_per_kb", n.copy_cost_per_kb);
    read(*it, "wire_cost", n.wire_cost);
  }
  if (auto it = doc.find("compute"); it != doc.end()) {
    check_keys(*it, "compute", {"mux_overhead_factor", "jitter"});
    read(*it, "mux_overhead_factor", c.platform.compute.mux_overhead_factor);
    if (it->contains("jitter")) c.platform.compute.jitter = dist_from_json(it->at("jitter"), "compute.jitter");
  }
  if (auto it = doc.find("scheduler"); it != doc.end()) {
    check_keys(*it, "scheduler", {"total_cores", "reserved", "timeslice_us", "tick_us"});
    auto& s = c.platform.scheduler;
    read(*it, "total_cores", s.total_cores);
    read(*it, "reserved", s.reserved);
    read(*it, "timeslice_us", s.timeslice_us);
    read(*it, "tick_us", s.tick_us);
  }
  if (auto it = doc.find("functions"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("functions must be an array");
    c.functions.clear();
    for (const auto& f : *it) c.functions.push_back(function_from_json(f));
  }
  if (auto it = doc.find("workload"); it != doc.end()) {
    check_keys(*it, "workload", {"mode", "function", "count", "rates", "duration_us",
                                 "payload_bytes", "response_bytes", "warmup_frac",
                                 "reject_limit", "tail_limit"});
    auto& w = c.workload;
    if (it->contains("mode")) w.mode = workload_mode_from_string(it->at("mode").get<std::string>());
    read(*it, "function", w.function);
    read(*it, "count", w.count);
    read(*it, "rates", w.rates);
    read(*it, "duration_us", w.duration_us);
    read(*it, "payload_bytes", w.payload_bytes);
    read(*it, "response_bytes", w.response_bytes);
    read(*it, "warmup_frac", w.warmup_frac);
    read(*it, "reject_limit", w.reject_limit);
    read(*it, "tail_limit", w.tail_limit);
  }
  if (auto it = doc.find("calibration"); it != doc.end()) {
    check_keys(*it, "calibration", {"enabled", "targets", "free", "max_rounds", "initial_step",
                                    "min_step", "tolerance_pp"});
    auto& o = c.calibration;
    read(*it, "enabled", o.enabled);
    read(*it, "max_rounds", o.max_rounds);
    read(*it, "initial_step", o.initial_step);
    read(*it, "min_step", o.min_step);
    read(*it, "tolerance_pp", o.tolerance_pp);
    if (it->contains("free")) {
      o.free.clear();
      for (const auto& p : it->at("free")) o.free.push_back(calib_param_from_string(p.get<std::string>()));
    }
    if (it->contains("targets")) {
      const auto& t = it->at("targets");
      check_keys(t, "calibration.targets", {"e2e_median", "e2e_p99", "exec_median", "exec_p99"});
      for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
        const std::string key(CalibrationTargets::name(i));
        c.targets.active[i] = t.contains(key);
        if (t.contains(key)) c.targets.value[i] = t.at(key).get<double>();
      }
    }
  }
  c.validate();
  return c;
}

std::uint64_t RunConfig::digest() const {
  json j = to_json();
  j.erase("out_dir");
  return fnv1a64(j.dump());
}

std::string hex_digest(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + std::string(assignment));
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t pos = 0;
  for (;;) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError("empty path segment in override " + key);
    const bool is_index = part.find_first_not_of("0123456789") == std::string::npos;
    json* next = nullptr;
    if (is_index && node->is_array()) {
      const auto idx = std::stoul(part);
      if (idx >= node->size()) throw ConfigError("override index out of range: " + key);
      next = &(*node)[idx];
    } else {
      if (!node->is_object()) throw ConfigError("override path is not an object: " + key);
      next = &(*node)[part];
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    pos = dot + 1;
  }
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  json doc = RunConfig{}.to_json();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config " + path->string());
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded()) throw ConfigError("config is not valid JSON: " + path->string());
    check_keys(file, "config", {"seed", "platform", "net", "compute", "scheduler", "functions",
                                "workload", "calibration", "out_dir"});
    // Sections merge key by key; arrays replace.
    for (auto& [key, v] : file.items()) {
      if (v.is_object() && doc[key].is_object()) {
        for (auto& [k2, v2] : v.items()) doc[key][k2] = v2;
      } else {
        doc[key] = v;
      }
    }
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return RunConfig::from_json(doc);
}

}  // namespace faasim
