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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "faasim/config.hpp"
#include "faasim/experiments.hpp"
#include "faasim/metrics.hpp"
#include "faasim/report.hpp"
#include "faasim/scheduler.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace faasim {
namespace {

// Configs and results cross the boundary as JSON text; the Python package
// decodes them.

RunConfig parse_config(const std::string& text) {
  RunConfig cfg = RunConfig::from_json(json::parse(text));
  cfg.validate();
  return cfg;
}

json record_json(const InvocationRecord& r) {
  return {{"id", r.id},
          {"function", r.function},
          {"status", std::string(to_string(r.status))},
          {"submit_us", r.submit_t},
          {"complete_us", r.complete_t},
          {"e2e_us", r.e2e_us()},
          {"exec_us", r.exec_us},
          {"queue_us", r.queue_us},
          {"hops_us", r.hop_costs},
          {"instance_id", r.instance_id}};
}

json replica_json(const ReplicaRecord& r) {
  return {{"function", r.function},
          {"replicas", r.replicas},
          {"endpoint", r.endpoint.to_string()},
          {"instance_ids", r.instance_ids}};
}

json backend_json(const BackendSequential& b) {
  return {{"e2e_p50_us", b.e2e_p50},   {"e2e_p99_us", b.e2e_p99},
          {"exec_p50_us", b.exec_p50}, {"exec_p99_us", b.exec_p99},
          {"e2e_us", e2e_of(b.records)}, {"exec_us", exec_of(b.records)}};
}

json sweep_json(const BackendSweep& b) {
  json pts = json::array();
  for (const auto& p : b.result.points) {
    pts.push_back({{"rate_rps", p.rate_rps},
                   {"p50_us", p.p50_us},
                   {"p99_us", p.p99_us},
                   {"reject_frac", p.reject_frac},
                   {"saturated", p.saturated}});
  }
  return {{"zero_load_p50_us", b.result.zero_load_p50},
          {"max_unsaturated_rps", b.max_unsaturated_rps},
          {"points", pts}};
}

std::string compare_json(const std::string& cfg_text) {
  const auto r = compare_backends(parse_config(cfg_text));
  json reds;
  for (std::size_t i = 0; i < r.reductions.size(); ++i) {
    reds[std::string(CalibrationTargets::name(i))] = r.reductions[i];
  }
  return json{{"kernel", backend_json(r.kernel)},
              {"bypass", backend_json(r.bypass)},
              {"reductions_pct", reds}}
      .dump();
}

std::string sweep_text(const std::string& cfg_text) {
  const auto s = sweep_backends(parse_config(cfg_text));
  return json{{"kernel", sweep_json(s.kernel)},
              {"bypass", sweep_json(s.bypass)},
              {"throughput_ratio", s.throughput_ratio},
              {"comparison_rate_rps", s.comparison_rate},
              {"p50_ratio", s.p50_ratio},
              {"p99_ratio", s.p99_ratio}}
      .dump();
}

std::string calibrate_text(const std::string& cfg_text) {
  const RunConfig cfg = parse_config(cfg_text);
  return calibration_json(calibrate(cfg, cfg.targets), cfg.targets).dump();
}

std::string coldstart_text(const std::string& cfg_text) {
  const auto c = cold_starts(parse_config(cfg_text));
  return json{{"bypass_us", c.bypass_us}, {"kernel_us", c.kernel_us}}.dump();
}

std::string reproduce_text(const std::string& cfg_text, std::optional<std::string> out_dir) {
  const auto r = reproduce(parse_config(cfg_text));
  if (out_dir) emit_reports(r, *out_dir);
  return summary_json(r).dump();
}

std::map<InstanceId, int> allocate(const std::vector<std::map<std::string, std::int64_t>>& insts,
                                   int usable) {
  std::vector<InstanceSignals> sig;
  for (const auto& m : insts) {
    InstanceSignals s;
    const auto get = [&](const char* k, std::int64_t def) {
      auto it = m.find(k);
      return it == m.end() ? def : it->second;
    };
    s.instance_id = static_cast<InstanceId>(get("id", static_cast<std::int64_t>(sig.size())));
    s.runnable_threads = static_cast<int>(get("runnable", 0));
    s.eventq_pending = static_cast<int>(get("pending", 0));
    s.cap = static_cast<int>(get("cap", 1));
    sig.push_back(s);
  }
  return allocate_cores(sig, usable).cores;
}

/// Thin handle over one simulated host.
class PyPlatform {
 public:
  PyPlatform(const std::string& cfg_text, const std::string& kind)
      : cfg_(parse_config(cfg_text)),
        kind_(path_kind_from_string(kind)),
        p_(platform_for(cfg_, kind_), cfg_.seed) {}

  std::string deploy(const std::string& name, double service_us, double sigma, int max_cores,
                     const std::string& mechanism) {
    FunctionSpec f;
    f.name = name;
    f.service = sigma > 0.0 ? ServiceTimeModel::lognormal(service_us, sigma)
                            : ServiceTimeModel::constant(service_us);
    f.max_cores = max_cores;
    f.scale_mechanism = scale_mechanism_from_string(mechanism);
    return replica_json(p_.deploy_function(function_for(f, kind_))).dump();
  }
  std::string scale(const std::string& name, int n) {
    return replica_json(p_.scale_function(name, n)).dump();
  }
  void remove(const std::string& name) { p_.remove_function(name); }
  std::string resolve(const std::string& name) {
    return replica_json(p_.provider_resolve(name)).dump();
  }
  InvocationId invoke(const std::string& name, std::optional<Micros> at, std::uint64_t req,
                      std::uint64_t resp) {
    return p_.invoke(name, at.value_or(p_.engine().now()), req, resp);
  }
  void run_until(Micros t) { p_.engine().run_until(t); }
  void run_to_idle() { p_.engine().run_to_idle(std::numeric_limits<Micros>::max()); }
  Micros now() { return p_.engine().now(); }
  std::string record(InvocationId id) const { return record_json(p_.record(id)).dump(); }
  std::string counters() const {
    return json{{"injected", p_.injected()},
                {"completed", p_.completed()},
                {"rejected", p_.rejected()},
                {"in_flight", p_.in_flight()},
                {"manager_queries", p_.cache().total_manager_queries()},
                {"cache_hits", p_.cache().hits()}}
        .dump();
  }

 private:
  RunConfig cfg_;
  PathKind kind_;
  Platform p_;
};

}  // namespace
}  // namespace faasim

PYBIND11_MODULE(_faasim, m) {
  using namespace faasim;
  m.doc() = "faasim native core";

  static py::exception<Error> error(m, "FaasimError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, py::make_tuple(e.code(), e.what()));
    } catch (const json::exception& e) {
      py::set_error(error, py::make_tuple("config-error", e.what()));
    }
  });

  m.def("default_config", [] { return RunConfig{}.to_json().dump(); });
  m.def(
      "load_config",
      [](std::optional<std::string> path, const std::vector<std::string>& overrides) {
        std::optional<std::filesystem::path> p;
        if (path) p = *path;
        return load_config(p, overrides).to_json().dump();
      },
      py::arg("path") = py::none(), py::arg("overrides") = std::vector<std::string>{});
  m.def("config_digest", [](const std::string& c) { return hex_digest(parse_config(c).digest()); });
  m.def("compare_backends", &compare_json, py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep_text, py::call_guard<py::gil_scoped_release>());
  m.def("calibrate", &calibrate_text, py::call_guard<py::gil_scoped_release>());
  m.def("cold_starts", &coldstart_text);
  m.def("reproduce", &reproduce_text, py::arg("config"), py::arg("out_dir") = py::none(),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "percentile",
      [](const std::vector<Micros>& v, double p) { return percentile(v, p); }, py::arg("samples"),
      py::arg("p"));
  m.def("allocate_cores", &allocate, py::arg("instances"), py::arg("usable"));

  py::class_<PyPlatform>(m, "Platform")
      .def(py::init<const std::string&, const std::string&>(), py::arg("config"),
           py::arg("kind") = "bypass")
      .def("deploy", &PyPlatform::deploy, py::arg("name"), py::arg("service_us") = 120.0,
           py::arg("sigma") = 0.0, py::arg("max_cores") = 1,
           py::arg("mechanism") = "raise-core-cap")
      .def("scale", &PyPlatform::scale)
      .def("remove", &PyPlatform::remove)
      .def("resolve", &PyPlatform::resolve)
      .def("invoke", &PyPlatform::invoke, py::arg("name"), py::arg("at") = py::none(),
           py::arg("req_bytes") = 600, py::arg("resp_bytes") = 600)
      .def("run_until", &PyPlatform::run_until)
      .def("run_to_idle", &PyPlatform::run_to_idle)
      .def_property_readonly("now", &PyPlatform::now)
      .def("record", &PyPlatform::record)
      .def("counters", &PyPlatform::counters);
}
