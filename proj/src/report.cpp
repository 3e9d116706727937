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


#include "faasim/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace faasim {

using nlohmann::json;

namespace {

std::string num(double v, const char* f = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

json backend_json(const BackendSequential& b) {
  return {{"e2e_p50_us", b.e2e_p50}, {"e2e_p99_us", b.e2e_p99},
          {"exec_p50_us", b.exec_p50}, {"exec_p99_us", b.exec_p99},
          {"invocations", b.records.size()}};
}

json reductions_json(const std::array<double, 4>& v) {
  json j;
  for (std::size_t i = 0; i < v.size(); ++i) j[std::string(CalibrationTargets::name(i))] = v[i];
  return j;
}

}  // namespace

std::string cdf_csv(const std::vector<Micros>& samples) {
  std::string out = "latency_us,cum_frac\n";
  for (const auto& p : empirical_cdf(samples)) {
    out += std::to_string(p.latency_us) + "," + num(p.cum_frac) + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  if (points.empty()) throw EmptySamples("sweep has no points");
  std::string out = "rate_rps,p50_us,p99_us,reject_frac\n";
  for (const auto& p : points) {
    out += num(p.rate_rps, "%.3f") + "," + std::to_string(p.p50_us) + "," +
           std::to_string(p.p99_us) + "," + num(p.reject_frac) + "\n";
  }
  return out;
}

std::string invocation_log_csv(const std::vector<InvocationRecord>& records) {
  std::ostringstream os;
  write_invocation_log(os, records);
  return os.str();
}

json calibration_json(const CalibrationResult& c, const CalibrationTargets& targets) {
  json t;
  for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
    if (targets.active[i]) t[std::string(CalibrationTargets::name(i))] = targets.value[i];
  }
  return {{"net", to_json(c.net)},
          {"compute", to_json(c.compute)},
          {"targets_pct", t},
          {"achieved_pct", reductions_json(c.achieved)},
          {"residual_pp", reductions_json(c.residual)},
          {"objective", c.objective},
          {"rounds", c.rounds},
          {"evaluations", c.evaluations},
          {"converged", c.converged},
          {"notes", c.notes}};
}

json summary_json(const ReproduceReport& r) {
  const RunConfig& cfg = r.effective;
  json j;
  j["seed"] = cfg.seed;
  j["config_digest"] = hex_digest(cfg.digest());
  j["params_source"] = r.calibration ? "calibrated" : "config";
  j["params"] = {{"net", to_json(cfg.platform.net)}, {"compute", to_json(cfg.platform.compute)}};
  if (r.calibration) j["calibration"] = calibration_json(*r.calibration, cfg.targets);
  if (r.comparison) {
    const auto& c = *r.comparison;
    json targets;
    for (std::size_t i = 0; i < CalibrationTargets::kCount; ++i) {
      targets[std::string(CalibrationTargets::name(i))] = cfg.targets.value[i];
    }
    j["sequential"] = {{"kernel", backend_json(c.kernel)},
                       {"bypass", backend_json(c.bypass)},
                       {"reductions_pct", reductions_json(c.reductions)},
                       {"reference_pct", targets}};
  }
  if (r.sweep) {
    const auto& s = *r.sweep;
    j["sweep"] = {{"arrivals", "poisson"},
                  {"kernel_max_unsaturated_rps", s.kernel.max_unsaturated_rps},
                  {"bypass_max_unsaturated_rps", s.bypass.max_unsaturated_rps},
                  {"throughput_ratio", s.throughput_ratio},
                  {"comparison_rate_rps", s.comparison_rate},
                  {"p50_ratio", s.p50_ratio},
                  {"p99_ratio", s.p99_ratio},
                  {"kernel_zero_load_p50_us", s.kernel.result.zero_load_p50},
                  {"bypass_zero_load_p50_us", s.bypass.result.zero_load_p50}};
  }
  if (r.coldstart) {
    j["coldstart"] = {{"bypass_us", r.coldstart->bypass_us}, {"kernel_us", r.coldstart->kernel_us}};
  }
  return j;
}

std::map<std::string, std::string> render_reports(const ReproduceReport& r) {
  std::map<std::string, std::string> files;
  if (r.comparison) {
    for (const auto* b : {&r.comparison->kernel, &r.comparison->bypass}) {
      const std::string label(backend_label(b->kind));
      files["cdf_" + label + ".csv"] = cdf_csv(e2e_of(b->records));
      files["invocations_" + label + ".csv"] = invocation_log_csv(b->records);
    }
  }
  if (r.sweep) {
    for (const auto* b : {&r.sweep->kernel, &r.sweep->bypass}) {
      files["sweep_" + std::string(backend_label(b->kind)) + ".csv"] = sweep_csv(b->result.points);
    }
  }
  files["summary.json"] = summary_json(r).dump(2) + "\n";
  return files;
}

std::vector<std::filesystem::path> write_files(const std::map<std::string, std::string>& files,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("io-error", "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, body] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error("io-error", "cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> emit_reports(const ReproduceReport& report,
                                                const std::filesystem::path& dir) {
  return write_files(render_reports(report), dir);
}

}  // namespace faasim
