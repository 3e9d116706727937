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


// faasim command-line driver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "faasim/config.hpp"
#include "faasim/experiments.hpp"
#include "faasim/report.hpp"
#include "faasim/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace faasim;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string trace;
  std::string sched_trace;
  std::vector<std::string> sets;
  std::string scenario;
};

RunConfig load(const Options& o) {
  std::vector<std::string> overrides = o.sets;
  if (o.seed) overrides.push_back("seed=" + std::to_string(*o.seed));
  if (!o.out.empty()) overrides.push_back("out_dir=" + json(o.out).dump());
  RunConfig cfg = load_config(o.config.empty() ? std::nullopt : std::optional<fs::path>(o.config),
                              overrides);
  cfg.platform.record_trace = !o.trace.empty();
  cfg.platform.record_scheduler_trace = !o.sched_trace.empty();
  return cfg;
}

/// Per-backend trace path: run.csv -> run_kernel.csv / run_bypass.csv.
fs::path with_backend(const fs::path& p, PathKind kind) {
  fs::path out = p;
  out.replace_filename(p.stem().string() + "_" + std::string(backend_label(kind)) +
                       p.extension().string());
  return out;
}

template <typename Write>
void write_text(const fs::path& path, Write&& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  body(out);
  if (!out) throw Error("io-error", "cannot write " + path.string());
}

void write_traces(const Options& o, const ComparisonReport& c) {
  for (const auto* b : {&c.kernel, &c.bypass}) {
    if (!o.trace.empty()) {
      write_text(with_backend(o.trace, b->kind), [&](std::ostream& os) { b->trace.write_csv(os); });
    }
    if (!o.sched_trace.empty()) {
      write_text(with_backend(o.sched_trace, b->kind), [&](std::ostream& os) {
        os << "tick_us,instance_id,allocated,demand,tick_ops\n";
        for (const auto& r : b->scheduler_trace) {
          os << r.tick_us << ',' << r.instance_id << ',' << r.allocated << ',' << r.demand << ','
             << r.tick_ops << '\n';
        }
      });
    }
  }
}

int emit(const ReproduceReport& report) {
  const auto files = render_reports(report);
  write_files(files, report.effective.out_dir);
  std::cout << summary_json(report).dump() << '\n';
  return 0;
}

int cmd_calibrate(const Options& o) {
  RunConfig cfg = load(o);
  const CalibrationResult c = calibrate(cfg, cfg.targets);
  RunConfig fitted = with_params(cfg, c.net, c.compute);
  fitted.calibration.enabled = false;
  const json cal = calibration_json(c, cfg.targets);
  write_files({{"calibration.json", cal.dump(2) + "\n"},
               {"calibrated_config.json", fitted.to_json().dump(2) + "\n"}},
              cfg.out_dir);
  std::cout << cal.dump() << '\n';
  return c.converged ? 0 : 3;
}

int cmd_sequential(const Options& o) {
  ReproduceReport r;
  r.effective = load(o);
  r.comparison = compare_backends(r.effective);
  write_traces(o, *r.comparison);
  return emit(r);
}

int cmd_sweep(const Options& o) {
  ReproduceReport r;
  r.effective = load(o);
  r.sweep = sweep_backends(r.effective);
  return emit(r);
}

int cmd_coldstart(const Options& o) {
  ReproduceReport r;
  r.effective = load(o);
  r.coldstart = cold_starts(r.effective);
  return emit(r);
}

int cmd_reproduce(const Options& o) {
  const RunConfig cfg = load(o);
  ReproduceReport r = reproduce(cfg);
  if (r.comparison) write_traces(o, *r.comparison);
  return emit(r);
}

int cmd_scenario(const Options& o) {
  const RunConfig cfg = load(o);
  std::ifstream in(o.scenario);
  if (!in) throw ConfigError("cannot read scenario " + o.scenario);
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("scenario is not valid JSON: " + o.scenario);
  ScenarioResult res = run_scenario(cfg, Scenario::from_json(doc));
  Platform& p = *res.platform;

  std::ostringstream log;
  p.write_invocation_log(log);
  const json summary = {{"seed", cfg.seed},
                        {"backend", std::string(backend_label(p.kind()))},
                        {"injected", p.injected()},
                        {"completed", p.completed()},
                        {"rejected", p.rejected()},
                        {"manager_queries", p.cache().total_manager_queries()},
                        {"cache_hits", p.cache().hits()},
                        {"trace_digest", hex_digest(p.engine().trace().digest)},
                        {"actions", outcomes_json(res.outcomes)}};
  write_files({{"invocations.csv", log.str()}, {"scenario.json", summary.dump(2) + "\n"}},
              cfg.out_dir);
  if (!o.trace.empty()) write_text(o.trace, [&](std::ostream& os) { p.engine().trace().write_csv(os); });
  if (!o.sched_trace.empty()) {
    write_text(o.sched_trace, [&](std::ostream& os) { p.scheduler().write_trace_csv(os); });
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

void print_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faasim: discrete-event FaaS platform simulator"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run config")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    sub->add_option("--out", o.out, "Output directory (overrides the config)");
    sub->add_option("--trace", o.trace, "Write the event trace CSV here");
    sub->add_option("--sched-trace", o.sched_trace, "Write the scheduler trace CSV here");
    sub->add_option("--set", o.sets, "Config override key.path=value (repeatable)");
  };

  struct Verb {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Verb verbs[] = {
      {"calibrate", "Fit path and compute parameters to the reduction targets", cmd_calibrate},
      {"sequential", "Sequential invocations on both backends", cmd_sequential},
      {"sweep", "Open-loop load sweep on both backends", cmd_sweep},
      {"coldstart", "Cold start of the workload function on both backends", cmd_coldstart},
      {"reproduce", "Calibrate (if enabled) and run all experiments", cmd_reproduce},
      {"scenario", "Run a scripted deploy/scale/invoke scenario", cmd_scenario},
  };
  int (*selected)(const Options&) = nullptr;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    common(sub);
    if (std::string(v.name) == "scenario") {
      sub->add_option("scenario", o.scenario, "Scenario JSON file")->required();
    }
    sub->callback([&selected, run = v.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    return selected(o);
  } catch (const Error& e) {
    print_error(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    print_error("config-error", e.what());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
  }
  return 1;
}
