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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "faasim/controlplane.hpp"
#include "faasim/workload.hpp"

namespace faasim {

/// Reduction percentages the calibration fits, in fixed order:
/// e2e median, e2e p99, exec median, exec p99.
struct CalibrationTargets {
  static constexpr std::size_t kCount = 4;
  std::array<double, kCount> value{37.33, 63.42, 35.3, 81.0};
  std::array<bool, kCount> active{true, true, true, true};

  static std::string_view name(std::size_t i);
};

enum class CalibParam { WireCost, InterruptCost, CtxSwitchCost, JitterMean, MuxFactor };

std::string_view to_string(CalibParam p);
CalibParam calib_param_from_string(std::string_view text);

struct CalibrationOptions {
  /// Whether `reproduce` fits parameters before running the experiments.
  bool enabled = false;
  std::vector<CalibParam> free{CalibParam::WireCost, CalibParam::InterruptCost,
                               CalibParam::CtxSwitchCost, CalibParam::JitterMean,
                               CalibParam::MuxFactor};
  int max_rounds = 120;
  /// Initial multiplicative step, in natural-log units.
  double initial_step = 0.5;
  double min_step = 1e-4;
  /// Stop once every active residual is within this many percentage points.
  double tolerance_pp = 1.0;
};

struct RunConfig {
  std::uint64_t seed = 1;
  PlatformConfig platform;
  std::vector<FunctionSpec> functions{FunctionSpec{"aes", {}, 8}};
  WorkloadSpec workload;
  CalibrationTargets targets;
  CalibrationOptions calibration;
  std::string out_dir = "out";

  /// The function named by workload.function.
  const FunctionSpec& target_function() const;
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are a ConfigError.
  static RunConfig from_json(const nlohmann::json& doc);
  /// FNV-1a over the canonical JSON serialization, output paths excluded.
  std::uint64_t digest() const;
};

/// Applies `key.path=value` to a JSON document. The value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Defaults, then the file (if any), then overrides in order.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides = {});

nlohmann::json to_json(const PathParams& p);
nlohmann::json to_json(const ComputeParams& c);
nlohmann::json to_json(const DistSpec& d);

std::string hex_digest(std::uint64_t v);

}  // namespace faasim
