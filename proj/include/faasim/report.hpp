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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "faasim/experiments.hpp"

namespace faasim {

std::string cdf_csv(const std::vector<Micros>& samples);
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::string invocation_log_csv(const std::vector<InvocationRecord>& records);

nlohmann::json calibration_json(const CalibrationResult& c, const CalibrationTargets& targets);
nlohmann::json summary_json(const ReproduceReport& report);

/// File name -> contents for everything present in `report`. Throws
/// EmptySamples on an empty sweep.
std::map<std::string, std::string> render_reports(const ReproduceReport& report);

/// Renders everything first, then writes; a failed render leaves no files.
/// Returns the written paths in name order.
std::vector<std::filesystem::path> emit_reports(const ReproduceReport& report,
                                                const std::filesystem::path& dir);

/// Writes pre-rendered files into `dir`, creating it if needed.
std::vector<std::filesystem::path> write_files(const std::map<std::string, std::string>& files,
                                               const std::filesystem::path& dir);

}  // namespace faasim
