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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace faasim {

/// Virtual time and durations, in integer microseconds.
using Micros = std::int64_t;

using InstanceId = std::uint32_t;
using InvocationId = std::uint64_t;

enum class PathKind { KernelStack, Bypass };

std::string_view to_string(PathKind kind);
/// Accepts "kernel"/"kernelstack" and "bypass" (case-insensitive).
PathKind path_kind_from_string(std::string_view text);

/// Short label used in report file names.
inline std::string_view backend_label(PathKind kind) {
  return kind == PathKind::Bypass ? "bypass" : "kernel";
}

/// Half-up rounding of a non-negative duration to whole microseconds.
inline Micros round_half_up(double us) {
  return static_cast<Micros>(std::floor(us + 0.5));
}

// Error hierarchy. Every error carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Broken precondition of an operation (a bug in the caller).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error("contract-violation", what) {}
};

class NoSuchFunction : public Error {
 public:
  explicit NoSuchFunction(const std::string& name)
      : Error("no-such-function", "no such function: " + name) {}
};

class AlreadyDeployed : public Error {
 public:
  explicit AlreadyDeployed(const std::string& name)
      : Error("already-deployed", "function already deployed: " + name) {}
};

class CapacityExhausted : public Error {
 public:
  explicit CapacityExhausted(const std::string& what) : Error("capacity-exhausted", what) {}
};

class InvalidDistribution : public Error {
 public:
  explicit InvalidDistribution(const std::string& what) : Error("invalid-distribution", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config-error", what) {}
};

class EmptySamples : public Error {
 public:
  explicit EmptySamples(const std::string& what) : Error("empty-samples", what) {}
};

}  // namespace faasim
