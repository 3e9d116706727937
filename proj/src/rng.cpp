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

#include "faasim/rng.hpp"

#include <cmath>
#include <numbers>

#include "faasim/types.hpp"

namespace faasim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view to_string(DistSpec::Kind kind) {
  switch (kind) {
    case DistSpec::Kind::Constant: return "constant";
    case DistSpec::Kind::Exponential: return "exponential";
    case DistSpec::Kind::Lognormal: return "lognormal";
  }
  return "unknown";
}

DistSpec DistSpec::lognormal_with_median(double median, double sigma) {
  if (!(median > 0.0)) throw InvalidDistribution("lognormal median must be positive");
  return lognormal(std::log(median), sigma);
}

DistSpec DistSpec::lognormal_with_mean(double mean, double sigma) {
  if (!(mean > 0.0)) throw InvalidDistribution("lognormal mean must be positive");
  return lognormal(std::log(mean) - 0.5 * sigma * sigma, sigma);
}

double DistSpec::mean() const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::Exponential: return 1.0 / rate;
    case Kind::Lognormal: return std::exp(mu + 0.5 * sigma * sigma);
  }
  return 0.0;
}

DistSpec DistSpec::with_mean(double m) const {
  switch (kind) {
    case Kind::Constant: return constant(m);
    case Kind::Exponential:
      if (!(m > 0.0)) throw InvalidDistribution("exponential mean must be positive");
      return exponential(1.0 / m);
    case Kind::Lognormal: return lognormal_with_mean(m, sigma);
  }
  return *this;
}

void DistSpec::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!std::isfinite(value)) throw InvalidDistribution("constant value must be finite");
      break;
    case Kind::Exponential:
      if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw InvalidDistribution("exponential rate must be positive, got " +
                                  std::to_string(rate));
      }
      break;
    case Kind::Lognormal:
      if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw InvalidDistribution("lognormal sigma must be positive, got " +
                                  std::to_string(sigma));
      }
      break;
  }
}

RngStream::RngStream(std::uint64_t seed, std::string stream_id)
    : seed_(seed), id_(std::move(stream_id)), key_(splitmix64(seed ^ splitmix64(fnv1a64(id_)))) {}

std::uint64_t RngStream::next_u64() {
  return splitmix64(key_ + splitmix64(index_++));
}

double RngStream::next_uniform() {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double draw(RngStream& stream, const DistSpec& dist) {
  dist.validate();
  switch (dist.kind) {
    case DistSpec::Kind::Constant: return dist.value;
    case DistSpec::Kind::Exponential: return -std::log(stream.next_uniform()) / dist.rate;
    case DistSpec::Kind::Lognormal: {
      // Box-Muller; consumes two counters per draw.
      const double u1 = stream.next_uniform();
      const double u2 = stream.next_uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      return std::exp(dist.mu + dist.sigma * z);
    }
  }
  return 0.0;
}

}  // namespace faasim
