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


// Reference oracles shared by the unit and acceptance suites. Nothing here
// calls into the scheduler's own allocator.

#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace faasim::oracle {

/// Lexicographic comparison of ascending-sorted grant vectors: the larger
/// one has the better (max-min) minimum.
inline bool leximin_better(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

/// Exhaustive max-min search over every allocation vector 0 <= g_i <= d_i,
/// sum <= usable. Exponential; keep n small.
inline std::vector<int> maxmin_full_enumeration(const std::vector<int>& demand, int usable) {
  const std::size_t n = demand.size();
  std::vector<int> g(n, 0);
  std::vector<int> best_sorted;
  bool have = false;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      std::vector<int> s = g;
      std::sort(s.begin(), s.end());
      if (!have || leximin_better(s, best_sorted)) {
        best_sorted = s;
        have = true;
      }
      return;
    }
    for (int v = 0; v <= demand[i] && v <= left; ++v) {
      g[i] = v;
      rec(i + 1, left - v);
    }
    g[i] = 0;
  };
  rec(0, usable);
  return best_sorted;
}

/// Exhaustive search restricted to nondecreasing vectors dominated by the
/// ascending-sorted demand. A feasible allocation exists with a given sorted
/// grant vector iff that vector is dominated this way, so the search is
/// exact while staying small enough for every instance set up to size 6.
inline std::vector<int> maxmin_sorted_search(std::vector<int> demand, int usable) {
  std::sort(demand.begin(), demand.end());
  const std::size_t n = demand.size();
  std::vector<int> g(n, 0);
  std::vector<int> best;
  bool have = false;
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int floor, int left) {
    if (i == n) {
      if (!have || leximin_better(g, best)) {
        best = g;
        have = true;
      }
      return;
    }
    for (int v = floor; v <= demand[i] && v <= left; ++v) {
      g[i] = v;
      rec(i + 1, v, left - v);
    }
    g[i] = 0;
  };
  rec(0, 0, usable);
  if (!have) best.assign(n, 0);  // unreachable: all-zero is always feasible
  return best;
}

}  // namespace faasim::oracle
