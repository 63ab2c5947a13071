// Copyright 2026 The cafold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force reference automaton on plain int vectors. Shares no code with
// the library: its own indexing, its own rule evaluation, its own padding.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Row = std::vector<int>;

/// Radius-r rule given by an explicit output list indexed by neighborhood
/// value, leftmost cell most significant.
struct Rule {
  int radius = 1;
  std::vector<int> outputs;

  static Rule eca(unsigned number) {
    Rule r;
    for (int i = 0; i < 8; ++i) r.outputs.push_back((number >> i) & 1);
    return r;
  }

  int apply(const Row& cells, std::size_t start) const {
    std::size_t idx = 0;
    for (int j = 0; j < 2 * radius + 1; ++j) idx = idx * 2 + cells[start + j];
    return outputs[idx];
  }
};

/// Cells fully determined by the window: size - 2r outputs.
inline Row step_truncated(const Rule& rule, const Row& cells) {
  Row out;
  const int w = 2 * rule.radius + 1;
  for (std::size_t i = 0; i + w <= cells.size(); ++i) out.push_back(rule.apply(cells, i));
  return out;
}

/// Row in a white background; output is 2r cells wider.
inline Row step_padded(const Rule& rule, const Row& cells) {
  Row padded(cells.size() + 4 * rule.radius, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) padded[i + 2 * rule.radius] = cells[i];
  return step_truncated(rule, padded);
}

/// k-fold composite by simulating k truncated steps per neighborhood.
inline Rule compose(const Rule& base, int k) {
  Rule out;
  out.radius = base.radius * k;
  const int w = 2 * out.radius + 1;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << w); ++x) {
    Row cells(w);
    for (int j = 0; j < w; ++j) cells[j] = static_cast<int>((x >> (w - 1 - j)) & 1);
    for (int s = 0; s < k; ++s) cells = step_truncated(base, cells);
    out.outputs.push_back(cells[0]);
  }
  return out;
}

inline Rule random_rule(int radius, std::mt19937_64& rng, bool quiescent) {
  Rule r;
  r.radius = radius;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << (2 * radius + 1)); ++i)
    r.outputs.push_back(static_cast<int>(rng() & 1));
  if (quiescent) r.outputs[0] = 0;
  return r;
}

inline Row random_row(std::size_t n, std::mt19937_64& rng) {
  Row r(n);
  for (auto& c : r) c = static_cast<int>(rng() & 1);
  return r;
}

inline std::string text(const Row& r) {
  std::string s;
  for (int c : r) s.push_back(c ? '#' : '.');
  return s;
}

}  // namespace oracle
