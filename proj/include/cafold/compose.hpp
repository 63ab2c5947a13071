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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cafold/errors.hpp"
#include "cafold/rule.hpp"

namespace cafold {

/// Tables above this many output bits (1 GiB) are refused unless overridden.
inline constexpr std::uint64_t kDefaultMaxTableBits = std::uint64_t{1} << 33;

struct FoldSpec {
  RuleTable base;
  std::uint32_t k = 1;

  std::uint32_t radius() const { return k * base.radius(); }
};

struct BuildOptions {
  std::uint64_t max_table_bits = kDefaultMaxTableBits;
  bool override_budget = false;
  unsigned threads = 1;
};

/// Outer after inner: inner is applied to every full window of the input,
/// then outer to the resulting row. Radius is the sum of both radii.
inline RuleTable compose_pair(const RuleTable& outer, const RuleTable& inner) {
  const std::uint32_t radius = outer.radius() + inner.radius();
  check_radius(radius);
  const std::uint32_t width = neighborhood_size(radius);
  const std::uint32_t mid = width - 2 * inner.radius();
  std::vector<std::uint64_t> words(words_for_bits(entry_count(radius)), 0);
  for (std::uint64_t x = 0; x < entry_count(radius); ++x) {
    const std::uint64_t row = detail::apply_row_bits(inner, x, width);
    words[x >> 6] |= detail::apply_row_bits(outer, row, mid) << (x & 63);
  }
  return RuleTable(radius, std::move(words));
}

inline void validate(const FoldSpec& spec) {
  if (spec.k == 0) throw std::invalid_argument("fold count k must be >= 1");
  if (static_cast<std::uint64_t>(spec.k) * spec.base.radius() > kMaxRadius)
    throw std::out_of_range("composite radius " +
                            std::to_string(std::uint64_t{spec.k} *
                                           spec.base.radius()) +
                            " exceeds " + std::to_string(kMaxRadius));
}

/// Output for one composite neighborhood: the base rule applied k times to a
/// shrinking row.
inline std::uint64_t fold_output(const FoldSpec& spec, std::uint64_t x) {
  std::uint32_t width = neighborhood_size(spec.radius());
  for (std::uint32_t step = 0; step < spec.k; ++step) {
    x = detail::apply_row_bits(spec.base, x, width);
    width -= 2 * spec.base.radius();
  }
  return x;
}

/// Fills table words [first_word, last_word) of the k-fold table into `out`,
/// which must hold at least last_word - first_word words. Disjoint word ranges
/// can be built independently.
inline void compose_k_chunk(const FoldSpec& spec, std::uint64_t first_word,
                            std::uint64_t last_word,
                            std::span<std::uint64_t> out) {
  validate(spec);
  const std::uint64_t entries = entry_count(spec.radius());
  for (std::uint64_t w = first_word; w < last_word; ++w) {
    std::uint64_t word = 0;
    const std::uint64_t begin = w * 64;
    const std::uint64_t end = std::min(begin + 64, entries);
    for (std::uint64_t x = begin; x < end; ++x)
      word |= fold_output(spec, x) << (x - begin);
    out[w - first_word] = word;
  }
}

inline RuleTable compose_k(const FoldSpec& spec,
                           const BuildOptions& options = {}) {
  validate(spec);
  if (spec.k == 1) return spec.base;
  const std::uint32_t radius = spec.radius();
  const std::uint64_t bits = entry_count(radius);
  if (bits > options.max_table_bits && !options.override_budget)
    throw BudgetExceeded((bits + 7) / 8, (options.max_table_bits + 7) / 8);

  const std::uint64_t nwords = words_for_bits(bits);
  std::vector<std::uint64_t> words(nwords, 0);
  const std::uint64_t threads =
      std::clamp<std::uint64_t>(options.threads, 1, nwords);
  if (threads == 1) {
    compose_k_chunk(spec, 0, nwords, words);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t per = (nwords + threads - 1) / threads;
    for (std::uint64_t t = 0; t < threads; ++t) {
      const std::uint64_t first = t * per;
      const std::uint64_t last = std::min(nwords, first + per);
      if (first >= last) break;
      pool.emplace_back([&spec, &words, first, last] {
        compose_k_chunk(spec, first, last,
                        std::span(words).subspan(first, last - first));
      });
    }
  }
  return RuleTable(radius, std::move(words));
}

/// k^2 * 2^(2kr): entries to fill times cells touched per entry, up to a
/// constant.
inline double build_cost_estimate(const FoldSpec& spec) {
  const double k = spec.k;
  return k * k * std::ldexp(1.0, static_cast<int>(2 * spec.radius()));
}

}  // namespace cafold
