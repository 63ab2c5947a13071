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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cafold/configuration.hpp"
#include "cafold/debruijn.hpp"
#include "cafold/errors.hpp"
#include "cafold/rule.hpp"

namespace cafold {

enum class Kernel { naive, walk, bitparallel };
enum class TableLayout { standard, debruijn_sequence };

inline std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::naive: return "naive";
    case Kernel::walk: return "walk";
    case Kernel::bitparallel: return "bitparallel";
  }
  return "?";
}

inline Kernel parse_kernel(std::string_view s) {
  if (s == "naive") return Kernel::naive;
  if (s == "walk") return Kernel::walk;
  if (s == "bitparallel") return Kernel::bitparallel;
  throw std::invalid_argument("unknown kernel: " + std::string(s));
}

inline std::string_view to_string(TableLayout l) {
  return l == TableLayout::standard ? "standard" : "debruijn";
}

inline TableLayout parse_layout(std::string_view s) {
  if (s == "standard") return TableLayout::standard;
  if (s == "debruijn") return TableLayout::debruijn_sequence;
  throw std::invalid_argument("unknown table layout: " + std::string(s));
}

/// One black cell at spatial index 0, generation 1.
inline Configuration simple_seed() {
  Configuration c(1, 0, 1);
  c.set(0, Color::black);
  return c;
}

/// Same row with `pad` extra white cells on each side.
inline Configuration widen(const Configuration& row, std::size_t pad) {
  Configuration out(row.size() + 2 * pad, row.origin() + static_cast<std::int64_t>(pad),
                    row.generation());
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row.cell(j) == Color::black) out.set(j + pad, Color::black);
  return out;
}

/// Sliding-window update, one apply_local per output cell. The window grows by
/// r on each side.
inline Configuration step_naive(const RuleTable& table, const Configuration& row,
                                std::uint32_t fold = 1) {
  detail::require_quiescent(table);
  const std::uint32_t r = table.radius();
  const std::size_t out_size = row.size() + 2 * r;
  Configuration out(out_size, row.origin() + r, row.generation() + fold);
  std::vector<Color> neighborhood(table.width());
  for (std::size_t p = 0; p < out_size; ++p) {
    const std::int64_t center = static_cast<std::int64_t>(p) - out.origin();
    for (std::uint32_t j = 0; j < table.width(); ++j)
      neighborhood[j] = row.at(center - r + j);
    if (apply_local(table, neighborhood) == Color::black)
      out.set(p, Color::black);
  }
  return out;
}

/// Update of a bare window without any background assumption: returns the
/// size - 2r cells whose neighborhoods lie inside `cells`.
inline std::vector<Color> step_interior(const RuleTable& table,
                                        std::span<const Color> cells) {
  const std::uint32_t w = table.width();
  if (cells.size() < w) return {};
  std::vector<Color> out(cells.size() - 2 * table.radius());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = apply_local(table, cells.subspan(p, w));
  return out;
}

namespace detail {

/// Rule 30 on packed words: new[p] = in[p-2] ^ (in[p-1] | in[p]) in output
/// coordinates (the output window starts one cell left of the input).
inline void rule30_row(std::span<const std::uint64_t> in, std::size_t size,
                       std::span<std::uint64_t> out) {
  const std::size_t in_words = words_for_bits(size);
  const std::size_t out_size = size + 2;
  const std::size_t out_words = words_for_bits(out_size);
  std::uint64_t prev = 0;
  for (std::size_t w = 0; w < out_words; ++w) {
    const std::uint64_t cur = w < in_words ? in[w] : 0;
    const std::uint64_t s1 = (cur << 1) | (prev >> 63);
    const std::uint64_t s2 = (cur << 2) | (prev >> 62);
    out[w] = s2 ^ (s1 | cur);
    prev = cur;
  }
  if (out_size % 64 != 0)
    out[out_words - 1] &= (std::uint64_t{1} << (out_size % 64)) - 1;
}

inline bool is_rule30(const RuleTable& table) {
  return table.radius() == 1 && table.words()[0] == 30;
}

}  // namespace detail

inline Configuration step_bitparallel_rule30(const Configuration& row) {
  const std::size_t out_size = row.size() + 2;
  std::vector<std::uint64_t> out(words_for_bits(out_size), 0);
  detail::rule30_row(row.words(), row.size(), out);
  return Configuration(std::move(out), out_size, row.origin() + 1,
                       row.generation() + 1);
}

inline Configuration step_walk(const RuleTable& table, const Configuration& row,
                               std::uint32_t fold = 1) {
  return step_via_walk(DeBruijnGraph(table), row, fold);
}

struct RunOptions {
  /// Base generations advanced per application of the table.
  std::uint32_t fold = 1;
  TableLayout layout = TableLayout::standard;
  /// Called with every row produced, including the seed.
  std::function<void(const Configuration&)> on_row;
  /// Called with the base generation after every step; no row is built.
  std::function<void(std::uint64_t)> on_generation;
};

/// Evolves `seed` to base generation `n`. `table` is the rule applied per
/// step; for a k-fold composite table set options.fold = k.
inline Configuration run_to_generation(const RuleTable& table,
                                       Configuration seed, std::uint64_t n,
                                       Kernel kernel,
                                       const RunOptions& options = {}) {
  const std::uint64_t fold = options.fold;
  if (fold == 0) throw std::invalid_argument("fold must be >= 1");
  detail::require_quiescent(table);
  if (kernel == Kernel::bitparallel && (!detail::is_rule30(table) || fold != 1))
    throw std::invalid_argument(
        "bitparallel kernel only runs Rule 30 (radius 1, fold 1)");
  const std::uint64_t g0 = seed.generation();
  if (n < g0)
    throw std::invalid_argument("target generation " + std::to_string(n) +
                                " precedes seed generation " +
                                std::to_string(g0));
  if ((n - g0) % fold != 0) {
    const std::uint64_t below = g0 + (n - g0) / fold * fold;
    throw UnreachableGeneration(n, below, below + fold);
  }
  const std::uint64_t steps = (n - g0) / fold;
  if (options.on_row) options.on_row(seed);
  if (steps == 0) return seed;

  const std::uint32_t r = table.radius();
  const std::size_t final_size = seed.size() + 2 * r * steps;
  std::vector<std::uint64_t> a(words_for_bits(final_size), 0);
  std::vector<std::uint64_t> b(words_for_bits(final_size), 0);
  std::copy(seed.words().begin(), seed.words().end(), a.begin());
  std::size_t size = seed.size();
  std::int64_t origin = seed.origin();
  std::uint64_t gen = g0;

  std::optional<DeBruijnSequenceLayout> layout;
  if (kernel == Kernel::walk && options.layout == TableLayout::debruijn_sequence)
    layout.emplace(table);

  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::span<const std::uint64_t> in(a.data(), words_for_bits(size));
    const std::span<std::uint64_t> out(b.data(), words_for_bits(size + 2 * r));
    switch (kernel) {
      case Kernel::naive: {
        const Configuration next = step_naive(
            table, Configuration({in.begin(), in.end()}, size, origin, gen),
            static_cast<std::uint32_t>(fold));
        std::copy(next.words().begin(), next.words().end(), out.begin());
        break;
      }
      case Kernel::walk:
        if (layout)
          layout->walk_row(in, size, out);
        else
          detail::walk_row(table, in, size, out);
        break;
      case Kernel::bitparallel:
        detail::rule30_row(in, size, out);
        break;
    }
    std::swap(a, b);
    size += 2 * r;
    origin += r;
    gen += fold;
    if (options.on_generation) options.on_generation(gen);
    if (options.on_row) {
      Configuration row({a.begin(), a.begin() + static_cast<std::ptrdiff_t>(words_for_bits(size))},
                        size, origin, gen);
      options.on_row(row);
    }
  }
  a.resize(words_for_bits(size));
  return Configuration(std::move(a), size, origin, gen);
}

}  // namespace cafold
