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

/**
 * \file debruijn.hpp
 * \brief Colored De Bruijn (state-transition) graph of a rule, and row updates
 * as walks on it.
 *
 * Vertex v is a window of 2r cells read as a binary number. Feeding the next
 * cell b moves to (2v + b) mod 2^(2r) and emits the rule output for the
 * (2r+1)-cell neighborhood v followed by b, i.e. table index 2v + b. The
 * edge colors are therefore exactly the rule table, and a walk is a rolling
 * index over it.
 */

#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cafold/configuration.hpp"
#include "cafold/errors.hpp"
#include "cafold/rule.hpp"

namespace cafold {

class DeBruijnGraph {
 public:
  explicit DeBruijnGraph(RuleTable table) : table_(std::move(table)) {}

  std::uint32_t radius() const noexcept { return table_.radius(); }
  std::uint64_t vertex_count() const noexcept {
    return std::uint64_t{1} << (2 * table_.radius());
  }
  std::uint64_t target(std::uint64_t vertex, unsigned input) const noexcept {
    return ((vertex << 1) | input) & (vertex_count() - 1);
  }
  Color edge_color(std::uint64_t vertex, unsigned input) const noexcept {
    return table_.output((vertex << 1) | input);
  }
  const RuleTable& table() const noexcept { return table_; }

 private:
  RuleTable table_;
};

inline DeBruijnGraph build_graph(RuleTable table) {
  return DeBruijnGraph(std::move(table));
}

inline std::string window_label(std::uint64_t vertex, std::uint32_t cells) {
  std::string s(cells, '0');
  for (std::uint32_t c = 0; c < cells; ++c)
    if ((vertex >> (cells - 1 - c)) & 1u) s[c] = '1';
  return s;
}

/// DOT digraph; vertices ascending, edge b=0 before b=1. Edges emitting black
/// are drawn red, white green.
inline std::string export_dot(const DeBruijnGraph& graph) {
  const std::uint32_t cells = 2 * graph.radius();
  std::ostringstream out;
  out << "digraph debruijn {\n";
  out << "  // radius " << graph.radius() << ", " << graph.vertex_count()
      << " vertices, rule digest " << digest(graph.table()) << "\n";
  for (std::uint64_t v = 0; v < graph.vertex_count(); ++v)
    out << "  v" << v << " [label=\"" << window_label(v, cells) << "\"];\n";
  for (std::uint64_t v = 0; v < graph.vertex_count(); ++v) {
    for (unsigned b = 0; b < 2; ++b) {
      const int color = bit(graph.edge_color(v, b));
      out << "  v" << v << " -> v" << graph.target(v, b) << " [label=\"in="
          << b << "/out=" << color << "\", color=" << (color ? "red" : "green")
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

namespace detail {

/// One walk over `in` (size cells, white beyond), writing size + 2r cells to
/// `out`. `out` must have words_for_bits(size + 2r) words. Returns the final
/// neighborhood index, which is 0 because the last 2r+1 cells fed are white.
inline std::uint64_t walk_row(const RuleTable& table,
                              std::span<const std::uint64_t> in,
                              std::size_t size, std::span<std::uint64_t> out) {
  const std::uint64_t* lut = table.words().data();
  const std::uint64_t mask = table.size() - 1;
  const std::size_t out_size = size + 2 * table.radius();
  const std::size_t in_words = words_for_bits(size);
  const std::size_t out_words = words_for_bits(out_size);
  std::uint64_t q = 0;
  for (std::size_t w = 0; w < out_words; ++w) {
    std::uint64_t src = w < in_words ? in[w] : 0;
    std::uint64_t acc = 0;
    for (unsigned j = 0; j < 64; ++j) {
      q = ((q << 1) | (src & 1u)) & mask;
      src >>= 1;
      acc |= ((lut[q >> 6] >> (q & 63)) & 1u) << j;
    }
    out[w] = acc;
  }
  if (out_size % 64 != 0)
    out[out_words - 1] &= (std::uint64_t{1} << (out_size % 64)) - 1;
  return q;
}

inline void require_quiescent(const RuleTable& table) {
  if (table.output(0) != Color::white)
    throw NonQuiescentRule(
        "rule maps the all-white neighborhood to black; a white background is "
        "not preserved");
}

}  // namespace detail

/// Vertices visited while updating `row`: the start vertex, then one per cell
/// fed (row cells followed by 2r white cells).
inline std::vector<std::uint64_t> walk_vertices(const DeBruijnGraph& graph,
                                                const Configuration& row) {
  std::vector<std::uint64_t> path{0};
  const std::size_t fed = row.size() + 2 * graph.radius();
  std::uint64_t v = 0;
  for (std::size_t t = 0; t < fed; ++t) {
    const unsigned b = t < row.size() ? static_cast<unsigned>(row.cell(t)) : 0u;
    v = graph.target(v, b);
    path.push_back(v);
  }
  return path;
}

/// Global update of `row` by a walk on the graph. `fold` is how many base
/// generations one application of the graph's rule advances.
inline Configuration step_via_walk(const DeBruijnGraph& graph,
                                   const Configuration& row,
                                   std::uint32_t fold = 1) {
  detail::require_quiescent(graph.table());
  const std::size_t out_size = row.size() + 2 * graph.radius();
  std::vector<std::uint64_t> out(words_for_bits(out_size), 0);
  detail::walk_row(graph.table(), row.words(), row.size(), out);
  return Configuration(std::move(out), out_size, row.origin() + graph.radius(),
                       row.generation() + fold);
}

/// Binary De Bruijn sequence of the given order (cyclic, length 2^order), via
/// the Lyndon-word concatenation algorithm.
inline std::vector<std::uint8_t> de_bruijn_sequence(std::uint32_t order) {
  if (order == 0 || order > 32)
    throw std::out_of_range("De Bruijn order must be in [1, 32]");
  std::vector<std::uint8_t> seq;
  seq.reserve(std::size_t{1} << order);
  std::vector<std::uint8_t> a(order + 1, 0);
  // Iterative form of the classic db(t, p) recursion (Fredricksen-Maiorana).
  std::uint32_t i = 1;
  seq.push_back(0);
  while (true) {
    // Next Lyndon word prefix in lexicographic order.
    std::uint32_t j = order;
    while (j >= 1 && a[j] == 1) --j;
    if (j == 0) break;
    a[j] = 1;
    for (std::uint32_t m = j + 1; m <= order; ++m) a[m] = a[m - j];
    i = j;
    if (order % i == 0)
      for (std::uint32_t m = 1; m <= i; ++m) seq.push_back(a[m]);
  }
  return seq;
}

/// Rule table stored along a De Bruijn sequence of order 2r+1. Position p
/// holds the neighborhood formed by the sequence cells p..p+2r (cyclic). From
/// p, feeding the cell that continues the sequence moves to p+1; the other
/// input jumps via a stored index.
class DeBruijnSequenceLayout {
 public:
  explicit DeBruijnSequenceLayout(const RuleTable& table)
      : radius_(table.radius()) {
    const std::uint32_t order = table.width();
    if (order > 32)
      throw std::out_of_range("De Bruijn layout supports 2r+1 <= 32");
    const std::uint64_t n = table.size();
    const auto seq = de_bruijn_sequence(order);
    std::vector<std::uint32_t> position(n);
    seq_.assign(words_for_bits(n), 0);
    out_.assign(words_for_bits(n), 0);
    std::uint64_t window = 0;
    for (std::uint32_t c = 0; c < order; ++c) window = (window << 1) | seq[c];
    for (std::uint64_t p = 0; p < n; ++p) {
      position[window] = static_cast<std::uint32_t>(p);
      if (seq[p]) seq_[p >> 6] |= std::uint64_t{1} << (p & 63);
      out_[p >> 6] |= table.output_bit(window) << (p & 63);
      window = ((window << 1) | seq[(p + order) % n]) & (n - 1);
    }
    jump_.resize(n);
    window = 0;
    for (std::uint32_t c = 0; c < order; ++c) window = (window << 1) | seq[c];
    for (std::uint64_t p = 0; p < n; ++p) {
      const std::uint64_t other = 1u - seq[(p + order) % n];
      jump_[p] = position[((window << 1) | other) & (n - 1)];
      window = ((window << 1) | seq[(p + order) % n]) & (n - 1);
    }
    start_ = position[0];
    n_ = n;
  }

  std::uint32_t radius() const noexcept { return radius_; }
  std::uint64_t memory_bytes() const noexcept {
    return 2 * (n_ + 7) / 8 + n_ * sizeof(std::uint32_t);
  }

  /// Same contract as detail::walk_row.
  void walk_row(std::span<const std::uint64_t> in, std::size_t size,
                std::span<std::uint64_t> out) const {
    const std::uint32_t order = 2 * radius_ + 1;
    const std::size_t out_size = size + 2 * radius_;
    const std::size_t in_words = words_for_bits(size);
    const std::size_t out_words = words_for_bits(out_size);
    std::uint64_t p = start_;
    for (std::size_t w = 0; w < out_words; ++w) {
      std::uint64_t src = w < in_words ? in[w] : 0;
      std::uint64_t acc = 0;
      for (unsigned j = 0; j < 64; ++j) {
        const std::uint64_t next = p + order >= n_ ? p + order - n_ : p + order;
        const std::uint64_t follow = (seq_[next >> 6] >> (next & 63)) & 1u;
        p = (src & 1u) == follow ? (p + 1 == n_ ? 0 : p + 1) : jump_[p];
        src >>= 1;
        acc |= ((out_[p >> 6] >> (p & 63)) & 1u) << j;
      }
      out[w] = acc;
    }
    if (out_size % 64 != 0)
      out[out_words - 1] &= (std::uint64_t{1} << (out_size % 64)) - 1;
  }

 private:
  std::uint32_t radius_;
  std::uint64_t n_ = 0;
  std::uint64_t start_ = 0;
  std::vector<std::uint64_t> seq_;
  std::vector<std::uint64_t> out_;
  std::vector<std::uint32_t> jump_;
};

}  // namespace cafold
