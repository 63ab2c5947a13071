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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cafold/compose.hpp"
#include "cafold/debruijn.hpp"
#include "cafold/engine.hpp"
#include "oracle.hpp"

namespace cafold {
namespace {

RuleTable random_table(std::uint32_t r, std::mt19937_64& rng, bool quiescent) {
  std::vector<std::uint64_t> words(words_for_bits(entry_count(r)));
  for (auto& w : words) w = rng();
  if (quiescent) words[0] &= ~std::uint64_t{1};
  return RuleTable(r, words);
}

void expect_structure(const DeBruijnGraph& g) {
  ASSERT_EQ(g.vertex_count(), std::uint64_t{1} << (2 * g.radius()));
  for (std::uint64_t v = 0; v < g.vertex_count(); ++v) {
    ASSERT_EQ(g.target(v, 0), (2 * v) % g.vertex_count());
    ASSERT_EQ(g.target(v, 1), (2 * v + 1) % g.vertex_count());
  }
}

TEST(BuildGraph, Rule30) {
  const DeBruijnGraph g = build_graph(rule_from_number(30, 1));
  EXPECT_EQ(g.vertex_count(), 4u);
  // □□ --■--> □■, emitting ■ (□□■ -> ■).
  EXPECT_EQ(g.target(0b00, 1), 0b01u);
  EXPECT_EQ(g.edge_color(0b00, 1), Color::black);
  EXPECT_EQ(g.edge_color(0b00, 0), Color::white);
  expect_structure(g);
}

TEST(BuildGraph, Rule0AllWhite) {
  const DeBruijnGraph g = build_graph(RuleTable(1));
  for (std::uint64_t v = 0; v < 4; ++v)
    for (unsigned b = 0; b < 2; ++b) EXPECT_EQ(g.edge_color(v, b), Color::white);
}

TEST(BuildGraph, CompositeEdgesMatchTable) {
  const RuleTable t = compose_k({rule_from_number(30, 1), 2});
  ASSERT_EQ(to_decimal(t), "535945230");
  const DeBruijnGraph g = build_graph(t);
  EXPECT_EQ(g.vertex_count(), 16u);
  std::multiset<int> edge_colors, table_colors;
  for (std::uint64_t v = 0; v < 16; ++v) {
    for (unsigned b = 0; b < 2; ++b) {
      std::vector<Color> nb;
      for (int j = 3; j >= 0; --j) nb.push_back(to_color(static_cast<int>(v >> j & 1)));
      nb.push_back(to_color(static_cast<int>(b)));
      EXPECT_EQ(g.edge_color(v, b), apply_local(t, nb));
      edge_colors.insert(bit(g.edge_color(v, b)));
    }
  }
  for (std::uint64_t i = 0; i < 32; ++i) table_colors.insert(bit(t.output(i)));
  EXPECT_EQ(edge_colors, table_colors);
}

TEST(BuildGraph, StructuralLawRadii1To4) {
  std::mt19937_64 rng(1);
  for (std::uint32_t r = 1; r <= 4; ++r) expect_structure(build_graph(random_table(r, rng, false)));
}

TEST(StepViaWalk, SimpleSeed) {
  const DeBruijnGraph g = build_graph(rule_from_number(30, 1));
  const Configuration next = step_via_walk(g, simple_seed());
  EXPECT_EQ(next.to_text(), "###");
  EXPECT_EQ(next.origin(), 1);
  EXPECT_EQ(next.generation(), 2u);
  const Configuration third = step_via_walk(g, next);
  EXPECT_EQ(third.to_text(), "##..#");
  EXPECT_EQ(third.generation(), 3u);
}

TEST(StepViaWalk, AllWhiteStaysWhite) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const DeBruijnGraph g = build_graph(random_table(1 + i % 3, rng, true));
    const Configuration next = step_via_walk(g, Configuration(70, 35, 1));
    EXPECT_EQ(next.popcount(), 0u);
    EXPECT_EQ(next.size(), 70 + 2 * g.radius());
  }
}

TEST(StepViaWalk, RejectsNonQuiescent) {
  EXPECT_THROW(step_via_walk(build_graph(rule_from_number(1, 1)), simple_seed()),
               NonQuiescentRule);
}

TEST(StepViaWalk, EqualsSlidingWindowOnRandomRules) {
  std::mt19937_64 rng(3);
  for (int rule = 0; rule < 50; ++rule) {
    const std::uint32_t r = 1 + rule % 3;
    oracle::Rule o;
    o.radius = static_cast<int>(r);
    const RuleTable t = random_table(r, rng, true);
    for (std::uint64_t i = 0; i < t.size(); ++i) o.outputs.push_back(static_cast<int>(t.output_bit(i)));
    const DeBruijnGraph g = build_graph(t);
    for (int row = 0; row < 20; ++row) {
      const oracle::Row cells = oracle::random_row(1 + rng() % 200, rng);
      std::vector<Color> colors;
      for (int c : cells) colors.push_back(to_color(c));
      const Configuration in = Configuration::from_cells(colors, 0);
      const Configuration out = step_via_walk(g, in);
      ASSERT_EQ(out.to_text(), oracle::text(oracle::step_padded(o, cells)));
      ASSERT_EQ(out, step_naive(t, in));
    }
  }
}

TEST(WalkVertices, ClosedWalkFromAndToZero) {
  std::mt19937_64 rng(4);
  const DeBruijnGraph g = build_graph(random_table(2, rng, true));
  for (int i = 0; i < 10; ++i) {
    std::vector<Color> cells;
    for (int j = 0; j < 40; ++j) cells.push_back(to_color(static_cast<int>(rng() & 1)));
    const auto path = walk_vertices(g, Configuration::from_cells(cells, 0));
    EXPECT_EQ(path.front(), 0u);
    EXPECT_EQ(path.back(), 0u);
    EXPECT_EQ(path.size(), cells.size() + 4 + 1);
    for (std::size_t s = 1; s < path.size(); ++s)
      EXPECT_TRUE(path[s] == g.target(path[s - 1], 0) ||
                  path[s] == g.target(path[s - 1], 1));
  }
}

TEST(ExportDot, Rule30) {
  const std::string dot = export_dot(build_graph(rule_from_number(30, 1)));
  EXPECT_EQ(dot.rfind("digraph debruijn {", 0), 0u);
  std::size_t nodes = 0, edges = 0;
  for (std::size_t p = 0; (p = dot.find("[label=", p)) != std::string::npos; ++p) ++nodes;
  for (std::size_t p = 0; (p = dot.find(" -> ", p)) != std::string::npos; ++p) ++edges;
  EXPECT_EQ(edges, 8u);
  EXPECT_EQ(nodes, 12u);  // 4 vertex labels + 8 edge labels
  EXPECT_NE(dot.find("v0 [label=\"00\"]"), std::string::npos);
  EXPECT_NE(dot.find("v0 -> v1 [label=\"in=1/out=1\""), std::string::npos);
  EXPECT_LT(dot.find("v0 -> v0"), dot.find("v0 -> v1"));
}

TEST(ExportDot, Rule0AndDeterminism) {
  const std::string dot = export_dot(build_graph(RuleTable(1)));
  EXPECT_EQ(dot.find("out=1"), std::string::npos);
  EXPECT_EQ(dot, export_dot(build_graph(RuleTable(1))));
  const RuleTable t = compose_k({rule_from_number(30, 1), 2});
  EXPECT_EQ(export_dot(build_graph(t)), export_dot(build_graph(t)));
}

TEST(DeBruijnSequence, EveryWindowOnce) {
  for (std::uint32_t order = 1; order <= 12; ++order) {
    const auto seq = de_bruijn_sequence(order);
    const std::size_t n = std::size_t{1} << order;
    ASSERT_EQ(seq.size(), n);
    std::vector<int> seen(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t w = 0;
      for (std::uint32_t j = 0; j < order; ++j) w = (w << 1) | seq[(p + j) % n];
      ++seen[w];
    }
    for (int s : seen) ASSERT_EQ(s, 1) << "order " << order;
  }
}

TEST(DeBruijnSequenceLayout, WalkMatchesStandardLayout) {
  std::mt19937_64 rng(5);
  for (std::uint32_t r = 1; r <= 4; ++r) {
    const RuleTable t = random_table(r, rng, true);
    const DeBruijnSequenceLayout layout(t);
    for (int row = 0; row < 10; ++row) {
      std::vector<Color> cells;
      const std::size_t n = 1 + rng() % 300;
      for (std::size_t j = 0; j < n; ++j) cells.push_back(to_color(static_cast<int>(rng() & 1)));
      const Configuration in = Configuration::from_cells(cells, 0);
      const std::size_t out_size = n + 2 * r;
      std::vector<std::uint64_t> a(words_for_bits(out_size)), b(words_for_bits(out_size));
      detail::walk_row(t, in.words(), n, a);
      layout.walk_row(in.words(), n, b);
      ASSERT_EQ(a, b) << "radius " << r;
    }
  }
}

}  // namespace
}  // namespace cafold
