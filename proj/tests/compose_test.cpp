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
#include <vector>

#include "cafold/compose.hpp"
#include "oracle.hpp"

namespace cafold {
namespace {

const RuleTable kRule30 = rule_from_number(30, 1);

// Frozen from oracle::compose (brute force, independent of the library).
constexpr const char* kRule30Fold3 = "42452238130157741347683853444557381390";
constexpr const char* kRule30Fold4 =
    "167270265058223841292929999069573707610552329176361282345067984341879179544"
    "684906477263597995683488864749687630891362290238065650843302062708148333758"
    "8750";

RuleTable from_oracle(const oracle::Rule& r) {
  RuleTable empty(static_cast<std::uint32_t>(r.radius));
  std::vector<std::uint64_t> words(empty.words().begin(), empty.words().end());
  for (std::size_t i = 0; i < r.outputs.size(); ++i)
    if (r.outputs[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  return RuleTable(static_cast<std::uint32_t>(r.radius), words);
}

TEST(ComposePair, Rule30Twice) {
  const RuleTable t = compose_pair(kRule30, kRule30);
  EXPECT_EQ(t.radius(), 2u);
  EXPECT_EQ(to_decimal(t), "535945230");
}

TEST(ComposePair, IdentityOuterWidensInner) {
  const RuleTable id = rule_from_number(204, 1);
  for (unsigned n : {30u, 90u, 110u, 184u}) {
    const RuleTable f = rule_from_number(n, 1);
    const RuleTable t = compose_pair(id, f);
    ASSERT_EQ(t.radius(), 2u);
    for (std::uint64_t x = 0; x < 32; ++x)
      EXPECT_EQ(t.output(x), f.output((x >> 1) & 7)) << n << " " << x;
  }
}

TEST(ComposePair, Rule150TwiceCancelsCrossTerms) {
  const RuleTable t = compose_pair(rule_from_number(150, 1), rule_from_number(150, 1));
  for (std::uint64_t x = 0; x < 32; ++x) {
    const std::uint64_t want = ((x >> 4) ^ (x >> 2) ^ x) & 1;
    EXPECT_EQ(t.output_bit(x), want) << x;
  }
}

TEST(ComposePair, DifferentRadiiMatchOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inner = oracle::random_rule(1, rng, false);
    const auto outer = oracle::random_rule(2, rng, false);
    const RuleTable t = compose_pair(from_oracle(outer), from_oracle(inner));
    ASSERT_EQ(t.radius(), 3u);
    for (std::uint64_t x = 0; x < 128; ++x) {
      oracle::Row cells(7);
      for (int j = 0; j < 7; ++j) cells[j] = static_cast<int>((x >> (6 - j)) & 1);
      const auto mid = oracle::step_truncated(inner, cells);
      ASSERT_EQ(static_cast<int>(t.output_bit(x)), outer.apply(mid, 0));
    }
  }
}

TEST(ComposeK, WorkedExampleFold3) {
  const RuleTable t = compose_k({kRule30, 3});
  // ⟨□,□,■,■,□,■,□⟩
  const std::vector<Color> x = {Color::white, Color::white, Color::black, Color::black,
                                Color::white, Color::black, Color::white};
  EXPECT_EQ(apply_local(t, x), Color::black);
}

TEST(ComposeK, FoldOneIsIdentity) {
  EXPECT_EQ(compose_k({kRule30, 1}), kRule30);
}

TEST(ComposeK, Rule30TableValues) {
  const RuleTable t3 = compose_k({kRule30, 3});
  EXPECT_EQ(t3.radius(), 3u);
  EXPECT_EQ(to_decimal(t3), kRule30Fold3);
  const RuleTable t4 = compose_k({kRule30, 4});
  EXPECT_EQ(t4.radius(), 4u);
  EXPECT_EQ(t4.size(), 512u);
  const std::string d = to_decimal(t4);
  EXPECT_EQ(d, kRule30Fold4);
  EXPECT_EQ(d.substr(0, 7), "1672702");
  EXPECT_EQ(d.substr(d.size() - 5), "88750");
}

TEST(ComposeK, MatchesBruteForceOracleOnRandomRules) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const auto base = oracle::random_rule(trial % 2 + 1, rng, false);
    for (int k = 2; k <= (base.radius == 1 ? 5 : 3); ++k) {
      const RuleTable got = compose_k({from_oracle(base), static_cast<std::uint32_t>(k)});
      ASSERT_EQ(got, from_oracle(oracle::compose(base, k)))
          << "radius " << base.radius << " k " << k;
    }
  }
}

TEST(ComposeK, RadiusLaw) {
  for (std::uint32_t k = 1; k <= 8; ++k) {
    EXPECT_EQ(compose_k({kRule30, k}).radius(), k);
    EXPECT_EQ((FoldSpec{rule_from_number(12345, 2), k}.radius()), 2 * k);
  }
  EXPECT_EQ(compose_k({rule_from_number(99999, 2), 3}).radius(), 6u);
}

TEST(ComposeK, Associativity) {
  const RuleTable c2 = compose_k({kRule30, 2});
  const RuleTable c3 = compose_k({kRule30, 3});
  const RuleTable c4 = compose_k({kRule30, 4});
  const RuleTable c6 = compose_k({kRule30, 6});
  EXPECT_EQ(c6, compose_pair(c2, c4));
  EXPECT_EQ(c6, compose_pair(c4, c2));
  EXPECT_EQ(c6, compose_pair(c3, c3));
}

// One composite update of a window equals k truncated base updates.
TEST(ComposeK, SemanticCorrectnessAllElementaryRules) {
  std::mt19937_64 rng(29);
  for (unsigned number = 0; number < 256; ++number) {
    const auto base_oracle = oracle::Rule::eca(number);
    for (std::uint32_t k : {2u, 3u, 4u}) {
      const RuleTable composite = compose_k({rule_from_number(number, 1), k});
      for (int s = 0; s < 10; ++s) {
        const oracle::Row cells = oracle::random_row(64, rng);
        oracle::Row want = cells;
        for (std::uint32_t i = 0; i < k; ++i)
          want = oracle::step_truncated(base_oracle, want);
        ASSERT_EQ(want.size(), 64 - 2 * k);
        for (std::size_t p = 0; p < want.size(); ++p) {
          std::uint64_t idx = 0;
          for (std::uint32_t j = 0; j < 2 * k + 1; ++j)
            idx = (idx << 1) | static_cast<std::uint64_t>(cells[p + j]);
          ASSERT_EQ(static_cast<int>(composite.output_bit(idx)), want[p])
              << "rule " << number << " k " << k << " cell " << p;
        }
      }
    }
  }
}

TEST(ComposeK, ChunkedAndThreadedBuildsAgree) {
  const FoldSpec spec{kRule30, 5};
  const RuleTable whole = compose_k(spec);
  const auto nwords = whole.words().size();
  std::vector<std::uint64_t> words(nwords);
  for (std::size_t first = 0; first < nwords; first += 3) {
    const std::size_t last = std::min(nwords, first + 3);
    compose_k_chunk(spec, first, last, std::span(words).subspan(first, last - first));
  }
  EXPECT_EQ(RuleTable(5, words), whole);
  BuildOptions opts;
  opts.threads = 4;
  EXPECT_EQ(compose_k(spec, opts), whole);
}

TEST(ComposeK, MemoryGuard) {
  BuildOptions opts;
  opts.max_table_bits = 1 << 10;
  EXPECT_NO_THROW(compose_k({kRule30, 4}, opts));  // 2^9 bits
  try {
    compose_k({kRule30, 5}, opts);  // 2^11 bits
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required_bytes(), 256u);
    EXPECT_EQ(e.budget_bytes(), 128u);
  }
  opts.override_budget = true;
  EXPECT_EQ(compose_k({kRule30, 5}, opts).radius(), 5u);
  // Default guard refuses 2^35-bit tables without building anything.
  EXPECT_THROW(compose_k({kRule30, 17}), BudgetExceeded);
}

TEST(ComposeK, InvalidSpecs) {
  EXPECT_THROW(compose_k({kRule30, 0}), std::invalid_argument);
  EXPECT_THROW(compose_k({kRule30, 32}), std::out_of_range);
}

TEST(BuildCostEstimate, FormulaValues) {
  EXPECT_DOUBLE_EQ(build_cost_estimate({kRule30, 1}), 4.0);
  EXPECT_DOUBLE_EQ(build_cost_estimate({kRule30, 3}), 576.0);
  EXPECT_DOUBLE_EQ(build_cost_estimate({kRule30, 10}), 104857600.0);
}

}  // namespace
}  // namespace cafold
