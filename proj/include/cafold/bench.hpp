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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cafold/compose.hpp"
#include "cafold/debruijn.hpp"
#include "cafold/engine.hpp"
#include "cafold/planner.hpp"
#include "cafold/rule.hpp"

namespace cafold {

struct BenchRecord {
  std::string rule_digest;
  std::uint32_t radius = 1;  // k * r
  Kernel kernel = Kernel::walk;
  TableLayout layout = TableLayout::standard;
  std::uint64_t gens = 1;
  double build_seconds = 0;
  double run_seconds = 0;
  std::uint64_t peak_table_bytes = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct ScalingFit {
  double coefficient = 0;  // seconds per squared base generation
  double r_squared = 0;
};

struct CampaignOptions {
  RuleTable base = rule_from_number(30, 1);
  std::vector<std::uint32_t> folds{1, 2, 4, 8};
  /// Largest base generation timed.
  std::uint64_t horizon = 10000;
  std::uint32_t repetitions = 5;
  /// Timed generations per series: horizon / 2^(c-1), ..., horizon / 2, horizon.
  std::uint32_t checkpoints = 4;
  std::vector<TableLayout> layouts{TableLayout::standard};
  bool include_baseline = true;
  std::uint64_t memory_budget_bytes = kDefaultMaxTableBits / 8;
  /// Wall-clock cap per series; its later repetitions are dropped once
  /// exceeded.
  double max_seconds_per_point = 120;
};

struct CampaignResult {
  std::vector<BenchRecord> records;
  /// One line per skipped fold, e.g. budget exceeded.
  std::vector<std::string> skipped;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Reachable generations closest to horizon / 2^i for a fold-k lattice.
inline std::vector<std::uint64_t> checkpoint_generations(std::uint64_t horizon,
                                                         std::uint32_t count,
                                                         std::uint32_t k) {
  std::vector<std::uint64_t> gens;
  for (std::uint32_t i = count; i-- > 0;) {
    const std::uint64_t target = std::max<std::uint64_t>(2, horizon >> i);
    std::uint64_t steps = (target - 1 + k / 2) / k;
    if (steps == 0) steps = 1;
    const std::uint64_t g = 1 + steps * k;
    if (gens.empty() || g > gens.back()) gens.push_back(g);
  }
  return gens;
}

using Clock = std::chrono::steady_clock;

/// Times one evolution from the simple seed, returning cumulative seconds at
/// each checkpoint.
inline std::vector<double> time_series(const RuleTable& table, std::uint32_t k,
                                       Kernel kernel, TableLayout layout,
                                       const std::vector<std::uint64_t>& gens) {
  std::vector<double> out;
  out.reserve(gens.size());
  std::size_t next = 0;
  RunOptions opts;
  opts.fold = k;
  opts.layout = layout;
  const auto start = Clock::now();
  opts.on_generation = [&](std::uint64_t gen) {
    if (next < gens.size() && gen == gens[next]) {
      out.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      ++next;
    }
  };
  run_to_generation(table, simple_seed(), gens.back(), kernel, opts);
  return out;
}

}  // namespace detail

inline CampaignResult run_campaign(const CampaignOptions& options) {
  CampaignResult result;
  if (options.repetitions == 0)
    throw std::invalid_argument("repetitions must be >= 1");
  if (options.checkpoints == 0)
    throw std::invalid_argument("checkpoints must be >= 1");

  struct Series {
    RuleTable table;
    std::uint32_t k;
    Kernel kernel;
    TableLayout layout;
    double build_seconds;
    std::uint64_t table_bytes;
    std::vector<std::uint64_t> gens;
    std::vector<std::vector<double>> samples;
    double spent = 0;
  };
  std::vector<Series> series;
  const auto add_series = [&](const RuleTable& table, std::uint32_t k,
                              Kernel kernel, TableLayout layout,
                              double build_seconds, std::uint64_t table_bytes) {
    auto gens =
        detail::checkpoint_generations(options.horizon, options.checkpoints, k);
    std::vector<std::vector<double>> samples(gens.size());
    series.push_back({table, k, kernel, layout, build_seconds, table_bytes,
                      std::move(gens), std::move(samples)});
  };

  for (std::uint32_t k : options.folds) {
    FoldSpec spec{options.base, k};
    const MemoryEstimate mem = memory_estimate(k, options.base.radius(),
                                               options.memory_budget_bytes);
    if (!mem.feasible) {
      result.skipped.push_back("k=" + std::to_string(k) + ": table needs " +
                               std::to_string(mem.table_bytes) +
                               " bytes, budget " +
                               std::to_string(options.memory_budget_bytes));
      continue;
    }
    const auto t0 = detail::Clock::now();
    const RuleTable table = compose_k(spec);
    const double build =
        std::chrono::duration<double>(detail::Clock::now() - t0).count();
    for (TableLayout layout : options.layouts) {
      double layout_build = build;
      std::uint64_t bytes = table.table_bytes();
      if (layout == TableLayout::debruijn_sequence) {
        const auto t1 = detail::Clock::now();
        const DeBruijnSequenceLayout l(table);
        layout_build +=
            std::chrono::duration<double>(detail::Clock::now() - t1).count();
        bytes = l.memory_bytes();
      }
      add_series(table, k, Kernel::walk, layout, layout_build, bytes);
    }
  }
  if (options.include_baseline && detail::is_rule30(options.base))
    add_series(options.base, 1, Kernel::bitparallel, TableLayout::standard, 0, 0);

  // Repetitions are interleaved across series so that slow drift in machine
  // speed lands on every series alike.
  for (auto& s : series)
    detail::time_series(s.table, s.k, s.kernel, s.layout, {s.gens.front()});
  for (std::uint32_t rep = 0; rep < options.repetitions; ++rep) {
    for (auto& s : series) {
      if (rep > 0 && s.spent > options.max_seconds_per_point) continue;
      const auto t = detail::time_series(s.table, s.k, s.kernel, s.layout, s.gens);
      for (std::size_t i = 0; i < s.gens.size(); ++i) s.samples[i].push_back(t[i]);
      s.spent += t.back();
    }
  }
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.gens.size(); ++i) {
      BenchRecord rec;
      rec.rule_digest = digest(s.table);
      rec.radius = s.table.radius();
      rec.kernel = s.kernel;
      rec.layout = s.layout;
      rec.gens = s.gens[i];
      rec.build_seconds = s.build_seconds;
      rec.run_seconds = detail::median(s.samples[i]);
      rec.peak_table_bytes = s.table_bytes;
      result.records.push_back(rec);
    }
  }
  return result;
}

/// Least-squares fit of run_seconds = c * gens^2 through the origin.
inline ScalingFit fit_quadratic(const std::vector<BenchRecord>& records) {
  if (records.size() < 3)
    throw std::invalid_argument("quadratic fit needs at least 3 records");
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& r : records) {
    lo = std::min(lo, static_cast<double>(r.gens));
    hi = std::max(hi, static_cast<double>(r.gens));
  }
  if (hi < 4 * lo)
    throw std::invalid_argument(
        "quadratic fit needs generations spanning at least a 4x range");
  double sxy = 0, sxx = 0, mean = 0;
  for (const auto& r : records) {
    const double x = static_cast<double>(r.gens) * static_cast<double>(r.gens);
    sxy += x * r.run_seconds;
    sxx += x * x;
    mean += r.run_seconds;
  }
  mean /= static_cast<double>(records.size());
  ScalingFit fit;
  fit.coefficient = sxy / sxx;
  double ss_res = 0, ss_tot = 0;
  for (const auto& r : records) {
    const double x = static_cast<double>(r.gens) * static_cast<double>(r.gens);
    ss_res += std::pow(r.run_seconds - fit.coefficient * x, 2);
    ss_tot += std::pow(r.run_seconds - mean, 2);
  }
  fit.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : (ss_res == 0 ? 1 : 0);
  return fit;
}

struct CostedFit {
  ScalingFit fit;
  double build_seconds = 0;
};

/// Generation where b's total time (build + c n^2) drops below a's. Empty when
/// b's coefficient is not smaller; 0 when b is never slower.
inline std::optional<double> crossover(const CostedFit& a, const CostedFit& b) {
  const double dc = a.fit.coefficient - b.fit.coefficient;
  if (!(dc > 0)) return std::nullopt;
  const double db = b.build_seconds - a.build_seconds;
  if (db <= 0) return 0.0;
  return std::sqrt(db / dc);
}

inline constexpr const char* kCsvHeader =
    "rule_digest,radius,kernel,layout,gens,build_seconds,run_seconds,"
    "peak_table_bytes";

inline void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const auto& r : records) {
    line.str("");
    line << r.rule_digest << ',' << r.radius << ',' << to_string(r.kernel) << ','
         << to_string(r.layout) << ',' << r.gens << ',' << r.build_seconds << ','
         << r.run_seconds << ',' << r.peak_table_bytes;
    out << line.str() << '\n';
  }
}

inline std::vector<BenchRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("CSV header mismatch");
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8)
      throw std::invalid_argument("CSV row needs 8 fields: " + line);
    BenchRecord r;
    r.rule_digest = f[0];
    r.radius = static_cast<std::uint32_t>(std::stoul(f[1]));
    r.kernel = parse_kernel(f[2]);
    r.layout = parse_layout(f[3]);
    r.gens = std::stoull(f[4]);
    r.build_seconds = std::stod(f[5]);
    r.run_seconds = std::stod(f[6]);
    r.peak_table_bytes = std::stoull(f[7]);
    out.push_back(r);
  }
  return out;
}

/// Fits each (kernel, layout, radius) series separately.
inline std::vector<BenchRecord> select(const std::vector<BenchRecord>& records,
                                       Kernel kernel, TableLayout layout,
                                       std::uint32_t radius) {
  std::vector<BenchRecord> out;
  for (const auto& r : records)
    if (r.kernel == kernel && r.layout == layout && r.radius == radius)
      out.push_back(r);
  return out;
}

/// Per-unit constants for the planner: build seconds per k^2 2^(2kr) and run
/// seconds per modeled cell update (n^2 / k), from a standard-layout walk
/// series at radius k * base_radius.
inline CostCalibration calibrate(const std::vector<BenchRecord>& records,
                                 std::uint32_t base_radius) {
  CostCalibration c;
  double build_sum = 0, run_sum = 0;
  int build_n = 0, run_n = 0;
  for (const auto& r : records) {
    if (r.kernel != Kernel::walk || r.layout != TableLayout::standard) continue;
    if (r.radius % base_radius != 0) continue;
    const std::uint32_t k = r.radius / base_radius;
    const double g = static_cast<double>(r.gens);
    run_sum += r.run_seconds / (g * g / k);
    ++run_n;
    if (k > 1 && r.build_seconds > 0) {
      build_sum += r.build_seconds / modeled_build_cost(k, base_radius);
      ++build_n;
    }
  }
  if (run_n) c.per_cell_update = run_sum / run_n;
  if (build_n) c.per_table_entry = build_sum / build_n;
  return c;
}

}  // namespace cafold
