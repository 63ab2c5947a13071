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

// Command-line front end. Machine-readable output goes to `out`, commentary
// to `err`. Exit codes: 0 ok, 1 verification failure, 2 usage, 3 resource.

#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <memory>
#include <optional>
#include <vector>

#include "cafold/cafold.hpp"

namespace cafold::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

/// Environment override for the table memory budget, in bytes.
inline constexpr const char* kBudgetEnv = "CAFOLD_MEM_BUDGET";

inline std::uint64_t default_budget_bytes() {
  if (const char* env = std::getenv(kBudgetEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(kBudgetEnv) +
                                  " must be a byte count");
    }
  }
  return kDefaultMaxTableBits / 8;
}

struct VerifyOptions {
  std::vector<std::uint32_t> rules;
  std::vector<std::uint32_t> folds{2};
  std::uint32_t seeds = 1;
  std::uint32_t steps = 8;
  std::uint32_t width = 64;
  std::uint64_t rng_seed = 1;
};

struct VerifyReport {
  std::uint64_t comparisons = 0;
  std::vector<std::string> counterexamples;
  bool passed() const { return counterexamples.empty(); }
};

/// Composite evolution against k base steps per composite step, for every
/// (rule, k, seed). White-quiescent rules run embedded in a white row; the
/// rest run on a finite random window and compare the interior.
inline VerifyReport verify(const VerifyOptions& o) {
  VerifyReport report;
  std::mt19937_64 rng(o.rng_seed);
  for (std::uint32_t number : o.rules) {
    const RuleTable base = rule_from_number(number, 1);
    for (std::uint32_t k : o.folds) {
      const RuleTable composite = compose_k({base, k});
      const std::uint32_t r = base.radius();
      for (std::uint32_t s = 0; s < o.seeds; ++s) {
        const bool quiescent = base.output(0) == Color::white;
        const std::size_t width =
            quiescent ? o.width : o.width + 2ull * k * r * o.steps;
        std::vector<Color> cells(width);
        for (auto& c : cells) c = static_cast<Color>(rng() & 1u);
        const auto mismatch = [&](std::uint32_t m, const std::string& got,
                                  const std::string& want) {
          std::ostringstream msg;
          msg << "rule " << number << " k=" << k << " seed " << s
              << " composite step " << m << " (base generation "
              << k * m + 1 << ")\n  composite: " << got
              << "\n  base:      " << want;
          report.counterexamples.push_back(msg.str());
        };
        if (quiescent) {
          Configuration slow = Configuration::from_cells(
              cells, static_cast<std::int64_t>(width / 2));
          Configuration fast = slow;
          for (std::uint32_t m = 1; m <= o.steps; ++m) {
            for (std::uint32_t i = 0; i < k; ++i) slow = step_naive(base, slow);
            fast = step_walk(composite, fast, k);
            ++report.comparisons;
            if (!(fast == slow)) {
              mismatch(m, fast.to_text(), slow.to_text());
              break;
            }
          }
        } else {
          std::vector<Color> slow = cells, fast = cells;
          for (std::uint32_t m = 1; m <= o.steps; ++m) {
            for (std::uint32_t i = 0; i < k; ++i) slow = step_interior(base, slow);
            fast = step_interior(composite, fast);
            ++report.comparisons;
            if (fast != slow) {
              const auto text = [](const std::vector<Color>& v) {
                std::string t;
                for (Color c : v) t.push_back(c == Color::black ? '#' : '.');
                return t;
              };
              mismatch(m, text(fast), text(slow));
              break;
            }
          }
        }
      }
    }
  }
  return report;
}

namespace detail {

inline std::vector<std::uint32_t> parse_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto lo = std::stoul(item.substr(0, dash));
      const auto hi = std::stoul(item.substr(dash + 1));
      for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint32_t>(v));
    } else {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

inline std::vector<std::uint32_t> parse_rule_set(const std::string& text) {
  std::vector<std::uint32_t> out;
  if (text == "all" || text == "even") {
    for (std::uint32_t n = 0; n < 256; ++n)
      if (text == "all" || n % 2 == 0) out.push_back(n);
    return out;
  }
  out = parse_list(text);
  for (auto n : out)
    if (n > 255) throw std::invalid_argument("verify takes radius-1 rules 0..255");
  return out;
}

struct RuleArgs {
  std::string rule;
  std::string rule_file;
  std::uint32_t radius = 1;
  std::uint32_t k = 1;
  std::string cache_dir;
  bool allow_large = false;
  unsigned threads = 1;
};

inline void add_rule_args(CLI::App* app, RuleArgs& a, bool with_k) {
  app->add_option("--rule", a.rule,
                  "Rule as a decimal Wolfram number or an r=<radius>;hex=<..> line");
  app->add_option("--rule-file", a.rule_file,
                  "Read the rule from the first line of a file instead of --rule");
  app->add_option("--radius", a.radius, "Radius of the given rule")
      ->check(CLI::Range(1u, kMaxRadius));
  if (with_k) {
    app->add_option("--k", a.k, "Fold count; the composite rule has radius k*r")
        ->check(CLI::PositiveNumber);
    app->add_option("--cache-dir", a.cache_dir,
                    "Directory caching composite tables by base digest and k");
    app->add_flag("--allow-large", a.allow_large,
                  "Build tables beyond the memory budget");
    app->add_option("--threads", a.threads, "Threads for the table build")
        ->check(CLI::PositiveNumber);
  }
}

inline RuleTable load_base(const RuleArgs& a) {
  if (!a.rule_file.empty()) {
    std::ifstream in(a.rule_file);
    if (!in) throw std::invalid_argument("cannot read " + a.rule_file);
    std::string line;
    std::getline(in, line);
    return parse_rule(line, a.radius);
  }
  if (a.rule.empty()) throw std::invalid_argument("--rule or --rule-file is required");
  return parse_rule(a.rule, a.radius);
}

inline RuleTable build_composite(const RuleArgs& a, std::ostream& err) {
  const RuleTable base = load_base(a);
  const FoldSpec spec{base, a.k};
  validate(spec);
  std::filesystem::path cached;
  if (!a.cache_dir.empty() && a.k > 1) {
    cached = std::filesystem::path(a.cache_dir) /
             (digest(base) + "-k" + std::to_string(a.k) + ".rule");
    if (std::filesystem::exists(cached)) {
      std::ifstream in(cached);
      std::string line;
      std::getline(in, line);
      RuleTable t = deserialize(line);
      if (t.radius() == spec.radius()) {
        err << "loaded cached table " << cached.string() << "\n";
        return t;
      }
    }
  }
  BuildOptions opts;
  opts.max_table_bits = default_budget_bytes() * 8;
  opts.override_budget = a.allow_large;
  opts.threads = a.threads;
  const auto t0 = std::chrono::steady_clock::now();
  RuleTable table = compose_k(spec, opts);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << "built k=" << a.k << " radius " << table.radius() << " table ("
      << table.table_bytes() << " bytes) in " << secs << " s\n";
  if (!cached.empty()) {
    std::filesystem::create_directories(cached.parent_path());
    std::ofstream(cached) << serialize(table) << '\n';
  }
  return table;
}

inline void write_pbm(std::ostream& out, const std::vector<Configuration>& rows) {
  std::int64_t lo = 0, hi = 0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.leftmost());
    hi = std::max(hi, r.rightmost());
  }
  out << "P1\n" << (hi - lo + 1) << ' ' << rows.size() << '\n';
  for (const auto& r : rows) {
    int col = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
      out << (r.at(i) == Color::black ? '1' : '0');
      if (++col == 64 && i != hi) {
        out << '\n';
        col = 0;
      }
    }
    out << '\n';
  }
}

inline CostCalibration read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  CostCalibration c;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    const double value = std::stod(line.substr(eq + 1));
    if (key == "per_table_entry")
      c.per_table_entry = value;
    else if (key == "per_cell_update")
      c.per_cell_update = value;
    else
      throw std::invalid_argument("unknown calibration key " + key);
  }
  return c;
}

inline void write_calibration(std::ostream& out, const CostCalibration& c) {
  out << std::setprecision(17) << "per_table_entry=" << c.per_table_entry
      << "\nper_cell_update=" << c.per_cell_update << '\n';
}

inline std::ostream& open_or(const std::string& path, std::ofstream& file,
                             std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot write " + path);
  return file;
}

}  // namespace detail

/// Builds the command tree. Callbacks run after a successful parse and store
/// their exit code in `code`.
inline std::unique_ptr<CLI::App> make_app(std::ostream& out, std::ostream& err,
                                          int& code) {
  auto app = std::make_unique<CLI::App>(
      "cafold: k-fold composition of 1-D two-color cellular automata");
  app->require_subcommand(1);
  app->fallthrough(false);

  // compose
  {
    auto* cmd = app->add_subcommand("compose", "Build the k-fold composite rule table");
    auto a = std::make_shared<detail::RuleArgs>();
    auto out_file = std::make_shared<std::string>();
    auto decimal = std::make_shared<bool>(false);
    detail::add_rule_args(cmd, *a, true);
    cmd->add_option("--out", *out_file, "Also write the serialized table to this file");
    cmd->add_flag("--decimal", *decimal, "Print the decimal rule number instead of hex");
    cmd->callback([&, a, out_file, decimal] {
      const RuleTable t = detail::build_composite(*a, err);
      if (*decimal)
        out << to_decimal(t) << '\n';
      else
        out << serialize(t) << '\n';
      if (!out_file->empty()) {
        std::ofstream f(*out_file);
        if (!f) throw std::invalid_argument("cannot write " + *out_file);
        f << serialize(t) << '\n';
      }
      err << "digest " << digest(t) << "\n";
      code = kExitOk;
    });
  }

  // run
  {
    auto* cmd = app->add_subcommand("run", "Evolve from a seed to a base generation");
    auto a = std::make_shared<detail::RuleArgs>();
    auto gens = std::make_shared<std::uint64_t>(1);
    auto kernel = std::make_shared<std::string>("walk");
    auto layout = std::make_shared<std::string>("standard");
    auto seed = std::make_shared<std::string>();
    auto emit_row = std::make_shared<std::string>();
    auto emit_pbm = std::make_shared<std::string>();
    detail::add_rule_args(cmd, *a, true);
    cmd->add_option("--gens", *gens, "Target base generation (the seed is generation 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--kernel", *kernel, "naive, walk or bitparallel (Rule 30 only)")
        ->check(CLI::IsMember({"naive", "walk", "bitparallel"}));
    cmd->add_option("--layout", *layout, "Walk table layout: standard or debruijn")
        ->check(CLI::IsMember({"standard", "debruijn"}));
    cmd->add_option("--seed", *seed,
                    "Initial row of '.' and '#', centered on index 0 (default: one black cell)");
    cmd->add_option("--emit-row", *emit_row, "Write the final row to this file");
    cmd->add_option("--emit-pbm", *emit_pbm, "Write the space-time diagram as plain PBM");
    cmd->callback([&, a, gens, kernel, layout, seed, emit_row, emit_pbm] {
      const RuleTable t = detail::build_composite(*a, err);
      Configuration start = simple_seed();
      if (!seed->empty())
        start = Configuration::from_text(*seed, static_cast<std::int64_t>(seed->size() / 2));
      RunOptions opts;
      opts.fold = a->k;
      opts.layout = parse_layout(*layout);
      std::vector<Configuration> rows;
      if (!emit_pbm->empty())
        opts.on_row = [&rows](const Configuration& row) { rows.push_back(row); };
      const Configuration last =
          run_to_generation(t, start, *gens, parse_kernel(*kernel), opts);
      out << last.to_text() << '\n';
      err << "generation " << last.generation() << ", cells " << last.leftmost()
          << ".." << last.rightmost() << ", black " << last.popcount() << "\n";
      if (!emit_row->empty()) {
        std::ofstream f(*emit_row);
        if (!f) throw std::invalid_argument("cannot write " + *emit_row);
        f << last.to_text() << '\n';
      }
      if (!emit_pbm->empty()) {
        std::ofstream f(*emit_pbm);
        if (!f) throw std::invalid_argument("cannot write " + *emit_pbm);
        detail::write_pbm(f, rows);
      }
      code = kExitOk;
    });
  }

  // plan
  {
    auto* cmd = app->add_subcommand("plan", "Choose the fold count for a target generation");
    auto gens = std::make_shared<double>(0);
    auto radius = std::make_shared<std::uint32_t>(1);
    auto budget = std::make_shared<std::optional<std::uint64_t>>();
    auto calib = std::make_shared<std::string>();
    cmd->add_option("--gens", *gens, "Target base generation n (>= 2)")->required();
    cmd->add_option("--radius", *radius, "Base rule radius r")
        ->check(CLI::Range(1u, kMaxRadius));
    cmd->add_option("--mem-budget", *budget,
                    "Table memory budget in bytes (default 1 GiB or $CAFOLD_MEM_BUDGET)");
    cmd->add_option("--calib", *calib,
                    "Calibration file with per_table_entry= and per_cell_update= lines");
    cmd->callback([&, gens, radius, budget, calib] {
      PlannerOptions po;
      po.memory_budget_bytes = budget->value_or(default_budget_bytes());
      if (!calib->empty()) po.calibration = detail::read_calibration(*calib);
      const CompositionPlan plan = optimal_k(*gens, *radius, po);
      const auto last_k = std::max<std::uint32_t>(
          plan.k_chosen + 1,
          static_cast<std::uint32_t>(std::ceil(plan.k_continuous)) + 1);
      out << "k,table_bytes,build_cost,run_cost,total,feasible,chosen\n";
      out << std::setprecision(10);
      for (std::uint32_t k = 1; k <= last_k && k * *radius <= kMaxRadius; ++k) {
        const CompositionPlan p = make_plan(*gens, *radius, k, po.calibration);
        const MemoryEstimate m = memory_estimate(k, *radius, po.memory_budget_bytes);
        out << k << ',' << m.table_bytes << ',' << p.build_cost << ','
            << p.run_cost << ',' << p.total_cost() << ',' << (m.feasible ? 1 : 0)
            << ',' << (k == plan.k_chosen ? 1 : 0) << '\n';
      }
      err << "break-even k = " << plan.k_continuous << ", chosen k = "
          << plan.k_chosen << ", table " << memory_estimate(plan).table_bytes
          << " bytes (n^2/k^3 proxy " << memory_estimate(plan).asymptotic_proxy
          << ")\n";
      code = kExitOk;
    });
  }

  // graph
  {
    auto* cmd = app->add_subcommand("graph", "Export the De Bruijn graph as DOT");
    auto a = std::make_shared<detail::RuleArgs>();
    auto dot = std::make_shared<std::string>();
    detail::add_rule_args(cmd, *a, true);
    cmd->add_option("--dot", *dot, "Output DOT file ('-' for stdout)")->required();
    cmd->callback([&, a, dot] {
      const RuleTable t = detail::build_composite(*a, err);
      std::ofstream f;
      detail::open_or(*dot, f, out) << export_dot(build_graph(t));
      code = kExitOk;
    });
  }

  // bench
  {
    auto* cmd = app->add_subcommand("bench", "Time walk kernels across fold counts");
    auto a = std::make_shared<detail::RuleArgs>();
    a->rule = "30";
    auto folds = std::make_shared<std::string>("1,2,4,8");
    auto horizon = std::make_shared<std::uint64_t>(10000);
    auto reps = std::make_shared<std::uint32_t>(5);
    auto checkpoints = std::make_shared<std::uint32_t>(4);
    auto csv = std::make_shared<std::string>();
    auto layout = std::make_shared<std::string>("standard");
    auto no_baseline = std::make_shared<bool>(false);
    auto calib_out = std::make_shared<std::string>();
    detail::add_rule_args(cmd, *a, false);
    cmd->add_option("--folds", *folds, "Comma-separated fold counts");
    cmd->add_option("--horizon", *horizon, "Largest base generation timed")
        ->check(CLI::Range(std::uint64_t{16}, std::uint64_t{1} << 40));
    cmd->add_option("--reps", *reps, "Repetitions per point (median reported)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--checkpoints", *checkpoints,
                    "Timed generations per series, halving back from the horizon")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--csv", *csv, "CSV output file ('-' or omitted for stdout)");
    cmd->add_option("--layout", *layout, "standard, debruijn or both")
        ->check(CLI::IsMember({"standard", "debruijn", "both"}));
    cmd->add_flag("--no-baseline", *no_baseline, "Skip the bit-parallel Rule 30 series");
    cmd->add_option("--calib-out", *calib_out,
                    "Write planner calibration constants to this file");
    cmd->callback([&, a, folds, horizon, reps, checkpoints, csv, layout,
                   no_baseline, calib_out] {
      CampaignOptions co;
      co.base = detail::load_base(*a);
      co.folds = detail::parse_list(*folds);
      co.horizon = *horizon;
      co.repetitions = *reps;
      co.checkpoints = *checkpoints;
      co.include_baseline = !*no_baseline;
      co.memory_budget_bytes = default_budget_bytes();
      if (*layout == "both")
        co.layouts = {TableLayout::standard, TableLayout::debruijn_sequence};
      else
        co.layouts = {parse_layout(*layout)};
      const CampaignResult res = run_campaign(co);
      std::ofstream f;
      write_csv(detail::open_or(*csv, f, out), res.records);
      for (const auto& s : res.skipped) err << "skipped " << s << "\n";
      // Per-series fits on stderr.
      std::vector<std::tuple<Kernel, TableLayout, std::uint32_t>> series;
      for (const auto& rec : res.records) {
        const auto key = std::make_tuple(rec.kernel, rec.layout, rec.radius);
        if (std::find(series.begin(), series.end(), key) == series.end())
          series.push_back(key);
      }
      for (const auto& [kernel, lay, radius] : series) {
        const auto pts = select(res.records, kernel, lay, radius);
        err << to_string(kernel) << '/' << to_string(lay) << " radius " << radius;
        try {
          const ScalingFit fit = fit_quadratic(pts);
          err << ": c = " << fit.coefficient << " s/gen^2, R^2 = " << fit.r_squared;
        } catch (const std::invalid_argument& e) {
          err << ": no fit (" << e.what() << ")";
        }
        err << "\n";
      }
      if (!calib_out->empty()) {
        std::ofstream cf(*calib_out);
        if (!cf) throw std::invalid_argument("cannot write " + *calib_out);
        detail::write_calibration(cf, calibrate(res.records, co.base.radius()));
      }
      code = kExitOk;
    });
  }

  // verify
  {
    auto* cmd = app->add_subcommand("verify",
                                    "Check composite evolution against repeated base steps");
    auto rules = std::make_shared<std::string>("30");
    auto folds = std::make_shared<std::string>("2");
    auto o = std::make_shared<VerifyOptions>();
    cmd->add_option("--rules", *rules,
                    "Radius-1 rule numbers: list/ranges like 30,90,100-110, 'even' or 'all'");
    cmd->add_option("--folds", *folds, "Comma-separated fold counts");
    cmd->add_option("--seeds", o->seeds, "Random seeds per (rule, k)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o->steps, "Composite steps per seed")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--width", o->width, "Random seed width in cells")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rng-seed", o->rng_seed, "Seed for the random rows");
    cmd->callback([&, rules, folds, o] {
      o->rules = detail::parse_rule_set(*rules);
      o->folds = detail::parse_list(*folds);
      const VerifyReport rep = verify(*o);
      for (const auto& c : rep.counterexamples) out << "MISMATCH " << c << '\n';
      out << (rep.passed() ? "PASS" : "FAIL") << ' ' << rep.comparisons
          << " comparisons, " << rep.counterexamples.size() << " mismatches\n";
      code = rep.passed() ? kExitOk : kExitVerifyFailed;
    });
  }
  return app;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err) {
  int code = kExitOk;
  std::unique_ptr<CLI::App> app;
  try {
    app = make_app(out, err, code);
    app->parse(argc, argv);
    return code;
  } catch (const CLI::CallForHelp&) {
    auto* sub = app->get_subcommands().empty() ? app.get() : app->get_subcommands().front();
    out << sub->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what()
        << " (raise $" << kBudgetEnv << " or pass --allow-large)\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cafold::cli
