/*
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


// Acceptance run: one PASS/FAIL line per criterion. Exit code is the number
// of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "wsopt/bench.hpp"
#include "wsopt/datagen.hpp"
#include "wsopt/engine.hpp"
#include "wsopt/error.hpp"
#include "wsopt/factor.hpp"
#include "wsopt/plan.hpp"

using namespace wsopt;

namespace {

// Pinned limits.
constexpr double kExampleSeconds = 1e-3;
constexpr double kCoverageSeconds = 10.0;
constexpr double kFuzzSeconds = 300.0;
constexpr double kCounterSeconds = 60.0;
constexpr double kThroughputSeconds = 300.0;
constexpr double kCorrelationSeconds = 300.0;
constexpr double kOptimizerSeconds = 0.1;

constexpr Tick kCoverageMaxRange = 48;
constexpr std::size_t kFuzzSets = 100;
constexpr std::size_t kFuzzMaxWindows = 6;
constexpr std::size_t kFuzzEvents = 10'000;
constexpr double kAvgTolerance = 1e-9;
constexpr double kHoppingCounterTolerance = 0.05;
constexpr Tick kHoppingMinPeriodsPerRange = 20;  // R >= 20 r_max for the hopping counter check
constexpr std::size_t kThroughputEvents = 10'000'000;
constexpr double kMinThroughputRatio = 2.0;
constexpr double kSpeedupTolerance = 0.05;
constexpr std::size_t kCorrelationSets = 24;
constexpr double kMinPearson = 0.95;
constexpr std::size_t kOptimizerWindows = 20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs `body`, turning an exception into a failure line.
void criterion(int id, const char* name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(id, name, ok, detail);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

WindowSet tumbling(std::initializer_list<Tick> ranges) {
  WindowSet ws;
  for (Tick r : ranges) ws.add(WindowSpec(r, r));
  return ws;
}

// Window sets for the fuzzing corpus. Sets whose period does not fit the
// cost arithmetic are redrawn.
std::vector<WindowSet> fuzz_corpus() {
  std::vector<WindowSet> out;
  SplitMix64 rng(2024);
  while (out.size() < kFuzzSets) {
    GenParams p;
    p.seed = rng.next();
    p.n = 1 + rng.below(kFuzzMaxWindows);
    p.tumbling = out.size() % 2 == 0;
    bool sequential = out.size() % 4 >= 2;
    p.k_r = p.k_s = 4 + rng.below(13);
    WindowSet ws;
    try {
      ws = sequential ? sequential_gen(p) : random_gen(p);
      cost_context(ws, 4);
      min_cost_wcg_with_factors(ws, AggFunc::Sum);
      min_cost_wcg_with_factors(ws, AggFunc::Min);
    } catch (const Error&) {
      continue;  // too few distinct windows, or a period past 63 bits
    }
    out.push_back(ws);
  }
  return out;
}

bool ten_to_forty(std::string& d) {
  auto t0 = Clock::now();
  MinCostWcg m = min_cost_wcg(tumbling({10, 20, 30, 40}), AggFunc::Min);
  std::int64_t naive = naive_cost(m.context);
  auto kept = m.kept_edges();
  double dt = seconds_since(t0);
  std::sort(kept.begin(), kept.end());
  bool edges = kept == std::vector<WcgEdge>{{0, 1}, {0, 2}, {1, 3}};
  d = "naive " + std::to_string(naive) + ", optimized " + std::to_string(m.total) +
      ", edges " + (edges ? "W1->W2 W1->W3 W2->W4" : "unexpected") + fmt(", %.3f ms", dt * 1e3);
  return naive == 480 && m.total == 150 && edges && dt < kExampleSeconds;
}

bool twenty_to_forty(std::string& d) {
  auto t0 = Clock::now();
  FactoredWcg f = min_cost_wcg_with_factors(tumbling({20, 30, 40}), AggFunc::Min);
  double dt = seconds_since(t0);
  bool one = f.insertions.size() == 1 && f.insertions[0].window == WindowSpec(10, 10);
  d = "without factors " + std::to_string(f.baseline_total) + ", with factors " +
      std::to_string(f.result.total) + ", factors " + std::to_string(f.insertions.size()) +
      fmt(", %.3f ms", dt * 1e3);
  return f.baseline_total == 246 && f.result.total == 150 && one && dt < kExampleSeconds;
}

bool coverage(std::string& d) {
  auto t0 = Clock::now();
  auto specs = oracle::all_specs(kCoverageMaxRange);
  std::size_t pairs = 0, bad = 0;
  for (const auto& a : specs) {
    for (const auto& b : specs) {
      ++pairs;
      bool c = oracle::covers(a, b);
      bool ok = covers(a, b) == c && partitions(a, b) == oracle::partitions(a, b);
      if (ok && c) {
        Interval first{0, a.range()};
        ok = covering_multiplier(a, b) == oracle::inside(first, b).size();
      }
      if (!ok) ++bad;
    }
  }
  double dt = seconds_since(t0);
  d = std::to_string(pairs) + " pairs, " + std::to_string(bad) + " disagreements" +
      fmt(", %.2f s", dt);
  return bad == 0 && dt < kCoverageSeconds;
}

bool fuzz(const std::vector<WindowSet>& corpus, std::string& d) {
  auto t0 = Clock::now();
  const AggFunc funcs[] = {AggFunc::Min, AggFunc::Max, AggFunc::Sum, AggFunc::Count, AggFunc::Avg};
  std::size_t runs = 0, mismatches = 0;
  std::string first;
  SplitMix64 rng(99);
  for (const auto& ws : corpus) {
    Tick longest = 0;
    for (const auto& w : ws) longest = std::max(longest, w.range());
    Tick horizon = std::max<Tick>(4 * longest, 500);
    EventBatch ev = random_stream(kFuzzEvents, horizon, 1 + rng.below(5), rng.next());
    for (AggFunc f : funcs) {
      auto want = naive_eval(ws, f, ev, horizon);
      const double tol = f == AggFunc::Avg ? kAvgTolerance : 0.0;
      for (bool factors : {false, true}) {
        PlanDag p = factors ? rewrite(min_cost_wcg_with_factors(ws, f).result, f)
                            : rewrite(min_cost_wcg(ws, f), f);
        auto got = run(p, ev, horizon).rows;
        sort_rows(got);
        ++runs;
        if (auto diff = first_difference(want, got, tol)) {
          if (mismatches++ == 0) first = " first: " + *diff;
        }
      }
    }
  }
  double dt = seconds_since(t0);
  d = std::to_string(corpus.size()) + " sets, " + std::to_string(runs) + " plan runs, " +
      std::to_string(mismatches) + " mismatches" + fmt(", %.1f s", dt) + first;
  return mismatches == 0 && dt < kFuzzSeconds;
}

bool counters(std::string& d) {
  auto t0 = Clock::now();
  SplitMix64 rng(5);
  std::size_t tumbling_sets = 0, hopping_sets = 0, exact_plans = 0, bad = 0;
  double worst_hop = 0;
  while (tumbling_sets < 30 || hopping_sets < 30) {
    GenParams p;
    p.seed = rng.next();
    p.tumbling = tumbling_sets < 30;
    p.n = 2 + rng.below(5);
    p.k_r = p.k_s = 12;
    WindowSet ws = random_gen(p);
    std::int64_t eta = 1 + static_cast<std::int64_t>(rng.below(3));
    CostContext ctx = cost_context(ws, eta);
    Tick longest = 0;
    for (const auto& w : ws) longest = std::max(longest, w.range());
    const std::uint64_t c = 1 + rng.below(2);
    if (ctx.period * c * eta > 3'000'000) continue;
    if (!p.tumbling && ctx.period < kHoppingMinPeriodsPerRange * longest) continue;
    // One key: the model counts one record per sub-aggregate, not one per key.
    EventBatch ev = constant_rate_batch(eta, c * ctx.period, 1, rng.next());
    for (AggFunc f : {AggFunc::Min, AggFunc::Sum}) {
      for (bool factors : {false, true}) {
        MinCostWcg m = factors ? min_cost_wcg_with_factors(ws, f, eta).result : min_cost_wcg(ws, f, eta);
        RunResult r = run(rewrite(m, f), ev, c * ctx.period, RunOptions{false});
        double measured = static_cast<double>(r.metrics.window_input_total());
        double model = static_cast<double>(c) * static_cast<double>(m.total);
        // A covered-by factor may be hopping even in a tumbling set; such a
        // plan is held to the hopping tolerance.
        bool tumbling_plan = true;
        for (const auto& n : m.graph.nodes) tumbling_plan &= n.window.tumbling();
        if (tumbling_plan) {
          ++exact_plans;
          if (measured != model) ++bad;
        } else {
          double err = std::abs(measured - model) / model;
          worst_hop = std::max(worst_hop, err);
          if (err > kHoppingCounterTolerance) ++bad;
        }
      }
    }
    (p.tumbling ? tumbling_sets : hopping_sets)++;
  }
  double dt = seconds_since(t0);
  d = std::to_string(tumbling_sets) + " tumbling and " + std::to_string(hopping_sets) +
      " hopping sets, " + std::to_string(exact_plans) + " tumbling-only plans exact" +
      fmt(", worst hopping error %.2f%%", worst_hop * 100) + ", " + std::to_string(bad) +
      " failures" + fmt(", %.1f s", dt);
  return bad == 0 && dt < kCounterSeconds;
}

bool deltas(const std::vector<WindowSet>& corpus, std::string& d) {
  std::size_t checked = 0, bad = 0;
  for (const auto& ws : corpus) {
    for (AggFunc f : {AggFunc::Min, AggFunc::Sum}) {
      for (std::int64_t eta : {1, 4}) {
        FactoredWcg fw = min_cost_wcg_with_factors(ws, f, eta);
        for (const auto& ins : fw.insertions) {
          const auto& ctx = fw.result.context;
          std::int64_t without = solve_min_cost(oracle::truncate(fw.result.graph, ins.node), ctx).total;
          std::int64_t with = solve_min_cost(oracle::truncate(fw.result.graph, ins.node + 1), ctx).total;
          ++checked;
          if (Rational(without - with) != ins.delta) ++bad;
        }
      }
    }
  }
  d = std::to_string(checked) + " inserted factors, " + std::to_string(bad) + " mismatches";
  return checked > 0 && bad == 0;
}

bool throughput(std::string& d) {
  auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.gen.n = 10;
  cfg.gen.tumbling = true;
  cfg.sequential = true;
  cfg.event_budget = kThroughputEvents;
  cfg.horizon = kThroughputEvents;  // eta = 1, so one event per tick
  WindowSet ws = sequential_gen(cfg.gen);
  BenchRow row = bench_window_set(ws, cfg, cfg.stream_seed);
  double gt = row.gamma_t(row.factored);
  double gc = row.gamma_c(row.factored);
  double cs = row.counter_speedup(row.factored);
  double dt = seconds_since(t0);
  double speedup_err = std::abs(cs - gc) / gc;
  d = "windows " + std::to_string(ws.size()) + fmt(", throughput ratio %.2f", gt) +
      fmt(", gamma_c %.3f", gc) + fmt(", counter speedup %.3f", cs) + fmt(", %.1f s", dt);
  return gt >= kMinThroughputRatio && speedup_err <= kSpeedupTolerance && dt < kThroughputSeconds;
}

bool correlation(std::string& d) {
  auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.sets = kCorrelationSets;
  cfg.gen.n = 5;
  cfg.gen.k_r = 10;
  cfg.gen.seed = 11;
  cfg.event_budget = 300'000;
  BenchReport rep = run_bench(cfg);
  double dt = seconds_since(t0);
  auto show = [](const std::optional<double>& v) { return v ? fmt("%.4f", *v) : std::string("n/a"); };
  d = std::to_string(rep.rows.size()) + " sets, r(optimized) " + show(rep.pearson_optimized) +
      ", r(factored) " + show(rep.pearson_factored) + fmt(", %.1f s", dt);
  return rep.rows.size() >= 20 && rep.pearson_optimized && *rep.pearson_optimized >= kMinPearson &&
         rep.pearson_factored && *rep.pearson_factored >= kMinPearson && dt < kCorrelationSeconds;
}

bool overhead(std::string& d) {
  double worst = 0;
  for (bool tumble : {true, false}) {
    for (AggFunc f : {AggFunc::Min, AggFunc::Sum}) {
      GenParams p;
      p.n = kOptimizerWindows;
      p.tumbling = tumble;
      p.seed = 3;
      WindowSet ws = sequential_gen(p);
      auto t0 = Clock::now();
      FactoredWcg fw = min_cost_wcg_with_factors(ws, f);
      rewrite(fw.result, f);
      worst = std::max(worst, seconds_since(t0));
    }
  }
  d = "|ws| = " + std::to_string(kOptimizerWindows) + fmt(", slowest %.2f ms", worst * 1e3);
  return worst < kOptimizerSeconds;
}

}  // namespace

int main() {
  criterion(1, "ten-to-forty-regression", ten_to_forty);
  criterion(2, "factor-regression", twenty_to_forty);
  criterion(3, "coverage-oracle", coverage);
  std::vector<WindowSet> corpus = fuzz_corpus();
  criterion(4, "plan-equivalence-fuzz", [&](std::string& d) { return fuzz(corpus, d); });
  criterion(5, "cost-model-counters", counters);
  criterion(6, "benefit-consistency", [&](std::string& d) { return deltas(corpus, d); });
  criterion(7, "throughput", throughput);
  criterion(8, "correlation", correlation);
  criterion(9, "optimizer-overhead", overhead);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
