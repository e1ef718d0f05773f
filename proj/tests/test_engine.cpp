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


#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "wsopt/datagen.hpp"
#include "wsopt/engine.hpp"
#include "wsopt/error.hpp"
#include "wsopt/factor.hpp"
#include "wsopt/plan.hpp"

using namespace wsopt;

namespace {

WindowSet tumbling(std::initializer_list<Tick> ranges) {
  WindowSet ws;
  for (Tick r : ranges) ws.add(WindowSpec(r, r));
  return ws;
}

std::vector<ResultRow> sorted(std::vector<ResultRow> rows) {
  sort_rows(rows);
  return rows;
}

const OperatorMetrics& metrics_for(const RunMetrics& m, const WindowSpec& w) {
  for (const auto& op : m.operators) {
    if (op.kind == NodeKind::WindowAgg && op.window == w) return op;
  }
  throw std::runtime_error("no operator for " + w.to_string());
}

}  // namespace

TEST(Engine, TumblingMinExample) {
  std::vector<Event> ev{{0, "a", 5}, {1, "a", 3}, {4, "a", 7}, {6, "a", 1}};
  RunResult r = run(naive_plan(tumbling({4}), AggFunc::Min), ev, 8);
  std::vector<ResultRow> want{{WindowSpec(4, 4), {0, 4}, "a", 3}, {WindowSpec(4, 4), {4, 8}, "a", 1}};
  EXPECT_EQ(sorted(r.rows), want);
}

TEST(Engine, SumSharedFromFinerWindow) {
  std::vector<Event> ev{{0, "a", 1}, {1, "a", 2}, {2, "a", 3}, {3, "a", 4}};
  WindowSet ws = tumbling({2, 4});
  RunResult r = run(rewrite(min_cost_wcg(ws, AggFunc::Sum), AggFunc::Sum), ev, 4);
  std::vector<ResultRow> want{{WindowSpec(2, 2), {0, 2}, "a", 3},
                              {WindowSpec(2, 2), {2, 4}, "a", 7},
                              {WindowSpec(4, 4), {0, 4}, "a", 10}};
  EXPECT_EQ(sorted(r.rows), want);
  EXPECT_EQ(metrics_for(r.metrics, WindowSpec(4, 4)).input_count, 2u);
}

TEST(Engine, EmptyStream) {
  WindowSet ws = tumbling({10, 20});
  RunResult r = run(rewrite(min_cost_wcg(ws, AggFunc::Min), AggFunc::Min), std::vector<Event>{}, 100);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.metrics.events, 0u);
  EXPECT_EQ(r.metrics.window_input_total(), 0u);
}

TEST(Engine, TenToFortyCounters) {
  WindowSet ws = tumbling({10, 20, 30, 40});
  EventBatch ev = constant_rate_batch(1, 120, 1, 3);
  RunResult opt = run(rewrite(min_cost_wcg(ws, AggFunc::Min), AggFunc::Min), ev, 120);
  RunResult naive = run(naive_plan(ws, AggFunc::Min), ev, 120);
  EXPECT_EQ(opt.metrics.window_input_total(), 150u);
  EXPECT_EQ(naive.metrics.window_input_total(), 480u);
  EXPECT_EQ(metrics_for(opt.metrics, WindowSpec(40, 40)).input_count, 6u);
  EXPECT_EQ(metrics_for(opt.metrics, WindowSpec(10, 10)).output_count, 12u);
  EXPECT_FALSE(first_difference(sorted(naive.rows), sorted(opt.rows)).has_value());
}

TEST(Engine, HoppingChargesEveryInterval) {
  // Before tick 10 an event at t lands in t/2 + 1 intervals of W<10,2>.
  WindowSet ws{WindowSpec(10, 2)};
  EventBatch ev = constant_rate_batch(1, 10, 1, 1);
  RunResult r = run(naive_plan(ws, AggFunc::Sum), ev, 10);
  const auto& op = metrics_for(r.metrics, WindowSpec(10, 2));
  EXPECT_EQ(op.records_in, 10u);
  EXPECT_EQ(op.input_count, 30u);
}

TEST(Engine, GroupedKeys) {
  std::vector<Event> ev{{0, "x", 1}, {0, "y", 10}, {1, "x", 2}, {3, "y", 20}, {5, "x", 4}};
  WindowSet ws = tumbling({2, 4});
  RunResult r = run(rewrite(min_cost_wcg(ws, AggFunc::Count), AggFunc::Count), ev, 8);
  EventBatch b = to_batch(ev);
  EXPECT_FALSE(first_difference(sorted(oracle::scan(ws.windows(), AggFunc::Count, b, 8)), sorted(r.rows))
                   .has_value());
  std::vector<ResultRow> rows = sorted(r.rows);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), (ResultRow{WindowSpec(2, 2), {0, 2}, "x", 2}));
}

TEST(Engine, RejectsBadStreams) {
  PlanDag p = naive_plan(tumbling({4}), AggFunc::Min);
  std::vector<Event> back{{5, "a", 1}, {3, "a", 1}};
  EXPECT_THROW(run(p, back, 10), OutOfOrderEvent);
  std::vector<Event> late{{12, "a", 1}};
  EXPECT_THROW(run(p, late, 10), Error);
}

TEST(Engine, MedianCannotReadSubAggregates) {
  PlanDag p = rewrite(min_cost_wcg(tumbling({2, 4}), AggFunc::Max), AggFunc::Max);
  p.func = AggFunc::Median;
  p.semantics = SharingSemantics::None;
  EXPECT_THROW(run(p, std::vector<Event>{{0, "a", 1}}, 8), Error);

  // A naive MEDIAN plan is fine.
  std::vector<Event> ev{{0, "a", 5}, {1, "a", 1}, {2, "a", 3}};
  RunResult r = run(naive_plan(tumbling({4}), AggFunc::Median), ev, 4);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].value, 3);
}

TEST(Engine, Deterministic) {
  WindowSet ws{WindowSpec(20, 10), WindowSpec(30, 10), WindowSpec(40, 40)};
  PlanDag p = rewrite(min_cost_wcg_with_factors(ws, AggFunc::Avg).result, AggFunc::Avg);
  EventBatch ev = random_stream(5000, 600, 3, 9);
  RunResult a = run(p, ev, 600);
  RunResult b = run(p, ev, 600);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.metrics.window_input_total(), b.metrics.window_input_total());
}

TEST(Engine, EmissionFollowsIntervalEnds) {
  WindowSet ws{WindowSpec(20, 10), WindowSpec(30, 10), WindowSpec(40, 40)};
  PlanDag p = rewrite(min_cost_wcg_with_factors(ws, AggFunc::Max).result, AggFunc::Max);
  RunResult r = run(p, random_stream(3000, 400, 2, 4), 400);
  // Rows of one window come out in order of their interval ends.
  std::map<WindowSpec, Tick> last;
  for (const auto& row : r.rows) {
    auto it = last.find(row.window);
    if (it != last.end()) EXPECT_LE(it->second, row.interval.end);
    last[row.window] = row.interval.end;
  }
}

TEST(Engine, CollectRowsOffKeepsCounters) {
  WindowSet ws = tumbling({10, 20, 30, 40});
  PlanDag p = rewrite(min_cost_wcg(ws, AggFunc::Sum), AggFunc::Sum);
  EventBatch ev = constant_rate_batch(2, 240, 3, 5);
  RunResult with = run(p, ev, 240);
  RunResult without = run(p, ev, 240, RunOptions{false});
  EXPECT_TRUE(without.rows.empty());
  EXPECT_EQ(with.metrics.window_input_total(), without.metrics.window_input_total());
}

TEST(EngineProperties, MatchesScanOnRandomPlans) {
  SplitMix64 rng(77);
  for (int round = 0; round < 60; ++round) {
    GenParams g;
    g.seed = rng.next();
    g.n = 1 + rng.below(5);
    g.tumbling = rng.below(2) == 0;
    g.k_r = g.k_s = 6;
    g.seed_ranges = {1, 2, 3};
    g.seed_slides = {1, 2};
    WindowSet ws = random_gen(g);
    Tick horizon = 40 + rng.below(200);
    EventBatch ev = random_stream(400 + rng.below(1500), horizon, 1 + rng.below(3), rng.next());
    for (AggFunc f : {AggFunc::Min, AggFunc::Max, AggFunc::Sum, AggFunc::Count, AggFunc::Avg}) {
      auto want = sorted(oracle::scan(ws.windows(), f, ev, horizon));
      auto plain = run(rewrite(min_cost_wcg(ws, f), f), ev, horizon).rows;
      auto factored = run(rewrite(min_cost_wcg_with_factors(ws, f).result, f), ev, horizon).rows;
      auto naive = run(naive_plan(ws, f), ev, horizon).rows;
      const double tol = f == AggFunc::Avg ? 1e-12 : 0.0;
      auto d1 = first_difference(want, sorted(plain), tol);
      auto d2 = first_difference(want, sorted(factored), tol);
      auto d3 = first_difference(want, sorted(naive), tol);
      ASSERT_FALSE(d1.has_value()) << *d1;
      ASSERT_FALSE(d2.has_value()) << *d2;
      ASSERT_FALSE(d3.has_value()) << *d3;
      EXPECT_FALSE(first_difference(want, naive_eval(ws, f, ev, horizon), tol).has_value());
    }
  }
}
