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

#include "wsopt/bench.hpp"
#include "wsopt/error.hpp"

using namespace wsopt;

TEST(Pearson, Basics) {
  EXPECT_FALSE(pearson({1.0}, {2.0}).has_value());
  EXPECT_FALSE(pearson({1, 2, 3}, {5, 5, 5}).has_value());
  EXPECT_NEAR(*pearson({1, 2, 3}, {2, 4, 6}), 1.0, 1e-12);
  EXPECT_NEAR(*pearson({1, 2, 3}, {3, 2, 1}), -1.0, 1e-12);
}

TEST(Bench, TenToFortyRow) {
  BenchConfig cfg;
  WindowSet ws{WindowSpec(10, 10), WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40)};
  BenchRow row = bench_window_set(ws, cfg, 1);
  EXPECT_EQ(row.period, 120u);
  EXPECT_EQ(row.horizon % 120, 0u);
  EXPECT_DOUBLE_EQ(row.gamma_c(row.optimized), 3.2);
  EXPECT_DOUBLE_EQ(row.counter_speedup(row.optimized), 3.2);
  EXPECT_EQ(row.factored.factor_windows, 0u);
}

TEST(Bench, Horizon) {
  BenchConfig cfg;
  cfg.event_budget = 1000;
  WindowSet ws{WindowSpec(10, 10), WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40)};
  EXPECT_EQ(bench_horizon(ws, cfg), 960u);
  cfg.eta = 10;
  // One period would need 1200 events; fall back to multiples of 40.
  EXPECT_EQ(bench_horizon(ws, cfg), 80u);
  cfg.horizon = 77;
  EXPECT_EQ(bench_horizon(ws, cfg), 77u);
}

TEST(Bench, SingleSetReportsNoCorrelation) {
  BenchConfig cfg;
  cfg.sets = 1;
  cfg.event_budget = 20000;
  BenchReport rep = run_bench(cfg);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_FALSE(rep.pearson_optimized.has_value());
  EXPECT_NE(rep.to_table().find("n/a"), std::string::npos);
  EXPECT_NE(rep.to_json().find("\"rows\""), std::string::npos);
}

TEST(Bench, HolisticRunsNaiveEverywhere) {
  BenchConfig cfg;
  cfg.func = AggFunc::Median;
  cfg.event_budget = 5000;
  WindowSet ws{WindowSpec(10, 10), WindowSpec(20, 20)};
  BenchRow row = bench_window_set(ws, cfg, 1);
  EXPECT_EQ(row.optimized.model_cost, row.naive.model_cost);
  EXPECT_DOUBLE_EQ(row.gamma_c(row.factored), 1.0);
}
