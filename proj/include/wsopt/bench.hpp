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


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsopt/aggregate.hpp"
#include "wsopt/datagen.hpp"
#include "wsopt/engine.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

struct PlanMeasurement {
  std::int64_t model_cost = 0;
  std::uint64_t window_inputs = 0;  // summed WindowAgg input counters
  double wall_seconds = 0.0;
  double throughput = 0.0;
  std::size_t factor_windows = 0;
};

struct BenchRow {
  WindowSet windows;
  Tick period = 0;
  Tick horizon = 0;
  PlanMeasurement naive;
  PlanMeasurement optimized;  // min-cost WCG, no factor windows
  PlanMeasurement factored;   // with factor windows

  /// C_naive / C_opt from the cost model.
  double gamma_c(const PlanMeasurement& opt) const;
  /// Throughput of `opt` over the naive throughput.
  double gamma_t(const PlanMeasurement& opt) const;
  /// Naive window-operator input counters over those of `opt`.
  double counter_speedup(const PlanMeasurement& opt) const;
};

struct BenchConfig {
  GenParams gen;
  bool sequential = false;
  std::size_t sets = 1;
  AggFunc func = AggFunc::Min;
  std::int64_t eta = 1;
  std::size_t keys = 1;
  std::uint64_t stream_seed = 7;
  /// Stream length: whole periods R while they fit in the budget, otherwise
  /// the largest multiple of the longest range that does.
  std::uint64_t event_budget = 1'000'000;
  /// Fixed horizon in ticks; 0 picks one from the event budget.
  Tick horizon = 0;
};

struct BenchReport {
  AggFunc func = AggFunc::Min;
  std::vector<BenchRow> rows;
  /// Between gamma_c and counter_speedup over the batch; nullopt when the
  /// batch is too small or one side has no variance.
  std::optional<double> pearson_optimized;
  std::optional<double> pearson_factored;

  std::string to_json() const;
  std::string to_table() const;
};

/// Sample Pearson correlation. nullopt for fewer than two points or zero
/// variance on either side.
std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Horizon used by the bench for one window set.
Tick bench_horizon(const WindowSet& ws, const BenchConfig& cfg);

/// Measures all three plans of one window set on a fresh constant-rate stream.
BenchRow bench_window_set(const WindowSet& ws, const BenchConfig& cfg, std::uint64_t stream_seed);

/// Generates cfg.sets window sets (seeds gen.seed, gen.seed + 1, ...) and
/// measures each.
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace wsopt
