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
#include "wsopt/plan.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

struct Event {
  Tick ts = 0;
  std::string key;
  double value = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Columnar event stream with interned keys. This is what the engine runs
/// on; key interning happens before any timing starts.
struct EventBatch {
  std::vector<std::string> key_names;
  std::vector<Tick> ts;
  std::vector<std::uint32_t> key;
  std::vector<double> value;

  std::size_t size() const { return ts.size(); }
  void push(Tick t, std::uint32_t k, double v) {
    ts.push_back(t);
    key.push_back(k);
    value.push_back(v);
  }
};

EventBatch to_batch(const std::vector<Event>& events);
std::vector<Event> to_events(const EventBatch& batch);

struct ResultRow {
  WindowSpec window;
  Interval interval;
  std::string key;
  double value = 0.0;

  /// "r:s"
  std::string window_id() const { return window.to_string(); }

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct OperatorMetrics {
  std::size_t node = 0;
  NodeKind kind = NodeKind::Source;
  std::optional<WindowSpec> window;
  bool is_factor = false;
  /// Records entering the operator. For a WindowAgg every record is counted
  /// once per interval it is folded into, so a raw event under a hopping
  /// window counts r/s times.
  std::uint64_t input_count = 0;
  /// Records entering the operator, each counted once.
  std::uint64_t records_in = 0;
  std::uint64_t output_count = 0;
};

struct RunMetrics {
  std::vector<OperatorMetrics> operators;
  std::uint64_t events = 0;
  double wall_seconds = 0.0;
  /// Input events per second of wall time.
  double throughput = 0.0;

  /// Sum of input_count over WindowAgg operators.
  std::uint64_t window_input_total() const;
};

struct RunOptions {
  /// Skip materializing result rows; counters are unaffected.
  bool collect_rows = true;
};

struct RunResult {
  std::vector<ResultRow> rows;
  RunMetrics metrics;
};

/// Push-based single-threaded execution. Intervals fire once the input
/// reaches their end, or at `horizon`; intervals ending after the horizon
/// never fire. Throws OutOfOrderEvent, Error for events at or past the
/// horizon, PlanError for plans the engine cannot wire, and HolisticFunction
/// when a MEDIAN window reads sub-aggregates.
RunResult run(const PlanDag& p, const EventBatch& events, Tick horizon,
              const RunOptions& options = {});
RunResult run(const PlanDag& p, const std::vector<Event>& events, Tick horizon,
              const RunOptions& options = {});

/// Reference evaluator: every window aggregates the raw events of each of its
/// intervals directly, per key. Empty intervals produce no rows.
std::vector<ResultRow> naive_eval(const WindowSet& ws, AggFunc f, const EventBatch& events,
                                  Tick horizon);
std::vector<ResultRow> naive_eval(const WindowSet& ws, AggFunc f, const std::vector<Event>& events,
                                  Tick horizon);

/// Orders rows by window, interval and key.
void sort_rows(std::vector<ResultRow>& rows);

/// Multiset comparison. Values match when |a - b| <= tolerance * max(1, |a|).
/// Returns a description of the first difference, or nullopt.
std::optional<std::string> first_difference(std::vector<ResultRow> expected,
                                            std::vector<ResultRow> actual,
                                            double tolerance = 0.0);

}  // namespace wsopt
