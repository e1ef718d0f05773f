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

#include "wsopt/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "wsopt/error.hpp"

namespace wsopt {

namespace {

struct Acc {
  double value = 0.0;
  std::uint64_t count = 0;
};

// One WindowAgg. Open intervals live in a ring indexed by interval number
// m mod slots; each slot keeps a dense per-key accumulator array plus the
// list of keys touched since the slot was last fired.
class WindowOp {
 public:
  WindowOp(std::size_t node, const WindowSpec& w, AggFunc f, std::size_t keys)
      : node_(node), r_(w.range()), s_(w.slide()), window_(w), f_(f),
        slots_(static_cast<std::size_t>(w.range() / w.slide()) + 1),
        acc_(slots_, std::vector<Acc>(keys)), touched_(slots_) {
    if (f_ == AggFunc::Median) raw_.assign(slots_, std::vector<std::vector<double>>(keys));
  }

  std::size_t node() const { return node_; }
  Tick next_end() const { return cursor_ * s_ + r_; }

  void add_raw(Tick t, std::uint32_t key, double v, std::size_t& pending) {
    std::uint64_t lo = t >= r_ ? (t - r_) / s_ + 1 : 0;
    std::uint64_t hi = t / s_;
    ++records_in_;
    for (std::uint64_t m = lo; m <= hi; ++m) {
      std::size_t slot = m % slots_;
      Acc& a = acc_[slot][key];
      if (a.count == 0) {
        touched_[slot].push_back(key);
        ++pending;
        a.value = v;
        a.count = 1;
      } else {
        fold(a, v);
      }
      if (f_ == AggFunc::Median) raw_[slot][key].push_back(v);
      ++input_count_;
    }
  }

  void add_record(Tick u, Tick v, std::uint32_t key, const Acc& rec, std::size_t& pending) {
    std::uint64_t lo = v > r_ ? (v - r_ + s_ - 1) / s_ : 0;
    std::uint64_t hi = u / s_;
    ++records_in_;
    for (std::uint64_t m = lo; m <= hi; ++m) {
      std::size_t slot = m % slots_;
      Acc& a = acc_[slot][key];
      if (a.count == 0) {
        touched_[slot].push_back(key);
        ++pending;
        a = rec;
      } else {
        merge(a, rec);
      }
      ++input_count_;
    }
  }

  // Skips empty intervals ending at or before `limit`.
  void skip_to(Tick limit) {
    std::uint64_t m = limit >= r_ ? (limit - r_) / s_ + 1 : 0;
    cursor_ = std::max(cursor_, m);
  }

  template <typename Emit>
  void fire_next(std::size_t& pending, Emit&& emit) {
    std::size_t slot = cursor_ % slots_;
    Interval iv{cursor_ * s_, cursor_ * s_ + r_};
    for (std::uint32_t key : touched_[slot]) {
      Acc& a = acc_[slot][key];
      ++output_count_;
      emit(*this, iv, key, a);
      a = Acc{};
      if (f_ == AggFunc::Median) raw_[slot][key].clear();
    }
    pending -= touched_[slot].size();
    touched_[slot].clear();
    ++cursor_;
  }

  double finalize(const Acc& a, std::size_t slot, std::uint32_t key) const {
    switch (f_) {
      case AggFunc::Min:
      case AggFunc::Max:
      case AggFunc::Sum:
        return a.value;
      case AggFunc::Count:
        return static_cast<double>(a.count);
      case AggFunc::Avg:
        return a.value / static_cast<double>(a.count);
      case AggFunc::Median: {
        SubAggregate s;
        s.func = AggFunc::Median;
        s.raw = raw_[slot][key];
        return wsopt::finalize(s);
      }
    }
    return 0.0;
  }

  std::size_t slot_of(const Interval& iv) const { return (iv.start / s_) % slots_; }

  const WindowSpec& window() const { return window_; }
  std::vector<std::size_t> consumers;  // indices into the operator list
  bool emits = false;
  std::uint64_t input_count() const { return input_count_; }
  std::uint64_t records_in() const { return records_in_; }
  std::uint64_t output_count() const { return output_count_; }

 private:
  void fold(Acc& a, double v) const {
    switch (f_) {
      case AggFunc::Min:
        if (v < a.value) a.value = v;
        break;
      case AggFunc::Max:
        if (v > a.value) a.value = v;
        break;
      case AggFunc::Sum:
      case AggFunc::Avg:
        a.value += v;
        break;
      case AggFunc::Count:
      case AggFunc::Median:
        break;
    }
    ++a.count;
  }

  void merge(Acc& a, const Acc& b) const {
    switch (f_) {
      case AggFunc::Min:
        a.value = std::min(a.value, b.value);
        break;
      case AggFunc::Max:
        a.value = std::max(a.value, b.value);
        break;
      case AggFunc::Sum:
      case AggFunc::Avg:
        a.value += b.value;
        break;
      case AggFunc::Count:
      case AggFunc::Median:
        break;
    }
    a.count += b.count;
  }

  std::size_t node_;
  Tick r_;
  Tick s_;
  WindowSpec window_;
  AggFunc f_;
  std::size_t slots_;
  std::uint64_t cursor_ = 0;
  std::vector<std::vector<Acc>> acc_;
  std::vector<std::vector<std::uint32_t>> touched_;
  std::vector<std::vector<std::vector<double>>> raw_;
  std::uint64_t input_count_ = 0;
  std::uint64_t records_in_ = 0;
  std::uint64_t output_count_ = 0;
};

// WindowAggs reachable from `id` through Multicast nodes only.
std::vector<std::size_t> consumer_nodes(const PlanDag& p, std::size_t id) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack = p.outputs_of(id);
  while (!stack.empty()) {
    std::size_t cur = stack.back();
    stack.pop_back();
    switch (p.nodes[cur].kind) {
      case NodeKind::WindowAgg:
        out.push_back(cur);
        break;
      case NodeKind::Multicast:
        for (std::size_t o : p.outputs_of(cur)) stack.push_back(o);
        break;
      default:
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> topological_order(const PlanDag& p) {
  const std::size_t n = p.nodes.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [a, b] : p.edges) {
    if (a >= n || b >= n) throw PlanError("edge references a missing node");
    ++indegree[b];
  }
  std::vector<std::size_t> ready, order;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::sort(ready.rbegin(), ready.rend());
  while (!ready.empty()) {
    std::size_t cur = ready.back();
    ready.pop_back();
    order.push_back(cur);
    for (std::size_t o : p.outputs_of(cur)) {
      if (--indegree[o] == 0) ready.push_back(o);
    }
  }
  if (order.size() != n) throw PlanError("plan has a cycle");
  return order;
}

}  // namespace

EventBatch to_batch(const std::vector<Event>& events) {
  EventBatch b;
  std::unordered_map<std::string, std::uint32_t> ids;
  b.ts.reserve(events.size());
  b.key.reserve(events.size());
  b.value.reserve(events.size());
  for (const auto& e : events) {
    auto [it, fresh] = ids.try_emplace(e.key, static_cast<std::uint32_t>(b.key_names.size()));
    if (fresh) b.key_names.push_back(e.key);
    b.push(e.ts, it->second, e.value);
  }
  return b;
}

std::vector<Event> to_events(const EventBatch& batch) {
  std::vector<Event> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.push_back({batch.ts[i], batch.key_names.at(batch.key[i]), batch.value[i]});
  }
  return out;
}

std::uint64_t RunMetrics::window_input_total() const {
  std::uint64_t total = 0;
  for (const auto& op : operators) {
    if (op.kind == NodeKind::WindowAgg) total += op.input_count;
  }
  return total;
}

RunResult run(const PlanDag& p, const EventBatch& events, Tick horizon,
              const RunOptions& options) {
  const std::vector<std::size_t> order = topological_order(p);
  const std::size_t keys = events.key_names.size();

  std::vector<WindowOp> ops;
  std::vector<std::size_t> op_of(p.nodes.size(), SIZE_MAX);
  for (std::size_t id : order) {
    const PlanNode& n = p.nodes[id];
    if (n.kind != NodeKind::WindowAgg) continue;
    if (!n.window) throw PlanError("node " + std::to_string(id) + ": window_agg without a window");
    op_of[id] = ops.size();
    ops.emplace_back(id, *n.window, p.func, keys);
  }
  std::vector<std::size_t> source_ops;
  for (auto& op : ops) {
    auto up = producer_of(p, op.node());
    if (!up) {
      source_ops.push_back(op_of[op.node()]);
    } else if (p.func == AggFunc::Median) {
      throw HolisticFunction("MEDIAN window " + op.window().to_string() +
                             " cannot read sub-aggregates");
    }
    for (std::size_t c : consumer_nodes(p, op.node())) op.consumers.push_back(op_of[c]);
    op.emits = reaches_sink(p, op.node());
  }

  RunResult out;
  std::size_t pending = 0;
  auto emit = [&](WindowOp& op, const Interval& iv, std::uint32_t key, const Acc& a) {
    for (std::size_t c : op.consumers) ops[c].add_record(iv.start, iv.end, key, a, pending);
    if (op.emits && options.collect_rows) {
      out.rows.push_back({op.window(), iv, events.key_names[key],
                          op.finalize(a, op.slot_of(iv), key)});
    }
  };
  auto min_end = [&] {
    Tick t = std::numeric_limits<Tick>::max();
    for (const auto& op : ops) t = std::min(t, op.next_end());
    return t;
  };
  // Fires every interval ending at or before `limit`, upstream operators
  // first, one global end time at a time.
  auto advance = [&](Tick limit) {
    while (true) {
      if (pending == 0) {
        for (auto& op : ops) op.skip_to(limit);
        break;
      }
      Tick wm = min_end();
      if (wm > limit) break;
      for (auto& op : ops) {
        while (op.next_end() <= wm) op.fire_next(pending, emit);
      }
    }
    return min_end();
  };

  Tick next_fire = min_end();
  const std::size_t n = events.size();
  auto start = std::chrono::steady_clock::now();
  Tick last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Tick t = events.ts[i];
    if (t < last) throw OutOfOrderEvent(t, last);
    if (t >= horizon) {
      throw Error("event ts " + std::to_string(t) + " is not before the horizon " +
                  std::to_string(horizon));
    }
    last = t;
    if (t >= next_fire) next_fire = advance(t);
    const std::uint32_t key = events.key[i];
    const double v = events.value[i];
    for (std::size_t s : source_ops) ops[s].add_raw(t, key, v, pending);
  }
  advance(horizon);
  auto stop = std::chrono::steady_clock::now();

  RunMetrics& m = out.metrics;
  m.events = n;
  m.wall_seconds = std::chrono::duration<double>(stop - start).count();
  m.throughput = m.wall_seconds > 0 ? static_cast<double>(n) / m.wall_seconds : 0.0;

  // Pass-through operators are not executed one record at a time; their
  // counters follow from the record flow along the edges.
  std::vector<std::uint64_t> in(p.nodes.size(), 0);
  for (std::size_t id : order) {
    const PlanNode& node = p.nodes[id];
    OperatorMetrics om;
    om.node = id;
    om.kind = node.kind;
    om.window = node.window;
    om.is_factor = node.is_factor;
    std::uint64_t per_edge = 0;
    switch (node.kind) {
      case NodeKind::Source:
        om.input_count = om.records_in = om.output_count = n;
        per_edge = n;
        break;
      case NodeKind::WindowAgg: {
        const WindowOp& op = ops[op_of[id]];
        om.input_count = op.input_count();
        om.records_in = op.records_in();
        om.output_count = op.output_count();
        per_edge = om.output_count;
        break;
      }
      case NodeKind::Multicast:
        om.input_count = om.records_in = in[id];
        om.output_count = in[id] * p.outputs_of(id).size();
        per_edge = in[id];
        break;
      case NodeKind::Union:
      case NodeKind::Sink:
        om.input_count = om.records_in = in[id];
        om.output_count = node.kind == NodeKind::Union ? in[id] : 0;
        per_edge = om.output_count;
        break;
    }
    for (std::size_t o : p.outputs_of(id)) in[o] += per_edge;
    m.operators.push_back(om);
  }
  std::sort(m.operators.begin(), m.operators.end(),
            [](const OperatorMetrics& a, const OperatorMetrics& b) { return a.node < b.node; });
  return out;
}

RunResult run(const PlanDag& p, const std::vector<Event>& events, Tick horizon,
              const RunOptions& options) {
  return run(p, to_batch(events), horizon, options);
}

std::vector<ResultRow> naive_eval(const WindowSet& ws, AggFunc f, const EventBatch& events,
                                  Tick horizon) {
  Tick last = 0;
  for (Tick t : events.ts) {
    if (t < last) throw OutOfOrderEvent(t, last);
    if (t >= horizon) {
      throw Error("event ts " + std::to_string(t) + " is not before the horizon " +
                  std::to_string(horizon));
    }
    last = t;
  }
  std::vector<ResultRow> rows;
  for (const auto& w : ws) {
    // (interval index, key) -> running aggregate
    std::unordered_map<std::uint64_t, std::unordered_map<std::uint32_t, SubAggregate>> open;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const Tick t = events.ts[i];
      std::uint64_t first = t >= w.range() ? (t - w.range()) / w.slide() + 1 : 0;
      for (std::uint64_t m = first; m * w.slide() <= t; ++m) {
        if (m * w.slide() + w.range() > horizon) break;
        auto& bucket = open[m];
        auto it = bucket.find(events.key[i]);
        if (it == bucket.end()) {
          bucket.emplace(events.key[i], make_sub_aggregate(f, events.value[i]));
        } else {
          accumulate(it->second, events.value[i]);
        }
      }
    }
    for (const auto& [m, bucket] : open) {
      Interval iv{m * w.slide(), m * w.slide() + w.range()};
      for (const auto& [key, agg] : bucket) {
        rows.push_back({w, iv, events.key_names[key], finalize(agg)});
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> naive_eval(const WindowSet& ws, AggFunc f, const std::vector<Event>& events,
                                  Tick horizon) {
  return naive_eval(ws, f, to_batch(events), horizon);
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.window, a.interval, a.key, a.value) <
           std::tie(b.window, b.interval, b.key, b.value);
  });
}

std::optional<std::string> first_difference(std::vector<ResultRow> expected,
                                            std::vector<ResultRow> actual, double tolerance) {
  sort_rows(expected);
  sort_rows(actual);
  auto describe = [](const ResultRow& r) {
    std::ostringstream os;
    os << r.window_id() << " [" << r.interval.start << "," << r.interval.end << ") key=" << r.key
       << " value=" << r.value;
    return os.str();
  };
  std::size_t i = 0;
  for (; i < expected.size() && i < actual.size(); ++i) {
    const ResultRow& e = expected[i];
    const ResultRow& a = actual[i];
    if (std::tie(e.window, e.interval, e.key) != std::tie(a.window, a.interval, a.key)) {
      bool missing = std::tie(e.window, e.interval, e.key) < std::tie(a.window, a.interval, a.key);
      return missing ? "missing row " + describe(e) : "unexpected row " + describe(a);
    }
    double bound = tolerance * std::max(1.0, std::fabs(e.value));
    if (!(std::fabs(e.value - a.value) <= bound)) {
      return "value mismatch: expected " + describe(e) + ", got " + describe(a);
    }
  }
  if (i < expected.size()) return "missing row " + describe(expected[i]);
  if (i < actual.size()) return "unexpected row " + describe(actual[i]);
  return std::nullopt;
}

}  // namespace wsopt
