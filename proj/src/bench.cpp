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

#include "wsopt/bench.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "wsopt/factor.hpp"
#include "wsopt/plan.hpp"
#include "wsopt/wcg.hpp"

namespace wsopt {

namespace {

PlanMeasurement measure(const PlanDag& p, const EventBatch& events, Tick horizon) {
  RunOptions opts;
  opts.collect_rows = false;
  RunResult r = run(p, events, horizon, opts);
  PlanMeasurement m;
  m.model_cost = p.model_cost;
  m.window_inputs = r.metrics.window_input_total();
  m.wall_seconds = r.metrics.wall_seconds;
  m.throughput = r.metrics.throughput;
  for (const auto& n : p.nodes) m.factor_windows += n.is_factor ? 1 : 0;
  return m;
}

std::string fmt(double v, const char* spec = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string opt_string(const std::optional<double>& v) { return v ? fmt(*v, "%.4f") : "n/a"; }

}  // namespace

double BenchRow::gamma_c(const PlanMeasurement& opt) const {
  return static_cast<double>(naive.model_cost) / static_cast<double>(opt.model_cost);
}

double BenchRow::gamma_t(const PlanMeasurement& opt) const {
  return naive.throughput > 0 ? opt.throughput / naive.throughput : 0.0;
}

double BenchRow::counter_speedup(const PlanMeasurement& opt) const {
  return opt.window_inputs > 0
             ? static_cast<double>(naive.window_inputs) / static_cast<double>(opt.window_inputs)
             : 0.0;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

Tick bench_horizon(const WindowSet& ws, const BenchConfig& cfg) {
  if (cfg.horizon > 0) return cfg.horizon;
  const Tick period = cost_context(ws, cfg.eta).period;
  const std::uint64_t ticks = std::max<std::uint64_t>(1, cfg.event_budget / cfg.eta);
  if (period <= ticks) return (ticks / period) * period;
  Tick longest = 0;
  for (const auto& w : ws) longest = std::max(longest, w.range());
  return std::max(longest, (ticks / longest) * longest);
}

BenchRow bench_window_set(const WindowSet& ws, const BenchConfig& cfg, std::uint64_t stream_seed) {
  BenchRow row;
  row.windows = ws;
  row.period = cost_context(ws, cfg.eta).period;
  row.horizon = bench_horizon(ws, cfg);

  PlanDag naive = naive_plan(ws, cfg.func, cfg.eta);
  PlanDag optimized = naive;
  PlanDag factored = naive;
  if (sharing_semantics(cfg.func) != SharingSemantics::None) {
    optimized = rewrite(min_cost_wcg(ws, cfg.func, cfg.eta), cfg.func);
    factored = rewrite(min_cost_wcg_with_factors(ws, cfg.func, cfg.eta).result, cfg.func);
  }

  EventBatch events = constant_rate_batch(cfg.eta, row.horizon, cfg.keys, stream_seed);
  row.naive = measure(naive, events, row.horizon);
  row.optimized = measure(optimized, events, row.horizon);
  row.factored = measure(factored, events, row.horizon);
  return row;
}

BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport report;
  report.func = cfg.func;
  std::vector<double> gc_opt, cs_opt, gc_fac, cs_fac;
  for (std::size_t i = 0; i < cfg.sets; ++i) {
    GenParams gp = cfg.gen;
    gp.seed = cfg.gen.seed + i;
    WindowSet ws = cfg.sequential ? sequential_gen(gp) : random_gen(gp);
    BenchRow row = bench_window_set(ws, cfg, cfg.stream_seed + i);
    gc_opt.push_back(row.gamma_c(row.optimized));
    cs_opt.push_back(row.counter_speedup(row.optimized));
    gc_fac.push_back(row.gamma_c(row.factored));
    cs_fac.push_back(row.counter_speedup(row.factored));
    report.rows.push_back(std::move(row));
  }
  report.pearson_optimized = pearson(gc_opt, cs_opt);
  report.pearson_factored = pearson(gc_fac, cs_fac);
  return report;
}

std::string BenchReport::to_json() const {
  using json = nlohmann::json;
  auto plan = [](const PlanMeasurement& m) {
    return json{{"model_cost", m.model_cost},         {"window_inputs", m.window_inputs},
                {"wall_seconds", m.wall_seconds},     {"throughput", m.throughput},
                {"factor_windows", m.factor_windows}};
  };
  json rows_json = json::array();
  for (const auto& r : rows) {
    json ws = json::array();
    for (const auto& w : r.windows) ws.push_back({{"range", w.range()}, {"slide", w.slide()}});
    rows_json.push_back({{"windows", ws},
                         {"period", r.period},
                         {"horizon", r.horizon},
                         {"naive", plan(r.naive)},
                         {"optimized", plan(r.optimized)},
                         {"factored", plan(r.factored)},
                         {"gamma_c", r.gamma_c(r.optimized)},
                         {"gamma_c_factored", r.gamma_c(r.factored)},
                         {"gamma_t", r.gamma_t(r.optimized)},
                         {"gamma_t_factored", r.gamma_t(r.factored)},
                         {"counter_speedup", r.counter_speedup(r.optimized)},
                         {"counter_speedup_factored", r.counter_speedup(r.factored)}});
  }
  json doc{{"func", to_string(func)}, {"rows", rows_json}};
  doc["pearson_r"] = pearson_optimized ? json(*pearson_optimized) : json("n/a");
  doc["pearson_r_factored"] = pearson_factored ? json(*pearson_factored) : json("n/a");
  return doc.dump(2);
}

std::string BenchReport::to_table() const {
  std::ostringstream os;
  os << "set  windows  naive_cost  opt_cost  fac_cost  gamma_c  gamma_c_fac  counter_x  "
        "counter_x_fac  gamma_t  gamma_t_fac\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BenchRow& r = rows[i];
    os << i << "  " << r.windows.size() << "  " << r.naive.model_cost << "  "
       << r.optimized.model_cost << "  " << r.factored.model_cost << "  "
       << fmt(r.gamma_c(r.optimized)) << "  " << fmt(r.gamma_c(r.factored)) << "  "
       << fmt(r.counter_speedup(r.optimized)) << "  " << fmt(r.counter_speedup(r.factored))
       << "  " << fmt(r.gamma_t(r.optimized)) << "  " << fmt(r.gamma_t(r.factored)) << "\n";
  }
  os << "pearson r (gamma_c vs counter speedup): " << opt_string(pearson_optimized)
     << " without factors, " << opt_string(pearson_factored) << " with factors\n";
  return os.str();
}

}  // namespace wsopt
