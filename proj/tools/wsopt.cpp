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

// wsopt: optimize, run, verify, generate and bench multi-window aggregate
// queries. Exit codes: 0 ok, 1 invalid input, 2 verification mismatch.

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsopt/bench.hpp"
#include "wsopt/csv.hpp"
#include "wsopt/datagen.hpp"
#include "wsopt/engine.hpp"
#include "wsopt/error.hpp"
#include "wsopt/factor.hpp"
#include "wsopt/plan.hpp"
#include "wsopt/wcg.hpp"

using namespace wsopt;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kMismatch = 2;

struct WindowArgs {
  std::string file;
  std::vector<std::string> inline_specs;
};

void add_window_args(CLI::App* cmd, WindowArgs& args) {
  cmd->add_option("--windows", args.file, "JSON file: [{\"range\":r,\"slide\":s}, ...]");
  cmd->add_option("--window", args.inline_specs, "Inline window r:s (repeatable)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

WindowSet load_windows(const WindowArgs& args) {
  WindowSet ws;
  if (!args.file.empty()) {
    json doc;
    try {
      doc = json::parse(slurp(args.file));
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& j = doc.at(i);
        ws.add(WindowSpec(j.at("range").get<Tick>(), j.at("slide").get<Tick>()));
      }
    } catch (const json::exception& e) {
      throw ParseError(args.file + ": " + e.what());
    }
  }
  for (const auto& s : args.inline_specs) ws.add(WindowSpec::parse(s));
  if (ws.empty()) throw InvalidWindow("no windows given; use --windows or --window");
  return ws;
}

void write_windows(std::ostream& out, const WindowSet& ws) {
  json doc = json::array();
  for (const auto& w : ws) doc.push_back({{"range", w.range()}, {"slide", w.slide()}});
  out << doc.dump(2) << "\n";
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  fn(out);
}

bool parse_switch(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ParseError("expected on/off, got '" + v + "'");
}

// The plan for `ws` under the given options, plus a one-line warning when the
// function forces the naive plan.
PlanDag build_plan(const WindowSet& ws, AggFunc f, std::int64_t eta, bool factors,
                   std::string* warning) {
  if (sharing_semantics(f) == SharingSemantics::None) {
    if (warning) *warning = to_string(f) + " is holistic; emitting the naive plan";
    return naive_plan(ws, f, eta);
  }
  if (factors) return rewrite(min_cost_wcg_with_factors(ws, f, eta).result, f);
  return rewrite(min_cost_wcg(ws, f, eta), f);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v);
  return buf;
}

Tick default_horizon(const WindowSet& ws, std::int64_t eta) {
  BenchConfig cfg;
  cfg.eta = eta;
  cfg.event_budget = 200'000;
  return bench_horizon(ws, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-based sharing of multi-window aggregates"};
  app.require_subcommand(1);

  // optimize
  WindowArgs opt_windows;
  std::string opt_func = "MIN", opt_factors = "on", opt_out;
  std::int64_t opt_eta = 1;
  auto* optimize = app.add_subcommand("optimize", "Build the min-cost plan for a window set");
  add_window_args(optimize, opt_windows);
  optimize->add_option("--func", opt_func, "MIN, MAX, SUM, COUNT, AVG or MEDIAN");
  optimize->add_option("--eta", opt_eta, "Events per tick assumed by the cost model");
  optimize->add_option("--factors", opt_factors, "on/off: allow factor windows");
  optimize->add_option("--out", opt_out, "Plan JSON destination (default stdout)");

  // run
  std::string run_plan, run_events, run_out, run_metrics;
  Tick run_horizon = 0;
  auto* runc = app.add_subcommand("run", "Execute a plan over an event CSV");
  runc->add_option("--plan", run_plan, "Plan JSON")->required();
  runc->add_option("--events", run_events, "Event CSV (ts,key,value)")->required();
  runc->add_option("--horizon", run_horizon, "End of the stream; default largest ts + 1");
  runc->add_option("--out", run_out, "Result CSV destination (default stdout)");
  runc->add_option("--metrics", run_metrics, "Write metrics JSON here");

  // verify
  WindowArgs ver_windows;
  std::string ver_func = "SUM";
  std::int64_t ver_eta = 1, ver_rate = 1;
  std::uint64_t ver_seed = 1;
  std::size_t ver_keys = 4;
  Tick ver_horizon = 0;
  bool ver_fault = false;
  auto* verify = app.add_subcommand("verify", "Check optimized plans against direct evaluation");
  add_window_args(verify, ver_windows);
  verify->add_option("--func", ver_func, "Aggregate function");
  verify->add_option("--eta", ver_eta, "Cost-model event rate");
  verify->add_option("--rate", ver_rate, "Events per tick in the generated stream");
  verify->add_option("--seed", ver_seed, "Stream seed");
  verify->add_option("--keys", ver_keys, "Number of group keys");
  verify->add_option("--horizon", ver_horizon, "Stream length in ticks; default whole periods");
  verify->add_flag("--inject-fault", ver_fault, "Route a factor window to the output first");

  // generate
  std::string gen_what = "windows", gen_mode = "random", gen_out;
  bool gen_hopping = false;
  GenParams gen;
  std::int64_t gen_rate = 1;
  std::size_t gen_keys = 1;
  Tick gen_horizon = 120;
  auto* generate = app.add_subcommand("generate", "Generate window sets or event streams");
  generate->add_option("what", gen_what, "windows or events")
      ->check(CLI::IsMember({"windows", "events"}));
  generate->add_option("--gen", gen_mode, "random or sequential")
      ->check(CLI::IsMember({"random", "sequential"}));
  generate->add_flag("--hopping", gen_hopping, "Hopping windows with r = 2s");
  generate->add_option("--n", gen.n, "Window-set size");
  generate->add_option("--k", gen.k_r, "Range multiplier (slide multiplier with --hopping)");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--rate", gen_rate, "Events per tick");
  generate->add_option("--keys", gen_keys, "Number of group keys");
  generate->add_option("--horizon", gen_horizon, "Stream length in ticks");
  generate->add_option("--out", gen_out, "Destination (default stdout)");

  // bench
  BenchConfig bcfg;
  std::string bench_mode = "sequential", bench_func = "MIN", bench_json;
  bool bench_hopping = false;
  auto* bench = app.add_subcommand("bench", "Measure naive and optimized plans over a batch");
  bench->add_option("--gen", bench_mode, "random or sequential")
      ->check(CLI::IsMember({"random", "sequential"}));
  bench->add_flag("--hopping", bench_hopping, "Hopping windows with r = 2s");
  bench->add_option("--n", bcfg.gen.n, "Window-set size");
  bench->add_option("--k", bcfg.gen.k_r, "Range multiplier (slide multiplier with --hopping)");
  bench->add_option("--sets", bcfg.sets, "Number of window sets");
  bench->add_option("--func", bench_func, "Aggregate function");
  bench->add_option("--eta", bcfg.eta, "Events per tick");
  bench->add_option("--keys", bcfg.keys, "Number of group keys");
  bench->add_option("--seed", bcfg.gen.seed, "First window-set seed");
  bench->add_option("--budget", bcfg.event_budget, "Events per stream");
  bench->add_option("--horizon", bcfg.horizon, "Fixed stream length in ticks");
  bench->add_option("--out", bench_json, "Write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) {
      WindowSet ws = load_windows(opt_windows);
      AggFunc f = parse_agg_func(opt_func);
      std::string warning;
      PlanDag plan = build_plan(ws, f, opt_eta, parse_switch(opt_factors), &warning);
      if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
      std::int64_t naive = naive_cost(cost_context(ws, opt_eta));
      std::size_t factors = 0;
      for (const auto& n : plan.nodes) factors += n.is_factor ? 1 : 0;
      with_output(opt_out, [&](std::ostream& out) { out << serialize(plan) << "\n"; });
      std::ostream& info = opt_out.empty() ? std::cerr : std::cout;
      info << "naive cost " << naive << ", optimized cost " << plan.model_cost << ", reduction "
           << percent(100.0 * static_cast<double>(naive - plan.model_cost) /
                      static_cast<double>(naive))
           << ", factor windows " << factors << "\n";
      return kOk;
    }

    if (*runc) {
      PlanDag plan = deserialize(slurp(run_plan));
      std::ifstream in(run_events);
      if (!in) throw ParseError("cannot open " + run_events);
      EventBatch events = to_batch(read_events(in));
      Tick horizon = run_horizon;
      // Max rather than last, so a disordered stream reports the disorder.
      if (horizon == 0 && events.size() > 0) {
        horizon = *std::max_element(events.ts.begin(), events.ts.end()) + 1;
      }
      RunResult r = run(plan, events, horizon);
      sort_rows(r.rows);
      with_output(run_out, [&](std::ostream& out) { write_results(out, r.rows); });
      json ops = json::array();
      for (const auto& op : r.metrics.operators) {
        json j{{"node", op.node},
               {"kind", to_string(op.kind)},
               {"input_count", op.input_count},
               {"records_in", op.records_in},
               {"output_count", op.output_count}};
        if (op.window) j["window"] = op.window->to_string();
        ops.push_back(j);
      }
      json metrics{{"events", r.metrics.events},
                   {"wall_seconds", r.metrics.wall_seconds},
                   {"throughput", r.metrics.throughput},
                   {"window_input_total", r.metrics.window_input_total()},
                   {"operators", ops}};
      if (!run_metrics.empty()) {
        with_output(run_metrics, [&](std::ostream& out) { out << metrics.dump(2) << "\n"; });
      }
      std::ostream& info = run_out.empty() ? std::cerr : std::cout;
      info << "events " << r.metrics.events << ", rows " << r.rows.size()
           << ", window inputs " << r.metrics.window_input_total() << ", wall "
           << r.metrics.wall_seconds << " s, throughput " << r.metrics.throughput << " ev/s\n";
      return kOk;
    }

    if (*verify) {
      WindowSet ws = load_windows(ver_windows);
      AggFunc f = parse_agg_func(ver_func);
      Tick horizon = ver_horizon > 0 ? ver_horizon : default_horizon(ws, ver_rate);
      EventBatch events = constant_rate_batch(ver_rate, horizon, ver_keys, ver_seed);
      std::vector<ResultRow> expected = naive_eval(ws, f, events, horizon);
      double tol = f == AggFunc::Avg ? 1e-9 : 0.0;
      int status = kOk;
      for (bool factors : {false, true}) {
        PlanDag plan = build_plan(ws, f, ver_eta, factors, nullptr);
        if (ver_fault) {
          for (const auto& n : plan.nodes) {
            if (n.is_factor) {
              expose_node(plan, n.id);
              break;
            }
          }
        }
        RunResult r = run(plan, events, horizon);
        auto diff = first_difference(expected, r.rows, tol);
        std::cout << (factors ? "factors on:  " : "factors off: ")
                  << (diff ? "FAIL " + *diff : "PASS") << " (" << expected.size() << " rows)\n";
        if (diff) status = kMismatch;
      }
      return status;
    }

    if (*generate) {
      if (gen_what == "windows") {
        gen.tumbling = !gen_hopping;
        gen.k_s = gen.k_r;
        WindowSet ws = gen_mode == "random" ? random_gen(gen) : sequential_gen(gen);
        with_output(gen_out, [&](std::ostream& out) { write_windows(out, ws); });
      } else {
        EventBatch events = constant_rate_batch(gen_rate, gen_horizon, gen_keys, gen.seed);
        with_output(gen_out, [&](std::ostream& out) { write_events(out, events); });
      }
      return kOk;
    }

    if (*bench) {
      bcfg.sequential = bench_mode == "sequential";
      bcfg.gen.tumbling = !bench_hopping;
      bcfg.gen.k_s = bcfg.gen.k_r;
      bcfg.func = parse_agg_func(bench_func);
      BenchReport report = run_bench(bcfg);
      std::cout << report.to_table();
      if (!bench_json.empty()) {
        with_output(bench_json, [&](std::ostream& out) { out << report.to_json() << "\n"; });
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
