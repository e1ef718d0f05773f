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

#include "wsopt/wcg.hpp"

#include <algorithm>

#include "wsopt/error.hpp"
#include "wsopt/rational.hpp"

namespace wsopt {

std::optional<std::size_t> Wcg::find(const WindowSpec& w) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].window == w) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Wcg::virtual_root() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].role == NodeRole::VirtualRoot) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Wcg::upstreams_of(std::size_t node) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.downstream == node) out.push_back(e.upstream);
  }
  return out;
}

std::vector<std::size_t> Wcg::downstreams_of(std::size_t node) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.upstream == node) out.push_back(e.downstream);
  }
  return out;
}

bool Wcg::has_edge(std::size_t upstream, std::size_t downstream) const {
  return std::find(edges.begin(), edges.end(), WcgEdge{upstream, downstream}) != edges.end();
}

bool shares_from(SharingSemantics semantics, const WindowSpec& down, const WindowSpec& up) {
  switch (semantics) {
    case SharingSemantics::CoveredBy:
      return covers(down, up);
    case SharingSemantics::PartitionedBy:
      return partitions(down, up);
    case SharingSemantics::None:
      return false;
  }
  return false;
}

Wcg build_wcg(const WindowSet& ws, SharingSemantics semantics) {
  if (semantics == SharingSemantics::None) {
    throw HolisticFunction("no sharing semantics: the window coverage graph is undefined");
  }
  Wcg g;
  g.semantics = semantics;
  for (const auto& w : ws) g.nodes.push_back({w, NodeRole::Query});
  for (std::size_t up = 0; up < ws.size(); ++up) {
    for (std::size_t down = 0; down < ws.size(); ++down) {
      if (up != down && shares_from(semantics, ws[down], ws[up])) {
        g.edges.push_back({up, down});
      }
    }
  }
  return g;
}

Wcg build_wcg(const WindowSet& ws, AggFunc f) {
  if (sharing_semantics(f) == SharingSemantics::None) {
    throw HolisticFunction(to_string(f) + " is holistic and cannot share sub-aggregates");
  }
  return build_wcg(ws, sharing_semantics(f));
}

Wcg augment(const Wcg& g) {
  const WindowSpec unit(1, 1);
  if (g.find(unit)) return g;
  Wcg out = g;
  std::size_t root = out.nodes.size();
  out.nodes.push_back({unit, NodeRole::VirtualRoot});
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.upstreams_of(i).empty()) out.edges.push_back({root, i});
  }
  return out;
}

std::uint64_t CostContext::recurrence_of(const WindowSpec& w) const {
  if (w.range() > period || period % w.slide() != 0) {
    throw InvalidWindow(w.to_string() + " does not tile the period " + std::to_string(period));
  }
  return 1 + (period - w.range()) / w.slide();
}

std::uint64_t CostContext::multiplicity_of(const WindowSpec& w) const {
  if (period % w.range() != 0) {
    throw InvalidWindow(w.to_string() + " range does not divide the period " +
                        std::to_string(period));
  }
  return period / w.range();
}

CostContext cost_context(const WindowSet& ws, std::int64_t eta) {
  if (eta < 1) throw InvalidWindow("event rate eta must be at least 1");
  if (ws.empty()) throw InvalidWindow("empty window set");
  CostContext ctx;
  ctx.eta = eta;
  ctx.period = 1;
  for (const auto& w : ws) ctx.period = checked_lcm(ctx.period, w.range());
  to_int64(ctx.period);
  // eta * R is the cost of a tumbling window; make sure it is representable.
  checked_mul(eta, static_cast<std::int64_t>(ctx.period));
  for (const auto& w : ws) {
    ctx.windows.push_back(w);
    ctx.multiplicity.push_back(ctx.multiplicity_of(w));
    ctx.recurrence.push_back(ctx.recurrence_of(w));
  }
  return ctx;
}

std::int64_t naive_cost(const CostContext& ctx) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < ctx.windows.size(); ++i) {
    std::int64_t c = checked_mul(checked_mul(to_int64(ctx.recurrence[i]), ctx.eta),
                                 to_int64(ctx.windows[i].range()));
    total = checked_add(total, c);
  }
  return total;
}

std::vector<WcgEdge> MinCostWcg::kept_edges() const {
  std::vector<WcgEdge> out;
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    if (upstream[i]) out.push_back({*upstream[i], i});
  }
  return out;
}

std::vector<std::size_t> MinCostWcg::children_of(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    if (upstream[i] == node) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> MinCostWcg::roots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    if (!upstream[i]) out.push_back(i);
  }
  return out;
}

MinCostWcg solve_min_cost(const Wcg& g, const CostContext& ctx) {
  MinCostWcg out;
  out.graph = g;
  out.context = ctx;
  const std::size_t n = g.nodes.size();
  out.upstream.assign(n, std::nullopt);
  out.cost.assign(n, 0);
  out.recurrence.assign(n, 0);

  std::vector<std::vector<std::size_t>> incoming(n);
  for (const auto& e : g.edges) incoming[e.downstream].push_back(e.upstream);

  for (std::size_t i = 0; i < n; ++i) {
    const WindowSpec& w = g.nodes[i].window;
    const std::int64_t recurrence = to_int64(ctx.recurrence_of(w));
    out.recurrence[i] = static_cast<std::uint64_t>(recurrence);
    const std::int64_t raw = checked_mul(checked_mul(recurrence, ctx.eta), to_int64(w.range()));
    if (g.nodes[i].role == NodeRole::VirtualRoot) {
      out.cost[i] = raw;
      continue;
    }

    std::optional<std::size_t> best;
    std::int64_t best_cost = raw;
    for (std::size_t up : incoming[i]) {
      const WindowSpec& uw = g.nodes[up].window;
      std::int64_t c = g.nodes[up].role == NodeRole::VirtualRoot
                           ? raw
                           : checked_mul(recurrence, to_int64(covering_multiplier(w, uw)));
      bool better = c < best_cost;
      if (!better && c == best_cost) {
        if (!best) {
          better = true;
        } else {
          const WindowSpec& bw = g.nodes[*best].window;
          better = uw.range() > bw.range() ||
                   (uw.range() == bw.range() && uw.slide() > bw.slide()) ||
                   (uw == bw && up < *best);
        }
      }
      if (better) {
        best = up;
        best_cost = c;
      }
    }
    out.upstream[i] = best;
    out.cost[i] = best_cost;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (g.nodes[i].role != NodeRole::VirtualRoot) out.total = checked_add(out.total, out.cost[i]);
  }
  return out;
}

MinCostWcg min_cost_wcg(const WindowSet& ws, AggFunc f, std::int64_t eta) {
  Wcg g = build_wcg(ws, f);
  return solve_min_cost(g, cost_context(ws, eta));
}

}  // namespace wsopt
