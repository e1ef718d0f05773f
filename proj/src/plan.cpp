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

#include "wsopt/plan.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "wsopt/error.hpp"

namespace wsopt {

using json = nlohmann::json;

namespace {

std::string where(std::size_t id) { return "node " + std::to_string(id); }

}  // namespace

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Source: return "source";
    case NodeKind::WindowAgg: return "window_agg";
    case NodeKind::Multicast: return "multicast";
    case NodeKind::Union: return "union";
    case NodeKind::Sink: return "sink";
  }
  return "?";
}

NodeKind parse_node_kind(const std::string& name) {
  for (NodeKind k : {NodeKind::Source, NodeKind::WindowAgg, NodeKind::Multicast, NodeKind::Union,
                     NodeKind::Sink}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown plan node kind '" + name + "'");
}

std::size_t PlanDag::add_node(NodeKind kind, std::optional<WindowSpec> window, bool is_factor) {
  std::size_t id = nodes.size();
  nodes.push_back({id, kind, window, is_factor});
  return id;
}

std::vector<std::size_t> PlanDag::inputs_of(std::size_t id) const {
  std::vector<std::size_t> out;
  for (const auto& [a, b] : edges) {
    if (b == id) out.push_back(a);
  }
  return out;
}

std::vector<std::size_t> PlanDag::outputs_of(std::size_t id) const {
  std::vector<std::size_t> out;
  for (const auto& [a, b] : edges) {
    if (a == id) out.push_back(b);
  }
  return out;
}

std::vector<std::size_t> PlanDag::window_aggs() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::WindowAgg) out.push_back(n.id);
  }
  return out;
}

PlanDag naive_plan(const WindowSet& ws, AggFunc f, std::int64_t eta) {
  if (ws.empty()) throw InvalidWindow("cannot plan an empty window set");
  PlanDag p;
  p.func = f;
  p.semantics = SharingSemantics::None;
  p.eta = eta;
  p.model_cost = naive_cost(cost_context(ws, eta));

  std::size_t src = p.add_node(NodeKind::Source);
  if (ws.size() == 1) {
    std::size_t w = p.add_node(NodeKind::WindowAgg, ws[0]);
    std::size_t sink = p.add_node(NodeKind::Sink);
    p.connect(src, w);
    p.connect(w, sink);
    return p;
  }
  std::size_t mc = p.add_node(NodeKind::Multicast);
  p.connect(src, mc);
  std::vector<std::size_t> aggs;
  for (const auto& w : ws) aggs.push_back(p.add_node(NodeKind::WindowAgg, w));
  std::size_t un = p.add_node(NodeKind::Union);
  std::size_t sink = p.add_node(NodeKind::Sink);
  for (std::size_t a : aggs) {
    p.connect(mc, a);
    p.connect(a, un);
  }
  p.connect(un, sink);
  return p;
}

PlanDag rewrite(const MinCostWcg& g, AggFunc f) {
  const auto& nodes = g.graph.nodes;
  const std::size_t n = nodes.size();
  if (g.upstream.size() != n) throw PlanError("min-cost graph is missing upstream entries");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t steps = 0;
    for (auto cur = g.upstream[i]; cur; cur = g.upstream[*cur]) {
      if (*cur >= n) throw PlanError("upstream of " + nodes[i].window.to_string() + " is out of range");
      if (++steps > n) throw PlanError("chosen upstreams form a cycle through " +
                                       nodes[i].window.to_string());
    }
  }
  auto is_root = [&](std::size_t i) { return nodes[i].role == NodeRole::VirtualRoot; };

  PlanDag p;
  p.func = f;
  p.semantics = g.graph.semantics;
  p.eta = g.context.eta;
  p.model_cost = g.total;

  std::size_t src = p.add_node(NodeKind::Source);
  std::vector<std::size_t> agg(n, 0);
  std::size_t visible = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_root(i)) continue;
    bool factor = nodes[i].role == NodeRole::Factor;
    agg[i] = p.add_node(NodeKind::WindowAgg, nodes[i].window, factor);
    if (!factor) ++visible;
  }
  std::optional<std::size_t> un;
  if (visible >= 2) un = p.add_node(NodeKind::Union);
  std::size_t sink = p.add_node(NodeKind::Sink);
  if (un) p.connect(*un, sink);
  const std::size_t results = un ? *un : sink;

  auto link = [&](std::size_t from, const std::vector<std::size_t>& to) {
    if (to.size() == 1) {
      p.connect(from, to[0]);
    } else if (to.size() >= 2) {
      std::size_t mc = p.add_node(NodeKind::Multicast);
      p.connect(from, mc);
      for (std::size_t t : to) p.connect(mc, t);
    }
  };

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_root(i) && (!g.upstream[i] || is_root(*g.upstream[i]))) roots.push_back(agg[i]);
  }
  link(src, roots);

  for (std::size_t i = 0; i < n; ++i) {
    if (is_root(i)) continue;
    std::vector<std::size_t> to;
    for (std::size_t c : g.children_of(i)) to.push_back(agg[c]);
    if (nodes[i].role != NodeRole::Factor) to.push_back(results);
    link(agg[i], to);
  }
  return p;
}

std::optional<std::size_t> producer_of(const PlanDag& p, std::size_t id) {
  std::size_t cur = id;
  for (std::size_t steps = 0; steps <= p.nodes.size(); ++steps) {
    auto in = p.inputs_of(cur);
    if (in.size() != 1) throw PlanError(where(cur) + " must have exactly one input");
    cur = in[0];
    switch (p.nodes[cur].kind) {
      case NodeKind::Source: return std::nullopt;
      case NodeKind::WindowAgg: return cur;
      case NodeKind::Multicast: continue;
      default: throw PlanError(where(id) + " is fed by " + to_string(p.nodes[cur].kind));
    }
  }
  throw PlanError(where(id) + " sits on a cycle");
}

bool reaches_sink(const PlanDag& p, std::size_t id) {
  std::vector<std::size_t> stack = p.outputs_of(id);
  std::set<std::size_t> seen;
  while (!stack.empty()) {
    std::size_t cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    if (p.nodes[cur].kind == NodeKind::Sink) return true;
    if (p.nodes[cur].kind == NodeKind::WindowAgg) continue;
    for (std::size_t o : p.outputs_of(cur)) stack.push_back(o);
  }
  return false;
}

void validate(const PlanDag& p) {
  const std::size_t n = p.nodes.size();
  std::size_t sources = 0, sinks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = p.nodes[i];
    if (node.id != i) throw PlanError(where(i) + " carries id " + std::to_string(node.id));
    if (node.kind == NodeKind::Source) ++sources;
    if (node.kind == NodeKind::Sink) ++sinks;
    if ((node.kind == NodeKind::WindowAgg) != node.window.has_value()) {
      throw PlanError(where(i) + ": only window_agg nodes carry a window");
    }
    if (node.is_factor && node.kind != NodeKind::WindowAgg) {
      throw PlanError(where(i) + ": only window_agg nodes can be factors");
    }
  }
  if (sources != 1) throw PlanError("plan needs exactly one source, found " + std::to_string(sources));
  if (sinks != 1) throw PlanError("plan needs exactly one sink, found " + std::to_string(sinks));

  std::set<PlanEdge> unique;
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    auto [a, b] = p.edges[e];
    std::string at = "edge " + std::to_string(e) + " [" + std::to_string(a) + "," +
                     std::to_string(b) + "]";
    if (a >= n || b >= n) throw PlanError(at + " references a missing node");
    if (a == b) throw PlanError(at + " is a self loop");
    if (!unique.insert(p.edges[e]).second) throw PlanError(at + " is duplicated");
    ++indegree[b];
  }

  // Kahn's algorithm; anything left over sits on a cycle.
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t cur = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t o : p.outputs_of(cur)) {
      if (--indegree[o] == 0) ready.push_back(o);
    }
  }
  if (visited != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] != 0) throw PlanError("plan has a cycle through " + where(i));
    }
  }

  SharingSemantics expected = sharing_semantics(p.func);
  if (p.semantics != SharingSemantics::None && p.semantics != expected) {
    throw PlanError("semantics " + to_string(p.semantics) + " does not match " +
                    to_string(p.func));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = p.nodes[i];
    std::size_t in = p.inputs_of(i).size();
    std::size_t out = p.outputs_of(i).size();
    switch (node.kind) {
      case NodeKind::Source:
        if (in != 0) throw PlanError(where(i) + ": source has inputs");
        if (out == 0) throw PlanError(where(i) + ": source feeds nothing");
        if (reaches_sink(p, i)) throw PlanError(where(i) + ": raw events reach the sink");
        break;
      case NodeKind::Sink:
        if (in != 1) throw PlanError(where(i) + ": sink needs exactly one input");
        if (out != 0) throw PlanError(where(i) + ": sink has outputs");
        break;
      case NodeKind::Multicast:
        if (in != 1) throw PlanError(where(i) + ": multicast needs exactly one input");
        if (out == 0) throw PlanError(where(i) + ": multicast feeds nothing");
        break;
      case NodeKind::Union: {
        if (in == 0) throw PlanError(where(i) + ": union has no inputs");
        auto outs = p.outputs_of(i);
        if (outs.size() != 1 || p.nodes[outs[0]].kind != NodeKind::Sink) {
          throw PlanError(where(i) + ": union must feed the sink only");
        }
        break;
      }
      case NodeKind::WindowAgg: {
        if (in != 1) throw PlanError(where(i) + ": window_agg needs exactly one input");
        if (out == 0) throw PlanError(where(i) + ": window_agg feeds nothing");
        bool visible = reaches_sink(p, i);
        if (node.is_factor && visible) {
          throw PlanError(where(i) + ": factor window " + node.window->to_string() +
                          " is routed to the sink");
        }
        if (!node.is_factor && !visible) {
          throw PlanError(where(i) + ": results of " + node.window->to_string() +
                          " never reach the sink");
        }
        if (auto up = producer_of(p, i)) {
          const WindowSpec& uw = *p.nodes[*up].window;
          if (p.semantics == SharingSemantics::None) {
            throw PlanError(where(i) + ": a plan without sharing semantics reads sub-aggregates");
          }
          if (!shares_from(p.semantics, *node.window, uw)) {
            throw PlanError(where(i) + ": " + node.window->to_string() + " cannot be computed from " +
                            uw.to_string());
          }
        }
        break;
      }
    }
  }
}

void expose_node(PlanDag& p, std::size_t id) {
  if (id >= p.nodes.size() || p.nodes[id].kind != NodeKind::WindowAgg) {
    throw PlanError(where(id) + " is not a window_agg");
  }
  std::optional<std::size_t> sink, un;
  for (const auto& n : p.nodes) {
    if (n.kind == NodeKind::Sink) sink = n.id;
    if (n.kind == NodeKind::Union) un = n.id;
  }
  if (!sink) throw PlanError("plan has no sink");
  if (!un) {
    un = p.add_node(NodeKind::Union);
    for (auto& e : p.edges) {
      if (e.second == *sink) e.second = *un;
    }
    p.connect(*un, *sink);
  }
  auto outs = p.outputs_of(id);
  if (outs.size() == 1 && p.nodes[outs[0]].kind == NodeKind::Multicast) {
    p.connect(outs[0], *un);
    return;
  }
  std::size_t mc = p.add_node(NodeKind::Multicast);
  for (auto& e : p.edges) {
    if (e.first == id) e.first = mc;
  }
  p.connect(id, mc);
  p.connect(mc, *un);
}

std::string serialize(const PlanDag& p) {
  json doc;
  doc["func"] = to_string(p.func);
  doc["semantics"] = to_string(p.semantics);
  doc["eta"] = p.eta;
  doc["model_cost"] = p.model_cost;
  json nodes = json::array();
  for (const auto& n : p.nodes) {
    json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    if (n.window) {
      j["range"] = n.window->range();
      j["slide"] = n.window->slide();
      j["is_factor"] = n.is_factor;
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& [a, b] : p.edges) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

PlanDag deserialize(const std::string& text) {
  PlanDag p;
  std::string at = "document";
  try {
    json doc = json::parse(text);
    p.func = parse_agg_func(doc.at("func").get<std::string>());
    p.semantics = parse_semantics(doc.at("semantics").get<std::string>());
    p.eta = doc.at("eta").get<std::int64_t>();
    p.model_cost = doc.at("model_cost").get<std::int64_t>();
    const json& nodes = doc.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      at = "nodes[" + std::to_string(i) + "]";
      const json& j = nodes.at(i);
      PlanNode n;
      n.id = j.at("id").get<std::size_t>();
      n.kind = parse_node_kind(j.at("kind").get<std::string>());
      if (n.kind == NodeKind::WindowAgg) {
        n.window = WindowSpec(j.at("range").get<Tick>(), j.at("slide").get<Tick>());
        n.is_factor = j.value("is_factor", false);
      }
      p.nodes.push_back(n);
    }
    const json& edges = doc.at("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      at = "edges[" + std::to_string(i) + "]";
      const json& e = edges.at(i);
      if (!e.is_array() || e.size() != 2) throw PlanError("an edge is a pair [from, to]");
      p.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
  } catch (const json::exception& e) {
    throw PlanError("plan " + at + ": " + e.what());
  } catch (const PlanError& e) {
    throw PlanError("plan " + at + ": " + e.what());
  } catch (const Error& e) {
    throw PlanError("plan " + at + ": " + e.what());
  }
  validate(p);
  return p;
}

}  // namespace wsopt
