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
#include <vector>

#include "wsopt/aggregate.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

enum class NodeRole {
  Query,        // a window of the user query; its results are exposed
  Factor,       // auxiliary window; feeds other windows only
  VirtualRoot,  // S<1,1>, stands for the raw stream
};

struct WcgNode {
  WindowSpec window;
  NodeRole role = NodeRole::Query;
};

/// Edge from an upstream (finer) window to a downstream (coarser) window
/// that can be computed from the upstream's sub-aggregates.
struct WcgEdge {
  std::size_t upstream;
  std::size_t downstream;

  friend bool operator==(const WcgEdge&, const WcgEdge&) = default;
  friend auto operator<=>(const WcgEdge&, const WcgEdge&) = default;
};

/// Window coverage graph.
struct Wcg {
  SharingSemantics semantics = SharingSemantics::CoveredBy;
  std::vector<WcgNode> nodes;
  std::vector<WcgEdge> edges;

  std::optional<std::size_t> find(const WindowSpec& w) const;
  std::optional<std::size_t> virtual_root() const;
  std::vector<std::size_t> upstreams_of(std::size_t node) const;
  std::vector<std::size_t> downstreams_of(std::size_t node) const;
  bool has_edge(std::size_t upstream, std::size_t downstream) const;
};

/// Whether `down` can be computed from `up` under `semantics`.
bool shares_from(SharingSemantics semantics, const WindowSpec& down, const WindowSpec& up);

/// O(n^2) pairwise construction. Edges only join distinct windows.
/// Throws HolisticFunction when `f` has no sharing semantics.
Wcg build_wcg(const WindowSet& ws, AggFunc f);
Wcg build_wcg(const WindowSet& ws, SharingSemantics semantics);

/// Adds the virtual root S<1,1> with an edge to every node lacking an
/// incoming edge. A graph that already holds W<1,1> keeps that node as its
/// root and gains nothing.
Wcg augment(const Wcg& g);

/// Steady-rate cost model parameters over the period R = lcm of ranges.
struct CostContext {
  std::int64_t eta = 1;
  Tick period = 0;
  std::vector<WindowSpec> windows;
  std::vector<std::uint64_t> multiplicity;  // m_i = R / r_i
  std::vector<std::uint64_t> recurrence;    // n_i = 1 + (m_i - 1) r_i / s_i

  /// Instances of `w` that fit inside one period, 1 + (R - r) / s. Defined for
  /// any window whose range fits in R and whose slide divides R, which
  /// includes factor windows. Throws InvalidWindow otherwise.
  std::uint64_t recurrence_of(const WindowSpec& w) const;
  /// R / r. Throws InvalidWindow unless r divides R.
  std::uint64_t multiplicity_of(const WindowSpec& w) const;
};

/// Throws Overflow when R leaves the 63-bit range and InvalidWindow when
/// eta < 1 or the set is empty.
CostContext cost_context(const WindowSet& ws, std::int64_t eta = 1);

/// Cost of evaluating every window directly from the raw stream, sum n_i eta r_i.
std::int64_t naive_cost(const CostContext& ctx);

/// Result of the min-cost pass: at most one chosen upstream per node.
struct MinCostWcg {
  Wcg graph;  // the graph the pass ran over, with all its candidate edges
  CostContext context;
  std::vector<std::optional<std::size_t>> upstream;
  std::vector<std::int64_t> cost;
  std::vector<std::uint64_t> recurrence;
  /// Sum of node costs, excluding a virtual root (the raw stream is free).
  std::int64_t total = 0;

  std::vector<WcgEdge> kept_edges() const;
  std::vector<std::size_t> children_of(std::size_t node) const;
  std::vector<std::size_t> roots() const;
};

/// The cost pass over an arbitrary graph. Each node starts at n_i eta r_i and
/// is revised to n_i M(W_i, W') over every incoming edge; an edge from a
/// virtual root costs n_i eta r_i. Ties prefer the upstream with the larger
/// range, then the larger slide, then the lower node index; an edge whose
/// cost equals the raw cost is kept.
MinCostWcg solve_min_cost(const Wcg& g, const CostContext& ctx);

/// build_wcg followed by solve_min_cost.
MinCostWcg min_cost_wcg(const WindowSet& ws, AggFunc f, std::int64_t eta = 1);

}  // namespace wsopt
