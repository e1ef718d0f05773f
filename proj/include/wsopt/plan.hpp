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
#include <utility>
#include <vector>

#include "wsopt/aggregate.hpp"
#include "wsopt/wcg.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

enum class NodeKind { Source, WindowAgg, Multicast, Union, Sink };

std::string to_string(NodeKind k);
/// Lower-case names as used in plan documents. Throws ParseError.
NodeKind parse_node_kind(const std::string& name);

struct PlanNode {
  std::size_t id = 0;
  NodeKind kind = NodeKind::Source;
  std::optional<WindowSpec> window;  // WindowAgg only
  bool is_factor = false;

  friend bool operator==(const PlanNode&, const PlanNode&) = default;
};

using PlanEdge = std::pair<std::size_t, std::size_t>;

/// Executable dataflow. Node ids equal their position in `nodes`.
struct PlanDag {
  AggFunc func = AggFunc::Min;
  /// Sharing used between window operators; None for a naive plan.
  SharingSemantics semantics = SharingSemantics::None;
  std::int64_t eta = 1;
  std::int64_t model_cost = 0;
  std::vector<PlanNode> nodes;
  std::vector<PlanEdge> edges;

  std::size_t add_node(NodeKind kind, std::optional<WindowSpec> window = std::nullopt,
                       bool is_factor = false);
  void connect(std::size_t from, std::size_t to) { edges.emplace_back(from, to); }

  std::vector<std::size_t> inputs_of(std::size_t id) const;
  std::vector<std::size_t> outputs_of(std::size_t id) const;
  std::vector<std::size_t> window_aggs() const;

  friend bool operator==(const PlanDag&, const PlanDag&) = default;
};

/// Source -> Multicast -> one WindowAgg per window -> Union -> Sink. The
/// Multicast and the Union are dropped for a single window. Throws
/// InvalidWindow on an empty set.
PlanDag naive_plan(const WindowSet& ws, AggFunc f, std::int64_t eta = 1);

/// Plan for a min-cost forest. A virtual root in the graph becomes the
/// Source. Every producer with two or more consumers feeds them through a
/// Multicast; factor windows never link to the Union. Throws PlanError if the
/// chosen upstreams do not form a forest.
PlanDag rewrite(const MinCostWcg& g, AggFunc f);

/// Checks every structural invariant. Throws PlanError naming the node or
/// edge at fault.
void validate(const PlanDag& p);

/// The WindowAgg producing the records a WindowAgg consumes, or nullopt when
/// it reads the raw stream. Follows Multicast chains upward.
std::optional<std::size_t> producer_of(const PlanDag& p, std::size_t id);

/// Whether the results of `id` reach the Sink without passing through
/// another WindowAgg.
bool reaches_sink(const PlanDag& p, std::size_t id);

/// Routes the results of WindowAgg `id` to the Union, adding a Union in
/// front of the Sink if the plan has none. Produces an invalid plan when `id`
/// is a factor; used to inject faults.
void expose_node(PlanDag& p, std::size_t id);

std::string serialize(const PlanDag& p);
/// Parses and validates. Throws PlanError.
PlanDag deserialize(const std::string& text);

}  // namespace wsopt
