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

#include <optional>
#include <vector>

#include "wsopt/aggregate.hpp"
#include "wsopt/rational.hpp"
#include "wsopt/wcg.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

/// Inputs of the benefit formula for inserting `candidate` between `target`
/// and its downstream windows.
struct BenefitContext {
  WindowSpec target;
  std::vector<WindowSpec> downstreams;
  WindowSpec candidate;
  CostContext costs;
  /// The target is the virtual root, so its children read raw events and pay
  /// eta per event instead of one record per sub-aggregate.
  bool target_is_root = false;
};

/// delta_f, the cost of the graph without the candidate minus the cost with
/// it, per period R. Throws NotCovered unless candidate <= target and every
/// downstream <= candidate with downstream != candidate.
Rational benefit_delta(const BenefitContext& bc);

struct FactorCandidate {
  WindowSpec window;
  Rational delta;
};

/// Where a factor search runs and what it must not return.
struct SearchScope {
  bool target_is_root = false;
  /// Windows already in the graph; a candidate equal to one of these is skipped.
  std::vector<WindowSpec> excluded;
};

/// Best factor under covered-by semantics, or nullopt when no candidate has
/// a strictly positive benefit. Ties keep the first candidate in enumeration
/// order (slide ascending, then range ascending).
std::optional<FactorCandidate> find_best_factor_covered(const WindowSpec& w,
                                                        const WindowSet& downstreams,
                                                        const CostContext& ctx,
                                                        const SearchScope& scope = {});

/// Sum of n_j / m_j over the downstream windows.
Rational lambda(const WindowSet& downstreams, const CostContext& ctx);

/// Quick test of whether a tumbling factor under a tumbling target can pay
/// off. Throws InvalidWindow if either window is hopping.
bool partition_benefit_check(const WindowSpec& wf, const WindowSpec& w,
                             const WindowSet& downstreams, const Rational& lam,
                             const CostContext& ctx);

enum class Preference { First, Second, Equal };

/// Compares two independent tumbling candidates by the ratio test
///   r_f / r'_f >= (lam - r_f / r_W) / (lam - r'_f / r_W).
/// Throws DomainError when either denominator is not positive and
/// InvalidWindow for hopping inputs.
Preference compare_independent(const WindowSpec& wf, const WindowSpec& wf2, const Rational& lam,
                               Tick r_w);

/// Best tumbling factor under partitioned-by semantics, or nullopt.
std::optional<FactorCandidate> find_best_factor_partitioned(const WindowSpec& w,
                                                            const WindowSet& downstreams,
                                                            const CostContext& ctx,
                                                            const SearchScope& scope = {});

struct FactorInsertion {
  std::size_t target;  // node index in the final graph
  std::size_t node;    // index of the inserted factor node
  WindowSpec window;
  Rational delta;
  std::vector<std::size_t> children;
};

struct FactoredWcg {
  MinCostWcg result;  // over the augmented graph plus factor nodes
  std::int64_t baseline_total = 0;  // the same graph before any insertion
  std::vector<FactorInsertion> insertions;
};

/// One sweep over the virtual root and then the query windows in input
/// order. Each target with children in the current min-cost forest gets at
/// most one factor, wired target -> factor -> each of those children, and the
/// forest is recomputed after every insertion.
FactoredWcg min_cost_wcg_with_factors(const WindowSet& ws, AggFunc f, std::int64_t eta = 1);

}  // namespace wsopt
