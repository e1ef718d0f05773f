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

#include "wsopt/factor.hpp"

#include <algorithm>
#include <numeric>

#include "wsopt/error.hpp"

namespace wsopt {

namespace {

Rational ratio(Tick a, Tick b) { return Rational(to_int64(a), to_int64(b)); }

std::vector<Tick> divisors(Tick n) {
  std::vector<Tick> small, large;
  for (Tick i = 1; i * i <= n; ++i) {
    if (n % i != 0) continue;
    small.push_back(i);
    if (i != n / i) large.push_back(n / i);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

bool is_excluded(const WindowSpec& w, const SearchScope& scope) {
  return std::find(scope.excluded.begin(), scope.excluded.end(), w) != scope.excluded.end();
}

void require_tumbling(const WindowSpec& w) {
  if (!w.tumbling()) throw InvalidWindow(w.to_string() + " is not tumbling");
}

}  // namespace

Rational benefit_delta(const BenefitContext& bc) {
  const WindowSpec& w = bc.target;
  const WindowSpec& f = bc.candidate;
  if (!covers(f, w) || f == w) {
    throw NotCovered(f.to_string() + " is not a proper factor of " + w.to_string());
  }
  const Rational sigma = bc.target_is_root ? Rational(bc.costs.eta) : Rational(1);
  const Rational k_w = ratio(w.range(), w.slide());
  const Rational k_f = ratio(f.range(), f.slide());

  Rational total = 0;
  for (const auto& d : bc.downstreams) {
    if (!covers(d, f) || d == f) {
      throw NotCovered(d.to_string() + " is not covered by " + f.to_string());
    }
    Rational via_target = sigma * (Rational(1) + ratio(d.range(), w.slide()) - k_w);
    Rational via_factor = Rational(1) + ratio(d.range(), f.slide()) - k_f;
    total += Rational(to_int64(bc.costs.recurrence_of(d))) * (via_target - via_factor);
  }
  Rational own = sigma * (Rational(1) + ratio(f.range(), w.slide()) - k_w);
  return total - Rational(to_int64(bc.costs.recurrence_of(f))) * own;
}

std::optional<FactorCandidate> find_best_factor_covered(const WindowSpec& w,
                                                        const WindowSet& downstreams,
                                                        const CostContext& ctx,
                                                        const SearchScope& scope) {
  if (downstreams.empty()) return std::nullopt;
  Tick s_d = 0;
  Tick r_min = downstreams[0].range();
  for (const auto& d : downstreams) {
    s_d = std::gcd(s_d, d.slide());
    r_min = std::min(r_min, d.range());
  }

  BenefitContext bc{w, downstreams.windows(), w, ctx, scope.target_is_root};
  std::optional<FactorCandidate> best;
  for (Tick s_f : divisors(s_d)) {
    if (s_f % w.slide() != 0) continue;
    for (Tick r_f = s_f; r_f < r_min; r_f += s_f) {
      WindowSpec f(r_f, s_f);
      if (f == w || !covers(f, w) || is_excluded(f, scope)) continue;
      bool fits = std::all_of(downstreams.begin(), downstreams.end(),
                              [&](const WindowSpec& d) { return covers(d, f); });
      if (!fits) continue;
      bc.candidate = f;
      Rational delta = benefit_delta(bc);
      if (delta > Rational(0) && (!best || delta > best->delta)) best = FactorCandidate{f, delta};
    }
  }
  return best;
}

Rational lambda(const WindowSet& downstreams, const CostContext& ctx) {
  Rational out = 0;
  for (const auto& d : downstreams) {
    out += Rational(to_int64(ctx.recurrence_of(d)), to_int64(ctx.multiplicity_of(d)));
  }
  return out;
}

bool partition_benefit_check(const WindowSpec& wf, const WindowSpec& w,
                             const WindowSet& downstreams, const Rational& lam,
                             const CostContext& ctx) {
  require_tumbling(wf);
  require_tumbling(w);
  if (downstreams.size() >= 2) return true;
  if (downstreams.empty()) return false;
  const WindowSpec& d = downstreams[0];
  const Tick k1 = d.range() / d.slide();
  const std::uint64_t m1 = ctx.multiplicity_of(d);
  if (k1 == 1) return false;
  if (k1 >= 3 && m1 >= 3) return true;
  if (lam <= Rational(1)) return false;
  return ratio(wf.range(), w.range()) >= lam / (lam - Rational(1));
}

Preference compare_independent(const WindowSpec& wf, const WindowSpec& wf2, const Rational& lam,
                               Tick r_w) {
  require_tumbling(wf);
  require_tumbling(wf2);
  if (wf == wf2) return Preference::Equal;
  const Rational a = ratio(wf.range(), r_w);
  const Rational b = ratio(wf2.range(), r_w);
  if (lam - a <= Rational(0) || lam - b <= Rational(0)) {
    throw DomainError("ratio test undefined: lambda " + lam.to_string() +
                      " does not exceed r_f/r_W for " + wf.to_string() + " and " +
                      wf2.to_string());
  }
  bool first = ratio(wf.range(), wf2.range()) >= (lam - a) / (lam - b);
  bool second = ratio(wf2.range(), wf.range()) >= (lam - b) / (lam - a);
  if (first && second) return Preference::Equal;
  return first ? Preference::First : Preference::Second;
}

std::optional<FactorCandidate> find_best_factor_partitioned(const WindowSpec& w,
                                                            const WindowSet& downstreams,
                                                            const CostContext& ctx,
                                                            const SearchScope& scope) {
  if (downstreams.empty()) return std::nullopt;
  require_tumbling(w);
  const Tick r_w = w.range();
  Tick r_d = 0;
  for (const auto& d : downstreams) r_d = std::gcd(r_d, d.range());
  if (r_d == r_w) return std::nullopt;

  const Rational lam = lambda(downstreams, ctx);
  BenefitContext bc{w, downstreams.windows(), w, ctx, scope.target_is_root};
  std::vector<FactorCandidate> eligible;
  for (Tick r_f : divisors(r_d)) {
    if (r_f % r_w != 0 || r_f == r_w) continue;
    WindowSpec f(r_f, r_f);
    if (is_excluded(f, scope) || !partitions(f, w)) continue;
    // A hopping downstream also needs its slide to be a multiple of r_f.
    bool fits = std::all_of(downstreams.begin(), downstreams.end(), [&](const WindowSpec& d) {
      return d != f && partitions(d, f);
    });
    if (!fits || !partition_benefit_check(f, w, downstreams, lam, ctx)) continue;
    bc.candidate = f;
    Rational delta = benefit_delta(bc);
    if (delta > Rational(0)) eligible.push_back({f, delta});
  }

  // Drop every candidate from which another candidate could be computed; the
  // coarser one of a dependent pair always wins.
  std::vector<FactorCandidate> independent;
  for (const auto& c : eligible) {
    bool finer = std::any_of(eligible.begin(), eligible.end(), [&](const FactorCandidate& o) {
      return o.window != c.window && partitions(o.window, c.window);
    });
    if (!finer) independent.push_back(c);
  }

  // Ratio test in cross-multiplied form, which stays defined when
  // lam <= r'_f / r_W.
  std::optional<FactorCandidate> best;
  for (const auto& c : independent) {
    if (!best) {
      best = c;
      continue;
    }
    Rational lhs = ratio(c.window.range(), best->window.range()) *
                   (lam - ratio(best->window.range(), r_w));
    Rational rhs = lam - ratio(c.window.range(), r_w);
    if (lhs > rhs) best = c;
  }
  return best;
}

FactoredWcg min_cost_wcg_with_factors(const WindowSet& ws, AggFunc f, std::int64_t eta) {
  const CostContext ctx = cost_context(ws, eta);
  Wcg g = augment(build_wcg(ws, f));

  FactoredWcg out;
  out.result = solve_min_cost(g, ctx);
  out.baseline_total = out.result.total;

  std::vector<std::size_t> targets;
  if (auto root = g.virtual_root()) targets.push_back(*root);
  for (std::size_t i = 0; i < ws.size(); ++i) targets.push_back(i);

  SearchScope scope;
  for (const auto& node : g.nodes) scope.excluded.push_back(node.window);

  for (std::size_t t : targets) {
    std::vector<std::size_t> children = out.result.children_of(t);
    if (children.empty()) continue;
    WindowSet ds;
    for (std::size_t c : children) ds.add(g.nodes[c].window);
    const WindowSpec& target = g.nodes[t].window;
    scope.target_is_root = g.nodes[t].role == NodeRole::VirtualRoot;

    std::optional<FactorCandidate> cand =
        g.semantics == SharingSemantics::CoveredBy
            ? find_best_factor_covered(target, ds, ctx, scope)
            : find_best_factor_partitioned(target, ds, ctx, scope);
    if (!cand) continue;

    std::size_t node = g.nodes.size();
    g.nodes.push_back({cand->window, NodeRole::Factor});
    g.edges.push_back({t, node});
    for (std::size_t c : children) g.edges.push_back({node, c});
    scope.excluded.push_back(cand->window);
    out.result = solve_min_cost(g, ctx);
    out.insertions.push_back({t, node, cand->window, cand->delta, children});
  }
  return out;
}

}  // namespace wsopt
