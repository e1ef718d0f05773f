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
#include <string>
#include <vector>

namespace wsopt {

enum class AggFunc { Min, Max, Sum, Count, Avg, Median };

enum class AggClass { Distributive, Algebraic, Holistic };

/// Which coverage relation lets one window reuse another's sub-aggregates.
enum class SharingSemantics { CoveredBy, PartitionedBy, None };

AggClass classification(AggFunc f);
SharingSemantics sharing_semantics(AggFunc f);

std::string to_string(AggFunc f);
std::string to_string(SharingSemantics s);
/// Case-insensitive. Throws ParseError on unknown names.
AggFunc parse_agg_func(const std::string& name);
SharingSemantics parse_semantics(const std::string& name);

/// Partial aggregate over a bag of raw values.
///
/// MIN/MAX keep the extreme in `value`, SUM keeps the sum in `value`, COUNT
/// keeps `count`, AVG keeps (value = sum, count). MEDIAN buffers raw values
/// and cannot be merged.
struct SubAggregate {
  AggFunc func = AggFunc::Sum;
  double value = 0.0;
  std::uint64_t count = 0;
  std::vector<double> raw;

  friend bool operator==(const SubAggregate&, const SubAggregate&) = default;
};

/// Sub-aggregate of a single raw value.
SubAggregate make_sub_aggregate(AggFunc f, double v);

/// Folds one raw value into `acc`.
inline void accumulate(SubAggregate& acc, double v) {
  switch (acc.func) {
    case AggFunc::Min:
      if (v < acc.value) acc.value = v;
      break;
    case AggFunc::Max:
      if (v > acc.value) acc.value = v;
      break;
    case AggFunc::Sum:
      acc.value += v;
      break;
    case AggFunc::Count:
      ++acc.count;
      break;
    case AggFunc::Avg:
      acc.value += v;
      ++acc.count;
      break;
    case AggFunc::Median:
      acc.raw.push_back(v);
      break;
  }
}

/// Folds `b` into `a`. Throws Error when the kinds differ and
/// HolisticFunction for MEDIAN.
void merge_into(SubAggregate& a, const SubAggregate& b);
SubAggregate merge(const SubAggregate& a, const SubAggregate& b);

/// Final scalar: identity for MIN/MAX/SUM, the count for COUNT, sum/count
/// for AVG, and the middle value (mean of the two middle values for an even
/// count) for MEDIAN.
double finalize(const SubAggregate& a);

}  // namespace wsopt
