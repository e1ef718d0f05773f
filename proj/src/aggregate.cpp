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

#include "wsopt/aggregate.hpp"

#include <algorithm>
#include <cctype>

#include "wsopt/error.hpp"

namespace wsopt {

AggClass classification(AggFunc f) {
  switch (f) {
    case AggFunc::Min:
    case AggFunc::Max:
    case AggFunc::Sum:
    case AggFunc::Count:
      return AggClass::Distributive;
    case AggFunc::Avg:
      return AggClass::Algebraic;
    case AggFunc::Median:
      return AggClass::Holistic;
  }
  return AggClass::Holistic;
}

SharingSemantics sharing_semantics(AggFunc f) {
  switch (f) {
    case AggFunc::Min:
    case AggFunc::Max:
      return SharingSemantics::CoveredBy;
    case AggFunc::Sum:
    case AggFunc::Count:
    case AggFunc::Avg:
      return SharingSemantics::PartitionedBy;
    case AggFunc::Median:
      return SharingSemantics::None;
  }
  return SharingSemantics::None;
}

std::string to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
    case AggFunc::Sum: return "SUM";
    case AggFunc::Count: return "COUNT";
    case AggFunc::Avg: return "AVG";
    case AggFunc::Median: return "MEDIAN";
  }
  return "?";
}

std::string to_string(SharingSemantics s) {
  switch (s) {
    case SharingSemantics::CoveredBy: return "covered_by";
    case SharingSemantics::PartitionedBy: return "partitioned_by";
    case SharingSemantics::None: return "none";
  }
  return "?";
}

AggFunc parse_agg_func(const std::string& name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (AggFunc f : {AggFunc::Min, AggFunc::Max, AggFunc::Sum, AggFunc::Count, AggFunc::Avg,
                    AggFunc::Median}) {
    if (to_string(f) == upper) return f;
  }
  throw ParseError("unknown aggregate function '" + name + "'");
}

SharingSemantics parse_semantics(const std::string& name) {
  for (SharingSemantics s :
       {SharingSemantics::CoveredBy, SharingSemantics::PartitionedBy, SharingSemantics::None}) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown semantics '" + name + "'");
}

SubAggregate make_sub_aggregate(AggFunc f, double v) {
  SubAggregate s;
  s.func = f;
  switch (f) {
    case AggFunc::Min:
    case AggFunc::Max:
    case AggFunc::Sum:
      s.value = v;
      break;
    case AggFunc::Count:
      s.count = 1;
      break;
    case AggFunc::Avg:
      s.value = v;
      s.count = 1;
      break;
    case AggFunc::Median:
      s.raw.push_back(v);
      break;
  }
  return s;
}

void merge_into(SubAggregate& a, const SubAggregate& b) {
  if (a.func != b.func) {
    throw Error("cannot merge " + to_string(b.func) + " into " + to_string(a.func));
  }
  switch (a.func) {
    case AggFunc::Min:
      a.value = std::min(a.value, b.value);
      break;
    case AggFunc::Max:
      a.value = std::max(a.value, b.value);
      break;
    case AggFunc::Sum:
      a.value += b.value;
      break;
    case AggFunc::Count:
      a.count += b.count;
      break;
    case AggFunc::Avg:
      a.value += b.value;
      a.count += b.count;
      break;
    case AggFunc::Median:
      throw HolisticFunction("MEDIAN sub-aggregates cannot be merged");
  }
}

SubAggregate merge(const SubAggregate& a, const SubAggregate& b) {
  SubAggregate out = a;
  merge_into(out, b);
  return out;
}

double finalize(const SubAggregate& a) {
  switch (a.func) {
    case AggFunc::Min:
    case AggFunc::Max:
    case AggFunc::Sum:
      return a.value;
    case AggFunc::Count:
      return static_cast<double>(a.count);
    case AggFunc::Avg:
      return a.value / static_cast<double>(a.count);
    case AggFunc::Median: {
      std::vector<double> v = a.raw;
      std::sort(v.begin(), v.end());
      std::size_t n = v.size();
      if (n == 0) throw Error("MEDIAN of an empty bag");
      return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    }
  }
  return 0.0;
}

}  // namespace wsopt
