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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace wsopt {

/// Time in integer ticks. Every window is aligned at tick 0.
using Tick = std::uint64_t;

/// A tumbling or hopping window W<range, slide>.
///
/// Invariants: 0 < slide <= range and range is a multiple of slide, so the
/// number of instances per period is always an integer.
class WindowSpec {
 public:
  /// Throws InvalidWindow when the invariants do not hold.
  WindowSpec(Tick range, Tick slide);

  Tick range() const { return range_; }
  Tick slide() const { return slide_; }
  bool tumbling() const { return range_ == slide_; }
  bool hopping() const { return slide_ < range_; }

  /// "r:s", the same syntax the CLI accepts.
  std::string to_string() const;
  /// Parses "r:s". Throws ParseError on bad syntax, InvalidWindow on a bad pair.
  static WindowSpec parse(const std::string& text);

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
  friend auto operator<=>(const WindowSpec&, const WindowSpec&) = default;

 private:
  Tick range_;
  Tick slide_;
};

std::ostream& operator<<(std::ostream& os, const WindowSpec& w);

/// Half-open interval [start, end).
struct Interval {
  Tick start;
  Tick end;

  Tick length() const { return end - start; }
  bool contains(const Interval& other) const { return start <= other.start && other.end <= end; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

std::ostream& operator<<(std::ostream& os, const Interval& i);

/// An ordered set of windows without duplicate (range, slide) pairs.
class WindowSet {
 public:
  WindowSet() = default;
  /// Throws InvalidWindow on duplicates.
  WindowSet(std::initializer_list<WindowSpec> windows);
  explicit WindowSet(std::vector<WindowSpec> windows);

  /// Throws InvalidWindow if `w` is already present.
  void add(const WindowSpec& w);
  bool contains(const WindowSpec& w) const;

  std::size_t size() const { return windows_.size(); }
  bool empty() const { return windows_.empty(); }
  const WindowSpec& operator[](std::size_t i) const { return windows_[i]; }
  const std::vector<WindowSpec>& windows() const { return windows_; }
  auto begin() const { return windows_.begin(); }
  auto end() const { return windows_.end(); }

 private:
  std::vector<WindowSpec> windows_;
};

/// W1 <= W2: every interval of w1 is the union of the w2 intervals that lie
/// inside it and share its endpoints. A window covers itself.
bool covers(const WindowSpec& w1, const WindowSpec& w2);

/// w1 is covered by w2 and every covering set is disjoint.
bool partitions(const WindowSpec& w1, const WindowSpec& w2);

/// Number of w2 intervals in the covering set of any w1 interval,
/// 1 + (r1 - r2) / s2. Throws NotCovered unless covers(w1, w2).
std::uint64_t covering_multiplier(const WindowSpec& w1, const WindowSpec& w2);

/// All intervals [m*s, m*s + r) with end <= horizon, ascending by start.
std::vector<Interval> intervals(const WindowSpec& w, Tick horizon);

/// The w2 intervals lying inside `i`, where `i` is an interval of `owner`.
/// Throws NotCovered unless covers(owner, w2), and InvalidWindow if `i` is
/// not an interval of `owner`.
std::vector<Interval> covering_set(const Interval& i, const WindowSpec& owner, const WindowSpec& w2);

}  // namespace wsopt
