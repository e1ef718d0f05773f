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

#include "wsopt/window.hpp"

#include <algorithm>
#include <charconv>

#include "wsopt/error.hpp"

namespace wsopt {

WindowSpec::WindowSpec(Tick range, Tick slide) : range_(range), slide_(slide) {
  if (slide == 0 || slide > range) {
    throw InvalidWindow("window " + std::to_string(range) + ":" + std::to_string(slide) +
                        " needs 0 < slide <= range");
  }
  if (range % slide != 0) {
    throw InvalidWindow("window " + std::to_string(range) + ":" + std::to_string(slide) +
                        " has a range that is not a multiple of its slide");
  }
}

std::string WindowSpec::to_string() const {
  return std::to_string(range_) + ":" + std::to_string(slide_);
}

WindowSpec WindowSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ParseError("expected range:slide, got '" + text + "'");
  }
  auto parse_tick = [&](std::string_view part) {
    Tick v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw ParseError("expected range:slide, got '" + text + "'");
    }
    return v;
  };
  std::string_view view(text);
  return WindowSpec(parse_tick(view.substr(0, colon)), parse_tick(view.substr(colon + 1)));
}

std::ostream& operator<<(std::ostream& os, const WindowSpec& w) {
  return os << "W<" << w.range() << "," << w.slide() << ">";
}

std::ostream& operator<<(std::ostream& os, const Interval& i) {
  return os << "[" << i.start << "," << i.end << ")";
}

WindowSet::WindowSet(std::initializer_list<WindowSpec> windows) {
  for (const auto& w : windows) add(w);
}

WindowSet::WindowSet(std::vector<WindowSpec> windows) {
  for (const auto& w : windows) add(w);
}

void WindowSet::add(const WindowSpec& w) {
  if (contains(w)) {
    throw InvalidWindow("duplicate window " + w.to_string() + " in window set");
  }
  windows_.push_back(w);
}

bool WindowSet::contains(const WindowSpec& w) const {
  return std::find(windows_.begin(), windows_.end(), w) != windows_.end();
}

bool covers(const WindowSpec& w1, const WindowSpec& w2) {
  if (w1 == w2) return true;
  return w1.range() > w2.range() && w1.slide() % w2.slide() == 0 &&
         (w1.range() - w2.range()) % w2.slide() == 0;
}

bool partitions(const WindowSpec& w1, const WindowSpec& w2) {
  if (w1 == w2) return true;
  return w2.tumbling() && w1.range() > w2.range() && w1.slide() % w2.slide() == 0 &&
         w1.range() % w2.slide() == 0;
}

std::uint64_t covering_multiplier(const WindowSpec& w1, const WindowSpec& w2) {
  if (!covers(w1, w2)) {
    throw NotCovered(w1.to_string() + " is not covered by " + w2.to_string());
  }
  return 1 + (w1.range() - w2.range()) / w2.slide();
}

std::vector<Interval> intervals(const WindowSpec& w, Tick horizon) {
  std::vector<Interval> out;
  if (horizon < w.range()) return out;
  out.reserve((horizon - w.range()) / w.slide() + 1);
  for (Tick start = 0; start + w.range() <= horizon; start += w.slide()) {
    out.push_back({start, start + w.range()});
  }
  return out;
}

std::vector<Interval> covering_set(const Interval& i, const WindowSpec& owner, const WindowSpec& w2) {
  if (!covers(owner, w2)) {
    throw NotCovered(owner.to_string() + " is not covered by " + w2.to_string());
  }
  if (i.length() != owner.range() || i.start % owner.slide() != 0) {
    throw InvalidWindow("interval is not an instance of " + owner.to_string());
  }
  std::vector<Interval> out;
  // The first covering interval starts at i.start because s2 divides s1.
  for (Tick u = i.start; u + w2.range() <= i.end; u += w2.slide()) {
    out.push_back({u, u + w2.range()});
  }
  return out;
}

}  // namespace wsopt
