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

#include "wsopt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "wsopt/error.hpp"

namespace wsopt {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw Error("SplitMix64::below(0)");
  // Reject the tail that would bias the modulo.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double SplitMix64::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void GenParams::check() const {
  if (n == 0) throw InvalidWindow("window-set size must be at least 1");
  if (tumbling) {
    if (seed_ranges.empty()) throw InvalidWindow("no seed ranges");
    if (k_r < 2) throw InvalidWindow("range multiplier must be at least 2");
  } else {
    if (seed_slides.empty()) throw InvalidWindow("no seed slides");
    if (k_s < 2) throw InvalidWindow("slide multiplier must be at least 2");
  }
}

WindowSet random_gen(const GenParams& p) {
  p.check();
  SplitMix64 rng(p.seed);
  WindowSet out;
  while (out.size() < p.n) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt <= p.max_retries && !placed; ++attempt) {
      std::optional<WindowSpec> w;
      if (p.tumbling) {
        Tick r0 = p.seed_ranges[rng.below(p.seed_ranges.size())];
        Tick r = (2 + rng.below(p.k_r - 1)) * r0;
        w = WindowSpec(r, r);
      } else {
        Tick s0 = p.seed_slides[rng.below(p.seed_slides.size())];
        Tick s = (2 + rng.below(p.k_s - 1)) * s0;
        w = WindowSpec(2 * s, s);
      }
      if (!out.contains(*w)) {
        out.add(*w);
        placed = true;
      }
    }
    if (!placed) {
      throw Error("could not draw " + std::to_string(p.n) + " distinct windows in " +
                  std::to_string(p.max_retries) + " retries");
    }
  }
  return out;
}

WindowSet sequential_gen(const GenParams& p) {
  p.check();
  SplitMix64 rng(p.seed);
  WindowSet out;
  if (p.tumbling) {
    Tick r0 = p.seed_ranges[rng.below(p.seed_ranges.size())];
    for (std::size_t i = 0; i < p.n; ++i) out.add(WindowSpec((i + 2) * r0, (i + 2) * r0));
  } else {
    Tick s0 = p.seed_slides[rng.below(p.seed_slides.size())];
    for (std::size_t i = 0; i < p.n; ++i) out.add(WindowSpec(2 * (i + 2) * s0, (i + 2) * s0));
  }
  return out;
}

double quantized_value(SplitMix64& rng) { return std::floor(rng.unit() * 102400.0) / 1024.0; }

EventBatch constant_rate_batch(std::int64_t eta, Tick horizon, std::size_t keys,
                               std::uint64_t seed) {
  if (eta < 1) throw InvalidWindow("event rate must be at least 1");
  if (keys < 1) throw InvalidWindow("need at least one key");
  SplitMix64 rng(seed);
  EventBatch b;
  for (std::size_t k = 0; k < keys; ++k) b.key_names.push_back("k" + std::to_string(k));
  const std::size_t total = static_cast<std::size_t>(horizon) * static_cast<std::size_t>(eta);
  b.ts.reserve(total);
  b.key.reserve(total);
  b.value.reserve(total);
  std::size_t next_key = 0;
  for (Tick t = 0; t < horizon; ++t) {
    for (std::int64_t j = 0; j < eta; ++j) {
      b.push(t, static_cast<std::uint32_t>(next_key), quantized_value(rng));
      next_key = (next_key + 1) % keys;
    }
  }
  return b;
}

std::vector<Event> constant_rate_stream(std::int64_t eta, Tick horizon, std::size_t keys,
                                        std::uint64_t seed) {
  return to_events(constant_rate_batch(eta, horizon, keys, seed));
}

EventBatch random_stream(std::size_t count, Tick horizon, std::size_t keys, std::uint64_t seed) {
  if (keys < 1) throw InvalidWindow("need at least one key");
  if (horizon == 0 && count > 0) throw InvalidWindow("events need a positive horizon");
  SplitMix64 rng(seed);
  std::vector<Tick> ts(count);
  for (auto& t : ts) t = rng.below(horizon);
  std::sort(ts.begin(), ts.end());
  EventBatch b;
  for (std::size_t k = 0; k < keys; ++k) b.key_names.push_back("k" + std::to_string(k));
  for (Tick t : ts) {
    b.push(t, static_cast<std::uint32_t>(rng.below(keys)), quantized_value(rng));
  }
  return b;
}

}  // namespace wsopt
