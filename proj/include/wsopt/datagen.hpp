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
#include <vector>

#include "wsopt/engine.hpp"
#include "wsopt/window.hpp"

namespace wsopt {

/// SplitMix64 (Steele, Lea and Flood). Fixed output sequence per seed on
/// every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1) with 53 random bits.
  double unit();

 private:
  std::uint64_t state_;
};

struct GenParams {
  std::vector<Tick> seed_slides{5, 10, 20};
  std::vector<Tick> seed_ranges{2, 5, 10};
  std::uint64_t k_s = 50;
  std::uint64_t k_r = 50;
  std::size_t n = 5;
  bool tumbling = true;
  std::uint64_t seed = 1;
  /// Redraws allowed per window before giving up on finding a new one.
  std::size_t max_retries = 1000;

  /// Throws InvalidWindow on an empty seed list, n = 0 or a multiplier < 2.
  void check() const;
};

/// Tumbling: r0 from the seed ranges, r uniform in {2 r0, ..., k_r r0}, s = r.
/// Hopping: s0 from the seed slides, s uniform in {2 s0, ..., k_s s0}, r = 2 s.
/// Duplicates are redrawn; throws Error once max_retries is exhausted.
WindowSet random_gen(const GenParams& p);

/// One seed drawn from the list, then 2 r0, 3 r0, ... (tumbling) or
/// s = 2 s0, 3 s0, ... with r = 2 s (hopping). Runs past the multiplier when
/// n exceeds k - 1.
WindowSet sequential_gen(const GenParams& p);

/// Values are uniform in [0, 100) and rounded down to a multiple of 1/1024,
/// so sums stay exact in a double whatever the summation order.
double quantized_value(SplitMix64& rng);

/// Exactly eta events per tick for ts in [0, horizon), keys "k0".."k{keys-1}"
/// assigned round-robin. Throws InvalidWindow if eta < 1 or keys < 1.
std::vector<Event> constant_rate_stream(std::int64_t eta, Tick horizon, std::size_t keys,
                                        std::uint64_t seed);
EventBatch constant_rate_batch(std::int64_t eta, Tick horizon, std::size_t keys,
                               std::uint64_t seed);

/// `count` events at uniform random ticks in [0, horizon), sorted, with
/// uniformly chosen keys.
EventBatch random_stream(std::size_t count, Tick horizon, std::size_t keys, std::uint64_t seed);

}  // namespace wsopt
