/**
 * Copyright 2026 The fax Authors
 *
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
#include <limits>
#include <numeric>
#include <vector>

namespace fax {

/// Purpose tags folded into RNG keys so that e.g. the shuffle of epoch 3 and
/// the mixing draw of item 3 never share a stream.
enum class RngDomain : std::uint64_t {
  kShuffle = 1,
  kMixDraw,
  kOpacity,
  kColor,
  kSubset,
  kInit,
  kAugmentGate,
  kAugmentLambda,
  kPairing,
  kCutMixBox,
  kComposite,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator keyed by (seed, domain, epoch, index). The draw
/// sequence depends on the key only, so items can be resolved in any order.
/// Satisfies UniformRandomBitGenerator.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t seed, RngDomain domain, std::uint64_t epoch = 0, std::uint64_t index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on the open interval (0,1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard normal via Box-Muller; each call consumes two words.
  double normal();
  /// Unbiased integer in [0, n). n must be nonzero.
  std::uint64_t below(std::uint64_t n);

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Fisher-Yates permutation of 0..n-1 drawn from `rng`.
std::vector<std::size_t> shuffled_indices(std::size_t n, KeyedRng &rng);

}  // namespace fax
