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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "core/rng.hpp"

using fax::KeyedRng;
using fax::RngDomain;

TEST_CASE("keyed streams are reproducible and independent per key") {
  KeyedRng a(7, RngDomain::kShuffle, 3, 11), b(7, RngDomain::kShuffle, 3, 11);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed : {0, 1}) {
    for (auto dom : {RngDomain::kShuffle, RngDomain::kMixDraw, RngDomain::kColor}) {
      for (std::uint64_t epoch : {0, 1}) {
        for (std::uint64_t idx : {0, 1, 2}) firsts.insert(KeyedRng(seed, dom, epoch, idx)());
      }
    }
  }
  CHECK(firsts.size() == 2 * 3 * 2 * 3);
}

TEST_CASE("uniform draws stay in range with the expected moments") {
  KeyedRng rng(1, RngDomain::kOpacity);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double o = rng.uniform_open();
    REQUIRE(o > 0.0);
    REQUIRE(o < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12).epsilon(0.01));
}

TEST_CASE("normal draws have zero mean and unit variance") {
  KeyedRng rng(2, RngDomain::kColor);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.015));
}

TEST_CASE("below is unbiased over a small range") {
  KeyedRng rng(3, RngDomain::kPairing);
  std::array<int, 7> counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  CHECK(chi2 < 22.5);  // 6 dof, p ~ 0.001
  CHECK(rng.below(1) == 0);
}

TEST_CASE("shuffled_indices returns a permutation") {
  for (std::size_t n : {0u, 1u, 2u, 17u, 1000u}) {
    KeyedRng rng(5, RngDomain::kShuffle, 1);
    auto p = fax::shuffled_indices(n, rng);
    REQUIRE(p.size() == n);
    std::vector<std::size_t> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(n);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(sorted == iota);
  }
  KeyedRng r1(5, RngDomain::kShuffle, 1), r2(5, RngDomain::kShuffle, 2);
  CHECK(fax::shuffled_indices(100, r1) != fax::shuffled_indices(100, r2));
}
