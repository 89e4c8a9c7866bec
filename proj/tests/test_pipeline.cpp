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
#include <numeric>

#include "core/error.hpp"
#include "core/pipeline.hpp"
#include "fixtures.hpp"

using namespace fax;
using fax::testing::random_pairs;
using fax::testing::unit_pairs;

namespace {

constexpr Strategy kAll[] = {Strategy::kMixingSample, Strategy::kMixingBatch, Strategy::kBlending,
                             Strategy::kOpacityBlend};

std::vector<double> emitted_pixels(const EpochStream &stream) {
  std::vector<double> out;
  for (const Batch &b : stream.materialize()) {
    for (const auto &img : b.images) out.push_back(img.values()[0]);
  }
  return out;
}

}  // namespace

TEST_CASE("blend endpoints and midpoint") {
  auto data = random_pairs(2, {3, 4, 5}, 9);
  CHECK(blend(data[0].x0, data[0].x1, 0.0) == data[0].x0);
  CHECK(blend(data[0].x0, data[0].x1, 1.0) == data[0].x1);
  const ImageTensor a({3, 4, 4}, 0.2), b({3, 4, 4}, 0.8);
  const ImageTensor mid = blend(a, b, 0.5);
  for (double v : mid.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(blend(a, b, 1.5), ConfigError);
  CHECK_THROWS_AS(blend(a, ImageTensor({1, 4, 4}), 0.5), ShapeError);
}

TEST_CASE("mix_draw fractions") {
  for (double w : {0.0, 1.0}) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      KeyedRng rng(4, RngDomain::kMixDraw, 0, i);
      CHECK(mix_draw(rng, w) == (w == 1.0 ? Source::kFull : Source::kFocused));
    }
  }
  for (double w : {0.1, 0.3, 0.7}) {
    std::size_t full = 0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      KeyedRng rng(4, RngDomain::kMixDraw, 0, i);
      full += mix_draw(rng, w) == Source::kFull;
    }
    CHECK(std::abs(full / 100000.0 - w) <= 0.01);
  }
}

TEST_CASE("streams are shuffled permutations that keep labels") {
  const auto data = random_pairs(203, {3, 6, 6}, 1);
  for (Strategy s : kAll) {
    const EpochStream stream(data, StreamConfig{s, 0.4, RateFunction::kIdentity, 3, 16}, 2);
    CHECK(stream.num_batches() == 13);
    std::vector<std::size_t> seen;
    for (const Batch &b : stream.materialize()) {
      CHECK(b.size() <= 16);
      for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(b.labels[i] == data[b.items[i]].label);
        CHECK(b.images[i] == blend(data[b.items[i]].x0, data[b.items[i]].x1, b.weights[i]));
        seen.push_back(b.items[i]);
      }
    }
    CHECK(seen == stream.order());
    std::sort(seen.begin(), seen.end());
    std::vector<std::size_t> iota(data.size());
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(seen == iota);
  }
  const EpochStream e0(data, StreamConfig{Strategy::kBlending, 0.4, RateFunction::kIdentity, 3, 16}, 0);
  const EpochStream e1(data, StreamConfig{Strategy::kBlending, 0.4, RateFunction::kIdentity, 3, 16}, 1);
  CHECK(e0.order() != e1.order());
}

TEST_CASE("endpoint equivalence by content hash") {
  const auto data = random_pairs(1000, {3, 8, 8}, 2);
  for (Strategy s : kAll) {
    const EpochStream focus(data, StreamConfig{s, 0.0, RateFunction::kIdentity, 5, 64}, 4);
    CHECK(stream_digest(focus) == dataset_digest(data, focus.order(), Source::kFocused));
    const EpochStream expand(data, StreamConfig{s, 1.0, RateFunction::kIdentity, 5, 64}, 4);
    if (s != Strategy::kOpacityBlend) {
      CHECK(stream_digest(expand) == dataset_digest(data, expand.order(), Source::kFull));
    } else {
      CHECK(stream_digest(expand) != dataset_digest(data, expand.order(), Source::kFull));
    }
  }
}

TEST_CASE("blending at one half matches a direct recomputation") {
  const auto data = random_pairs(300, {3, 5, 5}, 3);
  const EpochStream stream(data, StreamConfig{Strategy::kBlending, 0.5, RateFunction::kIdentity, 1, 32}, 0);
  for (const Batch &b : stream.materialize()) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto &pair = data[b.items[i]];
      const auto got = b.images[i].values();
      const auto x0 = pair.x0.values(), x1 = pair.x1.values();
      for (std::size_t p = 0; p < got.size(); ++p) CHECK(got[p] == 0.5 * x0[p] + 0.5 * x1[p]);
    }
  }
}

TEST_CASE("per-sample mixing fraction") {
  const auto data = unit_pairs(100000);
  const EpochStream stream(data, StreamConfig{Strategy::kMixingSample, 0.3, RateFunction::kIdentity, 8, 1000}, 1);
  const auto px = emitted_pixels(stream);
  const double frac = std::accumulate(px.begin(), px.end(), 0.0) / px.size();
  CHECK(frac >= 0.29);
  CHECK(frac <= 0.31);
  for (double v : px) REQUIRE((v == 0.0 || v == 1.0));
}

TEST_CASE("batch mixing draws once per batch") {
  const auto data = unit_pairs(64 * 2000);
  const EpochStream stream(data, StreamConfig{Strategy::kMixingBatch, 0.3, RateFunction::kIdentity, 8, 64}, 0);
  std::size_t full = 0;
  for (std::size_t b = 0; b < stream.num_batches(); ++b) {
    const Batch batch = stream.batch(b);
    for (double w : batch.weights) REQUIRE(w == batch.weights.front());
    full += batch.weights.front() == 1.0;
  }
  CHECK(std::abs(full / 2000.0 - 0.3) < 0.04);
}

TEST_CASE("opacity weights are uniform on [0, g(alpha)]") {
  const std::size_t n = 100000;
  const auto data = unit_pairs(n);
  for (double alpha : {1.0, 0.5}) {
    const EpochStream stream(data, StreamConfig{Strategy::kOpacityBlend, alpha, RateFunction::kIdentity, 6, 4096}, 3);
    auto px = emitted_pixels(stream);
    std::sort(px.begin(), px.end());
    double ks = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cdf = px[i] / alpha;
      ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks < 0.01);
    CHECK(px.front() >= 0.0);
    CHECK(px.back() <= alpha);
  }
}

TEST_CASE("stream configuration errors") {
  const auto data = random_pairs(4, {1, 2, 2}, 0);
  CHECK_THROWS_AS(EpochStream(data, StreamConfig{Strategy::kBlending, 1.2, RateFunction::kIdentity, 0, 2}, 0),
                  ConfigError);
  CHECK_THROWS_AS(EpochStream(data, StreamConfig{Strategy::kBlending, 0.2, RateFunction::kIdentity, 0, 0}, 0),
                  ConfigError);
  const PairedDataset empty;
  CHECK_THROWS_AS(EpochStream(empty, StreamConfig{}, 0), ConfigError);
  PairedDataset d;
  CHECK_THROWS_AS(d.push_back(PairedItem{ImageTensor({1, 2, 2}), ImageTensor({1, 2, 3}), 0}), ShapeError);
  CHECK(parse_strategy("opacity_blend") == Strategy::kOpacityBlend);
  CHECK_THROWS_AS(parse_strategy("fade"), ConfigError);
}
