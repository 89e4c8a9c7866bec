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

#include <map>
#include <string>
#include <vector>

#include "core/pipeline.hpp"

namespace fax {

/// Flat little-endian record file: u32 item count, then per item one label
/// byte followed by x0 and x1 as f32 payloads (C*H*W each). The image shape
/// lives in the manifest.
std::vector<std::uint8_t> encode_pairs(const PairedDataset &data);
PairedDataset decode_pairs(std::span<const std::uint8_t> bytes, Shape3 shape, const std::string &name = "pairs");

/// Ordered `key=value` manifest.
struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string &key, const std::string &value);
  /// Throws DataError if the key is missing.
  const std::string &get(const std::string &key) const;
  bool has(const std::string &key) const;
  std::string text() const;
  static Manifest parse(const std::string &text, const std::string &origin = "manifest");
};

struct Container {
  PairedDataset train;
  PairedDataset test;
  Manifest manifest;
};

inline constexpr const char *kContainerTrainFile = "train.bin";
inline constexpr const char *kContainerTestFile = "test.bin";
inline constexpr const char *kContainerManifestFile = "manifest.txt";

/// Writes train.bin, test.bin and manifest.txt into `dir` (created if
/// needed). Adds `count`, `test_count`, shape keys and `digest` (FNV-1a of
/// both record files) to `manifest`; returns the completed manifest.
Manifest write_container(const std::string &dir, const PairedDataset &train, const PairedDataset &test,
                         Manifest manifest);
Container read_container(const std::string &dir);

}  // namespace fax
