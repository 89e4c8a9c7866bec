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
#include "core/container.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/format.hpp"

namespace fax {

namespace {

static_assert(std::endian::native == std::endian::little, "container records are little-endian");

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32s(std::vector<std::uint8_t> &out, std::span<const double> values) {
  const std::size_t at = out.size();
  out.resize(at + values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = static_cast<float>(values[i]);
    std::memcpy(out.data() + at + 4 * i, &f, 4);
  }
}

void get_f32s(std::span<const std::uint8_t> bytes, std::size_t at, std::span<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    float f = 0.0f;
    std::memcpy(&f, bytes.data() + at + 4 * i, 4);
    values[i] = f;
  }
}

std::vector<std::uint8_t> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string &path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace

std::vector<std::uint8_t> encode_pairs(const PairedDataset &data) {
  std::vector<std::uint8_t> out;
  const std::size_t n = data.shape().size();
  out.reserve(4 + data.size() * (1 + 8 * n));
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  for (const auto &item : data.items()) {
    out.push_back(item.label);
    put_f32s(out, item.x0.values());
    put_f32s(out, item.x1.values());
  }
  return out;
}

PairedDataset decode_pairs(std::span<const std::uint8_t> bytes, Shape3 shape, const std::string &name) {
  if (bytes.size() < 4) throw DataError(name + ": truncated count header", static_cast<long long>(bytes.size()));
  const std::uint32_t count = std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) |
                              (std::uint32_t{bytes[2]} << 16) | (std::uint32_t{bytes[3]} << 24);
  const std::size_t n = shape.size();
  const std::size_t record = 1 + 8 * n;
  if (bytes.size() != 4 + count * record) {
    throw DataError(name + ": expected " + std::to_string(4 + count * record) + " bytes for " + std::to_string(count) +
                        " items of " + shape.str(),
                    static_cast<long long>(bytes.size()));
  }
  PairedDataset data;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = 4 + i * record;
    PairedItem item{ImageTensor(shape), ImageTensor(shape), bytes[at]};
    get_f32s(bytes, at + 1, item.x0.values());
    get_f32s(bytes, at + 1 + 4 * n, item.x1.values());
    data.push_back(std::move(item));
  }
  return data;
}

void Manifest::set(const std::string &key, const std::string &value) {
  for (auto &[k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

const std::string &Manifest::get(const std::string &key) const {
  for (const auto &[k, v] : entries) {
    if (k == key) return v;
  }
  throw DataError("manifest has no '" + key + "' entry");
}

bool Manifest::has(const std::string &key) const {
  for (const auto &entry : entries) {
    if (entry.first == key) return true;
  }
  return false;
}

std::string Manifest::text() const {
  std::string out;
  for (const auto &[k, v] : entries) out += k + "=" + v + "\n";
  return out;
}

Manifest Manifest::parse(const std::string &text, const std::string &origin) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    m.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

Manifest write_container(const std::string &dir, const PairedDataset &train, const PairedDataset &test,
                         Manifest manifest) {
  if (train.empty() || test.empty()) throw ConfigError("container needs non-empty train and test sets");
  if (train.shape() != test.shape()) throw ShapeError("train and test shapes differ");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir + ": " + ec.message());
  const auto train_bytes = encode_pairs(train);
  const auto test_bytes = encode_pairs(test);
  Fnv1a digest;
  digest.update(train_bytes.data(), train_bytes.size());
  digest.update(test_bytes.data(), test_bytes.size());
  const Shape3 shape = train.shape();
  manifest.set("format", "fax-paired-v1");
  manifest.set("channels", std::to_string(shape.channels));
  manifest.set("height", std::to_string(shape.height));
  manifest.set("width", std::to_string(shape.width));
  manifest.set("count", std::to_string(train.size()));
  manifest.set("test_count", std::to_string(test.size()));
  manifest.set("digest", digest.hex());
  const std::filesystem::path base(dir);
  write_file((base / kContainerTrainFile).string(), train_bytes);
  write_file((base / kContainerTestFile).string(), test_bytes);
  const std::string text = manifest.text();
  write_file((base / kContainerManifestFile).string(),
             std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
  return manifest;
}

Container read_container(const std::string &dir) {
  const std::filesystem::path base(dir);
  const auto manifest_bytes = read_file((base / kContainerManifestFile).string());
  Container c;
  c.manifest = Manifest::parse(std::string(manifest_bytes.begin(), manifest_bytes.end()),
                               (base / kContainerManifestFile).string());
  Shape3 shape;
  try {
    shape = {parse_u64(c.manifest.get("channels"), "channels"), parse_u64(c.manifest.get("height"), "height"),
             parse_u64(c.manifest.get("width"), "width")};
  } catch (const ConfigError &e) {
    throw DataError(std::string("bad manifest shape: ") + e.what());
  }
  c.train = decode_pairs(read_file((base / kContainerTrainFile).string()), shape, (base / kContainerTrainFile).string());
  c.test = decode_pairs(read_file((base / kContainerTestFile).string()), shape, (base / kContainerTestFile).string());
  return c;
}

}  // namespace fax
