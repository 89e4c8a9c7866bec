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
#include "core/idx.hpp"

#include <zlib.h>

#include <memory>

#include "core/error.hpp"

namespace fax {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset, const std::string &what) {
  if (bytes.size() < offset + 4) {
    throw DataError(what + ": truncated header", static_cast<long long>(bytes.size()));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void expect_magic(std::span<const std::uint8_t> bytes, std::uint32_t magic, const std::string &what) {
  const std::uint32_t found = read_be32(bytes, 0, what);
  if (found != magic) {
    throw DataError(what + ": unexpected magic " + std::to_string(found) + " (expected " + std::to_string(magic) + ")",
                    0);
  }
}

}  // namespace

RawMnist parse_idx(std::span<const std::uint8_t> image_bytes, std::span<const std::uint8_t> label_bytes,
                   const std::string &name) {
  const std::string img_what = name + " images";
  const std::string lbl_what = name + " labels";
  expect_magic(image_bytes, kIdxImageMagic, img_what);
  expect_magic(label_bytes, kIdxLabelMagic, lbl_what);

  const std::size_t n_images = read_be32(image_bytes, 4, img_what);
  RawMnist raw;
  raw.rows = read_be32(image_bytes, 8, img_what);
  raw.cols = read_be32(image_bytes, 12, img_what);
  const std::size_t n_labels = read_be32(label_bytes, 4, lbl_what);
  if (n_images != n_labels) {
    throw DataError(name + ": image count " + std::to_string(n_images) + " does not match label count " +
                        std::to_string(n_labels),
                    4);
  }

  const std::size_t pixel_bytes = n_images * raw.rows * raw.cols;
  if (image_bytes.size() < 16 + pixel_bytes) {
    throw DataError(img_what + ": truncated pixel data, expected " + std::to_string(16 + pixel_bytes) + " bytes",
                    static_cast<long long>(image_bytes.size()));
  }
  if (label_bytes.size() < 8 + n_labels) {
    throw DataError(lbl_what + ": truncated label data, expected " + std::to_string(8 + n_labels) + " bytes",
                    static_cast<long long>(label_bytes.size()));
  }
  raw.pixels.assign(image_bytes.begin() + 16, image_bytes.begin() + 16 + static_cast<std::ptrdiff_t>(pixel_bytes));
  raw.labels.assign(label_bytes.begin() + 8, label_bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n_labels));
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    if (raw.labels[i] > 9) {
      throw DataError(lbl_what + ": label " + std::to_string(raw.labels[i]) + " outside 0-9",
                      static_cast<long long>(8 + i));
    }
  }
  return raw;
}

std::vector<std::uint8_t> read_maybe_gzip(const std::string &path) {
  std::unique_ptr<gzFile_s, decltype(&gzclose)> file(gzopen(path.c_str(), "rb"), &gzclose);
  if (!file) throw DataError("cannot open " + path);
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  while (true) {
    const int got = gzread(file.get(), chunk, sizeof chunk);
    if (got < 0) throw DataError("read error in " + path, static_cast<long long>(out.size()));
    if (got == 0) break;
    out.insert(out.end(), chunk, chunk + got);
  }
  return out;
}

RawMnist load_idx(const std::string &images_path, const std::string &labels_path) {
  const auto images = read_maybe_gzip(images_path);
  const auto labels = read_maybe_gzip(labels_path);
  return parse_idx(images, labels, images_path);
}

}  // namespace fax
