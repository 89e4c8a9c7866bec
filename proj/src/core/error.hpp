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

#include <stdexcept>
#include <string>

namespace fax {

/// Error categories. The numeric values double as CLI exit codes and
/// C API status codes.
enum class ErrorKind : int {
  kInternal = 1,
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
  kShape = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &what) : Error(ErrorKind::kConfig, what) {}
};

/// I/O and parse failures. `offset` is the byte offset into the offending
/// file when one applies, otherwise -1.
class DataError : public Error {
 public:
  explicit DataError(const std::string &what, long long offset = -1)
      : Error(ErrorKind::kData, offset >= 0 ? what + " (at byte offset " + std::to_string(offset) + ")" : what),
        offset_(offset) {}

  long long offset() const noexcept { return offset_; }

 private:
  long long offset_;
};

/// Non-finite loss. `item` is the index within the batch that produced it;
/// the harness fills in epoch/batch context.
class NumericError : public Error {
 public:
  NumericError(const std::string &what, long long item = -1) : Error(ErrorKind::kNumeric, what), item_(item) {}

  long long item() const noexcept { return item_; }

 private:
  long long item_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &what) : Error(ErrorKind::kShape, what) {}
};

}  // namespace fax
