/**
 * Copyright (c) MonoNet Contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mononet {

/// Error categories. The numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Dimension = 2,
  Parse = 3,
  Io = 4,
  Numerical = 5,
  UnsupportedVersion = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorCode::InvalidArgument, w) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorCode::Dimension, w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorCode::Parse, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorCode::Numerical, w) {}
};
/// Non-finite loss during training; carries the 1-based epoch index.
struct TrainingDiverged : NumericalError {
  TrainingDiverged(std::size_t epoch, const std::string& w) : NumericalError(w), epoch(epoch) {}
  std::size_t epoch;
};
struct UnsupportedVersion : Error {
  explicit UnsupportedVersion(const std::string& w)
      : Error(ErrorCode::UnsupportedVersion, w) {}
};

}  // namespace mononet
