// Copyright 2026 The tc3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tc3d
{

/// Invalid configuration value or document. `location()` is a JSON pointer
/// into the config document when the error came from one.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string & message, std::string location = {})
  : std::runtime_error(location.empty() ? message : location + ": " + message),
    location_(std::move(location))
  {
  }

  const std::string & location() const noexcept { return location_; }

private:
  std::string location_;
};

/// Malformed or inconsistent input data (logs, verdict files).
class DataError : public std::runtime_error
{
public:
  explicit DataError(const std::string & message, std::optional<std::size_t> line = std::nullopt)
  : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message : message),
    line_(line)
  {
  }

  std::optional<std::size_t> line() const noexcept { return line_; }

private:
  std::optional<std::size_t> line_;
};

/// Frames handed to a TrackStore out of order.
class OrderingError : public DataError
{
public:
  using DataError::DataError;
};

/// A track without enough history to extrapolate.
class NotPredictableError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

}  // namespace tc3d
