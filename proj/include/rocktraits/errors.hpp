// Copyright 2026 The rocktraits Authors.
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

#include <stdexcept>
#include <string>

namespace rocktraits {

// Base of all library errors. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-supplied parameters or config files (exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Malformed or inconsistent input data (exit code 3).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

// Raster file without usable georeference tags.
class GeoreferenceMissing : public DataError {
 public:
  explicit GeoreferenceMissing(const std::string& what) : DataError(what) {}
};

// Shape too small / too degenerate for a stable ellipse fit.
class DegenerateShape : public DataError {
 public:
  explicit DegenerateShape(const std::string& what) : DataError(what) {}
};

}  // namespace rocktraits
