// Copyright 2026 The chartdyn Authors.
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

#ifndef CHARTDYN_ERROR_HPP_
#define CHARTDYN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace chartdyn {

enum class ErrorCode {
  kIo,               // unreadable or unwritable file
  kFormat,           // malformed input beyond the tolerated fraction
  kValidation,       // precondition or domain invariant violated
  kNumerical,        // singular design matrix, non-finite intermediate
  kUndefinedResult,  // statistic has no defined value for this input
  kInvariant,        // self-check failed
};

// Stable lowercase name used in machine-readable error records.
std::string_view error_code_name(ErrorCode code);

// Process exit status for an error of this kind: 1 I/O, 2 format or
// validation, 3 invariant failure.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorCode::kFormat, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

class UndefinedResultError : public Error {
 public:
  explicit UndefinedResultError(const std::string& what)
      : Error(ErrorCode::kUndefinedResult, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorCode::kInvariant, what) {}
};

}  // namespace chartdyn

#endif  // CHARTDYN_ERROR_HPP_
