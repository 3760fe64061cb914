/* Copyright 2026 The wozloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WOZLOC_ERRORS_HPP_
#define WOZLOC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wozloc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state string could not be rendered (e.g. a value containing '"').
class SerializationError : public Error {
 public:
  using Error::Error;
};

// Token stream does not match the state grammar. Carries the byte offset of
// the offending token in the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line/column are 1-based; 0 when unknown.
class IngestError : public Error {
 public:
  IngestError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  explicit IngestError(const std::string& message)
      : Error(message), line_(0), column_(0) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A field-mapping path did not resolve in the foreign document.
class MappingError : public Error {
 public:
  using Error::Error;
};

// Cross-attention carries no mass for the requested source span.
class AlignmentFailure : public Error {
 public:
  using Error::Error;
};

// Translator client transport or protocol failure.
class PipelineError : public Error {
 public:
  using Error::Error;
};

// A substitution plan could not cover a source value.
class PlanError : public Error {
 public:
  using Error::Error;
};

// Parser backend transport or protocol failure.
class BackendError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace wozloc

#endif  // WOZLOC_ERRORS_HPP_
