// Copyright 2026 The SFID Authors. All Rights Reserved.
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

namespace sfid {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed tensor file: bad magic, version, dtype code, rank.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Declared shape and payload length disagree.
class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Grid dimensions or stack depths disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Value outside its domain (NaN, Inf, probability outside [0,1], bad index).
class ValueError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

enum class ManifestIssue {
  kParse,
  kMissingField,
  kMissingFile,
  kBadVocabulary,
  kPresenceLength,
  kPresenceRange,
  kConfidenceRange,
  kUnknownCategory,
  kDeclaredShape,
  kCrossTimeShape,
  kBadTensor,
};

const char* to_string(ManifestIssue issue);

// Scene-pair manifest rejected; issue() names the violated invariant.
class ManifestError : public Error {
 public:
  ManifestError(ManifestIssue issue, const std::string& what)
      : Error(std::string(to_string(issue)) + ": " + what), issue_(issue) {}

  ManifestIssue issue() const noexcept { return issue_; }

 private:
  ManifestIssue issue_;
};

}  // namespace sfid
