// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lsk {

enum class ErrorKind {
  kInvalidArgument,  // violated precondition or malformed input
  kParse,            // malformed record in an input file
  kNotFound,         // missing file, template, cache entry
  kIo,               // storage read/write failure
  kAuth,             // non-retryable endpoint rejection (401/403)
  kBadRequest,       // non-retryable endpoint rejection (4xx other than 429)
  kTransport,        // retries exhausted or connection failure
  kDegenerate,       // numerically unusable data (zero embedding, ...)
  kInvariant,        // internal consistency check failed
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lsk
