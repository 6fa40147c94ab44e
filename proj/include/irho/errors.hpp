// Copyright 2026 The irho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace irho {

// Argument outside the mathematical domain of an operation (bad angles,
// non-normalized weights, unphysical Bloch vectors, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Operation invoked in the wrong lifecycle state (e.g. collapsing a pair twice).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// Malformed protocol data such as a block whose labels disagree on the axis.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedInput : public std::invalid_argument {
 public:
  explicit UnsupportedInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace irho
