// Copyright 2026 The efft Authors. All rights reserved.
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

#ifndef EFFT_NAT_HPP
#define EFFT_NAT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace efft {

/// Arbitrary-precision natural number. Realizers, codes and pair encodings
/// all live here; nothing in the engine wraps around.
using Nat = boost::multiprecision::cpp_int;

/// Argument outside the domain of a partial host-level operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A host-level arithmetic result too large to materialize.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Ill-formed model data (carrier mismatch, unknown names, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its stated precondition.
class PreconditionViolated : public ModelError {
 public:
  using ModelError::ModelError;
};

inline std::string to_string(const Nat& n) { return n.str(); }

}  // namespace efft

#endif  // EFFT_NAT_HPP
