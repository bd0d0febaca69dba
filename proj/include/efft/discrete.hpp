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

// Discreteness of predicates over ∇S: the realizer set D(A), the support map
// with its injection witness, and the tag split of uniform disjunction
// realizers.

#ifndef EFFT_DISCRETE_HPP
#define EFFT_DISCRETE_HPP

#include "efft/heyting.hpp"

#include <map>
#include <optional>
#include <vector>

namespace efft::discrete {

using heyting::NSPredicate;
using heyting::RealizerSet;
using heyting::SearchConfig;
using substrate::Code;

/// D(A) = ⋂_{(x,y)} (A(x) ∩ A(y)) => [x =∇S y], with literal set intersection.
struct DiscretenessWitness {
  NSPredicate predicate;
  RealizerSet d;
  /// Decided by the generic Heyting machinery, not by the disjointness test.
  bool nonempty = false;
  /// Const 0, attached and re-verified when D(A) is non-empty.
  std::optional<Code> witness;
};

/// Requires explicit realizer sets; throws ModelError otherwise.
DiscretenessWitness compute_D(const NSPredicate& a, const SearchConfig& cfg = {});

/// The membership oracle alone.
RealizerSet d_set(const NSPredicate& a);

/// Supports pairwise disjoint: x != y implies A(x) ∩ A(y) = ∅.
bool is_discrete(const NSPredicate& a);

class InjectionViolated : public ModelError {
 public:
  using ModelError::ModelError;
};

struct SupportSet {
  /// Labels x with A(x) inhabited, as carrier indices in increasing order.
  std::vector<std::size_t> elements;
  /// realizer -> its unique owner, when requested.
  std::optional<std::map<Nat, std::size_t>> injection;
  /// A table code computing the injection.
  std::optional<Code> injection_code;
};

/// Throws InjectionViolated if the injection is requested for a predicate
/// that is not discrete.
SupportSet cl_support(const NSPredicate& a, bool with_injection = false);

struct Split {
  int tag;   // 0: left disjunct, 1: right
  Nat body;  // realizer of the chosen side, for every p
};

/// Splits r ∈ ⋂_p (φ(p) ∨ ψ(p)) over ∇2 into its tag and body. Throws
/// PreconditionViolated unless r verifiably lies in the intersection.
Split uniformity_split(const Nat& r, const NSPredicate& phi,
                       const NSPredicate& psi, const SearchConfig& cfg = {});

}  // namespace efft::discrete

#endif  // EFFT_DISCRETE_HPP
