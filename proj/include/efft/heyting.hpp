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

// Non-standard predicates over finite carriers and their Heyting prealgebra:
// realizer sets, the connectives, and three-valued entailment with realizer
// synthesis.

#ifndef EFFT_HEYTING_HPP
#define EFFT_HEYTING_HPP

#include "efft/nat.hpp"
#include "efft/substrate.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace efft::heyting {

using substrate::Code;
using substrate::StepBudget;

enum class Truth { kYes, kNo, kUnknown };

/// A membership answer. `exact` is false when the answer rests on sampling an
/// infinite antecedent (or on members that were themselves only sampled).
struct Membership {
  Truth truth = Truth::kUnknown;
  bool exact = true;

  bool yes() const { return truth == Truth::kYes; }
  bool no() const { return truth == Truth::kNo; }
  static Membership yes_if(bool b) { return {b ? Truth::kYes : Truth::kNo}; }
};

Membership all_of(const std::vector<Membership>& parts);
Membership any_of(const std::vector<Membership>& parts);

struct SearchConfig {
  StepBudget budget{};
  /// Codes 0..code_bound are tried by the enumeration fallback.
  std::uint64_t code_bound = 5000;
  /// Naturals 0..sample_bound-1 stand in for an infinite antecedent.
  std::size_t sample_bound = 32;
  /// How many codes are scanned when listing members of an implication.
  std::size_t member_limit = 64;
  unsigned jobs = 1;
  /// Nesting depth for the structural (currying, pairing, case) tactics.
  unsigned tactic_depth = 2;
  /// Set false to stop after the tactic ladder.
  bool enumerate = true;
  /// Caller-supplied candidate certificates, tried right after the trivial
  /// rungs of the ladder.
  std::vector<std::pair<std::string, Code>> hints;
};

/// Members found by a budgeted listing. `complete` means the list is the whole
/// set; `exact` means every listed item is a certain member.
struct MemberList {
  std::vector<Nat> items;
  bool complete = true;
  bool exact = true;
};

/// A set of realizers: explicit and finite, all of N, or intensional
/// (budgeted membership oracle plus a budgeted member stream).
class RealizerSet {
 public:
  enum class Kind { kExplicit, kAll, kIntensional };

  struct Oracle {
    std::function<Membership(const Nat&, const SearchConfig&)> contains;
    std::function<MemberList(const SearchConfig&)> members;
    /// Certain knowledge about inhabitation; when absent, a listing with an
    /// exact member answers kYes.
    std::function<Truth(const SearchConfig&)> inhabited;
    std::string description = "{...}";
    /// {antecedent, consequent} when this is an implication between explicit
    /// sets; lets intersections of such implications be decided exactly.
    std::vector<RealizerSet> implication;
  };

  RealizerSet();  // empty
  static RealizerSet finite(std::set<Nat> elements);
  static RealizerSet empty() { return RealizerSet(); }
  static RealizerSet all();
  static RealizerSet intensional(Oracle oracle);

  Kind kind() const;
  bool is_explicit() const { return kind() == Kind::kExplicit; }
  bool is_all() const { return kind() == Kind::kAll; }
  /// Elements of an explicit set. Throws ModelError otherwise.
  const std::set<Nat>& elements() const;

  Membership contains(const Nat& n, const SearchConfig& cfg) const;
  /// Listing is memoized per search configuration.
  MemberList members(const SearchConfig& cfg) const;
  /// kYes / kNo only when certain.
  Truth inhabited(const SearchConfig& cfg) const;
  bool known_empty(const SearchConfig& cfg) const {
    return inhabited(cfg) == Truth::kNo;
  }

  std::string to_string() const;
  /// Operands of an implication between explicit sets, if this is one.
  const std::vector<RealizerSet>& implication_operands() const;

 private:
  struct Impl;
  explicit RealizerSet(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

RealizerSet conj(const RealizerSet& a, const RealizerSet& b);
RealizerSet disj(const RealizerSet& a, const RealizerSet& b);
RealizerSet impl(const RealizerSet& a, const RealizerSet& b);
/// Intersection; the empty family gives all of N.
RealizerSet meet_all(const std::vector<RealizerSet>& sets);
/// Union; the empty family gives the empty set.
RealizerSet join_all(const std::vector<RealizerSet>& sets);

/// A finite ordered list of distinct labels.
class Carrier {
 public:
  Carrier() = default;
  explicit Carrier(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;

  /// Labels "x,y"; index i * |b| + j.
  static Carrier product(const Carrier& a, const Carrier& b);
  /// The one-point carrier, used for closed statements.
  static Carrier unit();

  friend bool operator==(const Carrier& a, const Carrier& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
};

enum class Connective { kTop, kBot, kConj, kDisj, kImpl };

class NSPredicate;

/// How a predicate was built. Used only as a hint by synthesis; verification
/// is always extensional.
struct Provenance {
  Connective op;
  std::shared_ptr<const NSPredicate> lhs;
  std::shared_ptr<const NSPredicate> rhs;
};

/// A map from a finite carrier to realizer sets.
class NSPredicate {
 public:
  NSPredicate() = default;
  NSPredicate(Carrier carrier, std::vector<RealizerSet> values);
  /// The same set at every label.
  static NSPredicate constant(Carrier carrier, const RealizerSet& set);

  const Carrier& carrier() const { return carrier_; }
  std::size_t size() const { return values_.size(); }
  const RealizerSet& operator[](std::size_t i) const { return values_.at(i); }
  const RealizerSet& at(const std::string& label) const;
  const std::vector<RealizerSet>& values() const { return values_; }

  bool all_explicit() const;
  const Provenance* provenance() const { return provenance_.get(); }
  NSPredicate with_provenance(Provenance p) const;

  std::string to_string() const;

 private:
  Carrier carrier_;
  std::vector<RealizerSet> values_;
  std::shared_ptr<const Provenance> provenance_;
};

/// Pointwise connective. Top and Bot ignore `b`. Throws ModelError when the
/// carriers differ.
NSPredicate connective(Connective kind, const NSPredicate& a,
                       const NSPredicate& b);
/// out[i] = p[source_index(i)] for every label i of `target`.
NSPredicate reindex(const NSPredicate& p, Carrier target,
                    const std::function<std::size_t(std::size_t)>& source_index);

NSPredicate top(const Carrier& c);
NSPredicate bot(const Carrier& c);
NSPredicate conj(const NSPredicate& a, const NSPredicate& b);
NSPredicate disj(const NSPredicate& a, const NSPredicate& b);
NSPredicate impl(const NSPredicate& a, const NSPredicate& b);

/// Outcome of an entailment or validity question.
struct Verdict {
  enum class Kind { kValid, kRefuted, kUnknown };

  Kind kind = Kind::kUnknown;
  std::optional<Code> certificate;  // Valid
  std::string tactic;               // which rung of the ladder produced it
  bool sampled = false;             // Valid only up to sampling
  std::optional<std::size_t> witness_label;  // Refuted
  std::optional<Nat> witness_realizer;       // Refuted
  StepBudget budget{};

  bool valid() const { return kind == Kind::kValid; }
  bool refuted() const { return kind == Kind::kRefuted; }
  bool unknown() const { return kind == Kind::kUnknown; }

  static Verdict make_valid(Code c, std::string tactic, bool sampled,
                            StepBudget b);
  static Verdict make_refuted(std::optional<std::size_t> label,
                              std::optional<Nat> realizer, StepBudget b);
  static Verdict make_unknown(StepBudget b);

  std::string to_string() const;
};

/// Does `code` translate every A(x)-realizer into B(x), uniformly in x?
Membership verify_entailment(const NSPredicate& a, const NSPredicate& b,
                             const Code& code, const SearchConfig& cfg);

Verdict entails(const NSPredicate& a, const NSPredicate& b,
                const SearchConfig& cfg = {});

/// Is n in the intersection of A(x) over the carrier?
Membership verify_valid(const NSPredicate& a, const Nat& n,
                        const SearchConfig& cfg);

Verdict valid(const NSPredicate& a, const SearchConfig& cfg = {});

std::pair<Verdict, Verdict> equiv(const NSPredicate& a, const NSPredicate& b,
                                  const SearchConfig& cfg = {});

/// Smallest code index in [0, bound] satisfying `accept`, searched by up to
/// `jobs` threads with a deterministic smallest-index merge.
std::optional<Nat> first_accepted(
    std::uint64_t bound, unsigned jobs,
    const std::function<bool(const Nat&)>& accept);

}  // namespace efft::heyting

#endif  // EFFT_HEYTING_HPP
