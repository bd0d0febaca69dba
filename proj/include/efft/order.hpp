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

// Order theory on both sides of ∇: finite posets and lattices in Set, their
// fixed-point algorithms, and internal posets in Eff with bounds, suprema and
// chains certified by realizers.

#ifndef EFFT_ORDER_HPP
#define EFFT_ORDER_HPP

#include "efft/discrete.hpp"
#include "efft/logic.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace efft::order {

using heyting::NSPredicate;
using heyting::SearchConfig;
using heyting::Verdict;
using substrate::Code;
using topos::Certificate;
using topos::EffObject;

/// An endomap as target indices.
using Endomap = std::vector<std::size_t>;

class NotProgressive : public ModelError {
 public:
  explicit NotProgressive(std::size_t witness);
  std::size_t witness() const { return witness_; }

 private:
  std::size_t witness_;
};

class NotMonotone : public ModelError {
 public:
  NotMonotone(std::size_t x, std::size_t y);
  std::pair<std::size_t, std::size_t> witness() const { return {x_, y_}; }

 private:
  std::size_t x_, y_;
};

// ---------------------------------------------------------------------------
// Set side

/// A finite partial order, leq[i][j] meaning i ≤ j.
class FinitePoset {
 public:
  /// Throws ModelError naming the failing axiom.
  FinitePoset(std::vector<std::string> labels,
              std::vector<std::vector<bool>> leq);
  /// 0 < 1 < ... < n-1.
  static FinitePoset chain(std::size_t n);
  /// Reflexive-transitive closure of the given strict relations.
  static FinitePoset from_relations(
      std::vector<std::string> labels,
      const std::vector<std::pair<std::size_t, std::size_t>>& less);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t index_of(const std::string& label) const;
  bool leq(std::size_t i, std::size_t j) const { return leq_[i][j]; }

  std::optional<std::size_t> least() const;
  std::optional<std::size_t> greatest() const;
  /// Least upper bound; sup of the empty set is the least element.
  std::optional<std::size_t> sup(const std::vector<std::size_t>& subset) const;
  std::optional<std::size_t> inf(const std::vector<std::size_t>& subset) const;
  bool is_chain(const std::vector<std::size_t>& subset) const;
  bool total() const;

  bool is_lattice() const;
  /// Throws ModelError unless the pair has a meet (join).
  std::size_t meet(std::size_t i, std::size_t j) const;
  std::size_t join(std::size_t i, std::size_t j) const;
  bool is_distributive() const;

  bool monotone(const Endomap& f) const;
  bool progressive(const Endomap& f) const;

  std::string to_string() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
};

/// One representative per isomorphism class, labels "0".."n-1" in a linear
/// extension. Counts 1, 1, 2, 5, 16, 63 for n = 0..5.
std::vector<FinitePoset> posets_up_to_iso(std::size_t n);

/// Iterates start, f(start), ... to a fixed point. Throws NotProgressive.
std::size_t bw_iterate(const FinitePoset& p, const Endomap& f,
                       std::size_t start);

/// Least fixed point by ascent from the least element. Throws NotMonotone,
/// or ModelError if p is not a lattice with a least element.
std::size_t tarski_lfp(const FinitePoset& p, const Endomap& f);

struct DacarRun {
  /// The inhabited chains visited, each sorted; the last one is fixed.
  std::vector<std::vector<std::size_t>> chains;
  std::size_t fixed_point;
};

/// F(A) = A ∪ {f(sup A)} on inhabited chains, from {start}, until F(B) = B;
/// returns sup B. Throws NotProgressive.
DacarRun dacar_reduce(const FinitePoset& p, const Endomap& f,
                      std::size_t start);

// ---------------------------------------------------------------------------
// Eff side

struct InternalPoset {
  EffObject object;
  /// Over |L| x |L|.
  NSPredicate leq;
  Certificate reflexivity;
  Certificate transitivity;
  Certificate antisymmetry;
  /// The Set-side poset for ∇ posets.
  std::optional<FinitePoset> base;

  bool is_nabla() const { return base.has_value(); }
};

/// Validates strictness, extensionality and the three poset axioms.
/// Throws topos::ValidationError.
InternalPoset internal_poset(const EffObject& object, const NSPredicate& leq,
                             const SearchConfig& cfg = {});

/// ∇P ordered by ∇≤: leq(x, y) is N when x ≤ y and empty otherwise.
InternalPoset nabla_poset(const FinitePoset& p, const SearchConfig& cfg = {});

/// ¬¬A pointwise: (A ⇒ ⊥) ⇒ ⊥.
NSPredicate notnot(const NSPredicate& a);

/// ⊨ ∀x, y. ¬¬(x ≤ y) ⇒ x ≤ y.
Verdict notnot_stable(const InternalPoset& l, const SearchConfig& cfg = {});

struct ChainCertificate {
  NSPredicate chain;
  /// Of x ∈ C ∧ y ∈ C ⇒ x ≤ y ∨ y ≤ x, uniformly in x, y.
  Verdict verdict;

  bool valid() const { return verdict.valid(); }
};

ChainCertificate chain_certify(const InternalPoset& l, const NSPredicate& c,
                               const SearchConfig& cfg = {});

/// The two sides of the chain condition over |L| x |L|, for re-checking.
std::pair<NSPredicate, NSPredicate> chain_statement(const InternalPoset& l,
                                                    const NSPredicate& c,
                                                    const SearchConfig& cfg = {});

struct BoundSup {
  Verdict bound;  // ∀y. y ∈ A ⇒ y ≤ x
  Verdict sup;    // bound(x, A) ∧ ∀y. bound(y, A) ⇒ y ≤ x
};

BoundSup bound_and_sup(const InternalPoset& l, std::size_t x,
                       const NSPredicate& a, const SearchConfig& cfg = {});

/// Realizers of "x is the supremum of A".
heyting::RealizerSet sup_set(const InternalPoset& l, std::size_t x,
                             const NSPredicate& a, const SearchConfig& cfg = {});

/// Turns a realizer of "x is the supremum of ¬¬A" into one of "x is the
/// supremum of A" by the combinators of the upper-bound equivalence; no
/// search. Both components are re-verified; a failing step is named in the
/// verdict's tactic and reported as Unknown. When the resulting pair exceeds
/// the pairing limit, the certificate is the transfer code and the tactic
/// reads "transfer (constructed)".
Verdict sup_transfer(const InternalPoset& l, const Code& stability,
                     const NSPredicate& a, std::size_t x,
                     const Code& sup_of_cl, const SearchConfig& cfg = {});

/// The combinator used by sup_transfer, with the stability realizer fixed.
substrate::Combinator sup_transfer_combinator(const Code& stability);

/// One run of the chain-discreteness proof for f : ∇2 → L with f(0) = u,
/// f(1) = v and r realizing ∀p. f(p) ∈ C.
struct Constancy {
  std::size_t u, v;
  Nat r;
  int side;       // the uniform disjunct: 0 for f(p) ≤ f(q), 1 for the other
  Nat body;       // realizer of the chosen side for all p, q
  Nat equality;   // realizer of [u = v] from antisymmetry
};

/// Throws PreconditionViolated if the certificate is not valid or r is not
/// in C(u) ∩ C(v); ModelError if a step of the proof fails to verify.
Constancy chain_constancy(const InternalPoset& l, const ChainCertificate& c,
                          std::size_t u, std::size_t v, const Nat& r,
                          const SearchConfig& cfg = {});

struct ChainDiscreteness {
  bool succeeded = false;
  std::vector<Constancy> runs;
  discrete::DiscretenessWitness d;
};

/// Runs the proof on every f : ∇2 → L with a shared realizer in C, then
/// certifies D(C). Requires explicit realizer sets.
ChainDiscreteness chain_discrete(const InternalPoset& l,
                                 const ChainCertificate& c,
                                 const SearchConfig& cfg = {});

struct NablaSup {
  std::size_t label;
  std::vector<std::size_t> support;
  Verdict certificate;
  std::optional<Code> stability;  // of ¬¬(x ≤ y) ⇒ x ≤ y
  std::optional<Code> sup_of_cl;  // of "label is the supremum of ¬¬C"
};

/// sup(C) = P's supremum of the support of C, certified through ¬¬C.
/// Requires a ∇ poset and a valid chain certificate.
NablaSup nabla_chain_sup(const InternalPoset& l, const ChainCertificate& c,
                         const SearchConfig& cfg = {});

// ---------------------------------------------------------------------------
// Negative fragment

class NotNegativeFragment : public ModelError {
 public:
  using ModelError::ModelError;
};

class ClassicallyFalse : public ModelError {
 public:
  explicit ClassicallyFalse(std::string witness);
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

/// A finite first-order structure in Set.
struct SetModel {
  struct Relation {
    std::vector<std::string> sets;
    std::set<std::vector<std::size_t>> holds;
  };
  struct Function {
    std::vector<std::string> domain;
    std::string codomain;
    std::map<std::vector<std::size_t>, std::size_t> table;
  };

  std::map<std::string, std::vector<std::string>> sets;
  std::map<std::string, Relation> relations;
  std::map<std::string, Function> functions;

  /// Classical truth of a closed formula; `witness` receives a falsifying
  /// assignment of the outermost failing universal, if any.
  bool holds(const logic::Formula& phi, std::string* witness = nullptr) const;

  /// The image under ∇: ∇ sets, ∇-valued relations, ∇ maps (out of ∇
  /// products for several arguments).
  logic::Model nabla(const SearchConfig& cfg = {}) const;
};

/// Only ∧, ⇒, ∀, ¬ (as ⇒ ⊥), ⊤, ⊥ and atoms.
bool is_negative(const logic::Formula& phi);

struct NegativeCertificate {
  Nat realizer;
  Verdict verdict;  // the realizer re-verified against the interpretation
};

/// A uniform realizer of the ∇-interpretation of a classically valid negative
/// formula, built by structural recursion.
NegativeCertificate negative_transfer(const logic::FormulaPtr& phi,
                                      const SetModel& model,
                                      const SearchConfig& cfg = {});

}  // namespace efft::order

#endif  // EFFT_ORDER_HPP
