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

// Objects and morphisms of the effective topos over finite carriers: validated
// equality predicates, functional relations, the constant-object functor ∇,
// global points Γ, powerobjects over declared families, and the object B.
//
// Product carriers index as i * |Y| + j. Conjunctions of several clauses nest
// to the right, so that the first component of every pair is a leaf realizer.

#ifndef EFFT_TOPOS_HPP
#define EFFT_TOPOS_HPP

#include "efft/heyting.hpp"

#include <memory>
#include <string>
#include <vector>

namespace efft::topos {

using heyting::Carrier;
using heyting::NSPredicate;
using heyting::RealizerSet;
using heyting::SearchConfig;
using heyting::Verdict;
using substrate::Code;
using substrate::StepBudget;

/// A realizer for a named ⊨-statement.
struct Certificate {
  enum class Status {
    kVerified,     // checked against every antecedent member
    kSampled,      // checked against a sample of an infinite antecedent
    kConstructed,  // built from the proof; the check needs pairs too large
                   // to materialize
  };

  std::string claim;
  Code realizer;
  std::string tactic;
  Status status = Status::kVerified;
  StepBudget budget{};

  std::string to_string() const;
};

/// A failed axiom or morphism condition.
class ValidationError : public ModelError {
 public:
  enum class Reason { kRefuted, kUnknown };
  ValidationError(Reason reason, std::string condition, std::string witness);

  Reason reason() const { return reason_; }
  bool refuted() const { return reason_ == Reason::kRefuted; }
  const std::string& condition() const { return condition_; }
  const std::string& witness() const { return witness_; }

 private:
  Reason reason_;
  std::string condition_;
  std::string witness_;
};

class EffObject;

/// Family data kept by powerobjects, for the membership predicate.
struct PowerData {
  std::shared_ptr<const EffObject> base;
  std::vector<NSPredicate> family;
  bool fast = false;
};

class EffObject {
 public:
  const std::string& name() const { return name_; }
  const Carrier& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }
  /// [x = y] over carrier × carrier.
  const NSPredicate& eq() const { return eq_; }
  const RealizerSet& eq(std::size_t i, std::size_t j) const {
    return eq_[i * carrier_.size() + j];
  }
  const RealizerSet& ex(std::size_t i) const { return eq(i, i); }
  /// Ex over the carrier.
  NSPredicate existence() const;
  /// Diagonal all of N, off-diagonal empty.
  bool is_nabla() const { return nabla_; }
  const Certificate& symmetry() const { return symmetry_; }
  const Certificate& transitivity() const { return transitivity_; }
  const PowerData* power() const { return power_.get(); }

  std::string to_string() const;
  /// The same object under another name.
  EffObject renamed(std::string name) const {
    EffObject copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

 private:
  friend struct ObjectBuilder;
  EffObject() = default;

  std::string name_;
  Carrier carrier_;
  NSPredicate eq_;
  bool nabla_ = false;
  Certificate symmetry_;
  Certificate transitivity_;
  std::shared_ptr<const PowerData> power_;
};

/// A realizer of a ≤ b by search, as a certificate for `claim`. Throws
/// ValidationError when refuted or undecided.
Certificate certify(const std::string& claim, const NSPredicate& a,
                    const NSPredicate& b, const SearchConfig& cfg = {},
                    const std::vector<std::pair<std::string, Code>>& hints = {});

/// Checks symmetry and transitivity. Hints are tried before the search.
/// Throws ValidationError naming the failing axiom.
EffObject validate_object(
    const std::string& name, const Carrier& carrier, const NSPredicate& eq,
    const SearchConfig& cfg = {},
    const std::vector<std::pair<std::string, Code>>& hints = {});

/// [x = y] is N on the diagonal and empty elsewhere.
EffObject nabla(const std::string& name, const std::vector<std::string>& labels,
                const SearchConfig& cfg = {});

/// [0 = 0] = {0}, [1 = 1] = {1}, empty otherwise.
EffObject b_object(const SearchConfig& cfg = {});

/// The product object; labels join component labels with ','. A product of
/// ∇ objects is built as the ∇ object on the product set; otherwise
/// [x = y] = [x1 = y1] ∧ ([x2 = y2] ∧ ...).
EffObject product_object(const std::string& name,
                         const std::vector<EffObject>& components,
                         const SearchConfig& cfg = {});

/// Certificates for a relation R over |X| x |Y|.
struct RelationCertificates {
  Certificate strict;
  Certificate extensional;
};

/// Strictness and extensionality only.
RelationCertificates validate_relation(
    const EffObject& x, const EffObject& y, const NSPredicate& r,
    const SearchConfig& cfg = {},
    const std::vector<std::pair<std::string, Code>>& extensional_hints = {});

/// A(x) ≤ Ex(x) and A(x) ∧ [x = x'] ≤ A(x'): A is a strict extensional
/// predicate on X.
RelationCertificates validate_predicate(const EffObject& x,
                                        const NSPredicate& a,
                                        const SearchConfig& cfg = {});

class FunctionalRelation {
 public:
  const EffObject& source() const { return *source_; }
  const EffObject& target() const { return *target_; }
  const NSPredicate& relation() const { return f_; }
  const RealizerSet& at(std::size_t i, std::size_t j) const {
    return f_[i * target_->size() + j];
  }
  const Certificate& strict() const { return strict_; }
  const Certificate& extensional() const { return extensional_; }
  const Certificate& single_valued() const { return single_valued_; }
  const Certificate& total() const { return total_; }

 private:
  friend FunctionalRelation validate_morphism(const EffObject&,
                                              const EffObject&,
                                              const NSPredicate&,
                                              const SearchConfig&);
  FunctionalRelation() = default;

  std::shared_ptr<const EffObject> source_;
  std::shared_ptr<const EffObject> target_;
  NSPredicate f_;
  Certificate strict_;
  Certificate extensional_;
  Certificate single_valued_;
  Certificate total_;
};

/// Checks strict, extensional, single-valued and total, in that order.
FunctionalRelation validate_morphism(const EffObject& x, const EffObject& y,
                                     const NSPredicate& f,
                                     const SearchConfig& cfg = {});

/// I(x, y) = [x = y].
FunctionalRelation identity(const EffObject& x, const SearchConfig& cfg = {});

/// (∇f)(x, y) = [f(x) = y]; f given by target indices.
FunctionalRelation nabla_map(const EffObject& source, const EffObject& target,
                             const std::vector<std::size_t>& f,
                             const SearchConfig& cfg = {});

/// (G ∘ F)(x, z) = ⋃_y F(x, y) ∧ G(y, z), revalidated.
FunctionalRelation compose(const FunctionalRelation& f,
                           const FunctionalRelation& g,
                           const SearchConfig& cfg = {});

/// The composite predicate without validation.
NSPredicate compose_relation(const FunctionalRelation& f,
                             const FunctionalRelation& g);

/// F ≤ G and G ≤ F as predicates over |X| x |Y|.
std::pair<Verdict, Verdict> morphism_equal(const NSPredicate& f,
                                           const NSPredicate& g,
                                           const SearchConfig& cfg = {});

struct GlobalPoint {
  std::size_t representative;
  std::vector<std::size_t> members;
};

/// Labels with Ex(x) inhabited, quotiented by inhabited [x = y]. Throws
/// ValidationError (unknown) if inhabitation cannot be decided.
std::vector<GlobalPoint> gamma(const EffObject& x,
                               const SearchConfig& cfg = {});

enum class PowerForm { kAuto, kGeneral, kFast };

/// [A = B] for two predicates over |X|. The fast form (∇ objects) keeps only
/// the two implications; the general form adds strictness and extensionality
/// of A.
NSPredicate power_equality(const EffObject& x, const Carrier& names,
                           const std::vector<NSPredicate>& family,
                           PowerForm form);

/// The powerobject restricted to a declared family. kAuto takes the fast form
/// exactly when X is a ∇ object.
EffObject power_object(const EffObject& x, const std::vector<std::string>& names,
                       const std::vector<NSPredicate>& family,
                       const SearchConfig& cfg = {},
                       PowerForm form = PowerForm::kAuto);

/// E(u, A) = Ex(u) ∧ (Ex(A) ∧ A(u)) over |X| x |P|.
NSPredicate membership(const EffObject& power);

/// Realizers of general ≤ fast and fast ≤ general for the two powerobject
/// equality forms over a ∇ object.
std::pair<Code, Code> power_form_realizers();

/// Realizer of extensionality of the membership predicate over a fast-form
/// powerobject.
Code membership_extensional_realizer();

/// x -> code of λm. φ_{outer_of(x)}(φ_{inner_of(x)}(m)): composition of codes
/// computed at run time.
substrate::Combinator compose_codes(const substrate::Combinator& outer_of,
                                    const substrate::Combinator& inner_of);

/// Successive projections read left to right: "FS" is x -> Snd(Fst(x)).
substrate::Combinator projection(const std::string& path);

}  // namespace efft::topos

#endif  // EFFT_TOPOS_HPP
