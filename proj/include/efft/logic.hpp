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

// First-order formulas over a model of validated objects, and their
// realizability interpretation as non-standard predicates.
//
// Grammar (ASCII), loosest binding first:
//
//   formula := disj ('->' formula)?            right associative
//   disj    := conj ('\/' conj)*
//   conj    := unary ('/\' unary)*
//   unary   := '~' unary | quant | primary
//   quant   := ('forall' | 'exists') NAME ':' NAME '.' formula
//   primary := 'top' | 'bot' | '(' formula ')'
//            | term '=' term | term 'in' term | NAME '(' term, ... ')' | NAME
//   term    := NAME | NAME '(' term, ... ')'
//
// Names are runs of letters, digits, '_' and '\''. A name is a bound
// variable, a context variable, or else a label of the expected object.
// NAME(args) in formula position is an atomic predicate, or the graph of a
// morphism when NAME is a morphism: f(x, y) holds when f maps x to y.

#ifndef EFFT_LOGIC_HPP
#define EFFT_LOGIC_HPP

#include "efft/topos.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace efft::logic {

using heyting::NSPredicate;
using heyting::SearchConfig;
using heyting::Verdict;
using topos::EffObject;
using topos::FunctionalRelation;

struct Position {
  std::size_t line = 1;
  std::size_t col = 1;
};

class SyntaxError : public ModelError {
 public:
  SyntaxError(Position pos, const std::string& message);
  Position position() const { return pos_; }

 private:
  Position pos_;
};

class TypeError : public ModelError {
 public:
  TypeError(std::string variable, std::string expected);
  const std::string& variable() const { return variable_; }
  const std::string& expected() const { return expected_; }

 private:
  std::string variable_;
  std::string expected_;
};

class UnknownAtomicPredicate : public ModelError {
 public:
  explicit UnknownAtomicPredicate(const std::string& name);
};

struct Term {
  std::string name;
  std::vector<Term> args;  // non-empty for applications
  Position pos;

  bool is_application() const { return !args.empty(); }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    kTop, kBot, kConj, kDisj, kImpl, kNot,
    kEq, kIn, kAtom, kForall, kExists,
  };

  Kind kind = Kind::kTop;
  FormulaPtr lhs;           // connectives; the body of a quantifier or ~
  FormulaPtr rhs;
  std::vector<Term> terms;  // kEq, kIn: two; kAtom: the arguments
  std::string name;         // kAtom: predicate; quantifiers: bound variable
  std::string type;         // quantifiers: object
  Position pos;
};

FormulaPtr parse(const std::string& text);
/// Canonical text; parse(to_string(f)) has the same structure as f.
std::string to_string(const Formula& f);
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }

/// The realizer-level meaning of double negation: ~~phi.
FormulaPtr negate(FormulaPtr f);

/// Named objects, morphisms, atomic predicates and powerobjects. Every
/// component is validated on insertion.
class Model {
 public:
  void add_object(const EffObject& x);
  /// Adds the product of declared objects under `name`; f(a, b) then applies
  /// a morphism out of it to a tuple.
  void add_product(const std::string& name,
                   const std::vector<std::string>& components,
                   const SearchConfig& cfg = {});
  void add_morphism(const std::string& name, const FunctionalRelation& f);
  /// Declares P over the product of the given objects and checks that it is
  /// strict and extensional.
  void add_predicate(const std::string& name,
                     const std::vector<std::string>& objects,
                     const NSPredicate& p, const SearchConfig& cfg = {});
  /// Declares the powerobject of `base` over a family; the family names
  /// become its labels.
  void add_power(const std::string& name, const std::string& base,
                 const std::vector<std::string>& names,
                 const std::vector<NSPredicate>& family,
                 const SearchConfig& cfg = {},
                 topos::PowerForm form = topos::PowerForm::kAuto);

  const EffObject& object(const std::string& name) const;
  bool has_object(const std::string& name) const;
  /// Component objects of a declared product; a one-element list otherwise.
  std::vector<std::string> components(const std::string& object) const;

  struct Morphism {
    FunctionalRelation relation;
    std::string source;
    std::string target;
  };
  const Morphism* morphism(const std::string& name) const;

  struct Predicate {
    std::vector<std::string> objects;
    NSPredicate values;  // over the product of the objects' carriers
    topos::RelationCertificates certificates;
  };
  const Predicate* predicate(const std::string& name) const;

  struct Power {
    std::string base;
    NSPredicate membership;  // over |base| x |power|
  };
  const Power* power(const std::string& name) const;

  const std::vector<std::string>& object_names() const { return order_; }

  /// Canonical description of every component; hashed into certificates.
  std::string describe() const;
  std::string hash() const;

 private:
  void check_fresh(const std::string& name) const;

  std::map<std::string, EffObject> objects_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<std::string>> products_;
  std::map<std::string, Morphism> morphisms_;
  std::map<std::string, Predicate> predicates_;
  std::map<std::string, Power> powers_;
  std::vector<std::string> declarations_;
};

struct Variable {
  std::string name;
  std::string object;
};

struct InterpretOptions {
  /// Quantify over ∇ objects by plain union / intersection.
  bool fast_path = true;
};

struct Interpretation {
  FormulaPtr formula;
  /// Free variables in declaration order; the predicate's carrier is the
  /// product of their carriers, last variable fastest.
  std::vector<Variable> context;
  NSPredicate predicate;
};

Interpretation interpret(const FormulaPtr& phi, const Model& model,
                         const std::vector<Variable>& context = {},
                         const InterpretOptions& options = {});

/// Realizers of fast ≤ general and general ≤ fast for the two
/// interpretations of phi; they differ only at quantifiers over ∇ objects.
std::pair<substrate::Code, substrate::Code> path_translations(
    const FormulaPtr& phi, const Model& model,
    const std::vector<Variable>& context = {});

struct CheckResult {
  Verdict verdict;
  std::string formula;     // canonical text
  std::string model_hash;
  Interpretation interpretation;
};

/// ⊨ phi: validity of the interpretation, free variables abstracted.
CheckResult check_valid(const FormulaPtr& phi, const Model& model,
                        const SearchConfig& cfg = {},
                        const std::vector<Variable>& context = {},
                        const InterpretOptions& options = {});

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace efft::logic

#endif  // EFFT_LOGIC_HPP
