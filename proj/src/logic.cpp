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

#include "efft/logic.hpp"

#include <cctype>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>

namespace efft::logic {

using heyting::Carrier;
using heyting::RealizerSet;
using substrate::Code;
using substrate::Combinator;
using C = Combinator;
using Kind = Formula::Kind;

SyntaxError::SyntaxError(Position pos, const std::string& message)
    : ModelError("syntax error at " + std::to_string(pos.line) + ":" +
                 std::to_string(pos.col) + ": " + message),
      pos_(pos) {}

TypeError::TypeError(std::string variable, std::string expected)
    : ModelError("type error: '" + variable + "' is not of type " + expected),
      variable_(std::move(variable)),
      expected_(std::move(expected)) {}

UnknownAtomicPredicate::UnknownAtomicPredicate(const std::string& name)
    : ModelError("unknown atomic predicate '" + name + "'") {}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

struct Token {
  enum class Type { kName, kSymbol, kEnd };
  Type type;
  std::string text;
  Position pos;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  Position pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else {
        ++pos.col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (name_char(c)) {
      std::size_t j = i;
      while (j < text.size() && name_char(text[j])) ++j;
      out.push_back({Token::Type::kName, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* sym : {"/\\", "\\/", "->"}) {
      if (text.compare(i, 2, sym) == 0) {
        out.push_back({Token::Type::kSymbol, sym, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("~=(),:.").find(c) != std::string::npos) {
      out.push_back({Token::Type::kSymbol, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Type::kEnd, "", pos});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "in" || s == "top" ||
         s == "bot";
}

FormulaPtr node(Kind kind, Position pos, FormulaPtr lhs = nullptr,
                FormulaPtr rhs = nullptr) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->pos = pos;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(lex(text)) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    if (peek().type != Token::Type::kEnd) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  bool at(const std::string& s) const {
    return peek().type != Token::Type::kEnd && peek().text == s;
  }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    throw SyntaxError(t.pos, t.type == Token::Type::kEnd
                                 ? message + " (end of input)"
                                 : message);
  }
  void expect(const std::string& s) {
    if (!at(s)) fail("expected '" + s + "'");
    take();
  }
  Token name() {
    if (peek().type != Token::Type::kName || is_keyword(peek().text)) {
      fail("expected a name");
    }
    return take();
  }

  FormulaPtr formula() {
    FormulaPtr lhs = disjunction();
    if (at("->")) {
      Position p = take().pos;
      return node(Kind::kImpl, p, lhs, formula());
    }
    return lhs;
  }
  FormulaPtr disjunction() {
    FormulaPtr lhs = conjunction();
    while (at("\\/")) {
      Position p = take().pos;
      lhs = node(Kind::kDisj, p, lhs, conjunction());
    }
    return lhs;
  }
  FormulaPtr conjunction() {
    FormulaPtr lhs = unary();
    while (at("/\\")) {
      Position p = take().pos;
      lhs = node(Kind::kConj, p, lhs, unary());
    }
    return lhs;
  }
  FormulaPtr unary() {
    if (at("~")) {
      Position p = take().pos;
      return node(Kind::kNot, p, unary());
    }
    if (at("forall") || at("exists")) {
      Token q = take();
      Token var = name();
      expect(":");
      Token type = name();
      expect(".");
      auto f = std::make_shared<Formula>();
      f->kind = q.text == "forall" ? Kind::kForall : Kind::kExists;
      f->pos = q.pos;
      f->name = var.text;
      f->type = type.text;
      f->lhs = formula();
      return f;
    }
    return primary();
  }
  FormulaPtr primary() {
    if (at("top")) return node(Kind::kTop, take().pos);
    if (at("bot")) return node(Kind::kBot, take().pos);
    if (at("(")) {
      take();
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    Term first = term();
    if (at("=") || at("in")) {
      Token op = take();
      auto f = std::make_shared<Formula>();
      f->kind = op.text == "=" ? Kind::kEq : Kind::kIn;
      f->pos = op.pos;
      f->terms = {first, term()};
      return f;
    }
    auto f = std::make_shared<Formula>();
    f->kind = Kind::kAtom;
    f->pos = first.pos;
    f->name = first.name;
    f->terms = first.args;
    return f;
  }
  Term term() {
    Token n = name();
    Term t{n.text, {}, n.pos};
    if (at("(")) {
      take();
      t.args.push_back(term());
      while (at(",")) {
        take();
        t.args.push_back(term());
      }
      expect(")");
    }
    return t;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string term_string(const Term& t) {
  if (!t.is_application()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    out += (i ? ", " : "") + term_string(t.args[i]);
  }
  return out + ")";
}

int precedence(const Formula& f) {
  switch (f.kind) {
    case Kind::kImpl: return 1;
    case Kind::kForall:
    case Kind::kExists: return 1;
    case Kind::kDisj: return 2;
    case Kind::kConj: return 3;
    case Kind::kNot: return 4;
    default: return 5;
  }
}

std::string print(const Formula& f, int context) {
  std::string out;
  switch (f.kind) {
    case Kind::kTop: out = "top"; break;
    case Kind::kBot: out = "bot"; break;
    case Kind::kConj: out = print(*f.lhs, 3) + " /\\ " + print(*f.rhs, 4); break;
    case Kind::kDisj: out = print(*f.lhs, 2) + " \\/ " + print(*f.rhs, 3); break;
    case Kind::kImpl: out = print(*f.lhs, 2) + " -> " + print(*f.rhs, 1); break;
    case Kind::kNot: out = "~" + print(*f.lhs, 4); break;
    case Kind::kEq:
      out = term_string(f.terms[0]) + " = " + term_string(f.terms[1]);
      break;
    case Kind::kIn:
      out = term_string(f.terms[0]) + " in " + term_string(f.terms[1]);
      break;
    case Kind::kAtom:
      out = term_string(Term{f.name, f.terms, f.pos});
      break;
    case Kind::kForall:
    case Kind::kExists:
      out = std::string(f.kind == Kind::kForall ? "forall " : "exists ") +
            f.name + ":" + f.type + ". " + print(*f.lhs, 1);
      break;
  }
  // A quantifier extends as far right as possible, so it needs parentheses
  // anywhere but in a loosest-binding position.
  const bool wrap = precedence(f) < context ||
                    ((f.kind == Kind::kForall || f.kind == Kind::kExists) &&
                     context > 1);
  return wrap ? "(" + out + ")" : out;
}

}  // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) { return print(f, 0); }

FormulaPtr negate(FormulaPtr f) {
  const Position pos = f->pos;
  return node(Kind::kNot, pos, std::move(f));
}

// ---------------------------------------------------------------------------
// Model

void Model::check_fresh(const std::string& name) const {
  if (objects_.count(name) || morphisms_.count(name) ||
      predicates_.count(name)) {
    throw ModelError("duplicate name '" + name + "'");
  }
}

void Model::add_object(const EffObject& x) {
  check_fresh(x.name());
  objects_.emplace(x.name(), x);
  order_.push_back(x.name());
  declarations_.push_back("object " + x.to_string());
}

void Model::add_product(const std::string& name,
                        const std::vector<std::string>& components,
                        const SearchConfig& cfg) {
  check_fresh(name);
  std::vector<EffObject> parts;
  for (const auto& c : components) parts.push_back(object(c));
  EffObject p = topos::product_object(name, parts, cfg);
  objects_.emplace(name, p);
  order_.push_back(name);
  products_[name] = components;
  std::string line = "product " + name + " =";
  for (const auto& c : components) line += " " + c;
  declarations_.push_back(line);
}

void Model::add_morphism(const std::string& name, const FunctionalRelation& f) {
  check_fresh(name);
  auto find_name = [&](const EffObject& x) {
    auto it = objects_.find(x.name());
    if (it == objects_.end() || !(it->second.carrier() == x.carrier())) {
      throw ModelError("morphism '" + name + "' uses undeclared object '" +
                       x.name() + "'");
    }
    return x.name();
  };
  Morphism m{f, find_name(f.source()), find_name(f.target())};
  declarations_.push_back("morphism " + name + ": " + m.source + " -> " +
                          m.target + " = " + f.relation().to_string());
  morphisms_.emplace(name, std::move(m));
}

void Model::add_predicate(const std::string& name,
                          const std::vector<std::string>& objects,
                          const NSPredicate& p, const SearchConfig& cfg) {
  check_fresh(name);
  if (objects.empty()) throw ModelError("predicate '" + name + "' has no arguments");
  std::vector<EffObject> parts;
  for (const auto& o : objects) parts.push_back(object(o));
  EffObject domain = parts.size() == 1
                         ? parts.front()
                         : topos::product_object(name + "#domain", parts, cfg);
  if (p.size() != domain.size()) {
    throw ModelError("predicate '" + name + "' is not defined on its domain");
  }
  NSPredicate values(domain.carrier(), p.values());
  Predicate entry{objects, values,
                  topos::validate_predicate(domain, values, cfg)};
  std::string line = "predicate " + name + "(";
  for (std::size_t i = 0; i < objects.size(); ++i) {
    line += (i ? ", " : "") + objects[i];
  }
  declarations_.push_back(line + ") = " + values.to_string());
  predicates_.emplace(name, std::move(entry));
}

void Model::add_power(const std::string& name, const std::string& base,
                      const std::vector<std::string>& names,
                      const std::vector<NSPredicate>& family,
                      const SearchConfig& cfg, topos::PowerForm form) {
  check_fresh(name);
  EffObject named =
      topos::power_object(object(base), names, family, cfg, form).renamed(name);
  objects_.emplace(name, named);
  order_.push_back(name);
  powers_[name] = Power{base, topos::membership(named)};
  std::string line = "power " + name + " of " + base + " =";
  for (std::size_t i = 0; i < names.size(); ++i) {
    line += " " + names[i] + ":" + family[i].to_string();
  }
  declarations_.push_back(line);
}

const EffObject& Model::object(const std::string& name) const {
  auto it = objects_.find(name);
  if (it == objects_.end()) throw ModelError("unknown object '" + name + "'");
  return it->second;
}

bool Model::has_object(const std::string& name) const {
  return objects_.count(name) > 0;
}

std::vector<std::string> Model::components(const std::string& object) const {
  auto it = products_.find(object);
  if (it == products_.end()) return {object};
  return it->second;
}

const Model::Morphism* Model::morphism(const std::string& name) const {
  auto it = morphisms_.find(name);
  return it == morphisms_.end() ? nullptr : &it->second;
}

const Model::Predicate* Model::predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

const Model::Power* Model::power(const std::string& name) const {
  auto it = powers_.find(name);
  return it == powers_.end() ? nullptr : &it->second;
}

std::string Model::describe() const {
  std::string out;
  for (const auto& d : declarations_) out += d + "\n";
  return out;
}

std::string Model::hash() const { return fnv1a_hex(describe()); }

// ---------------------------------------------------------------------------
// Interpretation

namespace {

struct Binding {
  std::string name;
  std::string object;
  std::size_t size;
};

// A term after elaboration: a variable of the environment or a fixed label.
struct Value {
  std::optional<std::size_t> var;
  std::size_t label = 0;
  std::string object;
};

// Fast and general interpretations differ only at ∇ quantifiers; these
// realizers translate between them.
struct Translation {
  C to_general = C::id();
  C to_fast = C::id();
  bool identity = true;
};

class Interpreter {
 public:
  Interpreter(const Model& model, const InterpretOptions& options)
      : model_(model), options_(options) {}

  NSPredicate eval(const Formula& f, std::vector<Binding>& env) {
    const Carrier carrier = env_carrier(env);
    switch (f.kind) {
      case Kind::kTop: return heyting::top(carrier);
      case Kind::kBot: return heyting::bot(carrier);
      case Kind::kConj: return heyting::conj(eval(*f.lhs, env), eval(*f.rhs, env));
      case Kind::kDisj: return heyting::disj(eval(*f.lhs, env), eval(*f.rhs, env));
      case Kind::kImpl: return heyting::impl(eval(*f.lhs, env), eval(*f.rhs, env));
      case Kind::kNot:
        return heyting::impl(eval(*f.lhs, env), heyting::bot(carrier));
      case Kind::kForall:
      case Kind::kExists: return quantify(f, env);
      default: break;
    }
    if (FormulaPtr e = elaborate(f)) return eval(*e, env);
    if (f.kind == Kind::kEq && f.terms[0].is_application()) {
      return direct_equality(f, env);
    }
    return atomic(f, env);
  }

  Translation translate(const Formula& f, std::vector<Binding>& env) {
    switch (f.kind) {
      case Kind::kConj: {
        Translation l = translate(*f.lhs, env), r = translate(*f.rhs, env);
        if (l.identity && r.identity) return {};
        return {C::pair_with(C::compose(l.to_general, C::fst()),
                             C::compose(r.to_general, C::snd())),
                C::pair_with(C::compose(l.to_fast, C::fst()),
                             C::compose(r.to_fast, C::snd())),
                false};
      }
      case Kind::kDisj: {
        Translation l = translate(*f.lhs, env), r = translate(*f.rhs, env);
        if (l.identity && r.identity) return {};
        auto inject = [](const C& a, const C& b) {
          return C::case_of(C::pair_with(C::constant(0), a),
                            C::pair_with(C::constant(1), b));
        };
        return {inject(l.to_general, r.to_general),
                inject(l.to_fast, r.to_fast), false};
      }
      case Kind::kImpl:
      case Kind::kNot: {
        Translation a = translate(*f.lhs, env);
        Translation b = f.kind == Kind::kImpl ? translate(*f.rhs, env)
                                              : Translation{};
        if (a.identity && b.identity) return {};
        // r -> code of λx. out(r(in(x))); the fixed parts live in the body
        // so that only r is paired.
        auto conjugate = [](const C& out, const C& in) {
          return C::smn(
              C::compose(out, C::apply(C::fst(), C::compose(in, C::snd()))),
              C::id());
        };
        return {conjugate(b.to_general, a.to_fast),
                conjugate(b.to_fast, a.to_general), false};
      }
      case Kind::kForall:
      case Kind::kExists: {
        const bool nabla = model_.object(f.type).is_nabla();
        env.push_back(binding(f.name, f.type));
        Translation body = translate(*f.lhs, env);
        env.pop_back();
        if (f.kind == Kind::kForall) {
          if (nabla) {
            // a -> code of λe. body(a);  r -> body(r(0)). Over an inhabited
            // carrier body(a) is computed first and wrapped as a constant, so
            // the value never sits in a pair exponent.
            const C to_general =
                model_.object(f.type).size() > 0
                    ? C::compose(C::smn(C::fst(), C::id()), body.to_general)
                    : C::smn(C::compose(body.to_general, C::fst()), C::id());
            return {to_general,
                    C::compose(body.to_fast,
                               C::apply(C::id(), C::constant(0))),
                    false};
          }
          if (body.identity) return {};
          auto after = [](const C& t) {
            return C::smn(C::compose(t, C::apply(C::fst(), C::snd())), C::id());
          };
          return {after(body.to_general), after(body.to_fast), false};
        }
        if (nabla) {
          return {C::pair_with(C::constant(0), body.to_general),
                  C::compose(body.to_fast, C::snd()), false};
        }
        if (body.identity) return {};
        return {C::pair_with(C::fst(), C::compose(body.to_general, C::snd())),
                C::pair_with(C::fst(), C::compose(body.to_fast, C::snd())),
                false};
      }
      default: break;
    }
    if (FormulaPtr e = elaborate(f)) return translate(*e, env);
    return {};
  }

  Binding binding(const std::string& name, const std::string& object) const {
    return {name, object, model_.object(object).size()};
  }

  static Carrier env_carrier(const std::vector<Binding>& env, const Model& m) {
    Carrier c = Carrier::unit();
    bool first = true;
    for (const auto& b : env) {
      const Carrier& next = m.object(b.object).carrier();
      c = first ? next : Carrier::product(c, next);
      first = false;
    }
    return c;
  }

 private:
  Carrier env_carrier(const std::vector<Binding>& env) const {
    return env_carrier(env, model_);
  }

  static std::size_t env_size(const std::vector<Binding>& env) {
    std::size_t n = 1;
    for (const auto& b : env) n *= b.size;
    return n;
  }

  static std::size_t digit(const std::vector<Binding>& env, std::size_t e,
                           std::size_t k) {
    for (std::size_t j = env.size(); j-- > k + 1;) e /= env[j].size;
    return e % env[k].size;
  }

  NSPredicate quantify(const Formula& f, std::vector<Binding>& env) {
    const EffObject& x = model_.object(f.type);
    const bool fast = options_.fast_path && x.is_nabla();
    env.push_back(binding(f.name, f.type));
    NSPredicate body = eval(*f.lhs, env);
    env.pop_back();
    const std::size_t n = x.size();
    std::vector<RealizerSet> values;
    for (std::size_t e = 0; e < env_size(env); ++e) {
      std::vector<RealizerSet> parts;
      for (std::size_t i = 0; i < n; ++i) {
        const RealizerSet& b = body[e * n + i];
        if (f.kind == Kind::kForall) {
          parts.push_back(fast ? b : heyting::impl(x.ex(i), b));
        } else {
          parts.push_back(fast ? b : heyting::conj(x.ex(i), b));
        }
      }
      values.push_back(f.kind == Kind::kForall ? heyting::meet_all(parts)
                                               : heyting::join_all(parts));
    }
    return NSPredicate(env_carrier(env), std::move(values));
  }

  std::optional<std::size_t> lookup(const std::vector<Binding>& env,
                                    const std::string& name) const {
    for (std::size_t k = env.size(); k-- > 0;) {
      if (env[k].name == name) return k;
    }
    return std::nullopt;
  }

  // The object of a simple term, if it can be known without an expectation.
  std::optional<std::string> type_of(const Term& t,
                                     const std::vector<Binding>& env) const {
    if (t.is_application()) {
      const Model::Morphism* m = model_.morphism(t.name);
      if (!m) throw ModelError("unknown morphism '" + t.name + "'");
      return m->target;
    }
    if (auto k = lookup(env, t.name)) return env[*k].object;
    return std::nullopt;
  }

  // The only object whose carrier has all the labels.
  std::optional<std::string> label_owner(
      const std::vector<std::string>& labels) const {
    std::optional<std::string> owner;
    for (const auto& name : model_.object_names()) {
      bool all = true;
      for (const auto& l : labels) {
        all = all && model_.object(name).carrier().find(l).has_value();
      }
      if (!all) continue;
      if (owner) return std::nullopt;
      owner = name;
    }
    return owner;
  }

  Value resolve(const Term& t, const std::string& expected,
                const std::vector<Binding>& env) const {
    if (auto k = lookup(env, t.name)) {
      if (env[*k].object != expected) throw TypeError(t.name, expected);
      return {*k, 0, expected};
    }
    auto label = model_.object(expected).carrier().find(t.name);
    if (!label) throw TypeError(t.name, expected);
    return {std::nullopt, *label, expected};
  }

  static std::size_t value_at(const Value& v, const std::vector<Binding>& env,
                              std::size_t e) {
    return v.var ? digit(env, e, *v.var) : v.label;
  }

  // Replace application subterms by fresh variables bound by existentials
  // over the graphs: A[f(t)] becomes ∃y. f(t, y) ∧ A[y]. Returns null when
  // there is nothing to elaborate. f(s) = g(t) with simple arguments is left
  // to the direct union formula.
  FormulaPtr elaborate(const Formula& f) {
    if (f.kind != Kind::kEq && f.kind != Kind::kIn && f.kind != Kind::kAtom) {
      return nullptr;
    }
    auto simple_args = [](const Term& t) {
      for (const auto& a : t.args) {
        if (a.is_application()) return false;
      }
      return true;
    };
    if (f.kind == Kind::kEq && f.terms[0].is_application() &&
        f.terms[1].is_application() && simple_args(f.terms[0]) &&
        simple_args(f.terms[1])) {
      return nullptr;
    }
    struct Graph {
      std::string var, object, morphism;
      std::vector<Term> args;
    };
    std::vector<Graph> graphs;
    std::function<Term(const Term&)> flatten = [&](const Term& t) -> Term {
      if (!t.is_application()) return t;
      const Model::Morphism* m = model_.morphism(t.name);
      if (!m) throw ModelError("unknown morphism '" + t.name + "'");
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(flatten(a));
      const std::string var = "#" + std::to_string(++fresh_);
      graphs.push_back({var, m->target, t.name, args});
      return Term{var, {}, t.pos};
    };
    auto out = std::make_shared<Formula>(f);
    bool changed = false;
    for (auto& t : out->terms) {
      if (t.is_application()) {
        t = flatten(t);
        changed = true;
      }
    }
    if (!changed) return nullptr;
    FormulaPtr acc = out;
    for (std::size_t k = graphs.size(); k-- > 0;) {
      auto g = std::make_shared<Formula>();
      g->kind = Kind::kAtom;
      g->pos = f.pos;
      g->name = graphs[k].morphism;
      g->terms = graphs[k].args;
      g->terms.push_back(Term{graphs[k].var, {}, f.pos});
      auto conj = node(Kind::kConj, f.pos, g, acc);
      auto ex = std::make_shared<Formula>();
      ex->kind = Kind::kExists;
      ex->pos = f.pos;
      ex->name = graphs[k].var;
      ex->type = graphs[k].object;
      ex->lhs = conj;
      acc = ex;
    }
    return acc;
  }

  // Mixed-radix index of argument values over the given objects.
  std::vector<Value> resolve_all(const std::vector<Term>& terms,
                                 const std::vector<std::string>& objects,
                                 const std::vector<Binding>& env,
                                 const std::string& what) const {
    if (terms.size() != objects.size()) {
      throw ModelError("'" + what + "' expects " +
                       std::to_string(objects.size()) + " arguments");
    }
    std::vector<Value> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      out.push_back(resolve(terms[i], objects[i], env));
    }
    return out;
  }

  std::size_t tuple_index(const std::vector<Value>& values,
                          const std::vector<Binding>& env, std::size_t e,
                          std::size_t from, std::size_t to) const {
    std::size_t idx = 0;
    for (std::size_t i = from; i < to; ++i) {
      idx = idx * model_.object(values[i].object).size() +
            value_at(values[i], env, e);
    }
    return idx;
  }

  NSPredicate direct_equality(const Formula& f, const std::vector<Binding>& env) {
    const Model::Morphism* m1 = model_.morphism(f.terms[0].name);
    const Model::Morphism* m2 = model_.morphism(f.terms[1].name);
    if (!m1) throw ModelError("unknown morphism '" + f.terms[0].name + "'");
    if (!m2) throw ModelError("unknown morphism '" + f.terms[1].name + "'");
    if (m1->target != m2->target) {
      throw TypeError(term_string(f.terms[1]), m1->target);
    }
    auto a1 = resolve_all(f.terms[0].args, model_.components(m1->source), env,
                          f.terms[0].name);
    auto a2 = resolve_all(f.terms[1].args, model_.components(m2->source), env,
                          f.terms[1].name);
    const std::size_t ny = model_.object(m1->target).size();
    std::vector<RealizerSet> values;
    for (std::size_t e = 0; e < env_size(env); ++e) {
      const std::size_t s = tuple_index(a1, env, e, 0, a1.size());
      const std::size_t t = tuple_index(a2, env, e, 0, a2.size());
      std::vector<RealizerSet> parts;
      for (std::size_t y = 0; y < ny; ++y) {
        parts.push_back(heyting::conj(m1->relation.at(s, y),
                                      m2->relation.at(t, y)));
      }
      values.push_back(heyting::join_all(parts));
    }
    return NSPredicate(env_carrier(env), std::move(values));
  }

  NSPredicate atomic(const Formula& f, const std::vector<Binding>& env) {
    std::vector<RealizerSet> values;
    const std::size_t size = env_size(env);
    if (f.kind == Kind::kEq) {
      auto type = type_of(f.terms[0], env);
      if (!type) type = type_of(f.terms[1], env);
      if (!type) type = label_owner({f.terms[0].name, f.terms[1].name});
      if (!type) throw TypeError(f.terms[0].name, "a unique declared object");
      const Value s = resolve(f.terms[0], *type, env);
      const Value t = resolve(f.terms[1], *type, env);
      const EffObject& x = model_.object(*type);
      for (std::size_t e = 0; e < size; ++e) {
        values.push_back(x.eq(value_at(s, env, e), value_at(t, env, e)));
      }
    } else if (f.kind == Kind::kIn) {
      std::string power_name;
      if (auto type = type_of(f.terms[1], env)) {
        power_name = *type;
      } else {
        for (const auto& name : model_.object_names()) {
          if (model_.power(name) &&
              model_.object(name).carrier().find(f.terms[1].name)) {
            if (!power_name.empty()) {
              throw TypeError(f.terms[1].name, "a unique powerobject");
            }
            power_name = name;
          }
        }
        if (power_name.empty()) throw TypeError(f.terms[1].name, "a powerobject");
      }
      const Model::Power* p = model_.power(power_name);
      if (!p) throw TypeError(f.terms[1].name, "a powerobject");
      const Value a = resolve(f.terms[1], power_name, env);
      const Value u = resolve(f.terms[0], p->base, env);
      const std::size_t k = model_.object(power_name).size();
      for (std::size_t e = 0; e < size; ++e) {
        values.push_back(
            p->membership[value_at(u, env, e) * k + value_at(a, env, e)]);
      }
    } else if (const Model::Predicate* p = model_.predicate(f.name)) {
      auto args = resolve_all(f.terms, p->objects, env, f.name);
      for (std::size_t e = 0; e < size; ++e) {
        values.push_back(p->values[tuple_index(args, env, e, 0, args.size())]);
      }
    } else if (const Model::Morphism* m = model_.morphism(f.name)) {
      std::vector<std::string> objects = model_.components(m->source);
      objects.push_back(m->target);
      auto args = resolve_all(f.terms, objects, env, f.name);
      for (std::size_t e = 0; e < size; ++e) {
        const std::size_t s = tuple_index(args, env, e, 0, args.size() - 1);
        values.push_back(m->relation.at(s, value_at(args.back(), env, e)));
      }
    } else {
      throw UnknownAtomicPredicate(f.name);
    }
    return NSPredicate(env_carrier(env), std::move(values));
  }

  const Model& model_;
  InterpretOptions options_;
  std::size_t fresh_ = 0;
};

std::vector<Binding> initial_env(const Model& model,
                                 const std::vector<Variable>& context) {
  std::vector<Binding> env;
  for (const auto& v : context) {
    env.push_back({v.name, v.object, model.object(v.object).size()});
  }
  return env;
}

}  // namespace

Interpretation interpret(const FormulaPtr& phi, const Model& model,
                         const std::vector<Variable>& context,
                         const InterpretOptions& options) {
  Interpreter it(model, options);
  std::vector<Binding> env = initial_env(model, context);
  return {phi, context, it.eval(*phi, env)};
}

std::pair<Code, Code> path_translations(const FormulaPtr& phi,
                                        const Model& model,
                                        const std::vector<Variable>& context) {
  Interpreter it(model, {});
  std::vector<Binding> env = initial_env(model, context);
  Translation t = it.translate(*phi, env);
  return {substrate::build_code(t.to_general), substrate::build_code(t.to_fast)};
}

CheckResult check_valid(const FormulaPtr& phi, const Model& model,
                        const SearchConfig& cfg,
                        const std::vector<Variable>& context,
                        const InterpretOptions& options) {
  Interpretation i = interpret(phi, model, context, options);
  Verdict v = heyting::valid(i.predicate, cfg);
  return {v, to_string(*phi), model.hash(), std::move(i)};
}

}  // namespace efft::logic
