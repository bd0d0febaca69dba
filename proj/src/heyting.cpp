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

#include "efft/heyting.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace efft::heyting {

using substrate::Combinator;
using substrate::pair;
using substrate::unpair;

namespace {

// Exponents beyond this are not materialized when listing pair members.
constexpr std::uint64_t kListedPairExponent = 4096;
// Constant codes listed as implication members stay small enough to be paired.
constexpr std::uint64_t kListedConstant = 1024;

void sort_unique(std::vector<Nat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Constant codes up to three levels deep: their membership in implications
// is decided without running them, so they are a cheap first guess.
const std::vector<Nat>& constant_guesses() {
  static const std::vector<Nat> guesses = [] {
    std::vector<Nat> out;
    for (unsigned k = 0; k < 4; ++k) {
      Nat n = k;
      for (int depth = 0; depth < 3; ++depth) {
        n = n * 10 + 1;
        out.push_back(n);
      }
    }
    return out;
  }();
  return guesses;
}

// Pairs of guesses for conjunctions, then the guesses. Pairs come first: an
// odd guess unpairs to <0, n>, and 0 is not a constant.
const std::vector<Nat>& valid_guesses() {
  static const std::vector<Nat> guesses = [] {
    std::vector<Nat> out;
    const std::vector<Nat>& parts = constant_guesses();
    for (const auto& m : parts) {
      for (const auto& n : parts) out.push_back(pair(m, n));
    }
    out.insert(out.end(), parts.begin(), parts.end());
    return out;
  }();
  return guesses;
}

}  // namespace

Membership all_of(const std::vector<Membership>& parts) {
  bool unknown = false;
  bool inexact_no = false;
  bool exact = true;
  for (const auto& p : parts) {
    if (p.no() && p.exact) return {Truth::kNo, true};
    if (p.no()) inexact_no = true;
    if (p.truth == Truth::kUnknown) unknown = true;
    exact = exact && p.exact;
  }
  if (unknown) return {Truth::kUnknown, false};
  if (inexact_no) return {Truth::kNo, false};
  return {Truth::kYes, exact};
}

Membership any_of(const std::vector<Membership>& parts) {
  bool unknown = false;
  bool inexact_yes = false;
  bool exact = true;
  for (const auto& p : parts) {
    if (p.yes() && p.exact) return {Truth::kYes, true};
    if (p.yes()) inexact_yes = true;
    if (p.truth == Truth::kUnknown) unknown = true;
    exact = exact && p.exact;
  }
  if (unknown) return {Truth::kUnknown, false};
  if (inexact_yes) return {Truth::kYes, false};
  return {Truth::kNo, exact};
}

// ---------------------------------------------------------------------------
// RealizerSet

struct RealizerSet::Impl {
  Kind kind = Kind::kExplicit;
  std::set<Nat> elements;
  Oracle oracle;

  using Key = std::tuple<std::uint64_t, std::size_t, std::size_t>;
  mutable std::mutex mu;
  mutable std::map<Key, MemberList> listed;
};

RealizerSet::RealizerSet() : impl_(std::make_shared<Impl>()) {}

RealizerSet::RealizerSet(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

RealizerSet RealizerSet::finite(std::set<Nat> elements) {
  auto impl = std::make_shared<Impl>();
  impl->elements = std::move(elements);
  return RealizerSet(std::move(impl));
}

RealizerSet RealizerSet::all() {
  static const RealizerSet kAllSet = [] {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::kAll;
    return RealizerSet(std::move(impl));
  }();
  return kAllSet;
}

RealizerSet RealizerSet::intensional(Oracle oracle) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::kIntensional;
  impl->oracle = std::move(oracle);
  return RealizerSet(std::move(impl));
}

RealizerSet::Kind RealizerSet::kind() const { return impl_->kind; }

const std::set<Nat>& RealizerSet::elements() const {
  if (impl_->kind != Kind::kExplicit) {
    throw ModelError("elements() on a non-explicit realizer set");
  }
  return impl_->elements;
}

Membership RealizerSet::contains(const Nat& n, const SearchConfig& cfg) const {
  switch (impl_->kind) {
    case Kind::kExplicit: return Membership::yes_if(impl_->elements.count(n));
    case Kind::kAll: return {Truth::kYes, true};
    case Kind::kIntensional: return impl_->oracle.contains(n, cfg);
  }
  return {};
}

MemberList RealizerSet::members(const SearchConfig& cfg) const {
  switch (impl_->kind) {
    case Kind::kExplicit:
      return {{impl_->elements.begin(), impl_->elements.end()}, true, true};
    case Kind::kAll: {
      MemberList list;
      for (std::size_t i = 0; i < cfg.sample_bound; ++i) list.items.push_back(i);
      list.complete = false;
      return list;
    }
    case Kind::kIntensional: break;
  }
  const Impl::Key key{cfg.budget.max_steps, cfg.sample_bound,
                      cfg.member_limit};
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->listed.find(key);
    if (it != impl_->listed.end()) return it->second;
  }
  MemberList list = impl_->oracle.members(cfg);
  std::lock_guard lock(impl_->mu);
  return impl_->listed.emplace(key, std::move(list)).first->second;
}

Truth RealizerSet::inhabited(const SearchConfig& cfg) const {
  switch (impl_->kind) {
    case Kind::kExplicit:
      return impl_->elements.empty() ? Truth::kNo : Truth::kYes;
    case Kind::kAll: return Truth::kYes;
    case Kind::kIntensional: break;
  }
  if (impl_->oracle.inhabited) {
    Truth t = impl_->oracle.inhabited(cfg);
    if (t != Truth::kUnknown) return t;
  }
  MemberList list = members(cfg);
  if (!list.items.empty() && list.exact) return Truth::kYes;
  for (const auto& n : list.items) {
    Membership m = contains(n, cfg);
    if (m.yes() && m.exact) return Truth::kYes;
  }
  if (list.items.empty() && list.complete && list.exact) return Truth::kNo;
  return Truth::kUnknown;
}

const std::vector<RealizerSet>& RealizerSet::implication_operands() const {
  static const std::vector<RealizerSet> kNone;
  return impl_->kind == Kind::kIntensional ? impl_->oracle.implication : kNone;
}

std::string RealizerSet::to_string() const {
  switch (impl_->kind) {
    case Kind::kAll: return "N";
    case Kind::kIntensional: return impl_->oracle.description;
    case Kind::kExplicit: break;
  }
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& e : impl_->elements) {
    out << (first ? "" : ", ") << e;
    first = false;
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------------------
// Connectives on realizer sets

RealizerSet conj(const RealizerSet& a, const RealizerSet& b) {
  if (a.is_explicit() && b.is_explicit()) {
    std::set<Nat> out;
    for (const auto& m : a.elements()) {
      for (const auto& n : b.elements()) out.insert(pair(m, n));
    }
    return RealizerSet::finite(std::move(out));
  }
  RealizerSet::Oracle o;
  o.contains = [a, b](const Nat& k, const SearchConfig& cfg) -> Membership {
    if (k == 0) return {Truth::kNo, true};
    auto [m, n] = unpair(k);
    Membership left = a.contains(m, cfg);
    if (left.no() && left.exact) return left;
    return all_of({left, b.contains(n, cfg)});
  };
  o.members = [a, b](const SearchConfig& cfg) {
    MemberList la = a.members(cfg);
    MemberList lb = b.members(cfg);
    MemberList out;
    out.complete = la.complete && lb.complete;
    out.exact = la.exact && lb.exact;
    // Diagonal order, capped: products of sampled lists grow quickly.
    const std::size_t cap = 4 * cfg.sample_bound;
    const std::size_t diagonals = la.items.size() + lb.items.size();
    for (std::size_t d = 0; d < diagonals; ++d) {
      for (std::size_t i = 0; i <= d && i < la.items.size(); ++i) {
        const std::size_t j = d - i;
        if (j >= lb.items.size()) continue;
        if (la.items[i] > kListedPairExponent || out.items.size() >= cap) {
          out.complete = false;
          continue;
        }
        out.items.push_back(pair(la.items[i], lb.items[j]));
      }
    }
    sort_unique(out.items);
    return out;
  };
  o.inhabited = [a, b](const SearchConfig& cfg) {
    Truth ta = a.inhabited(cfg);
    Truth tb = b.inhabited(cfg);
    if (ta == Truth::kNo || tb == Truth::kNo) return Truth::kNo;
    if (ta == Truth::kYes && tb == Truth::kYes) return Truth::kYes;
    return Truth::kUnknown;
  };
  o.description = "(" + a.to_string() + " /\\ " + b.to_string() + ")";
  return RealizerSet::intensional(std::move(o));
}

RealizerSet disj(const RealizerSet& a, const RealizerSet& b) {
  if (a.is_explicit() && b.is_explicit()) {
    std::set<Nat> out;
    for (const auto& n : a.elements()) out.insert(pair(0, n));
    for (const auto& n : b.elements()) out.insert(pair(1, n));
    return RealizerSet::finite(std::move(out));
  }
  RealizerSet::Oracle o;
  o.contains = [a, b](const Nat& k, const SearchConfig& cfg) -> Membership {
    if (k == 0) return {Truth::kNo, true};
    auto [t, n] = unpair(k);
    if (t == 0) return a.contains(n, cfg);
    if (t == 1) return b.contains(n, cfg);
    return {Truth::kNo, true};
  };
  o.members = [a, b](const SearchConfig& cfg) {
    MemberList la = a.members(cfg);
    MemberList lb = b.members(cfg);
    MemberList out;
    out.complete = la.complete && lb.complete;
    out.exact = la.exact && lb.exact;
    for (const auto& n : la.items) out.items.push_back(pair(0, n));
    for (const auto& n : lb.items) out.items.push_back(pair(1, n));
    sort_unique(out.items);
    return out;
  };
  o.inhabited = [a, b](const SearchConfig& cfg) {
    Truth ta = a.inhabited(cfg);
    Truth tb = b.inhabited(cfg);
    if (ta == Truth::kYes || tb == Truth::kYes) return Truth::kYes;
    if (ta == Truth::kNo && tb == Truth::kNo) return Truth::kNo;
    return Truth::kUnknown;
  };
  o.description = "(" + a.to_string() + " \\/ " + b.to_string() + ")";
  return RealizerSet::intensional(std::move(o));
}

RealizerSet impl(const RealizerSet& a, const RealizerSet& b) {
  RealizerSet::Oracle o;
  o.contains = [a, b](const Nat& n, const SearchConfig& cfg) -> Membership {
    if (n % 10 == 1) {
      // Const k is total, so it realizes a => b iff a is empty or k is in b.
      Membership target = b.contains(n / 10, cfg);
      if (target.yes()) return target;
      Truth ta = a.inhabited(cfg);
      if (ta == Truth::kNo) return {Truth::kYes, true};
      if (ta == Truth::kYes) return target;
      return {Truth::kUnknown, false};
    }
    const MemberList antecedent = a.members(cfg);
    const Code code{n};
    bool unknown = false;
    bool inexact_no = false;
    bool exact = antecedent.complete && antecedent.exact;
    for (const auto& m : antecedent.items) {
      auto out = substrate::apply(code, m, cfg.budget);
      if (!out.is_halted()) {
        unknown = true;
        continue;
      }
      Membership r = b.contains(out.value(), cfg);
      if (r.no()) {
        if (r.exact && antecedent.exact) return {Truth::kNo, true};
        inexact_no = true;
      } else if (r.truth == Truth::kUnknown) {
        unknown = true;
      }
      exact = exact && r.exact;
    }
    if (unknown) return {Truth::kUnknown, false};
    if (inexact_no) return {Truth::kNo, false};
    return {Truth::kYes, exact};
  };
  o.members = [a, b, contains = o.contains](const SearchConfig& cfg) {
    std::vector<Nat> candidates;
    const MemberList targets = b.members(cfg);
    for (std::size_t i = 0; i < targets.items.size() && i < 8; ++i) {
      if (targets.items[i] < kListedConstant) {
        candidates.push_back(
            Combinator::constant(targets.items[i]).code_index());
      }
    }
    for (std::size_t i = 0; i < cfg.member_limit; ++i) candidates.push_back(i);
    sort_unique(candidates);
    MemberList out;
    out.complete = false;
    for (const auto& c : candidates) {
      Membership m = contains(c, cfg);
      if (m.yes()) {
        out.items.push_back(c);
        out.exact = out.exact && m.exact;
      }
    }
    return out;
  };
  o.inhabited = [a, b](const SearchConfig& cfg) {
    Truth ta = a.inhabited(cfg);
    if (ta == Truth::kNo) return Truth::kYes;
    Truth tb = b.inhabited(cfg);
    if (tb == Truth::kYes) return Truth::kYes;  // a constant code
    if (ta == Truth::kYes && tb == Truth::kNo) return Truth::kNo;
    return Truth::kUnknown;
  };
  o.description = "(" + a.to_string() + " => " + b.to_string() + ")";
  if (a.is_explicit() && b.is_explicit()) o.implication = {a, b};
  return RealizerSet::intensional(std::move(o));
}

RealizerSet meet_all(const std::vector<RealizerSet>& sets) {
  std::vector<RealizerSet> parts;
  for (const auto& s : sets) {
    if (!s.is_all()) parts.push_back(s);
  }
  if (parts.empty()) return RealizerSet::all();
  if (parts.size() == 1) return parts.front();
  const bool explicit_only = std::all_of(
      parts.begin(), parts.end(), [](const auto& s) { return s.is_explicit(); });
  if (explicit_only) {
    std::set<Nat> acc = parts.front().elements();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      std::set<Nat> next;
      for (const auto& e : acc) {
        if (parts[i].elements().count(e)) next.insert(e);
      }
      acc = std::move(next);
    }
    return RealizerSet::finite(std::move(acc));
  }
  // ⋂ (A_i => B_i) over explicit sets: a realizer exists iff each m has a
  // common image in the B_i of every i with m in A_i; then a table realizes.
  const bool implications_only =
      std::all_of(parts.begin(), parts.end(), [](const auto& s) {
        return !s.implication_operands().empty();
      });
  std::optional<Truth> decided;
  std::optional<Nat> table_code;
  if (implications_only) {
    std::map<Nat, std::set<Nat>> common;
    bool ok = true;
    for (const auto& s : parts) {
      const auto& ops = s.implication_operands();
      for (const auto& m : ops[0].elements()) {
        auto [it, fresh] = common.emplace(m, ops[1].elements());
        if (!fresh) {
          std::set<Nat> next;
          for (const auto& v : it->second) {
            if (ops[1].elements().count(v)) next.insert(v);
          }
          it->second = std::move(next);
        }
        ok = ok && !it->second.empty();
      }
    }
    decided = ok ? Truth::kYes : Truth::kNo;
    if (ok) {
      std::map<Nat, Nat> entries;
      for (const auto& [m, targets] : common) entries.emplace(m, *targets.begin());
      table_code = Combinator::table(entries, 0).code_index();
    }
  }
  RealizerSet::Oracle o;
  o.contains = [parts](const Nat& n, const SearchConfig& cfg) -> Membership {
    std::vector<Membership> results;
    for (const auto& s : parts) {
      Membership m = s.contains(n, cfg);
      if (m.no() && m.exact) return m;
      results.push_back(m);
    }
    return all_of(results);
  };
  o.members = [parts, table_code,
               contains = o.contains](const SearchConfig& cfg) {
    // List from an explicit part when there is one: it is complete.
    const RealizerSet* source = &parts.front();
    for (const auto& s : parts) {
      if (s.is_explicit()) {
        source = &s;
        break;
      }
    }
    MemberList from = source->members(cfg);
    MemberList out;
    out.complete = from.complete;
    out.exact = from.exact;
    for (const auto& n : from.items) {
      Membership m = contains(n, cfg);
      if (m.yes()) {
        out.items.push_back(n);
        out.exact = out.exact && m.exact;
      } else if (!(m.no() && m.exact)) {
        out.complete = false;
      }
    }
    if (table_code && !std::count(out.items.begin(), out.items.end(),
                                  *table_code)) {
      Membership m = contains(*table_code, cfg);
      if (m.yes()) {
        out.items.insert(out.items.begin(), *table_code);
        out.exact = out.exact && m.exact;
      }
    }
    return out;
  };
  o.inhabited = [parts, decided, contains = o.contains](const SearchConfig& cfg) {
    if (decided) return *decided;
    for (const auto& s : parts) {
      if (s.known_empty(cfg)) return Truth::kNo;
    }
    for (const auto& n : constant_guesses()) {
      Membership m = contains(n, cfg);
      if (m.yes() && m.exact) return Truth::kYes;
    }
    return Truth::kUnknown;
  };
  std::string desc = "meet(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    desc += (i ? ", " : "") + parts[i].to_string();
  }
  o.description = desc + ")";
  return RealizerSet::intensional(std::move(o));
}

RealizerSet join_all(const std::vector<RealizerSet>& sets) {
  if (sets.empty()) return RealizerSet::empty();
  for (const auto& s : sets) {
    if (s.is_all()) return RealizerSet::all();
  }
  const bool explicit_only = std::all_of(
      sets.begin(), sets.end(), [](const auto& s) { return s.is_explicit(); });
  if (explicit_only) {
    std::set<Nat> acc;
    for (const auto& s : sets) acc.insert(s.elements().begin(), s.elements().end());
    return RealizerSet::finite(std::move(acc));
  }
  if (sets.size() == 1) return sets.front();
  RealizerSet::Oracle o;
  o.contains = [sets](const Nat& n, const SearchConfig& cfg) -> Membership {
    std::vector<Membership> results;
    for (const auto& s : sets) {
      Membership m = s.contains(n, cfg);
      if (m.yes() && m.exact) return m;
      results.push_back(m);
    }
    return any_of(results);
  };
  o.members = [sets](const SearchConfig& cfg) {
    MemberList out;
    for (const auto& s : sets) {
      MemberList l = s.members(cfg);
      out.items.insert(out.items.end(), l.items.begin(), l.items.end());
      out.complete = out.complete && l.complete;
      out.exact = out.exact && l.exact;
    }
    sort_unique(out.items);
    return out;
  };
  o.inhabited = [sets](const SearchConfig& cfg) {
    bool all_empty = true;
    for (const auto& s : sets) {
      Truth t = s.inhabited(cfg);
      if (t == Truth::kYes) return Truth::kYes;
      all_empty = all_empty && t == Truth::kNo;
    }
    return all_empty ? Truth::kNo : Truth::kUnknown;
  };
  std::string desc = "join(";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    desc += (i ? ", " : "") + sets[i].to_string();
  }
  o.description = desc + ")";
  return RealizerSet::intensional(std::move(o));
}

// ---------------------------------------------------------------------------
// Carrier and predicates

Carrier::Carrier(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ModelError("duplicate label '" + l + "'");
  }
}

std::optional<std::size_t> Carrier::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Carrier::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) throw ModelError("unknown label '" + label + "'");
  return *i;
}

Carrier Carrier::product(const Carrier& a, const Carrier& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (const auto& x : a.labels_) {
    for (const auto& y : b.labels_) labels.push_back(x + "," + y);
  }
  Carrier c;
  c.labels_ = std::move(labels);  // components may contain commas
  return c;
}

Carrier Carrier::unit() { return Carrier({"*"}); }

NSPredicate::NSPredicate(Carrier carrier, std::vector<RealizerSet> values)
    : carrier_(std::move(carrier)), values_(std::move(values)) {
  if (values_.size() != carrier_.size()) {
    throw ModelError("predicate is not total on its carrier");
  }
}

NSPredicate NSPredicate::constant(Carrier carrier, const RealizerSet& set) {
  std::vector<RealizerSet> values(carrier.size(), set);
  return NSPredicate(std::move(carrier), std::move(values));
}

const RealizerSet& NSPredicate::at(const std::string& label) const {
  return values_.at(carrier_.index_of(label));
}

bool NSPredicate::all_explicit() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const auto& s) { return s.is_explicit(); });
}

NSPredicate NSPredicate::with_provenance(Provenance p) const {
  NSPredicate out = *this;
  out.provenance_ = std::make_shared<const Provenance>(std::move(p));
  return out;
}

std::string NSPredicate::to_string() const {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out << (i ? "; " : "") << carrier_.label(i) << ": "
        << values_[i].to_string();
  }
  out << "}";
  return out.str();
}

NSPredicate connective(Connective kind, const NSPredicate& a,
                       const NSPredicate& b) {
  if (kind == Connective::kTop) {
    return NSPredicate::constant(a.carrier(), RealizerSet::all());
  }
  if (kind == Connective::kBot) {
    return NSPredicate::constant(a.carrier(), RealizerSet::empty());
  }
  if (!(a.carrier() == b.carrier())) {
    throw ModelError("connective over different carriers");
  }
  std::vector<RealizerSet> values;
  values.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (kind) {
      case Connective::kConj: values.push_back(conj(a[i], b[i])); break;
      case Connective::kDisj: values.push_back(disj(a[i], b[i])); break;
      default: values.push_back(impl(a[i], b[i])); break;
    }
  }
  return NSPredicate(a.carrier(), std::move(values))
      .with_provenance({kind, std::make_shared<const NSPredicate>(a),
                        std::make_shared<const NSPredicate>(b)});
}

NSPredicate reindex(const NSPredicate& p, Carrier target,
                    const std::function<std::size_t(std::size_t)>& source_index) {
  std::vector<RealizerSet> values;
  values.reserve(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    values.push_back(p[source_index(i)]);
  }
  return NSPredicate(std::move(target), std::move(values));
}

NSPredicate top(const Carrier& c) {
  return NSPredicate::constant(c, RealizerSet::all());
}
NSPredicate bot(const Carrier& c) {
  return NSPredicate::constant(c, RealizerSet::empty());
}
NSPredicate conj(const NSPredicate& a, const NSPredicate& b) {
  return connective(Connective::kConj, a, b);
}
NSPredicate disj(const NSPredicate& a, const NSPredicate& b) {
  return connective(Connective::kDisj, a, b);
}
NSPredicate impl(const NSPredicate& a, const NSPredicate& b) {
  return connective(Connective::kImpl, a, b);
}

// ---------------------------------------------------------------------------
// Verdicts

Verdict Verdict::make_valid(Code c, std::string tactic, bool sampled,
                            StepBudget b) {
  Verdict v;
  v.kind = Kind::kValid;
  v.certificate = std::move(c);
  v.tactic = std::move(tactic);
  v.sampled = sampled;
  v.budget = b;
  return v;
}

Verdict Verdict::make_refuted(std::optional<std::size_t> label,
                              std::optional<Nat> realizer, StepBudget b) {
  Verdict v;
  v.kind = Kind::kRefuted;
  v.witness_label = label;
  v.witness_realizer = std::move(realizer);
  v.budget = b;
  return v;
}

Verdict Verdict::make_unknown(StepBudget b) {
  Verdict v;
  v.budget = b;
  return v;
}

std::string Verdict::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kValid:
      out << "Valid(" << certificate->index << " "
          << Combinator::decode(*certificate).to_string() << ", " << tactic
          << (sampled ? ", sampled" : "") << ")";
      break;
    case Kind::kRefuted:
      out << "Refuted(";
      if (witness_label) out << "label #" << *witness_label;
      if (witness_realizer) out << ", realizer " << *witness_realizer;
      out << ")";
      break;
    case Kind::kUnknown:
      out << "Unknown(budget " << budget.max_steps << ")";
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Search

std::optional<Nat> first_accepted(
    std::uint64_t bound, unsigned jobs,
    const std::function<bool(const Nat&)>& accept) {
  if (jobs <= 1) {
    for (std::uint64_t i = 0; i <= bound; ++i) {
      if (accept(Nat(i))) return Nat(i);
    }
    return std::nullopt;
  }
  constexpr std::uint64_t kBlock = 256;
  for (std::uint64_t start = 0; start <= bound; start += kBlock) {
    const std::uint64_t stop = std::min(bound + 1, start + kBlock);
    std::atomic<std::uint64_t> best{stop};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&, t] {
        for (std::uint64_t i = start + t; i < stop && i < best.load();
             i += jobs) {
          if (accept(Nat(i))) {
            std::uint64_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            return;
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (best.load() < stop) return Nat(best.load());
  }
  return std::nullopt;
}

namespace {

using Lists = std::vector<MemberList>;

Lists antecedent_lists(const NSPredicate& a, const SearchConfig& cfg) {
  Lists lists;
  lists.reserve(a.size());
  for (const auto& s : a.values()) lists.push_back(s.members(cfg));
  return lists;
}

Membership check_code(const Lists& lists, const NSPredicate& b,
                      const Code& code, const SearchConfig& cfg) {
  bool unknown = false;
  bool inexact_no = false;
  bool exact = true;
  for (std::size_t x = 0; x < lists.size(); ++x) {
    const MemberList& list = lists[x];
    exact = exact && list.complete && list.exact;
    for (const auto& m : list.items) {
      auto out = substrate::apply(code, m, cfg.budget);
      if (!out.is_halted()) {
        unknown = true;
        continue;
      }
      Membership r = b[x].contains(out.value(), cfg);
      if (r.no()) {
        if (r.exact && list.exact) return {Truth::kNo, true};
        inexact_no = true;
      } else if (r.truth == Truth::kUnknown) {
        unknown = true;
      }
      exact = exact && r.exact;
    }
  }
  if (unknown) return {Truth::kUnknown, false};
  if (inexact_no) return {Truth::kNo, false};
  return {Truth::kYes, exact};
}

std::optional<Verdict> synthesize(const NSPredicate& a, const NSPredicate& b,
                                  const SearchConfig& cfg, unsigned depth);

class Ladder {
 public:
  Ladder(const NSPredicate& a, const NSPredicate& b, const SearchConfig& cfg,
         unsigned depth)
      : a_(a), b_(b), cfg_(cfg), depth_(depth), lists_(antecedent_lists(a, cfg)) {}

  const Lists& lists() const { return lists_; }

  std::optional<Verdict> refute() const {
    for (std::size_t x = 0; x < lists_.size(); ++x) {
      const MemberList& l = lists_[x];
      if (!l.items.empty() && l.exact && b_[x].known_empty(cfg_)) {
        return Verdict::make_refuted(x, l.items.front(), cfg_.budget);
      }
    }
    // A <= B1 => C1 is realized iff A /\ B1 <= C1 is (curry / uncurry), so a
    // refutation of the latter refutes the former at the same label.
    const Provenance* pb = b_.provenance();
    if (pb && pb->op == Connective::kImpl && exact_domain()) {
      Ladder uncurried(conj(a_, *pb->lhs), *pb->rhs, cfg_, 0);
      if (auto v = uncurried.refute()) {
        std::optional<Nat> r;
        if (v->witness_realizer) r = substrate::unpair(*v->witness_realizer).first;
        return Verdict::make_refuted(v->witness_label, r, cfg_.budget);
      }
    }
    if (!exact_domain() || !b_.all_explicit()) return std::nullopt;
    for (const auto& [m, owners] : owners_by_realizer()) {
      if (common_targets(owners).empty()) {
        return Verdict::make_refuted(owners.front(), m, cfg_.budget);
      }
    }
    return std::nullopt;
  }

  std::optional<Verdict> run() {
    const bool vacuous = std::all_of(lists_.begin(), lists_.end(), [](auto& l) {
      return l.items.empty() && l.complete;
    });
    if (vacuous && try_code("vacuous", Combinator::id())) return hit_;
    const bool top_target = std::all_of(
        b_.values().begin(), b_.values().end(),
        [](const auto& s) { return s.is_all(); });
    if (top_target && try_code("top", Combinator::constant(0))) return hit_;
    for (const auto& [name, code] : cfg_.hints) {
      if (try_code(name, Combinator::decode(code))) return hit_;
    }
    if (try_code("identity", Combinator::id())) return hit_;
    if (try_constants()) return hit_;
    if (try_structural()) return hit_;
    if (depth_ > 0 && try_provenance()) return hit_;
    if (try_table()) return hit_;
    return std::nullopt;
  }

  std::optional<Verdict> enumerate() {
    auto found = first_accepted(cfg_.code_bound, cfg_.jobs, [&](const Nat& n) {
      return check_code(lists_, b_, Code{n}, cfg_).yes();
    });
    if (!found) return std::nullopt;
    Membership m = check_code(lists_, b_, Code{*found}, cfg_);
    return Verdict::make_valid(Code{*found}, "enumeration", !m.exact,
                               cfg_.budget);
  }

 private:
  bool try_code(const std::string& tactic, const Combinator& c) {
    const Code code = substrate::build_code(c);
    Membership m = check_code(lists_, b_, code, cfg_);
    if (!m.yes()) return false;
    hit_ = Verdict::make_valid(code, tactic, !m.exact, cfg_.budget);
    return true;
  }

  bool try_constants() {
    if (b_.size() == 0) return false;
    MemberList targets = b_[0].members(cfg_);
    std::size_t tried = 0;
    for (const auto& k : targets.items) {
      if (tried++ >= 16) break;
      if (try_code("constant", Combinator::constant(k))) return true;
    }
    return false;
  }

  bool try_structural() {
    using C = Combinator;
    const std::vector<std::pair<const char*, C>> generic = {
        {"first", C::fst()},
        {"second", C::snd()},
        {"swap", C::pair_with(C::snd(), C::fst())},
        {"left injection", C::pair_with(C::constant(0), C::id())},
        {"right injection", C::pair_with(C::constant(1), C::id())},
        {"diagonal", C::pair_with(C::id(), C::id())},
        {"modus ponens", C::apply(C::fst(), C::snd())},
        {"first of first", C::compose(C::fst(), C::fst())},
        {"second of first", C::compose(C::snd(), C::fst())},
        {"first of second", C::compose(C::fst(), C::snd())},
        {"second of second", C::compose(C::snd(), C::snd())},
        {"pair with zero", C::pair_with(C::id(), C::constant(0))},
        {"zero pair", C::pair_with(C::constant(0), C::id())},
    };
    for (const auto& [name, c] : generic) {
      if (try_code(name, c)) return true;
    }
    return false;
  }

  std::optional<Combinator> sub(const NSPredicate& a, const NSPredicate& b) {
    auto v = synthesize(a, b, cfg_, depth_ - 1);
    if (!v || !v->valid()) return std::nullopt;
    return Combinator::decode(*v->certificate);
  }

  bool try_provenance() {
    using C = Combinator;
    const Provenance* pa = a_.provenance();
    const Provenance* pb = b_.provenance();
    if (pb && pb->op == Connective::kImpl) {
      // Currying: A /\ B1 <= C1 gives A <= B1 => C1.
      if (auto r = sub(conj(a_, *pb->lhs), *pb->rhs)) {
        if (try_code("curry", C::smn(*r, C::id()))) return true;
      }
    }
    if (pa && pa->op == Connective::kConj) {
      // Uncurrying: A1 <= A2 => B gives A1 /\ A2 <= B.
      if (auto q = sub(*pa->lhs, impl(*pa->rhs, b_))) {
        if (try_code("uncurry",
                     C::apply(C::compose(*q, C::fst()), C::snd()))) {
          return true;
        }
      }
      if (auto p = sub(*pa->lhs, b_)) {
        if (try_code("project first", C::compose(*p, C::fst()))) return true;
      }
      if (auto p = sub(*pa->rhs, b_)) {
        if (try_code("project second", C::compose(*p, C::snd()))) return true;
      }
    }
    if (pb && pb->op == Connective::kConj) {
      auto p = sub(a_, *pb->lhs);
      auto q = p ? sub(a_, *pb->rhs) : std::nullopt;
      if (p && q && try_code("pairing", C::pair_with(*p, *q))) return true;
    }
    if (pa && pa->op == Connective::kDisj) {
      auto p = sub(*pa->lhs, b_);
      auto q = p ? sub(*pa->rhs, b_) : std::nullopt;
      if (p && q && try_code("case", C::case_of(*p, *q))) return true;
    }
    if (pb && pb->op == Connective::kDisj) {
      if (auto p = sub(a_, *pb->lhs)) {
        if (try_code("inject left", C::pair_with(C::constant(0), *p))) {
          return true;
        }
      }
      if (auto q = sub(a_, *pb->rhs)) {
        if (try_code("inject right", C::pair_with(C::constant(1), *q))) {
          return true;
        }
      }
    }
    return false;
  }

  bool exact_domain() const {
    return std::all_of(lists_.begin(), lists_.end(),
                       [](auto& l) { return l.complete && l.exact; });
  }

  std::map<Nat, std::vector<std::size_t>> owners_by_realizer() const {
    std::map<Nat, std::vector<std::size_t>> owners;
    for (std::size_t x = 0; x < lists_.size(); ++x) {
      for (const auto& m : lists_[x].items) owners[m].push_back(x);
    }
    return owners;
  }

  // Intersection of the explicit consequents over `owners`.
  std::set<Nat> common_targets(const std::vector<std::size_t>& owners) const {
    std::set<Nat> acc = b_[owners.front()].elements();
    for (std::size_t i = 1; i < owners.size(); ++i) {
      std::set<Nat> next;
      for (const auto& e : acc) {
        if (b_[owners[i]].elements().count(e)) next.insert(e);
      }
      acc = std::move(next);
    }
    return acc;
  }

  std::optional<Nat> common_target(const std::vector<std::size_t>& owners) {
    std::vector<std::size_t> explicit_owners;
    for (auto x : owners) {
      if (b_[x].is_explicit()) explicit_owners.push_back(x);
    }
    std::vector<Nat> candidates;
    if (!explicit_owners.empty()) {
      auto common = common_targets(explicit_owners);
      candidates.assign(common.begin(), common.end());
    } else {
      candidates = b_[owners.front()].members(cfg_).items;
    }
    for (const auto& v : candidates) {
      bool ok = true;
      for (auto x : owners) {
        if (!b_[x].contains(v, cfg_).yes()) {
          ok = false;
          break;
        }
      }
      if (ok) return v;
    }
    return std::nullopt;
  }

  bool try_table() {
    if (!std::all_of(lists_.begin(), lists_.end(),
                     [](auto& l) { return l.complete; })) {
      return false;
    }
    std::map<Nat, Nat> entries;
    for (const auto& [m, owners] : owners_by_realizer()) {
      auto v = common_target(owners);
      if (!v) return false;
      entries.emplace(m, *v);
    }
    return try_code("table", Combinator::table(entries, 0));
  }

  const NSPredicate& a_;
  const NSPredicate& b_;
  SearchConfig cfg_;
  unsigned depth_;
  Lists lists_;
  Verdict hit_;
};

std::optional<Verdict> synthesize(const NSPredicate& a, const NSPredicate& b,
                                  const SearchConfig& cfg, unsigned depth) {
  SearchConfig inner = cfg;
  inner.hints.clear();
  Ladder ladder(a, b, inner, depth);
  if (auto r = ladder.refute()) return r;
  return ladder.run();
}

}  // namespace

Membership verify_entailment(const NSPredicate& a, const NSPredicate& b,
                             const Code& code, const SearchConfig& cfg) {
  if (!(a.carrier() == b.carrier())) {
    throw ModelError("entailment over different carriers");
  }
  return check_code(antecedent_lists(a, cfg), b, code, cfg);
}

Verdict entails(const NSPredicate& a, const NSPredicate& b,
                const SearchConfig& cfg) {
  if (!(a.carrier() == b.carrier())) {
    throw ModelError("entailment over different carriers");
  }
  Ladder ladder(a, b, cfg, cfg.tactic_depth);
  if (auto r = ladder.refute()) return *r;
  if (auto r = ladder.run()) return *r;
  if (cfg.enumerate) {
    if (auto r = ladder.enumerate()) return *r;
  }
  return Verdict::make_unknown(cfg.budget);
}

Membership verify_valid(const NSPredicate& a, const Nat& n,
                        const SearchConfig& cfg) {
  std::vector<Membership> parts;
  for (const auto& s : a.values()) {
    Membership m = s.contains(n, cfg);
    if (m.no() && m.exact) return m;
    parts.push_back(m);
  }
  return all_of(parts);
}

Verdict valid(const NSPredicate& a, const SearchConfig& cfg) {
  if (a.size() == 0) {
    return Verdict::make_valid(Code{0}, "empty carrier", false, cfg.budget);
  }
  if (a.all_explicit()) {
    std::set<Nat> acc = a[0].elements();
    for (std::size_t x = 0; x < a.size(); ++x) {
      std::set<Nat> next;
      for (const auto& e : acc) {
        if (a[x].elements().count(e)) next.insert(e);
      }
      acc = std::move(next);
      if (acc.empty()) return Verdict::make_refuted(x, std::nullopt, cfg.budget);
    }
    return Verdict::make_valid(Code{*acc.begin()}, "intersection", false,
                               cfg.budget);
  }
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x].known_empty(cfg)) {
      return Verdict::make_refuted(x, std::nullopt, cfg.budget);
    }
  }
  const RealizerSet* source = nullptr;
  for (const auto& s : a.values()) {
    if (s.is_all()) continue;
    if (!source || (s.is_explicit() && !source->is_explicit())) source = &s;
  }
  if (!source) {
    return Verdict::make_valid(Code{0}, "intersection", false, cfg.budget);
  }
  for (const auto& n : valid_guesses()) {
    Membership m = verify_valid(a, n, cfg);
    if (m.yes() && m.exact) {
      return Verdict::make_valid(Code{n}, "intersection", false, cfg.budget);
    }
  }
  MemberList candidates = source->members(cfg);
  for (const auto& n : candidates.items) {
    Membership m = verify_valid(a, n, cfg);
    if (m.yes()) {
      return Verdict::make_valid(Code{n}, "intersection", !m.exact,
                                 cfg.budget);
    }
  }
  if (candidates.complete && candidates.exact) {
    // Every member of the source was checked and none lies in all the others.
    bool all_decided = true;
    for (const auto& n : candidates.items) {
      Membership m = verify_valid(a, n, cfg);
      all_decided = all_decided && m.no() && m.exact;
    }
    if (all_decided) return Verdict::make_refuted(std::nullopt, std::nullopt, cfg.budget);
  }
  if (cfg.enumerate) {
    auto found = first_accepted(cfg.code_bound, cfg.jobs, [&](const Nat& n) {
      return verify_valid(a, n, cfg).yes();
    });
    if (found) {
      Membership m = verify_valid(a, *found, cfg);
      return Verdict::make_valid(Code{*found}, "enumeration", !m.exact,
                                 cfg.budget);
    }
  }
  return Verdict::make_unknown(cfg.budget);
}

std::pair<Verdict, Verdict> equiv(const NSPredicate& a, const NSPredicate& b,
                                  const SearchConfig& cfg) {
  return {entails(a, b, cfg), entails(b, a, cfg)};
}

}  // namespace efft::heyting
