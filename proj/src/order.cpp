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

#include "efft/order.hpp"

#include <algorithm>
#include <numeric>

namespace efft::order {

using heyting::Carrier;
using heyting::Membership;
using heyting::RealizerSet;
using heyting::Truth;
using substrate::Combinator;
using substrate::kMaxPairExponent;
using C = Combinator;
using Kind = logic::Formula::Kind;

NotProgressive::NotProgressive(std::size_t witness)
    : ModelError("map is not progressive at " + std::to_string(witness)),
      witness_(witness) {}

NotMonotone::NotMonotone(std::size_t x, std::size_t y)
    : ModelError("map is not monotone at " + std::to_string(x) + " <= " +
                 std::to_string(y)),
      x_(x),
      y_(y) {}

ClassicallyFalse::ClassicallyFalse(std::string witness)
    : ModelError("formula is false in the Set model" +
                 (witness.empty() ? std::string() : " at " + witness)),
      witness_(std::move(witness)) {}

// ---------------------------------------------------------------------------
// FinitePoset

FinitePoset::FinitePoset(std::vector<std::string> labels,
                         std::vector<std::vector<bool>> leq)
    : labels_(std::move(labels)), leq_(std::move(leq)) {
  const std::size_t n = labels_.size();
  if (leq_.size() != n) throw ModelError("order matrix has the wrong size");
  for (const auto& row : leq_) {
    if (row.size() != n) throw ModelError("order matrix has the wrong size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq_[i][i]) throw ModelError("not reflexive at " + labels_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq_[i][j] && leq_[j][i]) {
        throw ModelError("not antisymmetric at " + labels_[i] + ", " +
                         labels_[j]);
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (leq_[i][j] && leq_[j][k] && !leq_[i][k]) {
          throw ModelError("not transitive at " + labels_[i] + ", " +
                           labels_[j] + ", " + labels_[k]);
        }
      }
    }
  }
}

FinitePoset FinitePoset::chain(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = i; j < n; ++j) leq[i][j] = true;
  }
  return FinitePoset(std::move(labels), std::move(leq));
}

FinitePoset FinitePoset::from_relations(
    std::vector<std::string> labels,
    const std::vector<std::pair<std::size_t, std::size_t>>& less) {
  const std::size_t n = labels.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : less) leq.at(a).at(b) = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
      }
    }
  }
  return FinitePoset(std::move(labels), std::move(leq));
}

std::size_t FinitePoset::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ModelError("unknown element '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::optional<std::size_t> FinitePoset::least() const {
  for (std::size_t i = 0; i < size(); ++i) {
    bool below_all = true;
    for (std::size_t j = 0; j < size(); ++j) below_all = below_all && leq_[i][j];
    if (below_all) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FinitePoset::greatest() const {
  for (std::size_t i = 0; i < size(); ++i) {
    bool above_all = true;
    for (std::size_t j = 0; j < size(); ++j) above_all = above_all && leq_[j][i];
    if (above_all) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FinitePoset::sup(
    const std::vector<std::size_t>& subset) const {
  std::vector<std::size_t> upper;
  for (std::size_t z = 0; z < size(); ++z) {
    bool bound = true;
    for (auto y : subset) bound = bound && leq_[y][z];
    if (bound) upper.push_back(z);
  }
  for (auto z : upper) {
    bool least = true;
    for (auto w : upper) least = least && leq_[z][w];
    if (least) return z;
  }
  return std::nullopt;
}

std::optional<std::size_t> FinitePoset::inf(
    const std::vector<std::size_t>& subset) const {
  std::vector<std::size_t> lower;
  for (std::size_t z = 0; z < size(); ++z) {
    bool bound = true;
    for (auto y : subset) bound = bound && leq_[z][y];
    if (bound) lower.push_back(z);
  }
  for (auto z : lower) {
    bool greatest = true;
    for (auto w : lower) greatest = greatest && leq_[w][z];
    if (greatest) return z;
  }
  return std::nullopt;
}

bool FinitePoset::is_chain(const std::vector<std::size_t>& subset) const {
  for (auto x : subset) {
    for (auto y : subset) {
      if (!leq_[x][y] && !leq_[y][x]) return false;
    }
  }
  return true;
}

bool FinitePoset::total() const {
  std::vector<std::size_t> all(size());
  std::iota(all.begin(), all.end(), 0);
  return is_chain(all);
}

bool FinitePoset::is_lattice() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (!sup({i, j}) || !inf({i, j})) return false;
    }
  }
  return true;
}

std::size_t FinitePoset::meet(std::size_t i, std::size_t j) const {
  auto m = inf({i, j});
  if (!m) throw ModelError("no meet of " + label(i) + " and " + label(j));
  return *m;
}

std::size_t FinitePoset::join(std::size_t i, std::size_t j) const {
  auto m = sup({i, j});
  if (!m) throw ModelError("no join of " + label(i) + " and " + label(j));
  return *m;
}

bool FinitePoset::is_distributive() const {
  if (!is_lattice()) return false;
  for (std::size_t x = 0; x < size(); ++x) {
    for (std::size_t y = 0; y < size(); ++y) {
      for (std::size_t z = 0; z < size(); ++z) {
        if (join(meet(x, y), z) != meet(join(x, z), join(y, z))) return false;
        if (meet(join(x, y), z) != join(meet(x, z), meet(y, z))) return false;
      }
    }
  }
  return true;
}

bool FinitePoset::monotone(const Endomap& f) const {
  for (std::size_t x = 0; x < size(); ++x) {
    for (std::size_t y = 0; y < size(); ++y) {
      if (leq_[x][y] && !leq_[f.at(x)][f.at(y)]) return false;
    }
  }
  return true;
}

bool FinitePoset::progressive(const Endomap& f) const {
  for (std::size_t x = 0; x < size(); ++x) {
    if (!leq_[x][f.at(x)]) return false;
  }
  return true;
}

std::string FinitePoset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (i != j && leq_[i][j]) {
        out += (first ? "" : ", ") + labels_[i] + "<" + labels_[j];
        first = false;
      }
    }
  }
  return out + "} on " + std::to_string(size()) + " elements";
}

std::vector<FinitePoset> posets_up_to_iso(std::size_t n) {
  if (n > 6) throw ModelError("poset enumeration is limited to 6 elements");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  }
  std::vector<std::size_t> perm(n);
  std::vector<std::vector<std::size_t>> perms;
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::set<std::vector<bool>> seen;
  std::vector<FinitePoset> out;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    // Every poset has a linear extension, so strict relations between
    // increasing indices cover all isomorphism classes.
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask >> s & 1) less[slots[s].first][slots[s].second] = true;
    }
    bool transitive = true;
    for (std::size_t i = 0; i < n && transitive; ++i) {
      for (std::size_t j = 0; j < n && transitive; ++j) {
        for (std::size_t k = 0; k < n && transitive; ++k) {
          if (less[i][j] && less[j][k] && !less[i][k]) transitive = false;
        }
      }
    }
    if (!transitive) continue;
    std::vector<bool> key;
    for (const auto& p : perms) {
      std::vector<bool> image(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) image[p[i] * n + p[j]] = less[i][j];
      }
      if (key.empty() || image < key) key = std::move(image);
    }
    if (!seen.insert(key).second) continue;
    for (std::size_t i = 0; i < n; ++i) less[i][i] = true;
    out.emplace_back(labels, less);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed points in Set

namespace {

void require_progressive(const FinitePoset& p, const Endomap& f) {
  if (f.size() != p.size()) throw ModelError("map is not defined on the poset");
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (f[x] >= p.size()) throw ModelError("map leaves the poset");
    if (!p.leq(x, f[x])) throw NotProgressive(x);
  }
}

}  // namespace

std::size_t bw_iterate(const FinitePoset& p, const Endomap& f,
                       std::size_t start) {
  require_progressive(p, f);
  if (start >= p.size()) throw ModelError("start is not in the poset");
  std::size_t x = start;
  // Strictly ascending until fixed, so at most |P| steps.
  while (f[x] != x) x = f[x];
  return x;
}

std::size_t tarski_lfp(const FinitePoset& p, const Endomap& f) {
  if (f.size() != p.size()) throw ModelError("map is not defined on the poset");
  if (!p.is_lattice()) throw ModelError("not a lattice");
  auto bottom = p.least();
  if (!bottom) throw ModelError("lattice has no least element");
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (f[x] >= p.size()) throw ModelError("map leaves the poset");
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (p.leq(x, y) && !p.leq(f[x], f[y])) throw NotMonotone(x, y);
    }
  }
  // Kleene ascent: ⊥ ≤ f(⊥) ≤ f²(⊥) ≤ ... stays below every fixed point.
  std::size_t x = *bottom;
  while (f[x] != x) x = f[x];
  return x;
}

DacarRun dacar_reduce(const FinitePoset& p, const Endomap& f,
                      std::size_t start) {
  require_progressive(p, f);
  if (start >= p.size()) throw ModelError("start is not in the poset");
  DacarRun run;
  std::vector<std::size_t> chain{start};
  for (;;) {
    run.chains.push_back(chain);
    // An inhabited finite chain has its maximum as supremum.
    auto top = p.sup(chain);
    if (!top) throw ModelError("chain without supremum");
    const std::size_t next = f[*top];
    if (std::find(chain.begin(), chain.end(), next) != chain.end()) {
      run.fixed_point = *top;
      break;
    }
    chain.push_back(next);
    std::sort(chain.begin(), chain.end());
  }
  if (f[run.fixed_point] != run.fixed_point) {
    throw ModelError("supremum of the fixed chain is not a fixed point");
  }
  return run;
}

// ---------------------------------------------------------------------------
// Internal posets

namespace {

NSPredicate on_square(const EffObject& x, const NSPredicate& p) {
  return NSPredicate(Carrier::product(x.carrier(), x.carrier()), p.values());
}

}  // namespace

InternalPoset internal_poset(const EffObject& object, const NSPredicate& leq,
                             const SearchConfig& cfg) {
  const std::size_t n = object.size();
  if (leq.size() != n * n) {
    throw ModelError("order is not defined on the square of the carrier");
  }
  const NSPredicate le = on_square(object, leq);
  topos::validate_relation(object, object, le, cfg);

  const Carrier& x = object.carrier();
  const Carrier xx = Carrier::product(x, x);
  const Carrier xxx = Carrier::product(xx, x);
  auto diag = heyting::reindex(le, x, [n](std::size_t i) { return i * n + i; });
  auto ij = heyting::reindex(le, xxx, [n](std::size_t k) { return k / n; });
  auto jk = heyting::reindex(le, xxx, [n](std::size_t k) { return k % (n * n); });
  auto ik = heyting::reindex(le, xxx, [n](std::size_t k) {
    return (k / (n * n)) * n + k % n;
  });
  auto ji = heyting::reindex(le, xx, [n](std::size_t k) {
    return (k % n) * n + k / n;
  });
  InternalPoset out{object,
                    le,
                    topos::certify("reflexivity", object.existence(), diag, cfg),
                    topos::certify("transitivity", heyting::conj(ij, jk), ik, cfg),
                    topos::certify("antisymmetry", heyting::conj(le, ji),
                                   NSPredicate(xx, object.eq().values()), cfg),
                    std::nullopt};
  return out;
}

InternalPoset nabla_poset(const FinitePoset& p, const SearchConfig& cfg) {
  EffObject object = topos::nabla("L", p.labels(), cfg);
  std::vector<RealizerSet> values;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      values.push_back(p.leq(i, j) ? RealizerSet::all() : RealizerSet::empty());
    }
  }
  InternalPoset out = internal_poset(
      object, NSPredicate(Carrier::product(object.carrier(), object.carrier()),
                          values),
      cfg);
  out.base = p;
  return out;
}

NSPredicate notnot(const NSPredicate& a) {
  const NSPredicate bot = heyting::bot(a.carrier());
  return heyting::impl(heyting::impl(a, bot), bot);
}

Verdict notnot_stable(const InternalPoset& l, const SearchConfig& cfg) {
  return heyting::entails(notnot(l.leq), l.leq, cfg);
}

std::pair<NSPredicate, NSPredicate> chain_statement(const InternalPoset& l,
                                                    const NSPredicate& c,
                                                    const SearchConfig& cfg) {
  const std::size_t n = l.object.size();
  if (c.size() != n) throw ModelError("chain is not defined on the poset");
  const NSPredicate chain(l.object.carrier(), c.values());
  topos::validate_predicate(l.object, chain, cfg);
  const Carrier xx = Carrier::product(l.object.carrier(), l.object.carrier());
  auto cx = heyting::reindex(chain, xx, [n](std::size_t k) { return k / n; });
  auto cy = heyting::reindex(chain, xx, [n](std::size_t k) { return k % n; });
  auto yx = heyting::reindex(l.leq, xx, [n](std::size_t k) {
    return (k % n) * n + k / n;
  });
  return {heyting::conj(cx, cy), heyting::disj(l.leq, yx)};
}

ChainCertificate chain_certify(const InternalPoset& l, const NSPredicate& c,
                               const SearchConfig& cfg) {
  auto [lhs, rhs] = chain_statement(l, c, cfg);
  return {NSPredicate(l.object.carrier(), c.values()),
          heyting::entails(lhs, rhs, cfg)};
}

// ---------------------------------------------------------------------------
// Bounds and suprema as interpreted formulas

namespace {

const char* kBound = "forall y:L. A(y) -> le(y, x)";
const char* kLeast =
    "forall y:L. (forall z:L. A(z) -> le(z, y)) -> le(x, y)";

// Interpretations of the bound and least-bound clauses at x.
struct SupParts {
  RealizerSet bound;
  RealizerSet least;
};

SupParts sup_parts(const InternalPoset& l, std::size_t x, const NSPredicate& a,
                   const SearchConfig& cfg) {
  if (a.size() != l.object.size()) {
    throw ModelError("subset is not defined on the poset");
  }
  if (x >= l.object.size()) throw ModelError("element is not in the poset");
  logic::Model m;
  m.add_object(l.object.renamed("L"));
  m.add_predicate("le", {"L", "L"}, l.leq, cfg);
  m.add_predicate("A", {"L"}, a, cfg);
  const std::vector<logic::Variable> ctx{{"x", "L"}};
  auto bound = logic::interpret(logic::parse(kBound), m, ctx);
  auto least = logic::interpret(logic::parse(kLeast), m, ctx);
  return {bound.predicate[x], least.predicate[x]};
}

Verdict valid_set(const RealizerSet& s, const SearchConfig& cfg) {
  return heyting::valid(NSPredicate(Carrier({"*"}), {s}), cfg);
}

}  // namespace

RealizerSet sup_set(const InternalPoset& l, std::size_t x, const NSPredicate& a,
                    const SearchConfig& cfg) {
  SupParts parts = sup_parts(l, x, a, cfg);
  return heyting::conj(parts.bound, parts.least);
}

BoundSup bound_and_sup(const InternalPoset& l, std::size_t x,
                       const NSPredicate& a, const SearchConfig& cfg) {
  SupParts parts = sup_parts(l, x, a, cfg);
  return {valid_set(parts.bound, cfg),
          valid_set(heyting::conj(parts.bound, parts.least), cfg)};
}

namespace {

struct TransferParts {
  C bound;  // <p, q> -> realizer of bound(x, A)
  C least;  // <p, q> -> realizer of ∀y. bound(y, A) ⇒ x ≤ y
};

TransferParts transfer_parts(const Code& stability) {
  using topos::projection;
  // a -> code of λk. φ_k(a)
  const C dni = C::smn(C::apply(C::snd(), C::fst()), C::id());
  // b -> code of λa. φ_b(dni(a)): bound(x, ¬¬A) to bound(x, A).
  const C to_a = C::smn(C::apply(C::fst(), C::compose(dni, C::snd())), C::id());
  // b -> code of λn. s(λk. n(λa. k(b(a)))): bound(x, A) to bound(x, ¬¬A).
  const C body_l =
      C::apply(projection("FS"), C::apply(projection("FF"), C::snd()));
  const C body_k = C::apply(projection("FS"),
                            C::smn(body_l, C::pair_with(projection("FF"), C::snd())));
  const C body_n =
      C::apply(C::constant(stability.index), C::smn(body_k, C::id()));
  const C to_cl = C::smn(body_n, C::id());
  // q -> code of λc. q(to_cl(c))
  const C least = C::smn(C::apply(C::fst(), C::compose(to_cl, C::snd())), C::snd());
  return {C::compose(to_a, C::fst()), least};
}

}  // namespace

substrate::Combinator sup_transfer_combinator(const Code& stability) {
  TransferParts parts = transfer_parts(stability);
  return C::pair_with(parts.bound, parts.least);
}

Verdict sup_transfer(const InternalPoset& l, const Code& stability,
                     const NSPredicate& a, std::size_t x,
                     const Code& sup_of_cl, const SearchConfig& cfg) {
  auto failed = [&](const std::string& step) {
    Verdict v = Verdict::make_unknown(cfg.budget);
    v.tactic = "transfer failed: " + step;
    return v;
  };
  // The components are run one at a time: the pair of two built codes is
  // usually beyond the pairing limit.
  const TransferParts t = transfer_parts(stability);
  auto p = substrate::apply(substrate::build_code(t.bound), sup_of_cl.index,
                            cfg.budget);
  auto q = substrate::apply(substrate::build_code(t.least), sup_of_cl.index,
                            cfg.budget);
  if (!p.is_halted() || !q.is_halted()) return failed("composition");
  SupParts parts = sup_parts(l, x, a, cfg);
  const Membership first = parts.bound.contains(p.value(), cfg);
  if (!first.yes()) return failed("bound(x, cl A) => bound(x, A)");
  const Membership second = parts.least.contains(q.value(), cfg);
  if (!second.yes()) return failed("bound(y, A) => bound(y, cl A) => x <= y");
  const bool sampled = !(first.exact && second.exact);
  if (p.value() <= kMaxPairExponent) {
    return Verdict::make_valid(Code{substrate::pair(p.value(), q.value())},
                               "transfer", sampled, cfg.budget);
  }
  // Too large to materialize: certified by the transfer code itself, whose
  // components were checked separately.
  return Verdict::make_valid(
      substrate::build_code(C::pair_with(t.bound, t.least)),
      "transfer (constructed)", sampled, cfg.budget);
}

// ---------------------------------------------------------------------------
// Chains are discrete

Constancy chain_constancy(const InternalPoset& l, const ChainCertificate& c,
                          std::size_t u, std::size_t v, const Nat& r,
                          const SearchConfig& cfg) {
  const std::size_t n = l.object.size();
  if (!c.valid()) throw PreconditionViolated("chain certificate is not valid");
  if (u >= n || v >= n) throw ModelError("element is not in the poset");
  if (!c.chain[u].contains(r, cfg).yes() || !c.chain[v].contains(r, cfg).yes()) {
    throw PreconditionViolated("realizer " + r.str() +
                               " does not witness f(p) in C for every p");
  }
  // x ∈ C ∧ y ∈ C realized by <r, r> for every x, y in the image of f.
  auto s = substrate::apply(*c.verdict.certificate, substrate::pair(r, r),
                            cfg.budget);
  if (!s.is_halted()) throw ModelError("chain realizer diverged");

  // For each q, split ∀p. f(p) ≤ f(q) ∨ f(q) ≤ f(p).
  const std::size_t f[2] = {u, v};
  const Carrier two({"0", "1"});
  std::optional<discrete::Split> split;
  for (std::size_t q = 0; q < 2; ++q) {
    std::vector<RealizerSet> phi, psi;
    for (std::size_t p = 0; p < 2; ++p) {
      phi.push_back(l.leq[f[p] * n + f[q]]);
      psi.push_back(l.leq[f[q] * n + f[p]]);
    }
    discrete::Split here = discrete::uniformity_split(
        s.value(), NSPredicate(two, phi), NSPredicate(two, psi), cfg);
    if (split && (split->tag != here.tag || split->body != here.body)) {
      throw ModelError("splits disagree");
    }
    split = here;
  }
  // Either side gives both u ≤ v and v ≤ u; antisymmetry gives [u = v].
  auto e = substrate::apply(l.antisymmetry.realizer,
                            substrate::pair(split->body, split->body),
                            cfg.budget);
  if (!e.is_halted() || !l.object.eq(u, v).contains(e.value(), cfg).yes()) {
    throw ModelError("antisymmetry step does not realize " +
                     l.object.carrier().label(u) + " = " +
                     l.object.carrier().label(v));
  }
  return {u, v, r, split->tag, split->body, e.value()};
}

ChainDiscreteness chain_discrete(const InternalPoset& l,
                                 const ChainCertificate& c,
                                 const SearchConfig& cfg) {
  if (!c.valid()) throw PreconditionViolated("chain certificate is not valid");
  ChainDiscreteness out;
  const std::size_t n = l.object.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& r : c.chain[u].elements()) {
        if (!c.chain[v].elements().count(r)) continue;
        try {
          out.runs.push_back(chain_constancy(l, c, u, v, r, cfg));
        } catch (const PreconditionViolated&) {
          throw;
        } catch (const ModelError&) {
          out.d = discrete::compute_D(c.chain, cfg);
          return out;
        }
      }
    }
  }
  out.d = discrete::compute_D(c.chain, cfg);
  out.succeeded = out.d.nonempty && out.d.witness.has_value();
  return out;
}

NablaSup nabla_chain_sup(const InternalPoset& l, const ChainCertificate& c,
                         const SearchConfig& cfg) {
  if (!l.is_nabla()) throw PreconditionViolated("not a nabla poset");
  if (!c.valid()) throw PreconditionViolated("chain certificate is not valid");
  NablaSup out;
  out.support = discrete::cl_support(c.chain).elements;
  auto x = l.base->sup(out.support);
  if (!x) {
    throw ModelError(out.support.empty() ? "empty chain and no least element"
                                         : "chain has no supremum");
  }
  out.label = *x;
  Verdict stable = notnot_stable(l, cfg);
  if (!stable.valid()) {
    out.certificate = stable;
    out.certificate.tactic = "order is not shown notnot-stable";
    return out;
  }
  Verdict of_cl = bound_and_sup(l, out.label, notnot(c.chain), cfg).sup;
  if (!of_cl.valid()) {
    out.certificate = of_cl;
    return out;
  }
  out.stability = stable.certificate;
  out.sup_of_cl = of_cl.certificate;
  out.certificate = sup_transfer(l, *stable.certificate, c.chain, out.label,
                                 *of_cl.certificate, cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Negative fragment

bool is_negative(const logic::Formula& phi) {
  switch (phi.kind) {
    case Kind::kTop:
    case Kind::kBot:
    case Kind::kEq:
    case Kind::kAtom: return true;
    case Kind::kConj:
    case Kind::kImpl: return is_negative(*phi.lhs) && is_negative(*phi.rhs);
    case Kind::kNot:
    case Kind::kForall: return is_negative(*phi.lhs);
    default: return false;
  }
}

namespace {

struct Assignment {
  std::string name;
  std::string set;
  std::size_t value;
};

class Classical {
 public:
  explicit Classical(const SetModel& m) : m_(m) {}

  bool holds(const logic::Formula& f, std::vector<Assignment>& env,
             std::string* witness) const {
    switch (f.kind) {
      case Kind::kTop: return true;
      case Kind::kBot: return false;
      case Kind::kConj: return holds(*f.lhs, env, witness) && holds(*f.rhs, env, witness);
      case Kind::kDisj: return holds(*f.lhs, env, nullptr) || holds(*f.rhs, env, nullptr);
      case Kind::kImpl: return !holds(*f.lhs, env, nullptr) || holds(*f.rhs, env, witness);
      case Kind::kNot: return !holds(*f.lhs, env, nullptr);
      case Kind::kForall:
      case Kind::kExists: {
        const auto& elems = set(f.type);
        for (std::size_t i = 0; i < elems.size(); ++i) {
          env.push_back({f.name, f.type, i});
          std::string inner;
          const bool b = holds(*f.lhs, env, witness ? &inner : nullptr);
          env.pop_back();
          if (f.kind == Kind::kExists && b) return true;
          if (f.kind == Kind::kForall && !b) {
            if (witness) {
              *witness = f.name + "=" + elems[i] + (inner.empty() ? "" : ", " + inner);
            }
            return false;
          }
        }
        return f.kind == Kind::kForall;
      }
      case Kind::kEq: {
        auto t = type_of(f.terms[0], env);
        if (!t) t = type_of(f.terms[1], env);
        if (!t) t = owner(f.terms[0].name);
        if (!t) throw logic::TypeError(f.terms[0].name, "a unique set");
        return eval(f.terms[0], *t, env) == eval(f.terms[1], *t, env);
      }
      case Kind::kIn:
        throw NotNegativeFragment("membership is not available in a Set model");
      case Kind::kAtom: {
        if (auto it = m_.relations.find(f.name); it != m_.relations.end()) {
          const auto& rel = it->second;
          if (rel.sets.size() != f.terms.size()) {
            throw ModelError("'" + f.name + "' expects " +
                             std::to_string(rel.sets.size()) + " arguments");
          }
          std::vector<std::size_t> tuple;
          for (std::size_t i = 0; i < f.terms.size(); ++i) {
            tuple.push_back(eval(f.terms[i], rel.sets[i], env));
          }
          return rel.holds.count(tuple) > 0;
        }
        if (auto it = m_.functions.find(f.name); it != m_.functions.end()) {
          const auto& fn = it->second;
          if (fn.domain.size() + 1 != f.terms.size()) {
            throw ModelError("graph of '" + f.name + "' expects " +
                             std::to_string(fn.domain.size() + 1) + " arguments");
          }
          std::vector<std::size_t> args;
          for (std::size_t i = 0; i < fn.domain.size(); ++i) {
            args.push_back(eval(f.terms[i], fn.domain[i], env));
          }
          return apply(fn, f.name, args) ==
                 eval(f.terms.back(), fn.codomain, env);
        }
        throw logic::UnknownAtomicPredicate(f.name);
      }
    }
    return false;
  }

 private:
  const std::vector<std::string>& set(const std::string& name) const {
    auto it = m_.sets.find(name);
    if (it == m_.sets.end()) throw ModelError("unknown set '" + name + "'");
    return it->second;
  }

  std::optional<std::string> type_of(const logic::Term& t,
                                     const std::vector<Assignment>& env) const {
    if (t.is_application()) {
      auto it = m_.functions.find(t.name);
      if (it == m_.functions.end()) throw ModelError("unknown function '" + t.name + "'");
      return it->second.codomain;
    }
    for (std::size_t k = env.size(); k-- > 0;) {
      if (env[k].name == t.name) return env[k].set;
    }
    return std::nullopt;
  }

  std::optional<std::string> owner(const std::string& label) const {
    std::optional<std::string> found;
    for (const auto& [name, elems] : m_.sets) {
      if (std::find(elems.begin(), elems.end(), label) != elems.end()) {
        if (found) return std::nullopt;
        found = name;
      }
    }
    return found;
  }

  std::size_t apply(const SetModel::Function& fn, const std::string& name,
                    const std::vector<std::size_t>& args) const {
    auto it = fn.table.find(args);
    if (it == fn.table.end()) throw ModelError("'" + name + "' is not total");
    return it->second;
  }

  std::size_t eval(const logic::Term& t, const std::string& expected,
                   const std::vector<Assignment>& env) const {
    if (t.is_application()) {
      auto it = m_.functions.find(t.name);
      if (it == m_.functions.end()) throw ModelError("unknown function '" + t.name + "'");
      const auto& fn = it->second;
      if (fn.codomain != expected) throw logic::TypeError(t.name, expected);
      if (fn.domain.size() != t.args.size()) {
        throw ModelError("'" + t.name + "' expects " +
                         std::to_string(fn.domain.size()) + " arguments");
      }
      std::vector<std::size_t> args;
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        args.push_back(eval(t.args[i], fn.domain[i], env));
      }
      return apply(fn, t.name, args);
    }
    for (std::size_t k = env.size(); k-- > 0;) {
      if (env[k].name == t.name) {
        if (env[k].set != expected) throw logic::TypeError(t.name, expected);
        return env[k].value;
      }
    }
    const auto& elems = set(expected);
    auto it = std::find(elems.begin(), elems.end(), t.name);
    if (it == elems.end()) throw logic::TypeError(t.name, expected);
    return static_cast<std::size_t>(it - elems.begin());
  }

  const SetModel& m_;
};

std::string product_name(const std::vector<std::string>& sets) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) out += (i ? "x" : "") + sets[i];
  return out;
}

// Mixed-radix index, first component most significant.
std::size_t tuple_index(const std::vector<std::size_t>& tuple,
                        const std::vector<std::size_t>& sizes) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) idx = idx * sizes[i] + tuple[i];
  return idx;
}

std::vector<std::size_t> tuple_of(std::size_t idx,
                                  const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> out(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    out[i] = idx % sizes[i];
    idx /= sizes[i];
  }
  return out;
}

}  // namespace

bool SetModel::holds(const logic::Formula& phi, std::string* witness) const {
  std::vector<Assignment> env;
  return Classical(*this).holds(phi, env, witness);
}

logic::Model SetModel::nabla(const SearchConfig& cfg) const {
  logic::Model m;
  for (const auto& [name, elems] : sets) m.add_object(topos::nabla(name, elems, cfg));
  auto sizes_of = [&](const std::vector<std::string>& names) {
    std::vector<std::size_t> sizes;
    for (const auto& s : names) sizes.push_back(m.object(s).size());
    return sizes;
  };
  for (const auto& [name, fn] : functions) {
    std::string domain = fn.domain.at(0);
    if (fn.domain.size() > 1) {
      domain = product_name(fn.domain);
      if (!m.has_object(domain)) m.add_product(domain, fn.domain, cfg);
    }
    const auto sizes = sizes_of(fn.domain);
    std::vector<std::size_t> image(m.object(domain).size());
    for (std::size_t i = 0; i < image.size(); ++i) {
      auto it = fn.table.find(tuple_of(i, sizes));
      if (it == fn.table.end()) throw ModelError("'" + name + "' is not total");
      image[i] = it->second;
    }
    m.add_morphism(name, topos::nabla_map(m.object(domain), m.object(fn.codomain),
                                          image, cfg));
  }
  for (const auto& [name, rel] : relations) {
    const auto sizes = sizes_of(rel.sets);
    std::size_t total = 1;
    for (auto s : sizes) total *= s;
    std::vector<RealizerSet> values(total, RealizerSet::empty());
    for (const auto& tuple : rel.holds) {
      values.at(tuple_index(tuple, sizes)) = RealizerSet::all();
    }
    std::vector<std::string> labels(total);
    for (std::size_t i = 0; i < total; ++i) labels[i] = std::to_string(i);
    m.add_predicate(name, rel.sets, NSPredicate(Carrier(labels), values), cfg);
  }
  return m;
}

namespace {

constexpr unsigned kAtomCandidates = 64;

class Uniform {
 public:
  Uniform(const logic::Model& m, const SearchConfig& cfg) : m_(m), cfg_(cfg) {}

  // One realizer for every instance; it depends only on the syntax, except
  // at atoms where the smallest element common to all true instances is used.
  Nat realizer(const logic::FormulaPtr& f, std::vector<logic::Variable>& ctx) {
    switch (f->kind) {
      case Kind::kTop:
      case Kind::kBot: return 0;
      case Kind::kConj:
        return substrate::pair(realizer(f->lhs, ctx), realizer(f->rhs, ctx));
      case Kind::kImpl:
        return C::constant(realizer(f->rhs, ctx)).code_index();
      case Kind::kNot: return C::constant(0).code_index();
      case Kind::kForall: {
        ctx.push_back({f->name, f->type});
        Nat r = realizer(f->lhs, ctx);
        ctx.pop_back();
        return r;
      }
      case Kind::kEq:
      case Kind::kAtom: return atomic(f, ctx);
      default: throw NotNegativeFragment("not in the negative fragment");
    }
  }

 private:
  Nat atomic(const logic::FormulaPtr& f, const std::vector<logic::Variable>& ctx) {
    NSPredicate p = logic::interpret(f, m_, ctx).predicate;
    std::vector<const RealizerSet*> inhabited;
    for (const auto& s : p.values()) {
      Truth t = s.inhabited(cfg_);
      if (t == Truth::kUnknown) throw ModelError("atomic value undecided");
      if (t == Truth::kYes) inhabited.push_back(&s);
    }
    for (unsigned n = 0; n < kAtomCandidates; ++n) {
      bool common = true;
      for (const auto* s : inhabited) common = common && s->contains(n, cfg_).yes();
      if (common) return n;
    }
    throw ModelError("no uniform realizer for " + logic::to_string(*f));
  }

  const logic::Model& m_;
  SearchConfig cfg_;
};

}  // namespace

NegativeCertificate negative_transfer(const logic::FormulaPtr& phi,
                                      const SetModel& model,
                                      const SearchConfig& cfg) {
  if (!is_negative(*phi)) {
    throw NotNegativeFragment("'" + logic::to_string(phi) +
                              "' uses disjunction, existence or membership");
  }
  std::string witness;
  if (!model.holds(*phi, &witness)) throw ClassicallyFalse(witness);
  logic::Model m = model.nabla(cfg);
  std::vector<logic::Variable> ctx;
  const Nat r = Uniform(m, cfg).realizer(phi, ctx);
  const NSPredicate interpreted = logic::interpret(phi, m).predicate;
  const Membership check = heyting::verify_valid(interpreted, r, cfg);
  NegativeCertificate out{r, Verdict::make_unknown(cfg.budget)};
  if (check.yes()) {
    out.verdict = Verdict::make_valid(Code{r}, "negative transfer",
                                      !check.exact, cfg.budget);
  } else if (check.no() && check.exact) {
    out.verdict = Verdict::make_refuted(std::nullopt, r, cfg.budget);
  }
  return out;
}

}  // namespace efft::order
