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

#include "efft/topos.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace efft::topos {

using heyting::Membership;
using heyting::Truth;
using substrate::Combinator;
using C = Combinator;
using substrate::build_code;
using Hints = std::vector<std::pair<std::string, Code>>;

namespace {

const char* status_name(Certificate::Status s) {
  switch (s) {
    case Certificate::Status::kVerified: return "verified";
    case Certificate::Status::kSampled: return "sampled";
    case Certificate::Status::kConstructed: return "constructed";
  }
  return "";
}

// A realizer read off a proof. It is checked as far as the pairs involved can
// be materialized; a refutation is still fatal.
Certificate constructed(const std::string& claim, const C& realizer,
                        const NSPredicate& a, const NSPredicate& b,
                        const SearchConfig& cfg) {
  const Code code = substrate::build_code(realizer);
  Membership m = heyting::verify_entailment(a, b, code, cfg);
  if (m.no()) {
    throw ValidationError(ValidationError::Reason::kRefuted, claim,
                          "constructed realizer");
  }
  Certificate::Status status = Certificate::Status::kConstructed;
  if (m.yes()) {
    status = m.exact ? Certificate::Status::kVerified
                     : Certificate::Status::kSampled;
  }
  return {claim, code, "construction", status, cfg.budget};
}

Carrier product3(const Carrier& a, const Carrier& b, const Carrier& c) {
  return Carrier::product(Carrier::product(a, b), c);
}

bool nabla_shaped(const Carrier& carrier, const NSPredicate& eq) {
  const std::size_t n = carrier.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const RealizerSet& s = eq[i * n + j];
      if (i == j ? !s.is_all() : !(s.is_explicit() && s.elements().empty())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

// Search for a realizer of a ≤ b; failures become ValidationError.
Certificate certify(const std::string& claim, const NSPredicate& a,
                    const NSPredicate& b, const SearchConfig& cfg,
                    const Hints& hints) {
  SearchConfig c = cfg;
  c.hints = hints;
  Verdict v = heyting::entails(a, b, c);
  if (v.refuted()) {
    std::string witness;
    if (v.witness_label) witness = a.carrier().label(*v.witness_label);
    throw ValidationError(ValidationError::Reason::kRefuted, claim, witness);
  }
  if (v.unknown()) {
    throw ValidationError(ValidationError::Reason::kUnknown, claim, "");
  }
  return {claim, *v.certificate, v.tactic,
          v.sampled ? Certificate::Status::kSampled
                    : Certificate::Status::kVerified,
          cfg.budget};
}

struct ObjectBuilder {
  static EffObject make(std::string name, Carrier carrier, NSPredicate eq,
                        Certificate sym, Certificate trans,
                        std::shared_ptr<const PowerData> power = nullptr) {
    EffObject x;
    x.name_ = std::move(name);
    x.carrier_ = std::move(carrier);
    x.nabla_ = nabla_shaped(x.carrier_, eq);
    x.eq_ = std::move(eq);
    x.symmetry_ = std::move(sym);
    x.transitivity_ = std::move(trans);
    x.power_ = std::move(power);
    return x;
  }
};

std::string Certificate::to_string() const {
  std::ostringstream out;
  out << claim << ": " << realizer.index << " "
      << Combinator::decode(realizer).to_string() << " (" << tactic << ", "
      << status_name(status) << ")";
  return out.str();
}

ValidationError::ValidationError(Reason reason, std::string condition,
                                 std::string witness)
    : ModelError((reason == Reason::kRefuted ? "refuted: " : "unknown: ") +
                 condition + (witness.empty() ? "" : " at (" + witness + ")")),
      reason_(reason),
      condition_(std::move(condition)),
      witness_(std::move(witness)) {}

NSPredicate EffObject::existence() const {
  std::vector<RealizerSet> values;
  for (std::size_t i = 0; i < size(); ++i) values.push_back(ex(i));
  return NSPredicate(carrier_, std::move(values));
}

std::string EffObject::to_string() const {
  std::ostringstream out;
  out << name_ << " = {";
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      out << (i + j ? "; " : "") << "[" << carrier_.label(i) << "="
          << carrier_.label(j) << "]: " << eq(i, j).to_string();
    }
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------------------
// Objects

namespace {

struct AxiomPredicates {
  NSPredicate sym_a, sym_b, trans_a, trans_b;
};

AxiomPredicates axiom_predicates(const Carrier& carrier, const NSPredicate& eq) {
  const std::size_t n = carrier.size();
  const Carrier xx = Carrier::product(carrier, carrier);
  const Carrier xxx = product3(carrier, carrier, carrier);
  AxiomPredicates p;
  p.sym_a = eq;
  p.sym_b = heyting::reindex(eq, xx, [n](std::size_t k) {
    return (k % n) * n + k / n;
  });
  auto xy = heyting::reindex(eq, xxx, [n](std::size_t k) { return k / n; });
  auto yz = heyting::reindex(eq, xxx, [n](std::size_t k) {
    return k % (n * n);
  });
  p.trans_a = heyting::conj(xy, yz);
  p.trans_b = heyting::reindex(eq, xxx, [n](std::size_t k) {
    return (k / (n * n)) * n + k % n;
  });
  return p;
}

void check_square(const Carrier& carrier, const NSPredicate& eq) {
  if (eq.size() != carrier.size() * carrier.size()) {
    throw ModelError("equality is not defined on carrier x carrier");
  }
}

}  // namespace

EffObject validate_object(const std::string& name, const Carrier& carrier,
                          const NSPredicate& eq, const SearchConfig& cfg,
                          const Hints& hints) {
  check_square(carrier, eq);
  const NSPredicate on_square(Carrier::product(carrier, carrier), eq.values());
  AxiomPredicates p = axiom_predicates(carrier, on_square);
  Certificate sym = certify("symmetry", p.sym_a, p.sym_b, cfg, hints);
  Certificate trans = certify("transitivity", p.trans_a, p.trans_b, cfg, hints);
  return ObjectBuilder::make(name, carrier, on_square, std::move(sym),
                             std::move(trans));
}

EffObject nabla(const std::string& name, const std::vector<std::string>& labels,
                const SearchConfig& cfg) {
  Carrier carrier(labels);
  const std::size_t n = carrier.size();
  std::vector<RealizerSet> values;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      values.push_back(i == j ? RealizerSet::all() : RealizerSet::empty());
    }
  }
  NSPredicate eq(Carrier::product(carrier, carrier), std::move(values));
  return validate_object(name, carrier, eq, cfg);
}

EffObject b_object(const SearchConfig& cfg) {
  Carrier carrier({"0", "1"});
  NSPredicate eq(Carrier::product(carrier, carrier),
                 {RealizerSet::finite({0}), RealizerSet::empty(),
                  RealizerSet::empty(), RealizerSet::finite({1})});
  return validate_object("B", carrier, eq, cfg);
}

EffObject product_object(const std::string& name,
                         const std::vector<EffObject>& components,
                         const SearchConfig& cfg) {
  if (components.empty()) throw ModelError("product of no objects");
  if (components.size() == 1) return components.front();
  // Mixed-radix tuples, last component fastest.
  std::vector<std::vector<std::size_t>> tuples{{}};
  for (const auto& c : components) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : tuples) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        next.push_back(t);
        next.back().push_back(i);
      }
    }
    tuples = std::move(next);
  }
  std::vector<std::string> labels;
  for (const auto& t : tuples) {
    std::string l;
    for (std::size_t k = 0; k < t.size(); ++k) {
      l += (k ? "," : "") + components[k].carrier().label(t[k]);
    }
    labels.push_back(l);
  }
  const bool all_nabla = std::all_of(components.begin(), components.end(),
                                     [](const auto& c) { return c.is_nabla(); });
  if (all_nabla) return nabla(name, labels, cfg);

  std::vector<RealizerSet> values;
  for (const auto& s : tuples) {
    for (const auto& t : tuples) {
      RealizerSet acc = components.back().eq(s.back(), t.back());
      for (std::size_t k = components.size() - 1; k-- > 0;) {
        acc = heyting::conj(components[k].eq(s[k], t[k]), acc);
      }
      values.push_back(acc);
    }
  }
  Carrier carrier(labels);
  // Componentwise certificates: <a1, <a2, ...>> -> <c1(a1), <c2(a2), ...>>.
  C sym = C::decode(components.back().symmetry().realizer);
  C trans = C::decode(components.back().transitivity().realizer);
  for (std::size_t k = components.size() - 1; k-- > 0;) {
    const C s1 = C::decode(components[k].symmetry().realizer);
    const C t1 = C::decode(components[k].transitivity().realizer);
    sym = C::pair_with(C::compose(s1, C::fst()), C::compose(sym, C::snd()));
    // <<a1, a'>, <b1, b'>> -> <t1(<a1, b1>), trans(<a', b'>)>
    trans = C::pair_with(
        C::compose(t1, C::pair_with(projection("FF"), projection("SF"))),
        C::compose(trans, C::pair_with(projection("FS"), projection("SS"))));
  }
  NSPredicate eq(Carrier::product(carrier, carrier), std::move(values));
  return validate_object(name, carrier, eq, cfg,
                         {{"componentwise symmetry", build_code(sym)},
                          {"componentwise transitivity", build_code(trans)}});
}

// ---------------------------------------------------------------------------
// Relations and morphisms

namespace {

void check_relation(const EffObject& x, const EffObject& y,
                    const NSPredicate& r) {
  if (r.size() != x.size() * y.size()) {
    throw ModelError("relation is not defined on |X| x |Y|");
  }
}

NSPredicate on_product(const EffObject& x, const EffObject& y,
                       const NSPredicate& r) {
  if (r.carrier() == Carrier::product(x.carrier(), y.carrier())) return r;
  return NSPredicate(Carrier::product(x.carrier(), y.carrier()), r.values());
}

// F(x, y) <= Ex(x) /\ Ex(y)
std::pair<NSPredicate, NSPredicate> strict_predicates(const EffObject& x,
                                                      const EffObject& y,
                                                      const NSPredicate& r) {
  const std::size_t m = y.size();
  const Carrier xy = r.carrier();
  auto ex = heyting::reindex(x.existence(), xy,
                             [m](std::size_t k) { return k / m; });
  auto ey = heyting::reindex(y.existence(), xy,
                             [m](std::size_t k) { return k % m; });
  return {r, heyting::conj(ex, ey)};
}

// [x' = x] /\ (F(x, y) /\ [y = y']) <= F(x', y') over X x X x Y x Y, with
// labels indexed ((x' n + x) m + y) m + y'.
std::pair<NSPredicate, NSPredicate> extensional_predicates(
    const EffObject& x, const EffObject& y, const NSPredicate& r) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const Carrier c = Carrier::product(
      product3(x.carrier(), x.carrier(), y.carrier()), y.carrier());
  auto split = [n, m](std::size_t k) {
    const std::size_t y2 = k % m;
    const std::size_t y1 = (k / m) % m;
    const std::size_t x1 = (k / (m * m)) % n;
    const std::size_t x2 = k / (m * m * n);
    return std::array<std::size_t, 4>{x2, x1, y1, y2};
  };
  auto xx = heyting::reindex(x.eq(), c, [&](std::size_t k) {
    auto [x2, x1, y1, y2] = split(k);
    return x2 * n + x1;
  });
  auto fxy = heyting::reindex(r, c, [&](std::size_t k) {
    auto [x2, x1, y1, y2] = split(k);
    return x1 * m + y1;
  });
  auto yy = heyting::reindex(y.eq(), c, [&](std::size_t k) {
    auto [x2, x1, y1, y2] = split(k);
    return y1 * m + y2;
  });
  auto target = heyting::reindex(r, c, [&](std::size_t k) {
    auto [x2, x1, y1, y2] = split(k);
    return x2 * m + y2;
  });
  return {heyting::conj(xx, heyting::conj(fxy, yy)), target};
}

}  // namespace

RelationCertificates validate_relation(const EffObject& x, const EffObject& y,
                                       const NSPredicate& r,
                                       const SearchConfig& cfg,
                                       const Hints& extensional_hints) {
  check_relation(x, y, r);
  const NSPredicate rel = on_product(x, y, r);
  auto [sa, sb] = strict_predicates(x, y, rel);
  RelationCertificates out;
  out.strict = certify("strict", sa, sb, cfg);
  auto [ea, eb] = extensional_predicates(x, y, rel);
  out.extensional = certify("extensional", ea, eb, cfg, extensional_hints);
  return out;
}

RelationCertificates validate_predicate(const EffObject& x,
                                        const NSPredicate& a,
                                        const SearchConfig& cfg) {
  if (a.size() != x.size()) {
    throw ModelError("predicate is not defined on the carrier");
  }
  const NSPredicate pa(x.carrier(), a.values());
  const std::size_t n = x.size();
  const Carrier xx = Carrier::product(x.carrier(), x.carrier());
  auto here = heyting::reindex(pa, xx, [n](std::size_t k) { return k / n; });
  auto there = heyting::reindex(pa, xx, [n](std::size_t k) { return k % n; });
  RelationCertificates out;
  out.strict = certify("strict", pa, x.existence(), cfg);
  out.extensional = certify(
      "extensional", heyting::conj(here, NSPredicate(xx, x.eq().values())),
      there, cfg);
  return out;
}

FunctionalRelation validate_morphism(const EffObject& x, const EffObject& y,
                                     const NSPredicate& f,
                                     const SearchConfig& cfg) {
  check_relation(x, y, f);
  const NSPredicate rel = on_product(x, y, f);
  const std::size_t m = y.size();

  RelationCertificates se = validate_relation(x, y, rel, cfg);

  // F(x, y) /\ F(x, y') <= [y = y'] over X x Y x Y.
  const Carrier xyy = product3(x.carrier(), y.carrier(), y.carrier());
  auto f1 = heyting::reindex(rel, xyy, [m](std::size_t k) {
    return (k / (m * m)) * m + (k / m) % m;
  });
  auto f2 = heyting::reindex(rel, xyy, [m](std::size_t k) {
    return (k / (m * m)) * m + k % m;
  });
  auto yy = heyting::reindex(y.eq(), xyy, [m](std::size_t k) {
    return k % (m * m);
  });
  Certificate single = certify("single-valued", heyting::conj(f1, f2), yy, cfg);

  // Ex(x) <= ⋃_y Ex(y) /\ F(x, y)
  std::vector<RealizerSet> images;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<RealizerSet> parts;
    for (std::size_t j = 0; j < m; ++j) {
      parts.push_back(heyting::conj(y.ex(j), rel[i * m + j]));
    }
    images.push_back(heyting::join_all(parts));
  }
  Certificate total = certify("total", x.existence(),
                              NSPredicate(x.carrier(), std::move(images)), cfg);

  FunctionalRelation out;
  out.source_ = std::make_shared<const EffObject>(x);
  out.target_ = std::make_shared<const EffObject>(y);
  out.f_ = rel;
  out.strict_ = std::move(se.strict);
  out.extensional_ = std::move(se.extensional);
  out.single_valued_ = std::move(single);
  out.total_ = std::move(total);
  return out;
}

FunctionalRelation identity(const EffObject& x, const SearchConfig& cfg) {
  return validate_morphism(x, x, x.eq(), cfg);
}

FunctionalRelation nabla_map(const EffObject& source, const EffObject& target,
                             const std::vector<std::size_t>& f,
                             const SearchConfig& cfg) {
  if (f.size() != source.size()) {
    throw ModelError("map is not defined on the whole source");
  }
  const std::size_t m = target.size();
  std::vector<RealizerSet> values;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (f[i] >= m) throw ModelError("map leaves the target");
    for (std::size_t j = 0; j < m; ++j) values.push_back(target.eq(f[i], j));
  }
  return validate_morphism(
      source, target,
      NSPredicate(Carrier::product(source.carrier(), target.carrier()),
                  std::move(values)),
      cfg);
}

NSPredicate compose_relation(const FunctionalRelation& f,
                             const FunctionalRelation& g) {
  if (!(f.target().carrier() == g.source().carrier())) {
    throw ModelError("composition of morphisms with mismatched objects");
  }
  const std::size_t nx = f.source().size();
  const std::size_t ny = f.target().size();
  const std::size_t nz = g.target().size();
  std::vector<RealizerSet> values;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t k = 0; k < nz; ++k) {
      std::vector<RealizerSet> parts;
      for (std::size_t j = 0; j < ny; ++j) {
        parts.push_back(heyting::conj(f.at(i, j), g.at(j, k)));
      }
      values.push_back(heyting::join_all(parts));
    }
  }
  return NSPredicate(
      Carrier::product(f.source().carrier(), g.target().carrier()),
      std::move(values));
}

FunctionalRelation compose(const FunctionalRelation& f,
                           const FunctionalRelation& g,
                           const SearchConfig& cfg) {
  return validate_morphism(f.source(), g.target(), compose_relation(f, g), cfg);
}

std::pair<Verdict, Verdict> morphism_equal(const NSPredicate& f,
                                           const NSPredicate& g,
                                           const SearchConfig& cfg) {
  return heyting::equiv(f, g, cfg);
}

std::vector<GlobalPoint> gamma(const EffObject& x, const SearchConfig& cfg) {
  auto inhabited = [&](const RealizerSet& s, const std::string& what) {
    Truth t = s.inhabited(cfg);
    if (t == Truth::kUnknown) {
      throw ValidationError(ValidationError::Reason::kUnknown, "gamma", what);
    }
    return t == Truth::kYes;
  };
  std::vector<GlobalPoint> points;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!inhabited(x.ex(i), x.carrier().label(i))) continue;
    bool placed = false;
    for (auto& p : points) {
      if (inhabited(x.eq(p.representative, i),
                    x.carrier().label(p.representative) + "," +
                        x.carrier().label(i))) {
        p.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) points.push_back({i, {i}});
  }
  return points;
}

// ---------------------------------------------------------------------------
// Powerobjects

C projection(const std::string& path) {
  C cur = C::id();
  bool first = true;
  for (char c : path) {
    C step = c == 'F' ? C::fst() : C::snd();
    cur = first ? step : C::compose(step, cur);
    first = false;
  }
  return cur;
}

C compose_codes(const C& outer_of, const C& inner_of) {
  // body(<<o, i>, m>) = φ_o(φ_i(m))
  const C body = C::apply(projection("FF"),
                          C::apply(projection("FS"), projection("S")));
  return C::smn(body, C::pair_with(outer_of, inner_of));
}

NSPredicate power_equality(const EffObject& x, const Carrier& names,
                           const std::vector<NSPredicate>& family,
                           PowerForm form) {
  if (names.size() != family.size()) {
    throw ModelError("family and names differ in length");
  }
  for (const auto& a : family) {
    if (a.size() != x.size()) {
      throw ModelError("family member is not defined on the carrier");
    }
  }
  const bool fast = form == PowerForm::kFast ||
                    (form == PowerForm::kAuto && x.is_nabla());
  if (fast && !x.is_nabla()) {
    throw ModelError("the fast powerobject form needs a nabla object");
  }
  const std::size_t k = family.size();
  const std::size_t n = x.size();
  const Carrier pp = Carrier::product(names, names);

  // ⋂_x A(x) => B(x), shared between (A, B) and the transposed (B, A).
  std::vector<RealizerSet> ab(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<RealizerSet> parts;
      for (std::size_t u = 0; u < n; ++u) {
        parts.push_back(heyting::impl(family[i][u], family[j][u]));
      }
      ab[i * k + j] = heyting::meet_all(parts);
    }
  }
  NSPredicate forward(pp, ab);
  NSPredicate backward = heyting::reindex(forward, pp, [k](std::size_t q) {
    return (q % k) * k + q / k;
  });
  if (fast) return heyting::conj(forward, backward);

  std::vector<RealizerSet> strict(k * k);
  std::vector<RealizerSet> ext(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<RealizerSet> s_parts;
    std::vector<RealizerSet> e_parts;
    for (std::size_t u = 0; u < n; ++u) {
      s_parts.push_back(heyting::impl(family[i][u], x.ex(u)));
      for (std::size_t v = 0; v < n; ++v) {
        e_parts.push_back(heyting::impl(
            heyting::conj(family[i][u], x.eq(u, v)), family[i][v]));
      }
    }
    RealizerSet s = heyting::meet_all(s_parts);
    RealizerSet e = heyting::meet_all(e_parts);
    for (std::size_t j = 0; j < k; ++j) {
      strict[i * k + j] = s;
      ext[i * k + j] = e;
    }
  }
  return heyting::conj(
      forward,
      heyting::conj(backward, heyting::conj(NSPredicate(pp, strict),
                                            NSPredicate(pp, ext))));
}

EffObject power_object(const EffObject& x, const std::vector<std::string>& names,
                       const std::vector<NSPredicate>& family,
                       const SearchConfig& cfg, PowerForm form) {
  Carrier carrier(names);
  NSPredicate eq = power_equality(x, carrier, family, form);
  const bool fast = form == PowerForm::kFast ||
                    (form == PowerForm::kAuto && x.is_nabla());
  AxiomPredicates p = axiom_predicates(carrier, eq);

  C sym = C::id();
  C trans = C::id();
  if (fast) {
    // <f, g> -> <g, f>;  <<f, g>, <h, k>> -> <h∘f, g∘k>
    sym = C::pair_with(C::snd(), C::fst());
    trans = C::pair_with(compose_codes(projection("SF"), projection("FF")),
                         compose_codes(projection("FS"), projection("SS")));
  } else {
    // <f, <g, <s, e>>> -> <g, <f, <s∘g, e'>>> with e'(<b, q>) = f(e(<g(b), q>))
    const C body = C::apply(
        projection("FF"),
        C::apply(projection("FSS"),
                 C::pair_with(C::apply(projection("FSF"), projection("SF")),
                              projection("SS"))));
    const C e_sym = C::smn(
        body, C::pair_with(projection("F"),
                           C::pair_with(projection("SF"), projection("SSS"))));
    sym = C::pair_with(
        projection("SF"),
        C::pair_with(projection("F"),
                     C::pair_with(compose_codes(projection("SSF"),
                                                projection("SF")),
                                  e_sym)));
    // <P, Q> -> <h∘f, <g∘k, <s_P, e_P>>>
    trans = C::pair_with(
        compose_codes(projection("SF"), projection("FF")),
        C::pair_with(compose_codes(projection("FSF"), projection("SSF")),
                     projection("FSS")));
  }
  SearchConfig quick = cfg;
  quick.enumerate = false;
  Certificate sym_cert;
  Certificate trans_cert;
  try {
    sym_cert = certify("symmetry", p.sym_a, p.sym_b, quick,
                       {{"powerobject symmetry", substrate::build_code(sym)}});
  } catch (const ValidationError& e) {
    if (e.refuted()) throw;
    sym_cert = constructed("symmetry", sym, p.sym_a, p.sym_b, cfg);
  }
  trans_cert = constructed("transitivity", trans, p.trans_a, p.trans_b, cfg);

  auto data = std::make_shared<PowerData>();
  data->base = std::make_shared<const EffObject>(x);
  data->family = family;
  data->fast = fast;
  return ObjectBuilder::make("P(" + x.name() + ")", carrier, eq,
                             std::move(sym_cert), std::move(trans_cert),
                             std::move(data));
}

NSPredicate membership(const EffObject& power) {
  const PowerData* data = power.power();
  if (!data) throw ModelError("membership needs a powerobject");
  const EffObject& x = *data->base;
  const std::size_t k = power.size();
  const Carrier c = Carrier::product(x.carrier(), power.carrier());
  auto ex_u = heyting::reindex(x.existence(), c,
                               [k](std::size_t q) { return q / k; });
  auto ex_a = heyting::reindex(power.existence(), c,
                               [k](std::size_t q) { return q % k; });
  std::vector<RealizerSet> holds;
  for (std::size_t u = 0; u < x.size(); ++u) {
    for (std::size_t a = 0; a < k; ++a) holds.push_back(data->family[a][u]);
  }
  return heyting::conj(ex_u,
                       heyting::conj(ex_a, NSPredicate(c, std::move(holds))));
}

std::pair<Code, Code> power_form_realizers() {
  // <f, <g, <s, e>>> -> <f, g>;  <f, g> -> <f, <g, <Id, Fst>>>
  const Nat strict_ext = substrate::pair(build_code(C::id()).index,
                                         build_code(C::fst()).index);
  return {substrate::build_code(C::pair_with(C::fst(), projection("SF"))),
          substrate::build_code(C::pair_with(
              C::fst(), C::pair_with(C::snd(), C::constant(strict_ext))))};
}

Code membership_extensional_realizer() {
  // <q, <<e, <p, a>>, <f, g>>> -> <q, <<Id, Id>, f(a)>>
  return substrate::build_code(C::pair_with(
      projection("F"),
      C::pair_with(C::constant(substrate::pair(0, 0)),
                   C::apply(projection("SSF"), projection("SFSS")))));
}

}  // namespace efft::topos
