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

#include "efft/discrete.hpp"

#include <algorithm>

namespace efft::discrete {

using heyting::Truth;
using substrate::Combinator;

namespace {

void require_explicit(const NSPredicate& a) {
  if (!a.all_explicit()) {
    throw ModelError("discreteness needs explicit realizer sets");
  }
}

std::set<Nat> intersect(const std::set<Nat>& a, const std::set<Nat>& b) {
  std::set<Nat> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace

RealizerSet d_set(const NSPredicate& a) {
  require_explicit(a);
  std::vector<RealizerSet> parts;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      RealizerSet both =
          RealizerSet::finite(intersect(a[x].elements(), a[y].elements()));
      parts.push_back(heyting::impl(
          both, x == y ? RealizerSet::all() : RealizerSet::empty()));
    }
  }
  return heyting::meet_all(parts);
}

DiscretenessWitness compute_D(const NSPredicate& a, const SearchConfig& cfg) {
  DiscretenessWitness w{a, d_set(a), false, std::nullopt};
  w.nonempty = w.d.inhabited(cfg) == Truth::kYes;
  if (w.nonempty) {
    const Code zero = substrate::build_code(Combinator::constant(0));
    if (w.d.contains(zero.index, cfg).yes()) w.witness = zero;
  }
  return w;
}

bool is_discrete(const NSPredicate& a) {
  require_explicit(a);
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = x + 1; y < a.size(); ++y) {
      if (!intersect(a[x].elements(), a[y].elements()).empty()) return false;
    }
  }
  return true;
}

SupportSet cl_support(const NSPredicate& a, bool with_injection) {
  require_explicit(a);
  SupportSet out;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (!a[x].elements().empty()) out.elements.push_back(x);
  }
  if (!with_injection) return out;
  std::map<Nat, std::size_t> owner;
  for (std::size_t x : out.elements) {
    for (const auto& n : a[x].elements()) {
      auto [it, fresh] = owner.emplace(n, x);
      if (!fresh) {
        throw InjectionViolated("realizer " + n.str() + " is owned by both " +
                                a.carrier().label(it->second) + " and " +
                                a.carrier().label(x));
      }
    }
  }
  std::map<Nat, Nat> entries;
  for (const auto& [n, x] : owner) entries.emplace(n, x);
  out.injection_code = substrate::build_code(Combinator::table(entries, 0));
  out.injection = std::move(owner);
  return out;
}

Split uniformity_split(const Nat& r, const NSPredicate& phi,
                       const NSPredicate& psi, const SearchConfig& cfg) {
  const NSPredicate either = heyting::disj(phi, psi);
  if (r == 0 || !heyting::verify_valid(either, r, cfg).yes()) {
    throw PreconditionViolated("realizer " + r.str() +
                               " does not realize the disjunction at every p");
  }
  auto [tag, body] = substrate::unpair(r);
  return {tag == 0 ? 0 : 1, body};
}

}  // namespace efft::discrete
