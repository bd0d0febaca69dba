#include "doctest.h"
#include "efft/discrete.hpp"

#include <random>

using namespace efft;
using namespace efft::discrete;
using RS = RealizerSet;
using heyting::Carrier;

namespace {

Carrier labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, 'a' + i));
  return Carrier(out);
}

std::set<Nat> bits(unsigned mask) {
  std::set<Nat> out;
  for (unsigned i = 0; i < 8; ++i) {
    if (mask >> i & 1) out.insert(i);
  }
  return out;
}

NSPredicate pred(std::vector<std::set<Nat>> sets) {
  std::vector<RS> values;
  for (auto& s : sets) values.push_back(RS::finite(s));
  return NSPredicate(labels(values.size()), values);
}

// Oracle: some realizer lies in two different A(x).
bool shares_realizer(const std::vector<std::set<Nat>>& sets) {
  std::map<Nat, int> seen;
  for (const auto& s : sets) {
    for (const auto& n : s) {
      if (++seen[n] > 1) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("compute_D examples") {
  auto disjoint = compute_D(pred({{1}, {2}}));
  CHECK(disjoint.nonempty);
  REQUIRE(disjoint.witness);
  CHECK(*disjoint.witness ==
        substrate::build_code(substrate::Combinator::constant(0)));

  auto overlapping = compute_D(pred({{1}, {1}}));
  CHECK_FALSE(overlapping.nonempty);
  CHECK_FALSE(overlapping.witness);

  for (unsigned mask = 0; mask < 16; ++mask) {
    CHECK(compute_D(pred({bits(mask)})).nonempty);
  }
  CHECK_THROWS_AS(compute_D(NSPredicate(labels(1), {RS::all()})), ModelError);
}

TEST_CASE("is_discrete examples") {
  CHECK(is_discrete(pred({{1, 3}, {2}})));
  CHECK_FALSE(is_discrete(pred({{1, 2}, {2, 3}})));
  CHECK(is_discrete(pred({{}, {}, {}})));
}

TEST_CASE("D emptiness matches disjointness, full sweep up to three labels") {
  SearchConfig cfg;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 8;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::set<Nat>> sets;
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i, c /= 8) sets.push_back(bits(c % 8));
      const NSPredicate a = pred(sets);
      const bool expected = !shares_realizer(sets);
      CAPTURE(a.to_string());
      auto w = compute_D(a, cfg);
      REQUIRE(w.nonempty == expected);
      REQUIRE(is_discrete(a) == expected);
      if (expected) {
        REQUIRE(w.witness);
        REQUIRE(w.d.contains(w.witness->index, cfg).yes());
      } else {
        // Empty: no small code is an exact member.
        for (int k = 0; k < 40; ++k) REQUIRE_FALSE(w.d.contains(k, cfg).yes());
      }
    }
  }
}

TEST_CASE("cl_support") {
  auto s = cl_support(pred({{1}, {}}));
  CHECK(s.elements == std::vector<std::size_t>{0});
  CHECK(cl_support(pred({{}, {}})).elements.empty());

  auto full = cl_support(pred({{1}, {2}, {9}}), true);
  CHECK(full.elements == std::vector<std::size_t>{0, 1, 2});
  REQUIRE(full.injection);
  CHECK(*full.injection == std::map<Nat, std::size_t>{{1, 0}, {2, 1}, {9, 2}});
  for (auto [n, x] : *full.injection) {
    CHECK(substrate::apply(*full.injection_code, n).value() == x);
  }
  CHECK_THROWS_AS(cl_support(pred({{1, 2}, {2}}), true), InjectionViolated);
  CHECK_NOTHROW(cl_support(pred({{1, 2}, {2}}), false));
}

TEST_CASE("cl_support injection is a function and injective at sweep scale") {
  for (std::size_t code = 0; code < 512; ++code) {
    std::vector<std::set<Nat>> sets = {bits(code % 8), bits(code / 8 % 8),
                                       bits(code / 64)};
    const NSPredicate a = pred(sets);
    if (!is_discrete(a)) continue;
    auto s = cl_support(a, true);
    std::size_t owned = 0;
    for (std::size_t x = 0; x < 3; ++x) {
      for (const auto& n : sets[x]) {
        CHECK(s.injection->at(n) == x);
        ++owned;
      }
    }
    CHECK(s.injection->size() == owned);
  }
}

TEST_CASE("uniformity_split examples") {
  const NSPredicate phi = pred({{5}, {5}});
  const NSPredicate psi = pred({{3}, {3}});
  const NSPredicate none = pred({{}, {}});
  auto left = uniformity_split(11, phi, none);
  CHECK(left.tag == 0);
  CHECK(left.body == 5);
  auto right = uniformity_split(14, none, psi);
  CHECK(right.tag == 1);
  CHECK(right.body == 3);

  // A realizer tagged differently at the two points is not in the
  // intersection.
  const NSPredicate phi_a = pred({{5}, {}});
  const NSPredicate psi_b = pred({{}, {5}});
  CHECK_THROWS_AS(uniformity_split(substrate::pair(0, 5), phi_a, psi_b),
                  PreconditionViolated);
  CHECK_THROWS_AS(uniformity_split(substrate::pair(1, 5), phi_a, psi_b),
                  PreconditionViolated);
  CHECK_THROWS_AS(uniformity_split(0, phi, psi), PreconditionViolated);
}

TEST_CASE("uniformity_split soundness over small predicates") {
  std::mt19937 rng(32);
  std::uniform_int_distribution<unsigned> mask(0, 31);
  SearchConfig cfg;
  int splits = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::set<Nat>> p = {bits(mask(rng)), bits(mask(rng))};
    std::vector<std::set<Nat>> q = {bits(mask(rng)), bits(mask(rng))};
    if (trial % 3 == 0) p[1] = p[0];  // bias towards inhabited intersections
    if (trial % 5 == 0) q[1] = q[0];
    const NSPredicate phi = pred(p), psi = pred(q);
    for (int t = 0; t < 2; ++t) {
      for (int n = 0; n <= 4; ++n) {
        const Nat r = substrate::pair(t, n);
        const bool pre = t == 0 ? p[0].count(n) && p[1].count(n)
                                : q[0].count(n) && q[1].count(n);
        if (!pre) {
          CHECK_THROWS_AS(uniformity_split(r, phi, psi, cfg),
                          PreconditionViolated);
          continue;
        }
        Split s = uniformity_split(r, phi, psi, cfg);
        ++splits;
        CHECK(s.tag == t);
        const NSPredicate& side = s.tag == 0 ? phi : psi;
        CHECK(heyting::verify_valid(side, s.body, cfg).yes());
      }
    }
  }
  CHECK(splits > 500);
}
