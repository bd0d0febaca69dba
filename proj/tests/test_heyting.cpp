#include "doctest.h"
#include "efft/heyting.hpp"

#include <random>

using namespace efft;
using namespace efft::heyting;
using substrate::build_code;
using substrate::pair;
using C = substrate::Combinator;

namespace {

const Carrier kOne({"x"});
const Carrier kTwo({"a", "b"});

NSPredicate pred(const Carrier& c, std::vector<std::set<Nat>> sets) {
  std::vector<RealizerSet> values;
  for (auto& s : sets) values.push_back(RealizerSet::finite(std::move(s)));
  return NSPredicate(c, std::move(values));
}

Nat code_of(const C& c) { return build_code(c).index; }

std::set<Nat> random_subset(std::mt19937& rng, int max_element) {
  std::set<Nat> s;
  for (int i = 0; i <= max_element; ++i) {
    if (rng() % 2) s.insert(i);
  }
  return s;
}

}  // namespace

TEST_CASE("connectives on explicit sets") {
  auto a = pred(kOne, {{1}});
  auto b = pred(kOne, {{2}});
  CHECK(conj(a, b)[0].elements() == std::set<Nat>{10});
  CHECK(disj(a, a)[0].elements() == std::set<Nat>{3, 6});
  auto five = pred(kOne, {{5}});
  CHECK(impl(five, five)[0].contains(0, {}).yes());
  CHECK(impl(five, five)[0].contains(code_of(C::constant(4)), {}).no());
  CHECK(top(kTwo)[1].is_all());
  CHECK(bot(kTwo)[0].elements().empty());
}

TEST_CASE("carrier mismatch is a model error") {
  CHECK_THROWS_AS(conj(pred(kOne, {{1}}), pred(kTwo, {{1}, {2}})), ModelError);
  CHECK_THROWS_AS(Carrier({"a", "a"}), ModelError);
}

TEST_CASE("implication membership is unknown when the candidate diverges") {
  auto five = pred(kOne, {{5}});
  Membership m = impl(five, five)[0].contains(code_of(C::loop()), {});
  CHECK(m.truth == Truth::kUnknown);
}

TEST_CASE("entails examples") {
  auto a = pred(kTwo, {{1, 2}, {4}});
  auto to_top = entails(a, top(kTwo));
  REQUIRE(to_top.valid());
  CHECK(to_top.certificate->index == code_of(C::constant(0)));

  auto from_bot = entails(bot(kTwo), a);
  REQUIRE(from_bot.valid());
  CHECK(from_bot.certificate->index == code_of(C::id()));

  auto threes = pred(kTwo, {{3}, {3}});
  auto empty_at_b = pred(kTwo, {{1}, {}});
  auto refuted = entails(threes, empty_at_b);
  REQUIRE(refuted.refuted());
  CHECK(*refuted.witness_label == 1);
  CHECK(*refuted.witness_realizer == 3);
}

TEST_CASE("entailment between explicit predicates is decided") {
  // 1 must go to 2 at a and to 3 at b: no single image works.
  auto a = pred(kTwo, {{1}, {1}});
  auto b = pred(kTwo, {{2}, {3}});
  CHECK(entails(a, b).refuted());
  // Different realizers at a and b can be routed separately.
  auto a2 = pred(kTwo, {{1}, {4}});
  auto v = entails(a2, b);
  REQUIRE(v.valid());
  CHECK(verify_entailment(a2, b, *v.certificate, {}).yes());
}

TEST_CASE("valid examples") {
  auto v = valid(pred(kTwo, {{2, 7}, {2, 7}}));
  REQUIRE(v.valid());
  CHECK(v.certificate->index == 2);
  CHECK(valid(pred(kTwo, {{2}, {}})).refuted());
  auto t = valid(top(kTwo));
  REQUIRE(t.valid());
  CHECK(t.certificate->index == 0);
  CHECK(valid(pred(Carrier(), {})).valid());
}

TEST_CASE("equiv examples") {
  auto a = pred(kTwo, {{1}, {2, 3}});
  auto b = pred(kTwo, {{0, 4}, {5}});
  auto [ab, ba] = equiv(a, a);
  REQUIRE(ab.valid());
  CHECK(ab.certificate->index == code_of(C::id()));
  CHECK(ba.certificate->index == code_of(C::id()));

  const Nat swap = code_of(C::pair_with(C::snd(), C::fst()));
  auto [l, r] = equiv(conj(a, b), conj(b, a));
  REQUIRE(l.valid());
  REQUIRE(r.valid());
  // The swap code itself works both ways on every small instance.
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto p = pred(kTwo, {random_subset(rng, 5), random_subset(rng, 5)});
    auto q = pred(kTwo, {random_subset(rng, 5), random_subset(rng, 5)});
    CHECK(verify_entailment(conj(p, q), conj(q, p), {swap}, {}).yes());
  }
  auto [tb, bt] = equiv(top(kTwo), bot(kTwo));
  CHECK(tb.refuted());
  CHECK(bt.valid());
}

TEST_CASE("currying both ways through synthesis") {
  std::mt19937 rng(11);
  SearchConfig cfg;
  cfg.enumerate = false;
  int both = 0;
  for (int i = 0; i < 150; ++i) {
    auto a = pred(kTwo, {random_subset(rng, 3), random_subset(rng, 3)});
    auto b = pred(kTwo, {random_subset(rng, 3), random_subset(rng, 3)});
    auto c = pred(kTwo, {random_subset(rng, 3), random_subset(rng, 3)});
    auto uncurried = entails(conj(a, b), c, cfg);
    auto curried = entails(a, impl(b, c), cfg);
    CHECK_FALSE(uncurried.unknown());
    CHECK(uncurried.valid() == curried.valid());
    if (curried.valid()) {
      ++both;
      CHECK(verify_entailment(a, impl(b, c), *curried.certificate, cfg).yes());
    }
  }
  CHECK(both > 0);
}

TEST_CASE("refutations admit no realizer among small codes") {
  std::mt19937 rng(3);
  SearchConfig cfg;
  cfg.budget.max_steps = 2000;
  int refuted = 0;
  for (int i = 0; i < 60; ++i) {
    auto a = pred(kTwo, {random_subset(rng, 2), random_subset(rng, 2)});
    auto b = pred(kTwo, {random_subset(rng, 2), random_subset(rng, 2)});
    auto v = entails(a, b, cfg);
    if (!v.refuted()) continue;
    ++refuted;
    for (int n = 0; n <= 1500; ++n) {
      CHECK_FALSE(verify_entailment(a, b, {n}, cfg).yes());
    }
  }
  CHECK(refuted > 0);
}

TEST_CASE("intensional conjunction with all naturals") {
  auto a = pred(kOne, {{3}});
  auto c = conj(top(kOne), a);
  CHECK(c[0].kind() == RealizerSet::Kind::kIntensional);
  CHECK(c[0].contains(pair(17, 3), {}).yes());
  CHECK(c[0].contains(pair(17, 4), {}).no());
  auto v = entails(a, c);
  REQUIRE(v.valid());
  auto back = entails(c, a);
  REQUIRE(back.valid());
  CHECK(back.sampled);  // the antecedent is infinite
}

TEST_CASE("parallel search returns the smallest index") {
  auto accept = [](const Nat& n) { return n % 97 == 96 || n == 700; };
  CHECK(*first_accepted(5000, 1, accept) == 96);
  CHECK(*first_accepted(5000, 4, accept) == 96);
  CHECK_FALSE(first_accepted(50, 3, accept).has_value());
}
