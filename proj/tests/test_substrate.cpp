#include "doctest.h"
#include "efft/substrate.hpp"

#include <random>

using namespace efft;
using namespace efft::substrate;
using C = Combinator;

namespace {

EvalOutcome run(const C& c, const Nat& x, std::uint64_t budget = 100000) {
  return apply(build_code(c), x, StepBudget{budget});
}

Nat halted_value(const C& c, const Nat& x) {
  auto out = run(c, x);
  REQUIRE(out.is_halted());
  return out.value();
}

// Addition on <a, b> by recursion on a.
C adder() {
  C step = C::compose(C::succ(),
                      C::compose(C::self(),
                                 C::pair_with(C::compose(C::pred(), C::fst()),
                                              C::snd())));
  C body = C::compose(C::case_of(C::snd(), step),
                      C::pair_with(C::compose(C::sign(), C::fst()), C::id()));
  return C::fix(body);
}

}  // namespace

TEST_CASE("apply: identity, constant and loop") {
  CHECK(halted_value(C::id(), 7) == 7);
  CHECK(halted_value(C::constant(3), 9) == 3);
  CHECK_FALSE(run(C::loop(), 0, 1000).is_halted());
}

TEST_CASE("pair and unpair") {
  CHECK(pair(0, 0) == 1);
  CHECK(pair(2, 3) == 28);
  CHECK(unpair(28) == std::pair<Nat, Nat>{2, 3});
  CHECK_THROWS_AS(unpair(0), DomainError);
  CHECK_THROWS_AS(pair(Nat(1) << 40, 0), OverflowError);

  for (int m = 0; m <= 64; ++m) {
    for (int n = 0; n <= 64; ++n) {
      Nat k = pair(m, n);
      CHECK(k != 0);
      CHECK(unpair(k) == std::pair<Nat, Nat>{m, n});
      CHECK(((k % 2) == 1) == (m == 0));
    }
  }
}

TEST_CASE("pair is onto the positive naturals") {
  for (int k = 1; k < 2000; ++k) {
    auto [m, n] = unpair(k);
    CHECK(pair(m, n) == k);
  }
}

TEST_CASE("build_code examples") {
  CHECK(halted_value(C::compose(C::constant(4), C::id()), 0) == 4);
  CHECK(halted_value(C::case_of(C::constant(8), C::id()), pair(1, 5)) == 5);
  CHECK(halted_value(C::curry(C::fst(), 2), 9) == 2);
}

TEST_CASE("combinator laws on small arguments") {
  const std::map<Nat, Nat> entries{{1, 10}, {4, 40}};
  const C table = C::table(entries, 7);
  const C swap = C::pair_with(C::snd(), C::fst());
  for (int x = 0; x <= 32; ++x) {
    CAPTURE(x);
    CHECK(halted_value(C::id(), x) == x);
    CHECK(halted_value(C::constant(11), x) == 11);
    CHECK(halted_value(C::compose(C::succ(), C::succ()), x) == x + 2);
    CHECK(halted_value(C::pair_with(C::id(), C::constant(2)), x) ==
          pair(x, 2));
    CHECK(halted_value(table, x) ==
          (entries.contains(x) ? entries.at(x) : Nat(7)));
    CHECK(halted_value(C::pred(), x) == (x == 0 ? 0 : x - 1));
    CHECK(halted_value(C::sign(), x) == (x == 0 ? 0 : 1));
    CHECK(halted_value(C::curry(C::snd(), 3), x) == x);
    CHECK_FALSE(run(C::loop(), x, 1000).is_halted());
    if (x >= 1) {
      auto [m, n] = unpair(x);
      CHECK(halted_value(C::fst(), x) == m);
      CHECK(halted_value(C::snd(), x) == n);
      CHECK(halted_value(swap, x) == pair(n, m));
      if (m <= 1) {
        C cases = C::case_of(C::succ(), C::constant(100));
        CHECK(halted_value(cases, x) == (m == 0 ? n + 1 : Nat(100)));
      } else {
        CHECK_FALSE(run(C::case_of(C::id(), C::id()), x, 1000).is_halted());
      }
    } else {
      CHECK_FALSE(run(C::fst(), x, 1000).is_halted());
    }
    for (int n = 0; n <= 4; ++n) {
      const C body = C::pair_with(C::snd(), C::fst());
      CHECK(halted_value(C::curry(body, n), x) == pair(x, n));
    }
  }
}

TEST_CASE("apply and smn compute with codes at run time") {
  // <c, x> is not needed: Apply takes the code and argument from two routes.
  const C apply_const = C::apply(C::constant(build_code(C::succ()).index),
                                 C::id());
  CHECK(halted_value(apply_const, 4) == 5);

  const C make_curry = C::smn(C::snd(), C::id());
  Nat curried = halted_value(make_curry, 6);
  CHECK(curried == build_code(C::curry(C::snd(), 6)).index);
  CHECK(apply(Code{curried}, 99).value() == 99);

  // A curried first projection is built as the constant.
  const C make_const = C::smn(C::fst(), C::id());
  CHECK(halted_value(make_const, 6) == build_code(C::constant(6)).index);
  const Nat big = Nat(1) << 21;  // <big, y> exceeds the pairing limit
  const Nat code = halted_value(make_const, big);
  CHECK(apply(Code{code}, 99).value() == big);
  CHECK_FALSE(apply(build_code(C::curry(C::fst(), big)), 99).is_halted());
}

TEST_CASE("recursion through Fix") {
  const C add = adder();
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      CHECK(halted_value(add, pair(a, b)) == a + b);
    }
  }
  CHECK_FALSE(run(C::self(), 3, 1000).is_halted());
  CHECK_FALSE(run(C::fix(C::self()), 3, 1000).is_halted());
}

TEST_CASE("decode inverts build_code") {
  const std::vector<C> samples = {
      C::id(),
      C::constant(12),
      adder(),
      C::table({{0, 3}, {5, 1}}, 2),
      C::smn(C::curry(C::snd(), 4), C::id()),
  };
  for (const auto& c : samples) {
    const C back = C::decode(build_code(c));
    CHECK(back.code_index() == c.code_index());
    CHECK(back.to_string() == c.to_string());
  }
}

TEST_CASE("every natural decodes and evaluates without host errors") {
  for (int c = 0; c < 3000; ++c) {
    for (int x : {0, 1, 6}) {
      CHECK_NOTHROW(apply(Code{c}, x, StepBudget{500}));
    }
  }
}

TEST_CASE("budget monotonicity and determinism") {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> code_dist(0, 50000);
  std::uniform_int_distribution<int> arg_dist(0, 64);
  for (int i = 0; i < 2000; ++i) {
    Code c{code_dist(rng)};
    Nat x = arg_dist(rng);
    auto small = apply(c, x, StepBudget{50});
    auto large = apply(c, x, StepBudget{5000});
    if (small.is_halted()) {
      REQUIRE(large.is_halted());
      CHECK(large.value() == small.value());
    }
    CHECK(apply(c, x, StepBudget{50}) == small);
  }
}

TEST_CASE("enumerate_codes") {
  auto codes = enumerate_codes(2);
  REQUIRE(codes.size() == 3);
  CHECK(codes[0].index == 0);
  CHECK(codes[2].index == 2);
  CHECK(enumerate_codes(0).size() == 1);
  CHECK(enumerate_codes(17).size() == 18);
}
