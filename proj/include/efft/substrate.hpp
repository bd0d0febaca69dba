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

// The computable substrate: a step-budgeted universal partial function over
// natural-number codes, the 2^m(2n+1) pairing, and a combinator kit for
// building codes compositionally.
//
// Code numbering. A code c decodes as tag = c mod 10, payload = c / 10:
//
//   0  leaf, payload mod 8 selects Id Fst Snd Succ Pred Sign Self Loop
//   1  Const n                      payload = n
//   2  Compose(s1, s2)              payload = fields(s1, s2)
//   3  PairWith(s1, s2)             payload = fields(s1, s2)
//   4  Case(s0, s1)                 payload = fields(s0, s1)
//   5  Curry(s, n)                  payload = fields(s, n)
//   6  Table(entries, default)      payload = fields(default, k1, v1, ...)
//   7  Apply(s1, s2)                payload = fields(s1, s2)
//   8  Smn(s, t)                    payload = fields(s, t)
//   9  Fix(s)                       payload = s
//
// fields(...) is the concatenation of Elias-delta codes, least significant
// bit first, under a sentinel top bit; missing fields read as 0. Code size is
// therefore linear in the size of the term. Every natural decodes to some
// combinator, so every natural is a valid code.

#ifndef EFFT_SUBSTRATE_HPP
#define EFFT_SUBSTRATE_HPP

#include "efft/nat.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace efft::substrate {

inline constexpr std::uint64_t kDefaultBudget = 100000;

/// Index into the machine's program space.
struct Code {
  Nat index;

  friend bool operator==(const Code&, const Code&) = default;
  friend std::strong_ordering operator<=>(const Code& a, const Code& b) {
    const int c = a.index.compare(b.index);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
  }
};

struct StepBudget {
  std::uint64_t max_steps = kDefaultBudget;
};

/// Halted(value) or OutOfFuel. Divergence is never an error.
class EvalOutcome {
 public:
  static EvalOutcome halted(Nat value, std::uint64_t steps) {
    return EvalOutcome(std::move(value), steps);
  }
  static EvalOutcome out_of_fuel(std::uint64_t steps) {
    return EvalOutcome(std::nullopt, steps);
  }

  bool is_halted() const { return value_.has_value(); }
  const Nat& value() const { return *value_; }
  std::uint64_t steps() const { return steps_; }

  friend bool operator==(const EvalOutcome& a, const EvalOutcome& b) {
    return a.value_ == b.value_;
  }

 private:
  EvalOutcome(std::optional<Nat> v, std::uint64_t steps)
      : value_(std::move(v)), steps_(steps) {}

  std::optional<Nat> value_;
  std::uint64_t steps_;
};

/// <m, n> = 2^m (2n + 1). Throws OverflowError if m exceeds kMaxPairExponent.
Nat pair(const Nat& m, const Nat& n);
/// Inverse of pair. Throws DomainError on 0.
std::pair<Nat, Nat> unpair(const Nat& k);

inline constexpr std::uint64_t kMaxPairExponent = std::uint64_t{1} << 20;

namespace detail {
struct Node;
}

/// A combinator term. Immutable, cheap to copy.
class Combinator {
 public:
  enum class Kind {
    kId,
    kFst,
    kSnd,
    kSucc,
    kPred,
    kSign,
    kSelf,
    kLoop,
    kConst,
    kCompose,
    kPairWith,
    kCase,
    kCurry,
    kTable,
    kApply,
    kSmn,
    kFix,
  };

  static Combinator id();
  static Combinator fst();
  static Combinator snd();
  static Combinator succ();
  static Combinator pred();
  static Combinator sign();
  static Combinator self();
  static Combinator loop();
  static Combinator constant(const Nat& n);
  /// x -> outer(inner(x))
  static Combinator compose(const Combinator& outer, const Combinator& inner);
  /// x -> <first(x), second(x)>
  static Combinator pair_with(const Combinator& first,
                              const Combinator& second);
  /// <t, m> -> branch_t(m) for t in {0, 1}; diverges on other tags.
  static Combinator case_of(const Combinator& branch0,
                            const Combinator& branch1);
  /// x -> body(<n, x>)
  static Combinator curry(const Combinator& body, const Nat& n);
  /// Finite lookup with default; first entry wins on duplicate keys.
  static Combinator table(const std::map<Nat, Nat>& entries,
                          const Nat& fallback);
  /// x -> phi_{code_of(x)}(arg_of(x))
  static Combinator apply(const Combinator& code_of, const Combinator& arg_of);
  /// x -> code of Curry(body, n_of(x))
  static Combinator smn(const Combinator& body, const Combinator& n_of);
  /// Recursion: inside body, Self stands for the whole Fix term.
  static Combinator fix(const Combinator& body);

  /// Decode any natural. Total.
  static Combinator decode(const Code& code);

  Kind kind() const;
  const Nat& code_index() const;
  std::string to_string() const;

  const detail::Node& node() const { return *node_; }

 private:
  explicit Combinator(std::shared_ptr<const detail::Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

Code build_code(const Combinator& spec);

EvalOutcome apply(const Code& code, const Nat& arg, StepBudget budget = {});

/// Codes 0..bound in increasing order.
std::vector<Code> enumerate_codes(std::uint64_t bound);

}  // namespace efft::substrate

#endif  // EFFT_SUBSTRATE_HPP
