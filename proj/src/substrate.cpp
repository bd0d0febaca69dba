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

#include "efft/substrate.hpp"

#include <bit>
#include <sstream>

namespace efft::substrate {

namespace mp = boost::multiprecision;
using Kind = Combinator::Kind;

Nat pair(const Nat& m, const Nat& n) {
  if (m > kMaxPairExponent) {
    throw OverflowError("pair: exponent " + m.str() + " too large");
  }
  Nat odd = 2 * n + 1;
  return odd << static_cast<unsigned>(m);
}

std::pair<Nat, Nat> unpair(const Nat& k) {
  if (k <= 0) throw DomainError("unpair: 0 is not a pair");
  auto m = mp::lsb(k);
  Nat odd = k >> m;
  return {Nat(m), (odd - 1) / 2};
}

namespace detail {

struct Node {
  Kind kind;
  Nat code;
  Nat value;  // Const n, Curry n, Table default
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  std::vector<std::pair<Nat, Nat>> entries;  // Table, in lookup order
};

}  // namespace detail

namespace {

using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

constexpr unsigned kTags = 10;

int leaf_id(Kind k) {
  switch (k) {
    case Kind::kId: return 0;
    case Kind::kFst: return 1;
    case Kind::kSnd: return 2;
    case Kind::kSucc: return 3;
    case Kind::kPred: return 4;
    case Kind::kSign: return 5;
    case Kind::kSelf: return 6;
    case Kind::kLoop: return 7;
    default: return -1;
  }
}

constexpr Kind kLeaves[8] = {Kind::kId,   Kind::kFst,  Kind::kSnd,
                             Kind::kSucc, Kind::kPred, Kind::kSign,
                             Kind::kSelf, Kind::kLoop};

NodePtr make_leaf(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->code = Nat(kTags * leaf_id(k));
  return n;
}

// Multi-field payloads are Elias-delta streams read from the least
// significant bit, terminated by a sentinel 1 bit. A field that runs past the
// end of the stream reads as 0, so every payload decodes.
class FieldWriter {
 public:
  void put(const Nat& n) {
    const Nat v = n + 1;
    const unsigned len = mp::msb(v) + 1;
    const unsigned len_bits = std::bit_width(len);
    for (unsigned i = 1; i < len_bits; ++i) bits_.push_back(false);
    for (unsigned i = len_bits; i-- > 0;) bits_.push_back((len >> i) & 1u);
    for (unsigned i = len - 1; i-- > 0;) bits_.push_back(mp::bit_test(v, i));
  }

  Nat finish() const {
    Nat out = 0;
    mp::bit_set(out, static_cast<unsigned>(bits_.size()));
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) mp::bit_set(out, static_cast<unsigned>(i));
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

class FieldReader {
 public:
  explicit FieldReader(const Nat& payload)
      : payload_(payload), end_(payload == 0 ? 0 : mp::msb(payload)) {}

  bool exhausted() const { return pos_ >= end_; }

  Nat get() {
    unsigned zeros = 0;
    for (;;) {
      if (exhausted()) return 0;
      if (bit()) break;
      ++zeros;
    }
    std::uint64_t len = 1;
    for (unsigned i = 0; i < zeros; ++i) {
      if (exhausted()) return 0;
      len = (len << 1) | (bit() ? 1u : 0u);
      if (len > (std::uint64_t{1} << 32)) return 0;
    }
    // Most significant bit first; set bits in place to stay linear.
    Nat v = 0;
    mp::bit_set(v, static_cast<unsigned>(len - 1));
    for (std::uint64_t i = len - 1; i-- > 0;) {
      if (exhausted()) return 0;
      if (bit()) mp::bit_set(v, static_cast<unsigned>(i));
    }
    return v - 1;
  }

 private:
  bool bit() {
    return mp::bit_test(payload_, static_cast<unsigned>(pos_++));
  }

  const Nat& payload_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

Nat fields(std::initializer_list<const Nat*> values) {
  FieldWriter w;
  for (const Nat* v : values) w.put(*v);
  return w.finish();
}

NodePtr make_binary(Kind k, unsigned tag, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->code = kTags * fields({&a->code, &b->code}) + tag;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr decode_node(const Nat& c) {
  const unsigned tag = static_cast<unsigned>(c % kTags);
  const Nat payload = c / kTags;
  auto n = std::make_shared<Node>();
  n->code = c;
  switch (tag) {
    case 0:
      n->kind = kLeaves[static_cast<unsigned>(payload % 8)];
      break;
    case 1:
      n->kind = Kind::kConst;
      n->value = payload;
      break;
    case 5: {
      FieldReader r(payload);
      n->kind = Kind::kCurry;
      n->a = decode_node(r.get());
      n->value = r.get();
      break;
    }
    case 6: {
      FieldReader r(payload);
      n->kind = Kind::kTable;
      n->value = r.get();
      while (!r.exhausted()) {
        Nat key = r.get();
        if (r.exhausted()) break;
        n->entries.emplace_back(std::move(key), r.get());
      }
      break;
    }
    case 9:
      n->kind = Kind::kFix;
      n->a = decode_node(payload);
      break;
    default: {
      FieldReader r(payload);
      static constexpr Kind kBinary[kTags] = {
          Kind::kId,    Kind::kId,    Kind::kCompose, Kind::kPairWith,
          Kind::kCase,  Kind::kId,    Kind::kId,      Kind::kApply,
          Kind::kSmn,   Kind::kId};
      n->kind = kBinary[tag];
      Nat first = r.get();
      Nat second = r.get();
      n->a = decode_node(first);
      n->b = decode_node(second);
      break;
    }
  }
  return n;
}

// Decoding big codes (tables especially) costs integer square roots on long
// numbers; synthesis applies the same few codes many times.
NodePtr decode_cached(const Nat& c) {
  constexpr std::size_t kCacheLimit = 8192;
  thread_local std::map<Nat, NodePtr> cache;
  if (auto it = cache.find(c); it != cache.end()) return it->second;
  if (cache.size() >= kCacheLimit) cache.clear();
  NodePtr node = decode_node(c);
  cache.emplace(c, node);
  return node;
}

std::string render(const Node& n) {
  std::ostringstream out;
  switch (n.kind) {
    case Kind::kId: return "Id";
    case Kind::kFst: return "Fst";
    case Kind::kSnd: return "Snd";
    case Kind::kSucc: return "Succ";
    case Kind::kPred: return "Pred";
    case Kind::kSign: return "Sign";
    case Kind::kSelf: return "Self";
    case Kind::kLoop: return "Loop";
    case Kind::kConst: return "Const " + n.value.str();
    case Kind::kCompose:
      return "Compose(" + render(*n.a) + ", " + render(*n.b) + ")";
    case Kind::kPairWith:
      return "PairWith(" + render(*n.a) + ", " + render(*n.b) + ")";
    case Kind::kCase:
      return "Case(" + render(*n.a) + ", " + render(*n.b) + ")";
    case Kind::kCurry:
      return "Curry(" + render(*n.a) + ", " + n.value.str() + ")";
    case Kind::kApply:
      return "Apply(" + render(*n.a) + ", " + render(*n.b) + ")";
    case Kind::kSmn:
      return "Smn(" + render(*n.a) + ", " + render(*n.b) + ")";
    case Kind::kFix: return "Fix(" + render(*n.a) + ")";
    case Kind::kTable: {
      out << "Table{";
      bool first = true;
      for (const auto& [k, v] : n.entries) {
        out << (first ? "" : ", ") << k << "->" << v;
        first = false;
      }
      out << "; " << n.value << "}";
      return out.str();
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluator: an explicit-stack machine, so deep recursion through Fix costs
// budget rather than host stack.

struct Env {
  const Node* fix;
  std::shared_ptr<const Env> parent;
};
using EnvPtr = std::shared_ptr<const Env>;

enum class FrameKind { kCompose, kPairFirst, kPairSecond, kApplyCode,
                       kApplyArg, kSmn };

struct Frame {
  FrameKind kind;
  const Node* node;  // continuation term
  Nat saved;         // argument or first result
  EnvPtr env;
};

class Machine {
 public:
  explicit Machine(std::uint64_t max_steps) : max_steps_(max_steps) {}

  EvalOutcome run(const Node* root, Nat arg) {
    const Node* node = root;
    EnvPtr env;
    Nat x = std::move(arg);
    bool evaluating = true;
    for (;;) {
      if (evaluating) {
        if (!charge(1)) return EvalOutcome::out_of_fuel(steps_);
        switch (node->kind) {
          case Kind::kId:
            evaluating = false;
            break;
          case Kind::kConst:
            x = node->value;
            evaluating = false;
            break;
          case Kind::kFst:
          case Kind::kSnd: {
            if (x == 0) return diverge();
            auto [m, n] = unpair(x);
            x = node->kind == Kind::kFst ? std::move(m) : std::move(n);
            evaluating = false;
            break;
          }
          case Kind::kSucc:
            x += 1;
            evaluating = false;
            break;
          case Kind::kPred:
            if (x > 0) x -= 1;
            evaluating = false;
            break;
          case Kind::kSign:
            x = x == 0 ? 0 : 1;
            evaluating = false;
            break;
          case Kind::kLoop:
            return diverge();
          case Kind::kSelf:
            if (!env) return diverge();
            node = env->fix;
            env = env->parent;
            break;
          case Kind::kFix:
            env = std::make_shared<const Env>(Env{node, env});
            node = node->a.get();
            break;
          case Kind::kCompose:
            stack_.push_back({FrameKind::kCompose, node->a.get(), {}, env});
            node = node->b.get();
            break;
          case Kind::kPairWith:
            stack_.push_back({FrameKind::kPairFirst, node->b.get(), x, env});
            node = node->a.get();
            break;
          case Kind::kApply:
            stack_.push_back({FrameKind::kApplyCode, node->b.get(), x, env});
            node = node->a.get();
            break;
          case Kind::kSmn:
            stack_.push_back({FrameKind::kSmn, node->a.get(), {}, env});
            node = node->b.get();
            break;
          case Kind::kCase: {
            if (x == 0) return diverge();
            auto [t, m] = unpair(x);
            if (t > 1) return diverge();
            node = t == 0 ? node->a.get() : node->b.get();
            x = std::move(m);
            break;
          }
          case Kind::kCurry: {
            if (!machine_pair(node->value, x)) return diverge();
            node = node->a.get();
            break;
          }
          case Kind::kTable: {
            Nat out = node->value;
            for (const auto& [k, v] : node->entries) {
              if (k == x) {
                out = v;
                break;
              }
            }
            x = std::move(out);
            evaluating = false;
            break;
          }
        }
        continue;
      }

      if (stack_.empty()) return EvalOutcome::halted(std::move(x), steps_);
      Frame frame = std::move(stack_.back());
      stack_.pop_back();
      switch (frame.kind) {
        case FrameKind::kCompose:
          node = frame.node;
          env = std::move(frame.env);
          evaluating = true;
          break;
        case FrameKind::kPairFirst:
          stack_.push_back({FrameKind::kPairSecond, nullptr, x, {}});
          node = frame.node;
          x = std::move(frame.saved);
          env = std::move(frame.env);
          evaluating = true;
          break;
        case FrameKind::kPairSecond: {
          Nat first = std::move(frame.saved);
          if (!charge(1)) return EvalOutcome::out_of_fuel(steps_);
          if (!machine_pair(first, x)) return diverge();
          break;
        }
        case FrameKind::kApplyCode:
          stack_.push_back({FrameKind::kApplyArg, nullptr, x, {}});
          node = frame.node;
          x = std::move(frame.saved);
          env = std::move(frame.env);
          evaluating = true;
          break;
        case FrameKind::kApplyArg: {
          // Decoding cost is charged by the size of the code.
          if (!charge(1 + mp::msb(frame.saved + 1) / 8)) {
            return EvalOutcome::out_of_fuel(steps_);
          }
          keep_alive_.push_back(decode_cached(frame.saved));
          node = keep_alive_.back().get();
          env.reset();
          evaluating = true;
          break;
        }
        case FrameKind::kSmn:
          // Curry(Fst, n) is Const n wherever it halts; the Const code keeps
          // n out of a pair exponent.
          if (frame.node->kind == Kind::kFst) {
            x = kTags * x + 1;
          } else {
            x = kTags * fields({&frame.node->code, &x}) + 5;
          }
          break;
      }
    }
  }

 private:
  bool charge(std::uint64_t cost) {
    if (cost > max_steps_ - std::min(steps_, max_steps_)) {
      steps_ = max_steps_;
      return false;
    }
    steps_ += cost;
    return true;
  }

  EvalOutcome diverge() {
    steps_ = max_steps_;
    return EvalOutcome::out_of_fuel(steps_);
  }

  // x <- <m, x>, charging one step per 64 bits of output. An exponent beyond
  // kMaxPairExponent never fits, so it counts as divergence.
  bool machine_pair(const Nat& m, Nat& x) {
    if (m > kMaxPairExponent) return false;
    const auto shift = static_cast<std::uint64_t>(m);
    if (!charge(shift / 64)) return false;
    x = (2 * x + 1) << static_cast<unsigned>(shift);
    return true;
  }

  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
  std::vector<Frame> stack_;
  std::vector<NodePtr> keep_alive_;
};

}  // namespace

Combinator Combinator::id() { return Combinator(make_leaf(Kind::kId)); }
Combinator Combinator::fst() { return Combinator(make_leaf(Kind::kFst)); }
Combinator Combinator::snd() { return Combinator(make_leaf(Kind::kSnd)); }
Combinator Combinator::succ() { return Combinator(make_leaf(Kind::kSucc)); }
Combinator Combinator::pred() { return Combinator(make_leaf(Kind::kPred)); }
Combinator Combinator::sign() { return Combinator(make_leaf(Kind::kSign)); }
Combinator Combinator::self() { return Combinator(make_leaf(Kind::kSelf)); }
Combinator Combinator::loop() { return Combinator(make_leaf(Kind::kLoop)); }

Combinator Combinator::constant(const Nat& n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kConst;
  node->value = n;
  node->code = kTags * n + 1;
  return Combinator(std::move(node));
}

Combinator Combinator::compose(const Combinator& outer,
                               const Combinator& inner) {
  return Combinator(make_binary(Kind::kCompose, 2, outer.node_, inner.node_));
}

Combinator Combinator::pair_with(const Combinator& first,
                                 const Combinator& second) {
  return Combinator(
      make_binary(Kind::kPairWith, 3, first.node_, second.node_));
}

Combinator Combinator::case_of(const Combinator& branch0,
                               const Combinator& branch1) {
  return Combinator(make_binary(Kind::kCase, 4, branch0.node_, branch1.node_));
}

Combinator Combinator::curry(const Combinator& body, const Nat& n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kCurry;
  node->a = body.node_;
  node->value = n;
  node->code = kTags * fields({&body.code_index(), &n}) + 5;
  return Combinator(std::move(node));
}

Combinator Combinator::table(const std::map<Nat, Nat>& entries,
                             const Nat& fallback) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kTable;
  node->value = fallback;
  node->entries.assign(entries.begin(), entries.end());
  FieldWriter w;
  w.put(fallback);
  for (const auto& [k, v] : node->entries) {
    w.put(k);
    w.put(v);
  }
  node->code = kTags * w.finish() + 6;
  return Combinator(std::move(node));
}

Combinator Combinator::apply(const Combinator& code_of,
                             const Combinator& arg_of) {
  return Combinator(make_binary(Kind::kApply, 7, code_of.node_, arg_of.node_));
}

Combinator Combinator::smn(const Combinator& body, const Combinator& n_of) {
  return Combinator(make_binary(Kind::kSmn, 8, body.node_, n_of.node_));
}

Combinator Combinator::fix(const Combinator& body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kFix;
  node->a = body.node_;
  node->code = kTags * body.code_index() + 9;
  return Combinator(std::move(node));
}

Combinator Combinator::decode(const Code& code) {
  return Combinator(decode_node(code.index));
}

Combinator::Kind Combinator::kind() const { return node_->kind; }
const Nat& Combinator::code_index() const { return node_->code; }
std::string Combinator::to_string() const { return render(*node_); }

Code build_code(const Combinator& spec) { return Code{spec.code_index()}; }

EvalOutcome apply(const Code& code, const Nat& arg, StepBudget budget) {
  if (budget.max_steps == 0) return EvalOutcome::out_of_fuel(0);
  const NodePtr root = decode_cached(code.index);
  Machine machine(budget.max_steps);
  return machine.run(root.get(), arg);
}

std::vector<Code> enumerate_codes(std::uint64_t bound) {
  std::vector<Code> codes;
  codes.reserve(bound + 1);
  for (std::uint64_t i = 0; i <= bound; ++i) codes.push_back(Code{Nat(i)});
  return codes;
}

}  // namespace efft::substrate
