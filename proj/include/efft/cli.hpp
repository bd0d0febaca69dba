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

// Batch front-end: model files (.efft), named checks, demos, and
// certificate records (.cert) that can be re-checked independently.

#ifndef EFFT_CLI_HPP
#define EFFT_CLI_HPP

#include "efft/order.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace efft::cli {

using heyting::SearchConfig;
using heyting::Verdict;

/// Exit statuses; a function of the verdict only.
enum class Exit : int { kValid = 0, kRefuted = 1, kUnknown = 2, kInputError = 3 };

Exit exit_for(Verdict::Kind kind);

/// A file or parse error with its position (1-based; 0 when not known).
class InputError : public ModelError {
 public:
  InputError(const std::string& file, std::size_t line, std::size_t column,
             const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A named judgment of a model file.
struct Check {
  std::string name;
  std::vector<logic::Variable> context;
  /// valid | entails | discrete | split | chain | sup | fixpoint
  std::string kind;
  /// valid: the formula; entails: A, B; discrete: A; split: phi, psi, r;
  /// chain and sup: C, P; fixpoint: f, start.
  std::vector<std::string> args;
};

/// A set-side endomap of a declared poset.
struct PosetMap {
  std::string poset;
  order::Endomap f;
};

struct ModelFile {
  logic::Model model;
  std::map<std::string, order::FinitePoset> posets;
  std::map<std::string, PosetMap> maps;
  std::vector<Check> checks;
  /// Canonical declarations, one per line.
  std::vector<std::string> lines;

  const Check& check(const std::string& name) const;
  /// Canonical text; parsing it gives the same model and the same text.
  std::string serialize() const;
};

/// Throws InputError with the position of the first problem.
ModelFile parse_model(const std::string& text, const SearchConfig& cfg = {},
                      const std::string& file = "<input>");
ModelFile load_model(const std::string& path, const SearchConfig& cfg = {});

/// A re-checkable record of one judgment.
struct CertificateRecord {
  static constexpr int kVersion = 1;

  int version = kVersion;
  std::string engine;
  std::string judgment;  // canonical check line: "name (ctx): kind args"
  Verdict::Kind verdict = Verdict::Kind::kUnknown;
  std::vector<Nat> realizers;
  /// Named side values: labels, tags, fixed points.
  std::map<std::string, std::string> values;
  std::uint64_t budget = substrate::kDefaultBudget;
  std::uint64_t code_bound = 5000;
  std::string model;   // canonical model text
  std::string inputs;  // FNV-1a of model and judgment
  std::string digest;  // FNV-1a of every other field

  std::string serialize() const;
  /// Throws InputError on malformed records.
  static CertificateRecord parse(const std::string& text,
                                 const std::string& file = "<certificate>");

  std::string inputs_hash() const;
  std::string record_digest() const;
};

struct Outcome {
  Verdict::Kind verdict = Verdict::Kind::kUnknown;
  std::vector<std::string> report;
  std::optional<CertificateRecord> record;
};

/// Runs a named check of the model and records it.
Outcome run_check(const ModelFile& m, const std::string& name,
                  const SearchConfig& cfg = {});

/// entails A <= B for two declared predicates, given as "A<=B".
Outcome synthesize(const ModelFile& m, const std::string& goal,
                   const SearchConfig& cfg = {});

/// Global points of a declared object.
Outcome gamma(const ModelFile& m, const std::string& object,
              const SearchConfig& cfg = {});

/// The built-in demos: discreteness, uniformity, dacar, nabla-sup.
const std::vector<std::string>& demo_names();
/// The model file a demo runs; throws InputError for an unknown name.
std::string demo_model(const std::string& name);
Outcome run_demo(const std::string& name, const SearchConfig& cfg = {});

/// Re-checks a record with its recorded budget: hashes first, then every
/// realizer against its judgment. Valid when all checks pass, Refuted when
/// one fails.
Outcome verify(const CertificateRecord& record, unsigned jobs = 1);

}  // namespace efft::cli

#endif  // EFFT_CLI_HPP
