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

// efft: check model files, synthesize realizers, run demos, verify
// certificates. Exit 0 Valid, 1 Refuted, 2 Unknown, 3 input error.

#include "efft/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using efft::cli::Exit;
using efft::cli::Outcome;

const char* kind_name(efft::heyting::Verdict::Kind k) {
  switch (k) {
    case efft::heyting::Verdict::Kind::kValid: return "valid";
    case efft::heyting::Verdict::Kind::kRefuted: return "refuted";
    case efft::heyting::Verdict::Kind::kUnknown: return "unknown";
  }
  return "unknown";
}

int emit(const Outcome& out, const std::string& format, const std::string& out_file) {
  if (out.record && !out_file.empty()) {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) throw efft::cli::InputError(out_file, 0, 0, "cannot write file");
    f << out.record->serialize();
  }
  if (format == "structured") {
    nlohmann::json j;
    j["verdict"] = kind_name(out.verdict);
    j["report"] = out.report;
    if (out.record) {
      const auto& r = *out.record;
      nlohmann::json rec;
      rec["judgment"] = r.judgment;
      std::vector<std::string> realizers;
      for (const auto& n : r.realizers) realizers.push_back(n.str());
      rec["realizers"] = realizers;
      rec["values"] = r.values;
      rec["digest"] = r.digest;
      rec["text"] = r.serialize();
      j["certificate"] = rec;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& line : out.report) std::cout << line << "\n";
    if (out.record && out_file.empty()) std::cout << "\n" << out.record->serialize();
  }
  return static_cast<int>(efft::cli::exit_for(out.verdict));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw efft::cli::InputError(path, 0, 0, "cannot read file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"efft: realizability checks over the effective topos"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t budget = efft::substrate::kDefaultBudget;
  std::uint64_t code_bound = 5000;
  unsigned jobs = 1;
  std::string format = "text";
  app.add_option("--budget", budget, "Step budget per application")->capture_default_str();
  app.add_option("--code-bound", code_bound, "Largest code tried by enumeration")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads for enumeration")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();

  std::string model, name, goal, object, demo, cert, out_file;

  auto* check = app.add_subcommand("check", "Run a named check of a model file");
  check->add_option("MODEL", model, "Model file (.efft)")->required();
  check->add_option("NAME", name, "Check name")->required();
  check->add_option("--out", out_file, "Write the certificate here");

  auto* synth = app.add_subcommand("synthesize", "Find a realizer of A <= B");
  synth->add_option("MODEL", model, "Model file (.efft)")->required();
  synth->add_option("GOAL", goal, "Two predicates, A<=B")->required();
  synth->add_option("--out", out_file, "Write the certificate here");

  auto* gam = app.add_subcommand("gamma", "List the global points of an object");
  gam->add_option("MODEL", model, "Model file (.efft)")->required();
  gam->add_option("OBJ", object, "Object name")->required();
  gam->add_option("--out", out_file, "Write the certificate here");

  auto* dem = app.add_subcommand("demo", "Run a built-in demonstration");
  dem->add_option("NAME", demo, "Demo name")
      ->required()
      ->check(CLI::IsMember(efft::cli::demo_names()));
  dem->add_option("--out", out_file, "Write the certificate here");

  auto* ver = app.add_subcommand("verify", "Re-check a certificate");
  ver->add_option("CERT_FILE", cert, "Certificate file (.cert)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(Exit::kInputError);
  }

  efft::heyting::SearchConfig cfg;
  cfg.budget.max_steps = budget;
  cfg.code_bound = code_bound;
  cfg.jobs = jobs;

  try {
    if (*check) {
      auto m = efft::cli::load_model(model, cfg);
      return emit(efft::cli::run_check(m, name, cfg), format, out_file);
    }
    if (*synth) {
      auto m = efft::cli::load_model(model, cfg);
      return emit(efft::cli::synthesize(m, goal, cfg), format, out_file);
    }
    if (*gam) {
      auto m = efft::cli::load_model(model, cfg);
      return emit(efft::cli::gamma(m, object, cfg), format, out_file);
    }
    if (*dem) return emit(efft::cli::run_demo(demo, cfg), format, out_file);
    auto record = efft::cli::CertificateRecord::parse(read_file(cert), cert);
    return emit(efft::cli::verify(record, jobs), format, "");
  } catch (const efft::cli::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(Exit::kInputError);
  } catch (const efft::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(Exit::kInputError);
  }
}
