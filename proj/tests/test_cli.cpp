#include "doctest.h"
#include "efft/cli.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace efft;
using namespace efft::cli;
using K = heyting::Verdict::Kind;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string model_path(const std::string& name) {
  return std::string(EFFT_SOURCE_DIR) + "/models/" + name;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(EFFT_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_error(const std::string& text, std::size_t line, std::size_t column) {
  try {
    parse_model(text);
    FAIL("parsed: " << text);
  } catch (const InputError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

/// Changes realizer i and re-seals the record so only the semantic re-check
/// can catch it.
CertificateRecord resealed(CertificateRecord r, std::size_t i, const Nat& value) {
  r.realizers.at(i) = value;
  r.inputs = r.inputs_hash();
  r.digest = r.record_digest();
  return r;
}

}  // namespace

TEST_CASE("exit codes follow the verdict") {
  CHECK(exit_for(K::kValid) == Exit::kValid);
  CHECK(exit_for(K::kRefuted) == Exit::kRefuted);
  CHECK(exit_for(K::kUnknown) == Exit::kUnknown);
  CHECK(static_cast<int>(Exit::kInputError) == 3);
}

TEST_CASE("model files round-trip through their canonical text") {
  for (const char* name : {"disjoint_D.efft", "overlap_D.efft", "chain.efft", "points.efft"}) {
    CAPTURE(name);
    ModelFile m = load_model(model_path(name));
    const std::string text = m.serialize();
    ModelFile again = parse_model(text);
    CHECK(again.serialize() == text);
    CHECK(again.model.describe() == m.model.describe());
    CHECK(again.checks.size() == m.checks.size());
  }
  for (const auto& demo : demo_names()) {
    ModelFile m = parse_model(demo_model(demo));
    CHECK(parse_model(m.serialize()).serialize() == m.serialize());
  }
}

TEST_CASE("parse errors carry line and column") {
  expect_error("nabla S = {a, b}\nnabla S = {c}\n", 2, 7);
  expect_error("nabla S = {a, a}\n", 1, 15);
  expect_error("nabla S = {a, b}\npredicate A: S = {c: {1}}\n", 2, 19);
  expect_error("nabla S = {a}\npredicate A: S = {a: {x}}\n", 2, 23);
  expect_error("frobnicate X\n", 1, 1);
  expect_error("nabla S = {a}\ncheck c: valid forall x:S. (\n", 2, 29);
  expect_error("nabla S = {a} $\n", 1, 15);
  expect_error("poset P = {0, 1} with 0 < 2\n", 1, 27);
  expect_error("poset P = {0, 1}\nmap f: P -> P = {0: 1}\n", 2, 23);
  expect_error("nabla S = {a}\ncheck c: discrete A\n", 2, 19);
  expect_error("nabla S = {a}\ncheck c: sup S in S\n", 2, 14);
}

TEST_CASE("non-nabla declarations are validated") {
  // Not symmetric: q = r is realized but r = q is not.
  CHECK_THROWS_AS(parse_model("object X = {q, r} eq {q q: {1}, q r: {1}, r r: {1}}\n"),
                  InputError);
  // Not strict: A(a) is inhabited but Ex(a) is empty.
  CHECK_THROWS_AS(parse_model("object X = {a} eq {}\npredicate A: X = {a: {0}}\n"),
                  InputError);
}

TEST_CASE("every check of the example models emits a record that verifies") {
  struct Case {
    const char* file;
    const char* check;
    K verdict;
  };
  const Case cases[] = {
      {"disjoint_D.efft", "disjoint", K::kValid},
      {"overlap_D.efft", "overlapping", K::kRefuted},
      {"chain.efft", "is_chain", K::kValid},
      {"chain.efft", "top", K::kValid},
      {"chain.efft", "ascent", K::kValid},
      {"chain.efft", "reflexive", K::kValid},
      {"chain.efft", "antisymmetric", K::kValid},
      {"points.efft", "same", K::kValid},
      {"points.efft", "exists_point", K::kValid},
      {"points.efft", "points", K::kValid},
  };
  for (const auto& c : cases) {
    CAPTURE(c.check);
    ModelFile m = load_model(model_path(c.file));
    Outcome out = run_check(m, c.check);
    CHECK(out.verdict == c.verdict);
    REQUIRE(out.record);
    auto parsed = CertificateRecord::parse(out.record->serialize());
    CHECK(parsed.serialize() == out.record->serialize());
    CHECK(verify(parsed).verdict == K::kValid);
  }
}

TEST_CASE("the disjoint model is witnessed by the constant 0") {
  ModelFile m = load_model(model_path("disjoint_D.efft"));
  Outcome out = run_check(m, "disjoint");
  REQUIRE(out.record);
  REQUIRE(out.record->realizers.size() == 1);
  CHECK(substrate::Combinator::decode(substrate::Code{out.record->realizers[0]}).to_string() == "Const 0");
}

TEST_CASE("synthesize and gamma add ad hoc checks") {
  ModelFile m = load_model(model_path("points.efft"));
  Outcome s = synthesize(m, "E <= F");
  CHECK(s.verdict == K::kValid);
  CHECK(verify(*s.record).verdict == K::kValid);
  CHECK_THROWS_AS(synthesize(m, "E <= P"), InputError);
  CHECK_THROWS_AS(synthesize(m, "E F"), InputError);

  Outcome g = gamma(m, "X");
  CHECK(g.verdict == K::kValid);
  CHECK(g.record->values.at("points") == "{p} {q, r}");
  CHECK(verify(*g.record).verdict == K::kValid);
  CHECK_THROWS_AS(gamma(m, "Y"), InputError);
}

TEST_CASE("demos reproduce their hand runs") {
  Outcome d = run_demo("discreteness");
  CHECK(d.verdict == K::kValid);
  Outcome u = run_demo("uniformity");
  CHECK(u.verdict == K::kValid);
  CHECK(u.record->values.at("side") == "0");
  CHECK(u.record->realizers.at(1) == 3);
  Outcome f = run_demo("dacar");
  CHECK(f.verdict == K::kValid);
  CHECK(f.record->values.at("fixed-point") == "2");
  CHECK(f.record->values.at("chains") == "{0} {0, 1} {0, 1, 2}");
  Outcome s = run_demo("nabla-sup");
  CHECK(s.verdict == K::kValid);
  CHECK(s.record->values.at("sup") == "1");
  CHECK_THROWS_AS(run_demo("nope"), InputError);
}

TEST_CASE("tampering is caught by the digest and by the re-check") {
  for (const auto& demo : demo_names()) {
    CAPTURE(demo);
    Outcome out = run_demo(demo);
    const CertificateRecord& rec = *out.record;
    for (std::size_t i = 0; i < rec.realizers.size(); ++i) {
      CAPTURE(i);
      CertificateRecord t = rec;
      t.realizers[i] += 1;
      CHECK(verify(t).verdict == K::kRefuted);
    }
    CertificateRecord t = rec;
    t.model += "nabla Extra = {z}\n";
    CHECK(verify(t).verdict == K::kRefuted);
  }
  // Resealed records: only the semantics stands between them and Valid.
  // With disjoint supports every code lies in D(A): only the digest binds the
  // witness, and a resealed one is still correct.
  Outcome d = run_demo("discreteness");
  CHECK(verify(resealed(*d.record, 0, 2)).verdict == K::kValid);
  Outcome u = run_demo("uniformity");
  CHECK(verify(resealed(*u.record, 1, 4)).verdict == K::kRefuted);
  CHECK(verify(resealed(*u.record, 0, 8)).verdict == K::kRefuted);
  Outcome s = run_demo("nabla-sup");
  CHECK(verify(resealed(*s.record, 2, 5)).verdict == K::kRefuted);
  ModelFile m = load_model(model_path("points.efft"));
  Outcome e = run_check(m, "same");
  CHECK(verify(resealed(*e.record, 0, 1)).verdict == K::kRefuted);
}

TEST_CASE("malformed certificates are input errors") {
  Outcome out = run_demo("dacar");
  const std::string text = out.record->serialize();
  CHECK_THROWS_AS(CertificateRecord::parse("efft-certificate 2\n"), InputError);
  CHECK_THROWS_AS(CertificateRecord::parse("hello\n"), InputError);
  std::string missing = text.substr(0, text.find("digest"));
  CHECK_THROWS_AS(CertificateRecord::parse(missing), InputError);
  std::string bad = text;
  bad.replace(bad.find("realizers ["), 11, "realizers [x");
  CHECK_THROWS_AS(CertificateRecord::parse(bad), InputError);
}

TEST_CASE("the binary maps verdicts and errors to exit codes") {
  const std::string dir = std::string(EFFT_BINARY_DIR);
  CHECK(run_binary("check " + model_path("disjoint_D.efft") + " disjoint") == 0);
  CHECK(run_binary("check " + model_path("overlap_D.efft") + " overlapping") == 1);
  CHECK(run_binary("check " + model_path("chain.efft") + " shared --budget 2000") == 2);
  CHECK(run_binary("check " + model_path("chain.efft") + " nosuch") == 3);
  CHECK(run_binary("check /nonexistent.efft x") == 3);
  CHECK(run_binary("demo nosuch") == 3);
  CHECK(run_binary("--format structured demo uniformity") == 0);
  for (const auto& demo : demo_names()) {
    CAPTURE(demo);
    const std::string cert = dir + "/cli_" + demo + ".cert";
    CHECK(run_binary("demo " + demo + " --out " + cert) == 0);
    CHECK(run_binary("verify " + cert) == 0);
    std::string text = slurp(cert);
    const std::size_t at = text.find("realizers [") + 11;
    text[at] = text[at] == '9' ? '8' : static_cast<char>(text[at] + 1);
    const std::string tampered = dir + "/cli_" + demo + ".tampered.cert";
    std::ofstream(tampered) << text;
    CHECK(run_binary("verify " + tampered) == 1);
  }
  CHECK(run_binary("verify " + model_path("chain.efft")) == 3);
}
