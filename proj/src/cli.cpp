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

#include "efft/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace efft::cli {

using heyting::Carrier;
using heyting::Membership;
using heyting::NSPredicate;
using heyting::RealizerSet;
using heyting::Truth;
using substrate::Code;
using topos::EffObject;

Exit exit_for(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kValid: return Exit::kValid;
    case Verdict::Kind::kRefuted: return Exit::kRefuted;
    case Verdict::Kind::kUnknown: return Exit::kUnknown;
  }
  return Exit::kUnknown;
}

namespace {

std::string position_text(const std::string& file, std::size_t line,
                          std::size_t column) {
  std::string out = file;
  if (line > 0) out += ":" + std::to_string(line);
  if (column > 0) out += ":" + std::to_string(column);
  return out;
}

}  // namespace

InputError::InputError(const std::string& file, std::size_t line,
                       std::size_t column, const std::string& message)
    : ModelError(position_text(file, line, column) + ": " + message),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Model files

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string set_text(const RealizerSet& s) {
  if (s.is_all()) return "N";
  std::vector<std::string> items;
  for (const auto& n : s.elements()) items.push_back(n.str());
  return "{" + join(items, ", ") + "}";
}

class LineParser {
 public:
  LineParser(const std::string& file, std::size_t line_no, const std::string& text)
      : file_(file), line_no_(line_no), text_(text) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '#') break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (word_char(c)) {
        std::size_t j = i;
        while (j < text.size() && word_char(text[j])) ++j;
        tokens_.push_back({text.substr(i, j - i), i + 1});
        i = j;
      } else if ((c == '-' && i + 1 < text.size() && text[i + 1] == '>') ||
                 (c == '<' && i + 1 < text.size() && text[i + 1] == '=')) {
        tokens_.push_back({text.substr(i, 2), i + 1});
        i += 2;
      } else if (std::string("={},:()<").find(c) != std::string::npos) {
        tokens_.push_back({std::string(1, c), i + 1});
        ++i;
      } else if (tokens_.size() >= 2 && tokens_.front().text == "check") {
        // Formula text after "valid" is tokenized by the formula parser.
        tokens_.push_back({std::string(1, c), i + 1});
        ++i;
      } else {
        fail(i + 1, std::string("unexpected character '") + c + "'");
      }
    }
  }

  bool empty() const { return tokens_.empty(); }
  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    static const std::string kEnd;
    return done() ? kEnd : tokens_[pos_].text;
  }
  std::size_t column() const {
    return done() ? text_.size() + 1 : tokens_[pos_].column;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw InputError(file_, line_no_, column, message);
  }
  [[noreturn]] void fail(const std::string& message) const { fail(column(), message); }

  std::string word(const std::string& what) {
    if (done() || !word_char(peek()[0])) {
      fail("expected " + what + (done() ? "" : ", found '" + peek() + "'"));
    }
    return tokens_[pos_++].text;
  }
  void expect(const std::string& text) {
    if (peek() != text) {
      fail("expected '" + text + "'" + (done() ? "" : ", found '" + peek() + "'"));
    }
    ++pos_;
  }
  bool accept(const std::string& text) {
    if (peek() != text) return false;
    ++pos_;
    return true;
  }
  void finish() {
    if (!done()) fail("unexpected '" + peek() + "'");
  }
  /// The raw text from the current token to the end of the line.
  std::string rest() {
    if (done()) fail("expected a formula");
    std::string out = text_.substr(tokens_[pos_].column - 1);
    pos_ = tokens_.size();
    return out;
  }

  // '{' [ item {',' item} ] '}'
  template <typename F>
  void braced(F&& item) {
    expect("{");
    if (accept("}")) return;
    do {
      item();
    } while (accept(","));
    expect("}");
  }

  std::vector<std::string> labels() {
    std::vector<std::string> out;
    std::set<std::string> seen;
    braced([&] {
      const std::size_t col = column();
      out.push_back(word("a label"));
      if (!seen.insert(out.back()).second) fail(col, "duplicate label '" + out.back() + "'");
    });
    return out;
  }

  RealizerSet realizer_set() {
    if (accept("N")) return RealizerSet::all();
    std::set<Nat> items;
    braced([&] {
      const std::size_t col = column();
      const std::string w = word("a natural number");
      if (!std::all_of(w.begin(), w.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        fail(col, "expected a natural number, found '" + w + "'");
      }
      items.insert(Nat(w));
    });
    return RealizerSet::finite(std::move(items));
  }

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_no_; }

 private:
  std::string file_;
  std::size_t line_no_;
  std::string text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::size_t label_index(LineParser& p, const EffObject& x, const std::string& label,
                        std::size_t column) {
  auto i = x.carrier().find(label);
  if (!i) p.fail(column, "'" + label + "' is not a label of " + x.name());
  return *i;
}

// A table over the product of objects: entries "l1 l2 ...: set".
// Unlisted entries are empty.
NSPredicate read_table(LineParser& p, const std::vector<const EffObject*>& objects,
                       std::vector<std::string>* canonical) {
  Carrier carrier = objects.front()->carrier();
  for (std::size_t i = 1; i < objects.size(); ++i) {
    carrier = Carrier::product(carrier, objects[i]->carrier());
  }
  std::vector<RealizerSet> values(carrier.size(), RealizerSet::empty());
  std::vector<bool> given(carrier.size());
  p.braced([&] {
    const std::size_t col = p.column();
    std::size_t index = 0;
    for (const auto* x : objects) {
      const std::size_t c = p.column();
      index = index * x->size() + label_index(p, *x, p.word("a label"), c);
    }
    p.expect(":");
    if (given[index]) p.fail(col, "entry given twice");
    given[index] = true;
    values[index] = p.realizer_set();
  });
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_explicit() && values[i].elements().empty()) continue;
    std::vector<std::string> key;
    std::size_t rest = i;
    std::vector<std::string> parts(objects.size());
    for (std::size_t k = objects.size(); k-- > 0;) {
      parts[k] = objects[k]->carrier().label(rest % objects[k]->size());
      rest /= objects[k]->size();
    }
    canonical->push_back(join(parts, " ") + ": " + set_text(values[i]));
  }
  return NSPredicate(carrier, values);
}

class ModelParser {
 public:
  ModelParser(ModelFile& m, const SearchConfig& cfg, std::string file)
      : m_(m), cfg_(cfg), file_(std::move(file)) {}

  void line(std::size_t line_no, const std::string& text) {
    LineParser p(file_, line_no, text);
    if (p.empty()) return;
    const std::size_t col = p.column();
    const std::string keyword = p.word("a declaration");
    try {
      if (keyword == "nabla") return nabla(p);
      if (keyword == "object") return object(p);
      if (keyword == "product") return product(p);
      if (keyword == "poset") return poset(p);
      if (keyword == "map") return map(p);
      if (keyword == "relation") return relation(p);
      if (keyword == "predicate") return predicate(p);
      if (keyword == "power") return power(p);
      if (keyword == "check") return check(p);
    } catch (const InputError&) {
      throw;
    } catch (const logic::SyntaxError& e) {
      throw InputError(file_, line_no, formula_column_ + e.position().col - 1, e.what());
    } catch (const ModelError& e) {
      throw InputError(file_, line_no, col, e.what());
    }
    p.fail(col, "unknown declaration '" + keyword + "'");
  }

 private:
  std::string fresh(LineParser& p) {
    const std::size_t col = p.column();
    std::string name = p.word("a name");
    if (names_.count(name)) p.fail(col, "'" + name + "' is already declared");
    names_.insert(name);
    return name;
  }

  const EffObject& object_ref(LineParser& p) {
    const std::size_t col = p.column();
    const std::string name = p.word("an object name");
    if (!m_.model.has_object(name)) p.fail(col, "unknown object '" + name + "'");
    return m_.model.object(name);
  }

  const logic::Model::Predicate& predicate_ref(LineParser& p, std::string* name) {
    const std::size_t col = p.column();
    *name = p.word("a predicate name");
    const auto* pred = m_.model.predicate(*name);
    if (!pred) p.fail(col, "unknown predicate '" + *name + "'");
    return *pred;
  }

  void nabla(LineParser& p) {
    const std::string name = fresh(p);
    p.expect("=");
    auto labels = p.labels();
    p.finish();
    m_.model.add_object(topos::nabla(name, labels, cfg_));
    m_.lines.push_back("nabla " + name + " = {" + join(labels, ", ") + "}");
  }

  void object(LineParser& p) {
    const std::string name = fresh(p);
    p.expect("=");
    auto labels = p.labels();
    p.expect("eq");
    // The table refers to the object's own labels.
    EffObject shape = topos::nabla(name, labels, cfg_);
    std::vector<std::string> entries;
    NSPredicate eq = read_table(p, {&shape, &shape}, &entries);
    p.finish();
    m_.model.add_object(topos::validate_object(name, Carrier(labels), eq, cfg_));
    m_.lines.push_back("object " + name + " = {" + join(labels, ", ") + "} eq {" +
                       join(entries, ", ") + "}");
  }

  void product(LineParser& p) {
    const std::string name = fresh(p);
    p.expect("=");
    std::vector<std::string> parts;
    while (!p.done()) parts.push_back(object_ref(p).name());
    if (parts.size() < 2) p.fail("a product needs at least two objects");
    m_.model.add_product(name, parts, cfg_);
    m_.lines.push_back("product " + name + " = " + join(parts, " "));
  }

  void poset(LineParser& p) {
    const std::string name = fresh(p);
    const std::string le = "le_" + name;
    if (names_.count(le)) p.fail("'" + le + "' is already declared");
    names_.insert(le);
    p.expect("=");
    auto labels = p.labels();
    std::vector<std::pair<std::size_t, std::size_t>> less;
    std::vector<std::string> text;
    auto index = [&](const std::string& l, std::size_t col) {
      auto it = std::find(labels.begin(), labels.end(), l);
      if (it == labels.end()) p.fail(col, "'" + l + "' is not a label of " + name);
      return static_cast<std::size_t>(it - labels.begin());
    };
    if (p.accept("with")) {
      do {
        std::size_t col = p.column();
        const std::string a = p.word("a label");
        const std::size_t ia = index(a, col);
        p.expect("<");
        col = p.column();
        const std::string b = p.word("a label");
        less.emplace_back(ia, index(b, col));
        text.push_back(a + " < " + b);
      } while (p.accept(","));
    }
    p.finish();
    auto poset = order::FinitePoset::from_relations(labels, less);
    order::InternalPoset l = order::nabla_poset(poset, cfg_);
    m_.model.add_object(l.object.renamed(name));
    m_.model.add_predicate(le, {name, name}, l.leq, cfg_);
    m_.posets.emplace(name, poset);
    m_.lines.push_back("poset " + name + " = {" + join(labels, ", ") + "}" +
                       (text.empty() ? "" : " with " + join(text, ", ")));
  }

  void map(LineParser& p) {
    const std::string name = fresh(p);
    p.expect(":");
    const EffObject& x = object_ref(p);
    p.expect("->");
    const EffObject& y = object_ref(p);
    if (!x.is_nabla() || !y.is_nabla()) {
      p.fail("map needs nabla objects; use 'relation' for others");
    }
    p.expect("=");
    std::vector<std::optional<std::size_t>> image(x.size());
    p.braced([&] {
      std::size_t col = p.column();
      const std::size_t i = label_index(p, x, p.word("a label"), col);
      p.expect(":");
      col = p.column();
      if (image[i]) p.fail(col, "entry given twice");
      image[i] = label_index(p, y, p.word("a label"), col);
    });
    p.finish();
    order::Endomap f;
    std::vector<std::string> entries;
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (!image[i]) p.fail("map is not total: no image for '" + x.carrier().label(i) + "'");
      f.push_back(*image[i]);
      entries.push_back(x.carrier().label(i) + ": " + y.carrier().label(*image[i]));
    }
    m_.model.add_morphism(name, topos::nabla_map(x, y, f, cfg_));
    if (x.name() == y.name() && m_.posets.count(x.name())) {
      m_.maps[name] = PosetMap{x.name(), f};
    }
    m_.lines.push_back("map " + name + ": " + x.name() + " -> " + y.name() + " = {" +
                       join(entries, ", ") + "}");
  }

  void relation(LineParser& p) {
    const std::string name = fresh(p);
    p.expect(":");
    const EffObject& x = object_ref(p);
    p.expect("->");
    const EffObject& y = object_ref(p);
    p.expect("=");
    std::vector<std::string> entries;
    NSPredicate graph = read_table(p, {&x, &y}, &entries);
    p.finish();
    m_.model.add_morphism(name, topos::validate_morphism(x, y, graph, cfg_));
    m_.lines.push_back("relation " + name + ": " + x.name() + " -> " + y.name() +
                       " = {" + join(entries, ", ") + "}");
  }

  void predicate(LineParser& p) {
    const std::string name = fresh(p);
    p.expect(":");
    std::vector<const EffObject*> objects;
    std::vector<std::string> names;
    while (p.peek() != "=" && !p.done()) {
      objects.push_back(&object_ref(p));
      names.push_back(objects.back()->name());
    }
    if (objects.empty()) p.fail("expected an object name");
    p.expect("=");
    std::vector<std::string> entries;
    NSPredicate values = read_table(p, objects, &entries);
    p.finish();
    m_.model.add_predicate(name, names, values, cfg_);
    m_.lines.push_back("predicate " + name + ": " + join(names, " ") + " = {" +
                       join(entries, ", ") + "}");
  }

  void power(LineParser& p) {
    const std::string name = fresh(p);
    p.expect(":");
    const EffObject& base = object_ref(p);
    p.expect("=");
    std::vector<std::string> members;
    std::vector<NSPredicate> family;
    p.braced([&] {
      std::string member;
      const std::size_t col = p.column();
      const auto& pred = predicate_ref(p, &member);
      if (pred.objects != std::vector<std::string>{base.name()}) {
        p.fail(col, "'" + member + "' is not a predicate on " + base.name());
      }
      members.push_back(member);
      family.push_back(NSPredicate(base.carrier(), pred.values.values()));
    });
    p.finish();
    m_.model.add_power(name, base.name(), members, family, cfg_);
    m_.lines.push_back("power " + name + ": " + base.name() + " = {" +
                       join(members, ", ") + "}");
  }

  void check(LineParser& p) {
    Check c;
    const std::size_t name_col = p.column();
    c.name = p.word("a check name");
    for (const auto& other : m_.checks) {
      if (other.name == c.name) p.fail(name_col, "check '" + c.name + "' is already declared");
    }
    if (p.accept("(")) {
      do {
        logic::Variable v;
        v.name = p.word("a variable");
        p.expect(":");
        v.object = object_ref(p).name();
        c.context.push_back(v);
      } while (p.accept(","));
      p.expect(")");
    }
    p.expect(":");
    const std::size_t kind_col = p.column();
    c.kind = p.word("a judgment");
    std::string name;
    if (c.kind == "valid") {
      formula_column_ = p.column();
      auto phi = logic::parse(p.rest());
      c.args = {logic::to_string(phi)};
    } else if (c.kind == "entails") {
      const auto& a = predicate_ref(p, &name);
      c.args.push_back(name);
      p.expect("<=");
      const std::size_t col = p.column();
      const auto& b = predicate_ref(p, &name);
      c.args.push_back(name);
      if (a.objects != b.objects) p.fail(col, "predicates live on different objects");
    } else if (c.kind == "discrete") {
      predicate_ref(p, &name);
      c.args.push_back(name);
    } else if (c.kind == "split") {
      const std::size_t col = p.column();
      const auto& phi = predicate_ref(p, &name);
      c.args.push_back(name);
      const auto& psi = predicate_ref(p, &name);
      c.args.push_back(name);
      if (phi.objects.size() != 1 || phi.objects != psi.objects ||
          !m_.model.object(phi.objects[0]).is_nabla() ||
          m_.model.object(phi.objects[0]).size() != 2) {
        p.fail(col, "split needs two predicates on one two-element nabla object");
      }
      p.expect("by");
      const std::size_t rcol = p.column();
      const std::string r = p.word("a realizer");
      if (!std::all_of(r.begin(), r.end(),
                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        p.fail(rcol, "expected a natural number");
      }
      c.args.push_back(r);
    } else if (c.kind == "chain" || c.kind == "sup") {
      const std::size_t col = p.column();
      const auto& chain = predicate_ref(p, &name);
      c.args.push_back(name);
      p.expect("in");
      const std::size_t pcol = p.column();
      const std::string poset = p.word("a poset");
      if (!m_.posets.count(poset)) p.fail(pcol, "unknown poset '" + poset + "'");
      if (chain.objects != std::vector<std::string>{poset}) {
        p.fail(col, "'" + name + "' is not a predicate on " + poset);
      }
      c.args.push_back(poset);
    } else if (c.kind == "fixpoint") {
      const std::size_t col = p.column();
      const std::string f = p.word("a map");
      auto it = m_.maps.find(f);
      if (it == m_.maps.end()) p.fail(col, "'" + f + "' is not a map of a poset to itself");
      c.args.push_back(f);
      p.expect("from");
      const std::size_t scol = p.column();
      const std::string start = p.word("a label");
      label_index(p, m_.model.object(it->second.poset), start, scol);
      c.args.push_back(start);
    } else if (c.kind == "gamma") {
      c.args.push_back(object_ref(p).name());
    } else {
      p.fail(kind_col, "unknown judgment '" + c.kind + "'");
    }
    p.finish();
    m_.checks.push_back(c);
    m_.lines.push_back(check_line(c));
  }

 public:
  static std::string check_line(const Check& c) {
    std::string out = "check " + c.name;
    if (!c.context.empty()) {
      std::vector<std::string> vars;
      for (const auto& v : c.context) vars.push_back(v.name + ": " + v.object);
      out += " (" + join(vars, ", ") + ")";
    }
    out += ": " + c.kind;
    if (c.kind == "entails") return out + " " + c.args[0] + " <= " + c.args[1];
    if (c.kind == "split") return out + " " + c.args[0] + " " + c.args[1] + " by " + c.args[2];
    if (c.kind == "chain" || c.kind == "sup") return out + " " + c.args[0] + " in " + c.args[1];
    if (c.kind == "fixpoint") return out + " " + c.args[0] + " from " + c.args[1];
    return out + " " + c.args[0];
  }

 private:
  ModelFile& m_;
  SearchConfig cfg_;
  std::string file_;
  std::set<std::string> names_;
  std::size_t formula_column_ = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, 0, 0, "cannot read file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

const Check& ModelFile::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InputError("<model>", 0, 0, "no check named '" + name + "'");
}

std::string ModelFile::serialize() const {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

ModelFile parse_model(const std::string& text, const SearchConfig& cfg,
                      const std::string& file) {
  ModelFile m;
  ModelParser parser(m, cfg, file);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    parser.line(line_no, line);
  }
  return m;
}

ModelFile load_model(const std::string& path, const SearchConfig& cfg) {
  return parse_model(read_file(path), cfg, path);
}

// ---------------------------------------------------------------------------
// Certificate records

namespace {

const char* kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::kValid: return "valid";
    case Verdict::Kind::kRefuted: return "refuted";
    case Verdict::Kind::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string engine_name() { return std::string("efft ") + EFFT_VERSION; }

std::string record_body(const CertificateRecord& r) {
  std::ostringstream out;
  out << "efft-certificate " << r.version << "\n";
  out << "engine " << r.engine << "\n";
  out << "judgment " << r.judgment << "\n";
  out << "verdict " << kind_name(r.verdict) << "\n";
  std::vector<std::string> items;
  for (const auto& n : r.realizers) items.push_back(n.str());
  out << "realizers [" << join(items, ", ") << "]\n";
  for (const auto& [k, v] : r.values) out << "value " << k << " " << v << "\n";
  out << "budget " << r.budget << "\n";
  out << "code-bound " << r.code_bound << "\n";
  out << "inputs " << r.inputs << "\n";
  out << "model <<\n" << r.model << ">>\n";
  return out.str();
}

}  // namespace

std::string CertificateRecord::inputs_hash() const {
  return logic::fnv1a_hex(model + "\n" + judgment);
}

std::string CertificateRecord::record_digest() const {
  return logic::fnv1a_hex(record_body(*this));
}

std::string CertificateRecord::serialize() const {
  return record_body(*this) + "digest " + digest + "\n";
}

CertificateRecord CertificateRecord::parse(const std::string& text,
                                           const std::string& file) {
  CertificateRecord r;
  r.values.clear();
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  auto fail = [&](std::size_t col, const std::string& message) {
    throw InputError(file, line_no, col, message);
  };
  auto number = [&](const std::string& s, std::size_t col) -> std::uint64_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      fail(col, "expected a natural number");
    }
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      fail(col, "number out of range");
    }
    return 0;
  };
  bool in_model = false;
  bool have_digest = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (in_model) {
      if (line == ">>") {
        in_model = false;
      } else {
        r.model += line + "\n";
      }
      continue;
    }
    if (line.empty()) continue;
    if (have_digest) fail(1, "text after the digest");
    const std::size_t space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    const std::size_t col = key.size() + 2;
    if (line_no == 1 || seen.empty()) {
      if (key != "efft-certificate") fail(1, "expected 'efft-certificate'");
      r.version = static_cast<int>(number(rest, col));
      if (r.version != kVersion) {
        fail(col, "unsupported certificate version " + rest);
      }
      seen.insert(key);
      continue;
    }
    if (key != "value" && !seen.insert(key).second) fail(1, "duplicate field '" + key + "'");
    if (key == "engine") {
      r.engine = rest;
    } else if (key == "judgment") {
      r.judgment = rest;
    } else if (key == "verdict") {
      if (rest == "valid") r.verdict = Verdict::Kind::kValid;
      else if (rest == "refuted") r.verdict = Verdict::Kind::kRefuted;
      else if (rest == "unknown") r.verdict = Verdict::Kind::kUnknown;
      else fail(col, "expected valid, refuted or unknown");
    } else if (key == "realizers") {
      if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']') {
        fail(col, "expected [n, ...]");
      }
      std::string inner = rest.substr(1, rest.size() - 2);
      std::size_t start = 0;
      while (!inner.empty() && start <= inner.size()) {
        std::size_t comma = inner.find(',', start);
        if (comma == std::string::npos) comma = inner.size();
        std::string item = inner.substr(start, comma - start);
        const std::size_t lead = item.find_first_not_of(' ');
        const std::size_t trail = item.find_last_not_of(' ');
        item = lead == std::string::npos ? "" : item.substr(lead, trail - lead + 1);
        const std::size_t item_col = col + 1 + start + (lead == std::string::npos ? 0 : lead);
        if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) {
              return std::isdigit(static_cast<unsigned char>(c));
            })) {
          fail(item_col, "expected a natural number");
        }
        r.realizers.push_back(Nat(item));
        start = comma + 1;
      }
    } else if (key == "value") {
      const std::size_t sep = rest.find(' ');
      if (sep == std::string::npos || sep == 0) fail(col, "expected 'value KEY TEXT'");
      if (!r.values.emplace(rest.substr(0, sep), rest.substr(sep + 1)).second) {
        fail(col, "duplicate value '" + rest.substr(0, sep) + "'");
      }
    } else if (key == "budget") {
      r.budget = number(rest, col);
    } else if (key == "code-bound") {
      r.code_bound = number(rest, col);
    } else if (key == "inputs") {
      r.inputs = rest;
    } else if (key == "model") {
      if (rest != "<<") fail(col, "expected '<<'");
      in_model = true;
    } else if (key == "digest") {
      r.digest = rest;
      have_digest = true;
    } else {
      fail(1, "unknown field '" + key + "'");
    }
  }
  if (in_model) fail(1, "unterminated model block");
  for (const char* required : {"engine", "judgment", "verdict", "realizers", "budget",
                               "code-bound", "inputs", "model", "digest"}) {
    if (!seen.count(required)) {
      throw InputError(file, line_no, 0, std::string("missing field '") + required + "'");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

const NSPredicate& predicate_values(const ModelFile& m, const std::string& name) {
  return m.model.predicate(name)->values;
}

std::string code_text(const Code& c) {
  return c.index.str() + " (" + substrate::Combinator::decode(c).to_string() + ")";
}

std::string labels_text(const Carrier& carrier, const std::vector<std::size_t>& items) {
  std::vector<std::string> out;
  for (auto i : items) out.push_back(carrier.label(i));
  return "{" + join(out, ", ") + "}";
}

std::string fixpoint_formula(const ModelFile& m, const Check& c, std::size_t x) {
  const PosetMap& pm = m.maps.at(c.args[0]);
  const std::string& label = m.posets.at(pm.poset).label(x);
  return "le_" + pm.poset + "(" + c.args[1] + ", " + label + ") /\\ " + c.args[0] + "(" +
         label + ", " + label + ")";
}

/// Runs a check: fills verdict, realizers, values and report lines.
void run(const ModelFile& m, const Check& c, const SearchConfig& cfg, Outcome& out,
         CertificateRecord& rec) {
  auto& report = out.report;
  auto take = [&](const Verdict& v) {
    out.verdict = v.kind;
    if (v.valid()) rec.realizers.push_back(v.certificate->index);
    report.push_back("verdict: " + v.to_string());
  };
  if (c.kind == "valid") {
    auto res = logic::check_valid(logic::parse(c.args[0]), m.model, cfg, c.context);
    take(res.verdict);
  } else if (c.kind == "entails") {
    take(heyting::entails(predicate_values(m, c.args[0]), predicate_values(m, c.args[1]),
                          cfg));
  } else if (c.kind == "discrete") {
    const NSPredicate& a = predicate_values(m, c.args[0]);
    auto w = discrete::compute_D(a, cfg);
    auto support = discrete::cl_support(a);
    report.push_back("support: " + labels_text(a.carrier(), support.elements));
    if (w.nonempty && w.witness) {
      out.verdict = Verdict::Kind::kValid;
      rec.realizers.push_back(w.witness->index);
      report.push_back("verdict: Valid, D(" + c.args[0] + ") is inhabited");
      report.push_back("witness: " + code_text(*w.witness));
    } else if (!w.nonempty) {
      out.verdict = Verdict::Kind::kRefuted;
      report.push_back("verdict: Refuted, D(" + c.args[0] + ") is empty");
    } else {
      out.verdict = Verdict::Kind::kUnknown;
      report.push_back("verdict: Unknown, no witness within the budget");
    }
  } else if (c.kind == "split") {
    const Nat r(c.args[2]);
    try {
      auto s = discrete::uniformity_split(r, predicate_values(m, c.args[0]),
                                          predicate_values(m, c.args[1]), cfg);
      out.verdict = Verdict::Kind::kValid;
      rec.realizers = {r, s.body};
      rec.values["side"] = std::to_string(s.tag);
      report.push_back("verdict: Valid, " + r.str() + " realizes " +
                       c.args[s.tag == 0 ? 0 : 1] + " uniformly");
      report.push_back("tag: " + std::to_string(s.tag) + ", body: " + s.body.str());
    } catch (const PreconditionViolated& e) {
      out.verdict = Verdict::Kind::kRefuted;
      report.push_back(std::string("verdict: Refuted, ") + e.what());
    }
  } else if (c.kind == "chain") {
    auto l = order::nabla_poset(m.posets.at(c.args[1]), cfg);
    auto cc = order::chain_certify(l, predicate_values(m, c.args[0]), cfg);
    take(cc.verdict);
  } else if (c.kind == "sup") {
    auto l = order::nabla_poset(m.posets.at(c.args[1]), cfg);
    const NSPredicate& chain = predicate_values(m, c.args[0]);
    auto cc = order::chain_certify(l, chain, cfg);
    if (!cc.valid()) {
      out.verdict = cc.verdict.kind;
      report.push_back(std::string("verdict: ") +
                       (cc.verdict.refuted() ? "Refuted" : "Unknown") + ", " + c.args[0] +
                       " is not certified as a chain");
      return;
    }
    auto s = order::nabla_chain_sup(l, cc, cfg);
    report.push_back("support: " + labels_text(l.object.carrier(), s.support));
    report.push_back("sup: " + l.object.carrier().label(s.label));
    out.verdict = s.certificate.kind;
    report.push_back("verdict: " + s.certificate.to_string());
    if (s.certificate.valid() && s.stability && s.sup_of_cl) {
      rec.realizers = {s.stability->index, s.sup_of_cl->index, s.certificate.certificate->index};
      rec.values["sup"] = l.object.carrier().label(s.label);
      report.push_back("stability: " + code_text(*s.stability));
    } else if (s.certificate.valid()) {
      out.verdict = Verdict::Kind::kUnknown;
    }
  } else if (c.kind == "fixpoint") {
    const PosetMap& pm = m.maps.at(c.args[0]);
    const auto& p = m.posets.at(pm.poset);
    const std::size_t start = p.index_of(c.args[1]);
    try {
      auto run = order::dacar_reduce(p, pm.f, start);
      std::vector<std::string> chains;
      for (const auto& ch : run.chains) {
        chains.push_back(labels_text(Carrier(p.labels()), ch));
      }
      report.push_back("chains: " + join(chains, " "));
      report.push_back("fixed point: " + p.label(run.fixed_point));
      const std::size_t bw = order::bw_iterate(p, pm.f, start);
      report.push_back("iteration from " + c.args[1] + ": " + p.label(bw));
      rec.values["fixed-point"] = p.label(run.fixed_point);
      rec.values["chains"] = join(chains, " ");
      auto res = logic::check_valid(logic::parse(fixpoint_formula(m, c, run.fixed_point)),
                                    m.model, cfg);
      take(res.verdict);
    } catch (const order::NotProgressive& e) {
      out.verdict = Verdict::Kind::kRefuted;
      report.push_back(std::string("verdict: Refuted, ") + e.what());
    }
  } else if (c.kind == "gamma") {
    const EffObject& x = m.model.object(c.args[0]);
    try {
      auto points = topos::gamma(x, cfg);
      std::vector<std::string> reps;
      for (const auto& pt : points) {
        auto members = x.eq(pt.representative, pt.representative).members(cfg);
        if (members.items.empty() || !members.exact) {
          out.verdict = Verdict::Kind::kUnknown;
          report.push_back("verdict: Unknown, no realizer of existence for " +
                           x.carrier().label(pt.representative));
          return;
        }
        rec.realizers.push_back(members.items.front());
        reps.push_back(labels_text(x.carrier(), pt.members));
        report.push_back("point " + x.carrier().label(pt.representative) + ": " +
                         reps.back() + ", exists by " + members.items.front().str());
      }
      rec.values["points"] = join(reps, " ");
      out.verdict = Verdict::Kind::kValid;
      report.push_back("verdict: Valid, " + std::to_string(points.size()) +
                       " global points");
    } catch (const topos::ValidationError& e) {
      out.verdict = Verdict::Kind::kUnknown;
      report.push_back(std::string("verdict: Unknown, ") + e.what());
    }
  }
}

/// The semantic re-check of a valid record. Returns kValid, kRefuted or
/// kUnknown with a reason.
std::pair<Verdict::Kind, std::string> recheck(const ModelFile& m, const Check& c,
                                              const CertificateRecord& rec,
                                              const SearchConfig& cfg) {
  using K = Verdict::Kind;
  const auto& r = rec.realizers;
  auto need = [&](std::size_t n) { return r.size() == n; };
  auto judge = [](const Membership& mm, const std::string& what) -> std::pair<K, std::string> {
    if (mm.yes()) return {K::kValid, ""};
    if (mm.no()) return {K::kRefuted, what + " does not verify"};
    return {K::kUnknown, what + " could not be decided"};
  };
  auto value = [&](const std::string& key) -> std::optional<std::string> {
    auto it = rec.values.find(key);
    if (it == rec.values.end()) return std::nullopt;
    return it->second;
  };
  auto all = [&](std::vector<std::pair<K, std::string>> parts) -> std::pair<K, std::string> {
    for (auto& p : parts) if (p.first == K::kRefuted) return p;
    for (auto& p : parts) if (p.first == K::kUnknown) return p;
    return {K::kValid, ""};
  };
  if (c.kind == "valid") {
    if (!need(1)) return {K::kRefuted, "expected one realizer"};
    auto i = logic::interpret(logic::parse(c.args[0]), m.model, c.context);
    return judge(heyting::verify_valid(i.predicate, r[0], cfg), "realizer");
  }
  if (c.kind == "entails") {
    if (!need(1)) return {K::kRefuted, "expected one realizer"};
    return judge(heyting::verify_entailment(predicate_values(m, c.args[0]),
                                            predicate_values(m, c.args[1]), Code{r[0]}, cfg),
                 "realizer");
  }
  if (c.kind == "discrete") {
    if (!need(1)) return {K::kRefuted, "expected one realizer"};
    return judge(discrete::d_set(predicate_values(m, c.args[0])).contains(r[0], cfg),
                 "witness");
  }
  if (c.kind == "split") {
    if (!need(2) || r[0] != Nat(c.args[2])) return {K::kRefuted, "realizers do not match"};
    auto side = value("side");
    if (side != "0" && side != "1") return {K::kRefuted, "missing side"};
    const NSPredicate& phi = predicate_values(m, c.args[0]);
    const NSPredicate& psi = predicate_values(m, c.args[1]);
    const NSPredicate& chosen = *side == "0" ? phi : psi;
    auto s = discrete::uniformity_split(r[0], phi, psi, cfg);
    if (std::to_string(s.tag) != *side) return {K::kRefuted, "side does not match"};
    return all({judge(heyting::verify_valid(heyting::disj(phi, psi), r[0], cfg), "split input"),
                judge(heyting::verify_valid(chosen, r[1], cfg), "body")});
  }
  if (c.kind == "chain") {
    if (!need(1)) return {K::kRefuted, "expected one realizer"};
    auto l = order::nabla_poset(m.posets.at(c.args[1]), cfg);
    auto [lhs, rhs] = order::chain_statement(l, predicate_values(m, c.args[0]), cfg);
    return judge(heyting::verify_entailment(lhs, rhs, Code{r[0]}, cfg), "realizer");
  }
  if (c.kind == "sup") {
    if (!need(3)) return {K::kRefuted, "expected three realizers"};
    auto l = order::nabla_poset(m.posets.at(c.args[1]), cfg);
    auto label = value("sup");
    if (!label) return {K::kRefuted, "missing sup"};
    auto x = l.object.carrier().find(*label);
    if (!x) return {K::kRefuted, "unknown label " + *label};
    const NSPredicate& chain = predicate_values(m, c.args[0]);
    auto stability =
        judge(heyting::verify_entailment(order::notnot(l.leq), l.leq, Code{r[0]}, cfg),
              "stability realizer");
    auto of_cl = judge(order::sup_set(l, *x, order::notnot(chain), cfg).contains(r[1], cfg),
                       "supremum of the closure");
    if (stability.first != K::kValid || of_cl.first != K::kValid) {
      return all({stability, of_cl});
    }
    Verdict t = order::sup_transfer(l, Code{r[0]}, chain, *x, Code{r[1]}, cfg);
    if (!t.valid()) return {K::kRefuted, "transfer does not verify: " + t.tactic};
    if (t.certificate->index != r[2]) return {K::kRefuted, "transferred realizer differs"};
    return {K::kValid, ""};
  }
  if (c.kind == "fixpoint") {
    if (!need(1)) return {K::kRefuted, "expected one realizer"};
    const PosetMap& pm = m.maps.at(c.args[0]);
    const auto& p = m.posets.at(pm.poset);
    auto label = value("fixed-point");
    if (!label) return {K::kRefuted, "missing fixed point"};
    auto x = Carrier(p.labels()).find(*label);
    if (!x) return {K::kRefuted, "unknown label " + *label};
    if (pm.f[*x] != *x) return {K::kRefuted, *label + " is not fixed"};
    auto i = logic::interpret(logic::parse(fixpoint_formula(m, c, *x)), m.model);
    return judge(heyting::verify_valid(i.predicate, r[0], cfg), "realizer");
  }
  if (c.kind == "gamma") {
    const EffObject& x = m.model.object(c.args[0]);
    auto points = topos::gamma(x, cfg);
    if (r.size() != points.size()) return {K::kRefuted, "wrong number of points"};
    std::vector<std::string> reps;
    std::vector<std::pair<K, std::string>> parts;
    for (std::size_t i = 0; i < points.size(); ++i) {
      reps.push_back(labels_text(x.carrier(), points[i].members));
      const auto rep = points[i].representative;
      parts.push_back(judge(x.eq(rep, rep).contains(r[i], cfg),
                            "existence of " + x.carrier().label(rep)));
    }
    if (value("points") != join(reps, " ")) return {K::kRefuted, "points differ"};
    return all(parts);
  }
  return {K::kRefuted, "unknown judgment"};
}

Outcome record_run(const ModelFile& m, const Check& c, const SearchConfig& cfg) {
  Outcome out;
  CertificateRecord rec;
  rec.engine = engine_name();
  rec.judgment = ModelParser::check_line(c).substr(6);  // drop "check "
  rec.budget = cfg.budget.max_steps;
  rec.code_bound = cfg.code_bound;
  rec.model = m.serialize();
  out.report.push_back(rec.judgment);
  run(m, c, cfg, out, rec);
  rec.verdict = out.verdict;
  rec.inputs = rec.inputs_hash();
  rec.digest = rec.record_digest();
  out.record = rec;
  return out;
}

Outcome with_check(const ModelFile& m, Check c, const SearchConfig& cfg) {
  ModelFile copy = m;
  std::string base = c.name;
  for (int k = 2;
       std::any_of(copy.checks.begin(), copy.checks.end(),
                   [&](const Check& other) { return other.name == c.name; });
       ++k) {
    c.name = base + std::to_string(k);
  }
  copy.checks.push_back(c);
  copy.lines.push_back(ModelParser::check_line(c));
  return record_run(copy, c, cfg);
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

}  // namespace

Outcome run_check(const ModelFile& m, const std::string& name, const SearchConfig& cfg) {
  return record_run(m, m.check(name), cfg);
}

Outcome synthesize(const ModelFile& m, const std::string& goal, const SearchConfig& cfg) {
  const std::size_t sep = goal.find("<=");
  if (sep == std::string::npos) {
    throw InputError("<goal>", 1, 1, "expected 'A<=B'");
  }
  Check c{"synthesized", {}, "entails", {trim(goal.substr(0, sep)), trim(goal.substr(sep + 2))}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto* p = m.model.predicate(c.args[i]);
    if (!p) {
      throw InputError("<goal>", 1, i == 0 ? 1 : sep + 3,
                       "unknown predicate '" + c.args[i] + "'");
    }
  }
  if (m.model.predicate(c.args[0])->objects != m.model.predicate(c.args[1])->objects) {
    throw InputError("<goal>", 1, sep + 3, "predicates live on different objects");
  }
  return with_check(m, c, cfg);
}

Outcome gamma(const ModelFile& m, const std::string& object, const SearchConfig& cfg) {
  if (!m.model.has_object(object)) {
    throw InputError("<object>", 1, 1, "unknown object '" + object + "'");
  }
  return with_check(m, Check{"points", {}, "gamma", {object}}, cfg);
}

// ---------------------------------------------------------------------------
// Demos

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> kNames = {"discreteness", "uniformity", "dacar",
                                                  "nabla-sup"};
  return kNames;
}

std::string demo_model(const std::string& name) {
  if (name == "discreteness") {
    return "# Disjoint realizer sets: D(A) is inhabited by the constant 0.\n"
           "nabla S = {a, b, c}\n"
           "predicate A: S = {a: {1}, b: {2}}\n"
           "predicate B: S = {a: {1}, b: {1, 2}}\n"
           "check disjoint: discrete A\n"
           "check overlapping: discrete B\n";
  }
  if (name == "uniformity") {
    return "# A realizer of phi(p) \\/ psi(p) for every p picks one side uniformly.\n"
           "nabla Two = {0, 1}\n"
           "predicate phi: Two = {0: {3}, 1: {3, 4}}\n"
           "predicate psi: Two = {0: {1}}\n"
           "check uniform: split phi psi by 7\n"
           "check mixed: split phi psi by 13\n";
  }
  if (name == "dacar") {
    return "# Ascending chains from 0 under a progressive map of 0 < 1 < 2.\n"
           "poset P = {0, 1, 2} with 0 < 1, 1 < 2\n"
           "map f: P -> P = {0: 1, 1: 2, 2: 2}\n"
           "check ascent: fixpoint f from 0\n";
  }
  if (name == "nabla-sup") {
    return "# The supremum of a chain in a nabla poset, through its closure.\n"
           "poset L = {0, 1, 2} with 0 < 1, 1 < 2\n"
           "predicate C: L = {0: {0}, 1: {1}}\n"
           "check sup: sup C in L\n";
  }
  throw InputError("<demo>", 0, 0, "unknown demo '" + name + "'");
}

Outcome run_demo(const std::string& name, const SearchConfig& cfg) {
  ModelFile m = parse_model(demo_model(name), cfg, "<demo " + name + ">");
  Outcome out = run_check(m, m.checks.front().name, cfg);
  // Further checks of the demo are contrasts; they are reported, not recorded.
  for (std::size_t i = 1; i < m.checks.size(); ++i) {
    Outcome other = run_check(m, m.checks[i].name, cfg);
    out.report.push_back("");
    out.report.insert(out.report.end(), other.report.begin(), other.report.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

Outcome verify(const CertificateRecord& rec, unsigned jobs) {
  Outcome out;
  auto done = [&](Verdict::Kind k, const std::string& why) {
    out.verdict = k;
    out.report.push_back(std::string("verify: ") + kind_name(k) + (why.empty() ? "" : ", " + why));
    return out;
  };
  out.report.push_back(rec.judgment);
  if (rec.inputs != rec.inputs_hash()) return done(Verdict::Kind::kRefuted, "inputs hash mismatch");
  if (rec.digest != rec.record_digest()) return done(Verdict::Kind::kRefuted, "digest mismatch");

  SearchConfig cfg;
  cfg.budget.max_steps = rec.budget;
  cfg.code_bound = rec.code_bound;
  cfg.jobs = jobs;
  try {
    ModelFile m = parse_model(rec.model, cfg, "<certificate model>");
    const Check* check = nullptr;
    for (const auto& c : m.checks) {
      if (ModelParser::check_line(c) == "check " + rec.judgment) check = &c;
    }
    if (!check) return done(Verdict::Kind::kRefuted, "judgment not found in the model");
    if (rec.verdict != Verdict::Kind::kValid) {
      // Nothing to re-check but the verdict itself.
      Outcome again = record_run(m, *check, cfg);
      if (again.verdict != rec.verdict) {
        return done(Verdict::Kind::kRefuted,
                    std::string("re-run gives ") + kind_name(again.verdict));
      }
      return done(Verdict::Kind::kValid, std::string("re-run agrees: ") + kind_name(rec.verdict));
    }
    auto [kind, why] = recheck(m, *check, rec, cfg);
    return done(kind, kind == Verdict::Kind::kValid
                          ? std::to_string(rec.realizers.size()) + " realizer(s) re-checked"
                          : why);
  } catch (const InputError& e) {
    return done(Verdict::Kind::kRefuted, std::string("embedded model: ") + e.what());
  } catch (const ModelError& e) {
    return done(Verdict::Kind::kRefuted, e.what());
  }
}

}  // namespace efft::cli
