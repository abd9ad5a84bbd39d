// SPDX-License-Identifier: Apache-2.0

#include "stbc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace stbc {
namespace {

using nlohmann::ordered_json;

// --------------------------------------------------------------------------
// Entry classification shared by the text and LaTeX renderers.

enum class Unit { PlusOne, MinusOne, PlusJ, MinusJ };

struct AtomView {
  int var = 0;
  int sign = +1;
  int conj = +1;
};

struct TokenForm {
  enum class Kind { Zero, Atoms, Coords };
  Kind kind = Kind::Zero;
  bool half = false;  // global 1/sqrt(2) factor
  std::vector<AtomView> atoms;
  std::vector<std::pair<Coord, Unit>> coords;
};

const Sqrt2Rational& half_scale() {
  static const Sqrt2Rational v = Sqrt2Rational::inv_sqrt2();
  return v;
}

std::optional<Unit> unit_of(const Sqrt2Complex& value, bool half) {
  const Sqrt2Rational s = half ? half_scale() : Sqrt2Rational(1);
  if (value.im().is_zero()) {
    if (value.re() == s) return Unit::PlusOne;
    if (value.re() == -s) return Unit::MinusOne;
  } else if (value.re().is_zero()) {
    if (value.im() == s) return Unit::PlusJ;
    if (value.im() == -s) return Unit::MinusJ;
  }
  return std::nullopt;
}

// Reads the entry as a scaled sum of whole-variable atoms, or failing that
// as a sum of unit-coefficient real coordinates. Terms arrive sorted by
// (var, part), so an atom occupies two adjacent slots.
std::optional<TokenForm> decompose(const LinearEntry& e) {
  TokenForm out;
  if (e.is_zero()) return out;
  const auto& terms = e.terms();

  std::vector<AtomView> atoms;
  std::optional<bool> atoms_half;
  bool atoms_ok = true;
  for (std::size_t i = 0; atoms_ok && i < terms.size(); i += 2) {
    const int var = terms[i].first.var;
    if (i + 1 >= terms.size() || terms[i].first.part != Part::I ||
        terms[i + 1].first.var != var || terms[i + 1].first.part != Part::Q) {
      atoms_ok = false;
      break;
    }
    const Sqrt2Complex& ci = terms[i].second;
    const Sqrt2Complex& cq = terms[i + 1].second;
    if (!ci.im().is_zero()) {
      atoms_ok = false;
      break;
    }
    AtomView a;
    a.var = var;
    bool half = false;
    if (ci.re() == Sqrt2Rational(1)) {
      a.sign = +1;
    } else if (ci.re() == -Sqrt2Rational(1)) {
      a.sign = -1;
    } else if (ci.re() == half_scale()) {
      a.sign = +1;
      half = true;
    } else if (ci.re() == -half_scale()) {
      a.sign = -1;
      half = true;
    } else {
      atoms_ok = false;
      break;
    }
    if (cq == ci.times_j()) {
      a.conj = +1;
    } else if (cq == -ci.times_j()) {
      a.conj = -1;
    } else {
      atoms_ok = false;
      break;
    }
    if (atoms_half && *atoms_half != half) {
      atoms_ok = false;
      break;
    }
    atoms_half = half;
    atoms.push_back(a);
  }
  if (atoms_ok && !atoms.empty() && atoms.size() <= 2) {
    out.kind = TokenForm::Kind::Atoms;
    out.half = atoms_half.value_or(false);
    out.atoms = std::move(atoms);
    return out;
  }

  for (bool half : {false, true}) {
    std::vector<std::pair<Coord, Unit>> coords;
    bool ok = true;
    for (const auto& [coord, coeff] : terms) {
      const auto u = unit_of(coeff, half);
      if (!u) {
        ok = false;
        break;
      }
      coords.emplace_back(coord, *u);
    }
    if (ok) {
      out.kind = TokenForm::Kind::Coords;
      out.half = half;
      // Display in-phase terms before quadrature ones, the usual order for
      // coordinate-interleaved entries.
      std::stable_sort(coords.begin(), coords.end(), [](const auto& x, const auto& y) {
        return static_cast<int>(x.first.part) < static_cast<int>(y.first.part);
      });
      out.coords = std::move(coords);
      return out;
    }
  }
  return std::nullopt;
}

std::string atom_text(const AtomView& a) {
  std::string s = a.sign < 0 ? "-" : "";
  s += "x" + std::to_string(a.var);
  if (a.conj < 0) s += "*";
  return s;
}

std::string coord_text(const Coord& c, Unit u) {
  std::string s;
  switch (u) {
    case Unit::PlusOne:
      break;
    case Unit::MinusOne:
      s += "-";
      break;
    case Unit::PlusJ:
      s += "j*";
      break;
    case Unit::MinusJ:
      s += "-j*";
      break;
  }
  s += "x" + std::to_string(c.var);
  s += c.part == Part::I ? "I" : "Q";
  return s;
}

std::string join_sum(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0 && parts[i].front() != '-') s += "+";
    s += parts[i];
  }
  return s;
}

// --------------------------------------------------------------------------
// Token parser (recursive descent over a whitespace-free token).

class TokenParser {
 public:
  explicit TokenParser(std::string token) : token_(std::move(token)) {
    src_.reserve(token_.size());
    for (char c : token_) {
      if (!std::isspace(static_cast<unsigned char>(c))) src_.push_back(c);
    }
  }

  LinearEntry parse() {
    if (src_ == "0") return LinearEntry();
    LinearEntry e;
    if (peek() == '(') {
      ++pos_;
      parse_sum(e);
      expect(')');
      if (!done()) {
        expect_r2();
        e = e.scaled(Sqrt2Complex(half_scale(), Sqrt2Rational(0)));
      }
    } else {
      parse_sum(e);
    }
    if (!done()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad entry token '" + token_ + "': " + why);
  }
  bool done() const { return pos_ >= src_.size(); }
  char peek() const { return done() ? '\0' : src_[pos_]; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void expect_r2() {
    if (src_.compare(pos_, 3, "/r2") != 0) fail("expected '/r2'");
    pos_ += 3;
  }

  void parse_sum(LinearEntry& e) {
    parse_term(e, +1);
    while (!done() && (peek() == '+' || peek() == '-')) {
      const int sign = peek() == '+' ? +1 : -1;
      ++pos_;
      parse_term(e, sign);
    }
  }

  void parse_term(LinearEntry& e, int outer_sign) {
    int sign = outer_sign;
    if (peek() == '-') {
      sign = -sign;
      ++pos_;
    }
    bool imaginary = false;
    if (peek() == 'j') {
      ++pos_;
      expect('*');
      imaginary = true;
    }
    expect('x');
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
    long var = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      var = var * 10 + (src_[pos_] - '0');
      if (var > 1'000'000) fail("variable index too large");
      ++pos_;
    }

    std::optional<Part> part;
    int conj = +1;
    if (peek() == 'I') {
      part = Part::I;
      ++pos_;
    } else if (peek() == 'Q') {
      part = Part::Q;
      ++pos_;
    } else if (peek() == '*') {
      conj = -1;
      ++pos_;
    }
    bool half = false;
    if (peek() == '/') {
      expect_r2();
      half = true;
    }

    Sqrt2Rational mag = half ? half_scale() : Sqrt2Rational(1);
    if (sign < 0) mag = -mag;
    const Sqrt2Complex c = imaginary ? Sqrt2Complex(Sqrt2Rational(0), mag)
                                     : Sqrt2Complex(mag, Sqrt2Rational(0));
    const int v = static_cast<int>(var);
    if (part) {
      e.add_term(Coord{v, *part}, c);
    } else {
      e.add_term(Coord{v, Part::I}, c);
      e.add_term(Coord{v, Part::Q}, conj > 0 ? c.times_j() : -c.times_j());
    }
  }

  std::string token_;
  std::string src_;
  std::size_t pos_ = 0;
};

// --------------------------------------------------------------------------
// JSON helpers.

ordered_json rational_json(const Sqrt2Rational& v) {
  return ordered_json{{"a", v.a().get_str()}, {"b", v.b().get_str()}};
}

Sqrt2Rational rational_from(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("rational must be an object");
  mpq_class a(j.at("a").get<std::string>());
  mpq_class b(j.at("b").get<std::string>());
  a.canonicalize();
  b.canonicalize();
  return Sqrt2Rational(a, b);
}

int positive_int(const nlohmann::json& j, const char* field) {
  const int v = j.at(field).get<int>();
  if (v < 1 || v > 1'000'000) {
    throw std::invalid_argument(std::string("field '") + field + "' out of range");
  }
  return v;
}

DesignMatrix design_from_json(const nlohmann::json& root) {
  const int p = positive_int(root, "p");
  const int n = positive_int(root, "n");
  const int k = positive_int(root, "k");
  const auto& entries = root.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(p)) {
    throw std::invalid_argument("entries row count does not match p");
  }
  DesignMatrix d(p, n, k);
  for (int r = 0; r < p; ++r) {
    const auto& row = entries.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("entries column count does not match n");
    }
    for (int c = 0; c < n; ++c) {
      LinearEntry e;
      for (const auto& term : row.at(static_cast<std::size_t>(c))) {
        const int var = term.at("var").get<int>();
        const std::string part = term.at("part").get<std::string>();
        if (part != "I" && part != "Q") throw std::invalid_argument("part must be I or Q");
        e.add_term(Coord{var, part == "I" ? Part::I : Part::Q},
                   Sqrt2Complex(rational_from(term.at("re")), rational_from(term.at("im"))));
      }
      d.at(r, c) = e;
    }
  }
  if (!d.vars_in_range()) throw std::invalid_argument("variable index outside [0, k)");
  return d;
}

}  // namespace

std::string entry_token(const LinearEntry& e) {
  const auto form = decompose(e);
  if (!form) throw std::invalid_argument("entry has no token form: " + e.str());
  switch (form->kind) {
    case TokenForm::Kind::Zero:
      return "0";
    case TokenForm::Kind::Atoms: {
      std::vector<std::string> parts;
      parts.reserve(form->atoms.size());
      for (const auto& a : form->atoms) parts.push_back(atom_text(a));
      if (parts.size() == 1) return form->half ? parts[0] + "/r2" : parts[0];
      return "(" + join_sum(parts) + ")" + (form->half ? "/r2" : "");
    }
    case TokenForm::Kind::Coords: {
      std::vector<std::string> parts;
      parts.reserve(form->coords.size());
      for (const auto& [coord, u] : form->coords) parts.push_back(coord_text(coord, u));
      const std::string inner = join_sum(parts);
      return form->half ? "(" + inner + ")/r2" : inner;
    }
  }
  throw std::logic_error("unreachable");
}

LinearEntry parse_entry_token(const std::string& token) {
  return TokenParser(token).parse();
}

std::string to_text(const DesignMatrix& d) {
  std::ostringstream out;
  out << "[" << d.p() << "," << d.n() << "," << d.k() << "]\n";
  for (int r = 0; r < d.p(); ++r) {
    for (int c = 0; c < d.n(); ++c) {
      if (c > 0) out << " ";
      out << entry_token(d.at(r, c));
    }
    out << "\n";
  }
  return out.str();
}

DesignMatrix from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("empty design text");
  int p = 0;
  int n = 0;
  int k = 0;
  if (std::sscanf(line.c_str(), " [%d,%d,%d]", &p, &n, &k) != 3 || p < 1 || n < 1 || k < 1) {
    throw std::invalid_argument("design text must start with a [p,n,k] header");
  }
  DesignMatrix d(p, n, k);
  for (int r = 0; r < p; ++r) {
    if (!next_line()) throw std::invalid_argument("design text ends before row " + std::to_string(r));
    std::istringstream row(line);
    std::string token;
    for (int c = 0; c < n; ++c) {
      if (!(row >> token)) {
        throw std::invalid_argument("row " + std::to_string(r) + " has fewer than " +
                                    std::to_string(n) + " entries");
      }
      d.at(r, c) = parse_entry_token(token);
    }
    std::string extra;
    if (row >> extra) throw std::invalid_argument("row " + std::to_string(r) + " has extra entries");
  }
  if (!d.vars_in_range()) throw std::invalid_argument("variable index outside [0, k)");
  return d;
}

std::string to_json(const DesignMatrix& d) {
  ordered_json root;
  root["p"] = d.p();
  root["n"] = d.n();
  root["k"] = d.k();
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < d.p(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < d.n(); ++c) {
      ordered_json cell = ordered_json::array();
      for (const auto& [coord, coeff] : d.at(r, c).terms()) {
        cell.push_back(ordered_json{{"var", coord.var},
                                    {"part", coord.part == Part::I ? "I" : "Q"},
                                    {"re", rational_json(coeff.re())},
                                    {"im", rational_json(coeff.im())}});
      }
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  root["entries"] = std::move(rows);
  return root.dump();
}

DesignMatrix from_json(const std::string& text) {
  return design_from_json(nlohmann::json::parse(text));
}

std::string to_latex(const DesignMatrix& d) {
  auto entry_latex = [](const LinearEntry& e) -> std::string {
    const auto form = decompose(e);
    if (!form) throw std::invalid_argument("entry has no token form: " + e.str());
    switch (form->kind) {
      case TokenForm::Kind::Zero:
        return "0";
      case TokenForm::Kind::Atoms: {
        std::vector<std::string> parts;
        for (const auto& a : form->atoms) {
          std::string s = a.sign < 0 ? "-" : "";
          s += "x_{" + std::to_string(a.var) + "}";
          if (a.conj < 0) s += "^{*}";
          parts.push_back(std::move(s));
        }
        const std::string inner = join_sum(parts);
        if (form->half) return "\\frac{" + inner + "}{\\sqrt{2}}";
        return parts.size() == 1 ? inner : "(" + inner + ")";
      }
      case TokenForm::Kind::Coords: {
        std::vector<std::string> parts;
        for (const auto& [coord, u] : form->coords) {
          std::string s;
          switch (u) {
            case Unit::PlusOne:
              break;
            case Unit::MinusOne:
              s += "-";
              break;
            case Unit::PlusJ:
              s += "j";
              break;
            case Unit::MinusJ:
              s += "-j";
              break;
          }
          s += "x_{" + std::to_string(coord.var) + (coord.part == Part::I ? "I" : "Q") + "}";
          parts.push_back(std::move(s));
        }
        const std::string inner = join_sum(parts);
        if (form->half) return "\\frac{" + inner + "}{\\sqrt{2}}";
        return inner;
      }
    }
    throw std::logic_error("unreachable");
  };

  std::ostringstream out;
  out << "\\left[\\begin{array}{" << std::string(static_cast<std::size_t>(d.n()), 'c')
      << "}\n";
  for (int r = 0; r < d.p(); ++r) {
    for (int c = 0; c < d.n(); ++c) {
      if (c > 0) out << " & ";
      out << entry_latex(d.at(r, c));
    }
    out << " \\\\\n";
  }
  out << "\\end{array}\\right]\n";
  return out.str();
}

std::string export_design(const DesignMatrix& d, ExportFormat f) {
  switch (f) {
    case ExportFormat::Json:
      return to_json(d);
    case ExportFormat::Text:
      return to_text(d);
    case ExportFormat::Latex:
      return to_latex(d);
  }
  throw std::logic_error("unreachable");
}

DesignMatrix import_design(const std::string& bytes) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty design input");
  return bytes[first] == '{' ? from_json(bytes) : from_text(bytes);
}

std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("STBC_FIXTURE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::filesystem::path("tests") / "fixtures";
}

Fixture load_fixture(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open fixture " + file.string());
  const nlohmann::json root = nlohmann::json::parse(in);
  Fixture f;
  f.name = root.at("name").get<std::string>();
  f.source = root.at("source").get<std::string>();
  const int p = positive_int(root, "p");
  const int n = positive_int(root, "n");
  const int k = positive_int(root, "k");
  const auto& rows = root.at("rows");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(p)) {
    throw std::runtime_error("fixture " + f.name + ": row count does not match p");
  }
  DesignMatrix d(p, n, k);
  for (int r = 0; r < p; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw std::runtime_error("fixture " + f.name + ": row " + std::to_string(r) +
                               " does not have n entries");
    }
    for (int c = 0; c < n; ++c) {
      d.at(r, c) = parse_entry_token(row.at(static_cast<std::size_t>(c)).get<std::string>());
    }
  }
  if (!d.vars_in_range()) {
    throw std::runtime_error("fixture " + f.name + ": variable index outside [0, k)");
  }
  if (!is_orthogonal(d)) {
    throw std::runtime_error("fixture " + f.name + " is not orthogonal");
  }
  f.design = std::move(d);
  return f;
}

std::vector<Fixture> load_all_fixtures() {
  const auto dir = fixture_dir();
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("fixture directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Fixture> out;
  out.reserve(files.size());
  for (const auto& file : files) out.push_back(load_fixture(file));
  return out;
}

}  // namespace stbc
