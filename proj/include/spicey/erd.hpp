#pragma once

// Entity-relationship descriptions: the term syntax used in `.erdterm` files,
// a canonical printer, validation, and classification of relationships into
// the shapes the persistence layer can implement.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "calendar.hpp"

namespace spicey::erd {

enum class DomainKind { Int, Float, Bool, String, Date };

using Literal = std::variant<std::int64_t, double, bool, std::string, CalendarTime>;

struct Domain {
  DomainKind kind = DomainKind::String;
  std::optional<Literal> defaultValue;
  bool operator==(const Domain&) const = default;
};

enum class KeyKind { NoKey, Unique };

struct Attribute {
  std::string name;
  Domain domain;
  KeyKind key = KeyKind::NoKey;
  bool nullAllowed = false;
  bool operator==(const Attribute&) const = default;
};

struct Entity {
  std::string name;
  std::vector<Attribute> attributes;
  bool operator==(const Entity&) const = default;
};

struct Cardinality {
  enum class Form { Exactly, Between };
  Form form = Form::Between;
  std::uint32_t min = 0;
  std::optional<std::uint32_t> max;  // nullopt = Infinite

  static Cardinality exactly(std::uint32_t n) { return {Form::Exactly, n, n}; }
  static Cardinality between(std::uint32_t lo, std::optional<std::uint32_t> hi) {
    return {Form::Between, lo, hi};
  }
  bool unbounded() const { return !max.has_value(); }
  bool operator==(const Cardinality&) const = default;
};

struct REnd {
  std::string entity;
  std::string role;
  Cardinality cardinality;
  bool operator==(const REnd&) const = default;
};

struct Relationship {
  std::string name;
  REnd endA;
  REnd endB;
  bool operator==(const Relationship&) const = default;
};

struct ERD {
  std::string name;
  std::vector<Entity> entities;
  std::vector<Relationship> relationships;

  const Entity* findEntity(std::string_view n) const {
    for (const auto& e : entities)
      if (e.name == n) return &e;
    return nullptr;
  }
  const Relationship* findRelationship(std::string_view n) const {
    for (const auto& r : relationships)
      if (r.name == n) return &r;
    return nullptr;
  }
  bool operator==(const ERD&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string expected, std::string found)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": expected " +
                           expected + ", found " + found),
        line_(line),
        column_(column),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

struct ValidationError {
  std::string message;
  bool operator==(const ValidationError&) const = default;
};

// Thrown by operations whose precondition is a valid ERD.
class InvalidErd : public std::runtime_error {
 public:
  explicit InvalidErd(std::vector<ValidationError> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<ValidationError>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<ValidationError>& errs) {
    std::string out;
    for (const auto& e : errs) {
      if (!out.empty()) out += "; ";
      out += e.message;
    }
    return out;
  }
  std::vector<ValidationError> errors_;
};

inline std::string_view domainKindName(DomainKind k) {
  switch (k) {
    case DomainKind::Int: return "IntDom";
    case DomainKind::Float: return "FloatDom";
    case DomainKind::Bool: return "BoolDom";
    case DomainKind::String: return "StringDom";
    case DomainKind::Date: return "DateDom";
  }
  return "?";
}

inline bool literalMatches(DomainKind k, const Literal& lit) {
  switch (k) {
    case DomainKind::Int: return std::holds_alternative<std::int64_t>(lit);
    case DomainKind::Float: return std::holds_alternative<double>(lit);
    case DomainKind::Bool: return std::holds_alternative<bool>(lit);
    case DomainKind::String: return std::holds_alternative<std::string>(lit);
    case DomainKind::Date: return std::holds_alternative<CalendarTime>(lit);
  }
  return false;
}

inline bool isIdentifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum class Kind { Ident, String, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;

  std::string describe() const {
    switch (kind) {
      case Kind::Ident: return "'" + text + "'";
      case Kind::String: return "string \"" + text + "\"";
      case Kind::Number: return "number " + text;
      case Kind::Punct: return "'" + text + "'";
      case Kind::End: return "end of input";
    }
    return text;
  }
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpace();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '"') {
        t.kind = Token::Kind::String;
        t.text = readString(t);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Token::Kind::Number;
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                ((src_[pos_] == '-' || src_[pos_] == '+') &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Ident;
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (c == '[' || c == ']' || c == '(' || c == ')' || c == ',') {
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, c);
        advance();
      } else {
        throw ParseError(t.line, t.column, "term", "character '" + std::string(1, c) + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skipSpace() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string readString(const Token& t) {
    advance();  // opening quote
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      char c = src_[pos_];
      if (c == '\n') throw ParseError(line_, col_, "closing '\"'", "end of line");
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) break;
        char e = src_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: throw ParseError(line_, col_, "escape sequence", std::string("\\") + e);
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
    if (pos_ >= src_.size()) throw ParseError(t.line, t.column, "closing '\"'", "end of input");
    advance();
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ERD parseTop() {
    ERD erd;
    std::size_t parens = openParens();
    expectIdent("ERD");
    erd.name = expectString("ERD name");
    erd.entities = parseList<Entity>([this] { return parseEntity(); });
    erd.relationships = parseList<Relationship>([this] { return parseRelationship(); });
    closeParens(parens);
    if (peek().kind != Token::Kind::End) fail("end of input");
    return erd;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().line, peek().column, expected, peek().describe());
  }

  bool isPunct(char c) const {
    return peek().kind == Token::Kind::Punct && peek().text[0] == c;
  }
  void expectPunct(char c) {
    if (!isPunct(c)) fail(std::string("'") + c + "'");
    next();
  }
  void expectIdent(std::string_view word) {
    if (peek().kind != Token::Kind::Ident || peek().text != word)
      fail("'" + std::string(word) + "'");
    next();
  }
  std::string expectString(const std::string& what) {
    if (peek().kind != Token::Kind::String) fail(what + " (string)");
    return next().text;
  }
  std::size_t openParens() {
    std::size_t n = 0;
    while (isPunct('(')) {
      next();
      ++n;
    }
    return n;
  }
  void closeParens(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) expectPunct(')');
  }

  template <class T, class F>
  std::vector<T> parseList(F item) {
    std::vector<T> out;
    expectPunct('[');
    if (isPunct(']')) {
      next();
      return out;
    }
    for (;;) {
      out.push_back(item());
      if (isPunct(',')) {
        next();
        continue;
      }
      expectPunct(']');
      return out;
    }
  }

  Entity parseEntity() {
    std::size_t p = openParens();
    Entity e;
    expectIdent("Entity");
    e.name = expectString("entity name");
    e.attributes = parseList<Attribute>([this] { return parseAttribute(); });
    closeParens(p);
    return e;
  }

  Attribute parseAttribute() {
    std::size_t p = openParens();
    Attribute a;
    expectIdent("Attribute");
    a.name = expectString("attribute name");
    a.domain = parseDomain();
    a.key = parseKey();
    a.nullAllowed = parseBool();
    closeParens(p);
    return a;
  }

  Domain parseDomain() {
    std::size_t p = openParens();
    Domain d;
    if (peek().kind != Token::Kind::Ident) fail("domain (IntDom, FloatDom, BoolDom, StringDom, DateDom)");
    const std::string& w = peek().text;
    if (w == "IntDom") d.kind = DomainKind::Int;
    else if (w == "FloatDom") d.kind = DomainKind::Float;
    else if (w == "BoolDom") d.kind = DomainKind::Bool;
    else if (w == "StringDom") d.kind = DomainKind::String;
    else if (w == "DateDom") d.kind = DomainKind::Date;
    else fail("domain (IntDom, FloatDom, BoolDom, StringDom, DateDom)");
    next();
    d.defaultValue = parseMaybe(d.kind);
    closeParens(p);
    return d;
  }

  std::optional<Literal> parseMaybe(DomainKind kind) {
    std::size_t p = openParens();
    if (peek().kind == Token::Kind::Ident && peek().text == "Nothing") {
      next();
      closeParens(p);
      return std::nullopt;
    }
    if (peek().kind != Token::Kind::Ident || peek().text != "Just") fail("'Nothing' or 'Just'");
    next();
    Literal lit = parseLiteral(kind);
    closeParens(p);
    return lit;
  }

  Literal parseLiteral(DomainKind kind) {
    std::size_t p = openParens();
    Literal out;
    const Token& t = peek();
    switch (kind) {
      case DomainKind::Int: {
        if (t.kind != Token::Kind::Number) fail("integer literal");
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail("integer literal");
        out = v;
        break;
      }
      case DomainKind::Float: {
        if (t.kind != Token::Kind::Number) fail("float literal");
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail("float literal");
        out = v;
        break;
      }
      case DomainKind::Bool:
        if (t.kind == Token::Kind::Ident && (t.text == "True" || t.text == "False"))
          out = (t.text == "True");
        else
          fail("'True' or 'False'");
        break;
      case DomainKind::String:
        if (t.kind != Token::Kind::String) fail("string literal");
        out = t.text;
        break;
      case DomainKind::Date: {
        if (t.kind != Token::Kind::String) fail("date literal \"YYYY-MM-DDTHH:MM:SS\"");
        auto ct = CalendarTime::parseIso(t.text);
        if (!ct) fail("date literal \"YYYY-MM-DDTHH:MM:SS\"");
        out = *ct;
        break;
      }
    }
    next();
    closeParens(p);
    return out;
  }

  KeyKind parseKey() {
    std::size_t p = openParens();
    KeyKind k = KeyKind::NoKey;
    if (peek().kind == Token::Kind::Ident && peek().text == "NoKey") k = KeyKind::NoKey;
    else if (peek().kind == Token::Kind::Ident && peek().text == "Unique") k = KeyKind::Unique;
    else fail("key ('NoKey' or 'Unique')");
    next();
    closeParens(p);
    return k;
  }

  bool parseBool() {
    std::size_t p = openParens();
    bool b = false;
    if (peek().kind == Token::Kind::Ident && (peek().text == "True" || peek().text == "False"))
      b = peek().text == "True";
    else
      fail("'True' or 'False'");
    next();
    closeParens(p);
    return b;
  }

  std::uint32_t parseNat(const char* what) {
    if (peek().kind != Token::Kind::Number) fail(what);
    const std::string& s = peek().text;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(what);
    next();
    return v;
  }

  Cardinality parseCardinality() {
    std::size_t p = openParens();
    Cardinality c;
    if (peek().kind == Token::Kind::Ident && peek().text == "Exactly") {
      next();
      c = Cardinality::exactly(parseNat("natural number"));
    } else if (peek().kind == Token::Kind::Ident && peek().text == "Between") {
      next();
      std::uint32_t lo = parseNat("natural number");
      if (peek().kind == Token::Kind::Ident && peek().text == "Infinite") {
        next();
        c = Cardinality::between(lo, std::nullopt);
      } else {
        c = Cardinality::between(lo, parseNat("natural number or 'Infinite'"));
      }
    } else {
      fail("cardinality ('Exactly' or 'Between')");
    }
    closeParens(p);
    return c;
  }

  REnd parseREnd() {
    std::size_t p = openParens();
    REnd e;
    expectIdent("REnd");
    e.entity = expectString("entity name");
    e.role = expectString("role name");
    e.cardinality = parseCardinality();
    closeParens(p);
    return e;
  }

  Relationship parseRelationship() {
    std::size_t p = openParens();
    Relationship r;
    expectIdent("Relationship");
    r.name = expectString("relationship name");
    const Token at = peek();
    auto ends = parseList<REnd>([this] { return parseREnd(); });
    if (ends.size() != 2)
      throw ParseError(at.line, at.column, "exactly two relationship ends",
                       std::to_string(ends.size()) + " end(s)");
    r.endA = std::move(ends[0]);
    r.endB = std::move(ends[1]);
    closeParens(p);
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses the term syntax, e.g. `ERD "X" [Entity "E" [Attribute "A" (IntDom Nothing) NoKey False]] []`.
// Throws ParseError.
inline ERD parseERD(std::string_view source) {
  detail::Lexer lexer(source);
  detail::Parser parser(lexer.run());
  return parser.parseTop();
}

// ---------------------------------------------------------------------------
// Printing

inline std::string quoteString(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string printLiteral(const Literal& lit) {
  struct V {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      std::string s(buf, p);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(bool v) const { return v ? "True" : "False"; }
    std::string operator()(const std::string& v) const { return quoteString(v); }
    std::string operator()(const CalendarTime& v) const { return quoteString(v.toIso()); }
  };
  return std::visit(V{}, lit);
}

inline std::string printCardinality(const Cardinality& c) {
  if (c.form == Cardinality::Form::Exactly) return "(Exactly " + std::to_string(c.min) + ")";
  return "(Between " + std::to_string(c.min) + " " +
         (c.max ? std::to_string(*c.max) : std::string("Infinite")) + ")";
}

inline std::string printAttribute(const Attribute& a) {
  std::string dom = "(" + std::string(domainKindName(a.domain.kind)) + " " +
                    (a.domain.defaultValue ? "(Just " + printLiteral(*a.domain.defaultValue) + ")"
                                           : std::string("Nothing")) +
                    ")";
  return "Attribute " + quoteString(a.name) + " " + dom + " " +
         (a.key == KeyKind::Unique ? "Unique" : "NoKey") + " " + (a.nullAllowed ? "True" : "False");
}

// Canonical form: a list with at most one single-line element stays on one
// line; anything longer breaks one element per line.
inline std::string printERD(const ERD& erd) {
  auto block = [](const std::vector<std::string>& items, const std::string& indent) {
    if (items.empty()) return std::string("[]");
    if (items.size() == 1 && items[0].find('\n') == std::string::npos) return "[" + items[0] + "]";
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ",\n" + indent + " ";
      std::string item = items[i];
      std::string shifted;
      for (char c : item) {
        shifted += c;
        if (c == '\n') shifted += indent + " ";
      }
      out += shifted;
    }
    return out + "]";
  };

  std::vector<std::string> ents;
  for (const auto& e : erd.entities) {
    std::vector<std::string> attrs;
    for (const auto& a : e.attributes) attrs.push_back(printAttribute(a));
    std::string head = "Entity " + quoteString(e.name);
    std::string list = block(attrs, "  ");
    ents.push_back(list.find('\n') == std::string::npos ? head + " " + list
                                                        : head + "\n  " + list);
  }
  std::vector<std::string> rels;
  for (const auto& r : erd.relationships) {
    auto end = [](const REnd& x) {
      return "REnd " + quoteString(x.entity) + " " + quoteString(x.role) + " " +
             printCardinality(x.cardinality);
    };
    rels.push_back("Relationship " + quoteString(r.name) + "\n  " +
                   block({end(r.endA), end(r.endB)}, "  "));
  }
  std::string e = block(ents, "  ");
  std::string r = block(rels, "  ");
  std::string out = "ERD " + quoteString(erd.name);
  if (e.find('\n') == std::string::npos && r.find('\n') == std::string::npos)
    return out + " " + e + " " + r + "\n";
  return out + "\n  " + e + "\n  " + r + "\n";
}

// ---------------------------------------------------------------------------
// Relationship shapes

struct RelShape {
  enum class Kind { OneToMany, ManyToMany };
  Kind kind = Kind::OneToMany;
  std::string relationship;
  // OneToMany: the end whose cardinality is Exactly 1 / Between 0 1 (the
  // entity referenced by the foreign key) and the end that holds the key.
  // ManyToMany: endA and endB in declaration order.
  REnd one;
  REnd many;
  bool oneIsEndA = true;

  bool isOneToMany() const { return kind == Kind::OneToMany; }
  // Every instance on the many side must reference an owner.
  bool ownerRequired() const { return isOneToMany() && one.cardinality.min >= 1; }
  // Limit on how many `many` instances one owner may have.
  std::optional<std::uint32_t> manyMax() const { return many.cardinality.max; }
};

namespace detail {

inline bool isOneLike(const Cardinality& c) {
  return (c.form == Cardinality::Form::Exactly && c.min == 1) ||
         (c.form == Cardinality::Form::Between && c.min == 0 && c.max == 1u);
}
inline bool isManyLike(const Cardinality& c) {
  return c.form == Cardinality::Form::Between && c.min == 0 && (!c.max || *c.max >= 1);
}
inline bool wellFormed(const Cardinality& c) {
  if (c.form == Cardinality::Form::Exactly) return c.min >= 1 && c.max == c.min;
  return !c.max || (*c.max >= 1 && c.min <= *c.max);
}

}  // namespace detail

// Classifies one relationship, or returns the reason it is unsupported.
inline std::variant<RelShape, ValidationError> classifyRelationship(const Relationship& r) {
  const auto& a = r.endA.cardinality;
  const auto& b = r.endB.cardinality;
  RelShape s;
  s.relationship = r.name;
  bool aOne = detail::isOneLike(a), bOne = detail::isOneLike(b);
  bool aMany = detail::isManyLike(a), bMany = detail::isManyLike(b);
  auto oneToMany = [&](bool oneIsA) {
    s.kind = RelShape::Kind::OneToMany;
    s.oneIsEndA = oneIsA;
    s.one = oneIsA ? r.endA : r.endB;
    s.many = oneIsA ? r.endB : r.endA;
    return s;
  };
  bool aExact = a.form == Cardinality::Form::Exactly;
  bool bExact = b.form == Cardinality::Form::Exactly;
  // Prefer an Exactly 1 end as the owner; otherwise endA.
  if (aOne && bMany && (aExact || !bExact)) return oneToMany(true);
  if (bOne && aMany) return oneToMany(false);
  if (aMany && bMany) {
    s.kind = RelShape::Kind::ManyToMany;
    s.one = r.endA;
    s.many = r.endB;
    return s;
  }
  return ValidationError{"relationship " + r.name + ": unsupported cardinality combination " +
                         printCardinality(a) + " / " + printCardinality(b)};
}

// Structural and semantic checks. Errors are ordered by the position of the
// offending entity, then relationship.
inline std::vector<ValidationError> validateERD(const ERD& erd) {
  std::vector<ValidationError> errs;
  auto err = [&](std::string m) { errs.push_back({std::move(m)}); };

  if (!isIdentifier(erd.name) || !std::isupper(static_cast<unsigned char>(erd.name[0])))
    err("ERD name \"" + erd.name + "\" must be an identifier starting with an uppercase letter");
  if (erd.entities.empty()) err("no entities");

  std::set<std::string> seenEntities;
  for (const auto& e : erd.entities) {
    if (!isIdentifier(e.name) || !std::isupper(static_cast<unsigned char>(e.name[0])))
      err("entity name \"" + e.name + "\" must be an identifier starting with an uppercase letter");
    if (!seenEntities.insert(e.name).second) err("duplicate entity name " + e.name);
    if (e.attributes.empty()) err("entity " + e.name + " has no attributes");
    std::set<std::string> seenAttrs, folded;
    for (const auto& a : e.attributes) {
      const std::string where = e.name + "." + a.name;
      if (!isIdentifier(a.name)) err("attribute name \"" + where + "\" is not an identifier");
      if (!seenAttrs.insert(a.name).second) {
        err("duplicate attribute name " + a.name + " in entity " + e.name);
      } else if (!a.name.empty()) {
        std::string f = a.name;
        f[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(f[0])));
        if (!folded.insert(f).second)
          err("attribute names in entity " + e.name + " differ only in initial case: " + a.name);
      }
      if (a.key == KeyKind::Unique && a.nullAllowed)
        err("attribute " + where + " is Unique and therefore cannot allow null");
      if (a.domain.defaultValue && !literalMatches(a.domain.kind, *a.domain.defaultValue))
        err("default value of attribute " + where + " does not match " +
            std::string(domainKindName(a.domain.kind)));
      if (a.domain.defaultValue && a.domain.kind == DomainKind::Date &&
          std::holds_alternative<CalendarTime>(*a.domain.defaultValue) &&
          !std::get<CalendarTime>(*a.domain.defaultValue).valid())
        err("default value of attribute " + where + " is not a valid date");
    }
  }

  std::set<std::string> seenRels;
  for (const auto& r : erd.relationships) {
    if (!isIdentifier(r.name) || !std::isupper(static_cast<unsigned char>(r.name[0])))
      err("relationship name \"" + r.name +
          "\" must be an identifier starting with an uppercase letter");
    if (!seenRels.insert(r.name).second) err("duplicate relationship name " + r.name);
    if (seenEntities.count(r.name)) err("relationship " + r.name + " has the name of an entity");
    bool endsOk = true;
    for (const REnd* end : {&r.endA, &r.endB}) {
      if (!erd.findEntity(end->entity)) {
        err("relationship " + r.name + " references unknown entity " + end->entity);
        endsOk = false;
      }
      if (!isIdentifier(end->role))
        err("relationship " + r.name + ": role name \"" + end->role + "\" is not an identifier");
      if (!detail::wellFormed(end->cardinality)) {
        err("relationship " + r.name + ": malformed cardinality " +
            printCardinality(end->cardinality) + " at end " + end->role);
        endsOk = false;
      }
    }
    if (r.endA.role == r.endB.role)
      err("relationship " + r.name + " has two ends with role name " + r.endA.role);
    if (endsOk) {
      auto c = classifyRelationship(r);
      if (auto* e = std::get_if<ValidationError>(&c)) errs.push_back(*e);
    }
  }
  return errs;
}

// Precondition: validateERD(erd) is empty; throws InvalidErd otherwise.
inline std::vector<RelShape> classifyRelationships(const ERD& erd) {
  std::vector<RelShape> out;
  std::vector<ValidationError> errs;
  for (const auto& r : erd.relationships) {
    auto c = classifyRelationship(r);
    if (auto* s = std::get_if<RelShape>(&c)) out.push_back(*s);
    else errs.push_back(std::get<ValidationError>(c));
  }
  if (!errs.empty()) throw InvalidErd(std::move(errs));
  return out;
}

inline const Attribute* firstUniqueAttribute(const Entity& e) {
  for (const auto& a : e.attributes)
    if (a.key == KeyKind::Unique) return &a;
  return nullptr;
}

}  // namespace spicey::erd
