#pragma once

// Scaffolding generator: turns a validated ERD into the source tree of a
// complete application built on the spicey headers.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "erd.hpp"

namespace spicey::gen {

// Output path (relative, '/'-separated) to file contents. Sorted, so
// iteration order is deterministic.
using GeneratedTree = std::map<std::string, std::string>;

struct GenOptions {
  // Upper bound on header columns in list views.
  std::size_t listColumns = 3;
};

inline constexpr std::string_view kGeneratorVersion = "1.0.0";

namespace detail {

inline std::string lowerFirst(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

inline std::string upperFirst(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

inline bool isCppKeyword(const std::string& s) {
  static const std::set<std::string> kw{
      "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool", "break", "case",
      "catch", "char", "char8_t", "char16_t", "char32_t", "class", "compl", "concept", "const",
      "consteval", "constexpr", "constinit", "const_cast", "continue", "co_await", "co_return",
      "co_yield", "decltype", "default", "delete", "do", "double", "dynamic_cast", "else", "enum",
      "explicit", "export", "extern", "false", "float", "for", "friend", "goto", "if", "inline", "int",
      "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr", "operator", "or",
      "or_eq", "private", "protected", "public", "register", "reinterpret_cast", "requires", "return",
      "short", "signed", "sizeof", "static", "static_assert", "static_cast", "struct", "switch",
      "template", "this", "thread_local", "throw", "true", "try", "typedef", "typeid", "typename",
      "union", "unsigned", "using", "virtual", "void", "volatile", "wchar_t", "while", "xor", "xor_eq",
      "std", "spicey", "main"};
  return kw.count(s) > 0;
}

inline std::string safeIdent(std::string s) {
  if (isCppKeyword(s)) s += '_';
  return s;
}

inline std::string plural(const std::string& s) {
  auto ends = [&](std::string_view suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (s.size() >= 2 && s.back() == 'y' && std::string_view("aeiouAEIOU").find(s[s.size() - 2]) == std::string_view::npos)
    return s.substr(0, s.size() - 1) + "ies";
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh")) return s + "es";
  return s + "s";
}

// C++ string literal.
inline std::string cppString(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\%03o", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

// Raw string literal holding `s`; picks a delimiter that does not occur.
inline std::string rawString(const std::string& s) {
  std::string delim = "erd";
  while (s.find(")" + delim + "\"") != std::string::npos) delim += "x";
  return "R\"" + delim + "(" + s + ")" + delim + "\"";
}

struct AttrInfo {
  erd::Attribute attr;
  std::string member;    // entryTitle
  std::string type;      // C++ member type
  bool maybe = false;    // nullable non-string: std::optional<...>
};

struct OwnerInfo {
  std::string relationship;
  std::string owner;     // owning entity
  std::string label;     // role of the owner end
  bool required = true;
  std::string member;    // commentEntryCommentingKey
  std::string choices;   // entryCommentingChoices
  std::string query;     // queryCommentingCommentsOfEntry
};

struct LinkInfo {
  std::string relationship;
  std::string other;
  std::string label;     // role of the other end
  bool sideA = true;
  std::string choices;   // tagTaggingChoices (side A only)
  std::string query;     // query for the other side instances linked to this one
};

struct EntityInfo {
  std::string name;
  std::string lower;
  std::string plural;
  std::vector<AttrInfo> attrs;
  std::vector<OwnerInfo> owners;
  std::vector<LinkInfo> links;  // side A links first (form order), then side B
  std::optional<std::size_t> uniqueAttr;

  std::vector<const LinkInfo*> formLinks() const {
    std::vector<const LinkInfo*> out;
    for (const auto& l : links)
      if (l.sideA) out.push_back(&l);
    return out;
  }
  std::string key() const { return name + "Key"; }
  std::string formType() const { return name + "FormValue"; }
  std::string newName() const {
    std::string n = "new" + name;
    for (const auto& o : owners) n += "With" + o.owner + o.relationship + "Key";
    return n;
  }
  std::size_t formArity() const { return attrs.size() + owners.size() + formLinks().size(); }
};

struct Model {
  erd::ERD erd;
  std::string ns;
  std::vector<EntityInfo> entities;
  std::vector<erd::RelShape> shapes;

  const EntityInfo& entity(const std::string& n) const {
    for (const auto& e : entities)
      if (e.name == n) return e;
    throw std::logic_error("unknown entity " + n);
  }
};

inline std::string baseType(erd::DomainKind k) {
  switch (k) {
    case erd::DomainKind::Int: return "std::int64_t";
    case erd::DomainKind::Float: return "double";
    case erd::DomainKind::Bool: return "bool";
    case erd::DomainKind::String: return "std::string";
    case erd::DomainKind::Date: return "spicey::CalendarTime";
  }
  return "std::string";
}

inline std::string baseWidget(erd::DomainKind k) {
  switch (k) {
    case erd::DomainKind::Int: return "spicey::wui::wInt()";
    case erd::DomainKind::Float: return "spicey::wui::wFloat()";
    case erd::DomainKind::Bool: return "spicey::wui::wBool()";
    case erd::DomainKind::String: return "spicey::wui::wRequiredString()";
    case erd::DomainKind::Date: return "spicey::wui::wDateType()";
  }
  return "";
}

inline std::string literalCode(const erd::Literal& lit) {
  struct V {
    std::string operator()(std::int64_t v) const {
      if (v == std::numeric_limits<std::int64_t>::min()) return "std::numeric_limits<std::int64_t>::min()";
      return "std::int64_t{" + std::to_string(v) + "}";
    }
    std::string operator()(double v) const { return erd::printLiteral(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return "std::string(" + cppString(v) + ")"; }
    std::string operator()(const CalendarTime& t) const {
      return "spicey::CalendarTime{" + std::to_string(t.year) + ", " + std::to_string(t.month) + ", " +
             std::to_string(t.day) + ", " + std::to_string(t.hour) + ", " + std::to_string(t.minute) + ", " +
             std::to_string(t.second) + "}";
    }
  };
  return std::visit(V{}, lit);
}

// Value used to fill the widget of `a` in a fresh form.
inline std::string initialCode(const AttrInfo& a) {
  const auto& d = a.attr.domain;
  if (a.maybe) {
    if (d.defaultValue) return a.type + "(" + literalCode(*d.defaultValue) + ")";
    return a.type + "()";
  }
  if (d.defaultValue) return literalCode(*d.defaultValue);
  switch (d.kind) {
    case erd::DomainKind::Int: return "std::int64_t{0}";
    case erd::DomainKind::Float: return "0.0";
    case erd::DomainKind::Bool: return "false";
    case erd::DomainKind::String: return "std::string()";
    case erd::DomainKind::Date: return "spicey::scaffold::currentTime()";
  }
  return "{}";
}

// Default shown inside an unchecked optional widget.
inline std::string innerDefault(erd::DomainKind k) {
  switch (k) {
    case erd::DomainKind::Int: return "std::int64_t{0}";
    case erd::DomainKind::Float: return "0.0";
    case erd::DomainKind::Bool: return "false";
    case erd::DomainKind::String: return "std::string()";
    case erd::DomainKind::Date: return "spicey::scaffold::currentTime()";
  }
  return "{}";
}

inline std::string widgetCode(const AttrInfo& a) {
  if (a.attr.domain.kind == erd::DomainKind::String)
    return a.attr.nullAllowed ? "spicey::wui::wString()" : "spicey::wui::wRequiredString()";
  if (!a.maybe) return baseWidget(a.attr.domain.kind);
  return "spicey::wui::wCheckMaybe(" + baseWidget(a.attr.domain.kind) + ", \"\", " +
         innerDefault(a.attr.domain.kind) + ")";
}

inline std::string toValueCode(const AttrInfo& a, const std::string& expr) {
  if (a.attr.domain.kind == erd::DomainKind::String && a.attr.nullAllowed)
    return "spicey::scaffold::toNullableString(" + expr + ")";
  return "spicey::scaffold::toValue(" + expr + ")";
}

inline Model buildModel(const erd::ERD& erd) {
  auto errs = erd::validateERD(erd);
  if (!errs.empty()) throw erd::InvalidErd(errs);
  Model m;
  m.erd = erd;
  m.ns = safeIdent(lowerFirst(erd.name));
  m.shapes = erd::classifyRelationships(erd);
  for (const auto& e : erd.entities) {
    EntityInfo info;
    info.name = e.name;
    info.lower = lowerFirst(e.name);
    info.plural = plural(e.name);
    for (std::size_t i = 0; i < e.attributes.size(); ++i) {
      const auto& a = e.attributes[i];
      AttrInfo ai;
      ai.attr = a;
      ai.member = info.lower + upperFirst(a.name);
      ai.maybe = a.nullAllowed && a.domain.kind != erd::DomainKind::String;
      ai.type = ai.maybe ? "std::optional<" + baseType(a.domain.kind) + ">" : baseType(a.domain.kind);
      if (a.key == erd::KeyKind::Unique && !info.uniqueAttr) info.uniqueAttr = i;
      info.attrs.push_back(std::move(ai));
    }
    m.entities.push_back(std::move(info));
  }
  for (const auto& s : m.shapes) {
    if (s.isOneToMany()) {
      for (auto& e : m.entities) {
        if (e.name != s.many.entity) continue;
        OwnerInfo o;
        o.relationship = s.relationship;
        o.owner = s.one.entity;
        o.label = s.one.role;
        o.required = s.ownerRequired();
        o.member = e.lower + s.one.entity + s.relationship + "Key";
        o.choices = lowerFirst(s.one.entity) + s.relationship + "Choices";
        o.query = "query" + s.relationship + plural(e.name) + "Of" + s.one.entity;
        e.owners.push_back(std::move(o));
      }
    }
  }
  for (const auto& s : m.shapes) {
    if (s.isOneToMany()) continue;
    const std::string& a = s.one.entity;
    const std::string& b = s.many.entity;
    for (auto& e : m.entities) {
      if (e.name != a) continue;
      LinkInfo l;
      l.relationship = s.relationship;
      l.other = b;
      l.label = s.many.role;
      l.sideA = true;
      l.choices = lowerFirst(b) + s.relationship + "Choices";
      l.query = a == b ? "query" + s.relationship + "TargetsOf" + a
                       : "query" + s.relationship + plural(b) + "Of" + a;
      e.links.push_back(std::move(l));
    }
  }
  for (const auto& s : m.shapes) {
    if (s.isOneToMany()) continue;
    const std::string& a = s.one.entity;
    const std::string& b = s.many.entity;
    for (auto& e : m.entities) {
      if (e.name != b) continue;
      LinkInfo l;
      l.relationship = s.relationship;
      l.other = a;
      l.label = s.one.role;
      l.sideA = false;
      l.query = a == b ? "query" + s.relationship + "SourcesOf" + b
                       : "query" + s.relationship + plural(a) + "Of" + b;
      e.links.push_back(std::move(l));
    }
  }
  return m;
}

// Names generated into the application namespace; duplicates would not
// compile, so they are reported as validation errors.
inline std::vector<erd::ValidationError> nameCollisions(const Model& m) {
  std::map<std::string, std::vector<std::string>> uses;
  auto add = [&](const std::string& name, const std::string& what) { uses[name].push_back(what); };
  add("ControllerReference", "controller reference type");
  add("getRoutes", "route table");
  add("userProcesses", "process specification");
  add("getController", "controller mapping");
  add("runT", "transaction runner");
  add("runQ", "query runner");
  const std::string N = m.erd.name;
  add(lowerFirst(N) + "ERD", "model");
  add(lowerFirst(N) + "Schema", "model");
  add(lowerFirst(N) + "DatabaseSlot", "model");
  add(lowerFirst(N) + "Database", "model");
  add("open" + N + "Database", "model");
  add(lowerFirst(N) + "Credentials", "application");
  add(lowerFirst(N) + "Processes", "application");
  add(lowerFirst(N) + "AppSpec", "application");
  add("open" + N + "App", "application");
  for (const auto& e : m.entities) {
    const std::string E = e.name, l = e.lower, P = e.plural;
    std::string what = "entity " + E;
    for (const std::string& n :
         {E, e.key(), e.formType(), "show" + e.key(), "read" + e.key(), "to" + E, "from" + E, e.newName(),
          "update" + E, "delete" + E, "get" + E, "query" + E, "queryAll" + P, "leq" + E, l + "ToShortView",
          l + "ToListView", l + "ToDetailsView", l + "LabelList", "w" + E, "apply" + E + "Form",
          "create" + E + "View", "edit" + E + "View", "show" + E + "View", "list" + E + "View",
          "list" + E + "Controller", "new" + E + "Controller", "create" + E + "Controller",
          "show" + E + "Controller", "edit" + E + "Controller", "update" + E + "Controller",
          "delete" + E + "Controller", "destroy" + E + "Controller", l + "OperationAllowed"})
      add(n, what);
    for (const auto& o : e.owners) add(o.query, "relationship " + o.relationship);
    for (const auto& lk : e.links) {
      add(lk.query, "relationship " + lk.relationship);
      if (lk.sideA) {
        add("set" + E + lk.relationship + "Links", "relationship " + lk.relationship);
        add("new" + lk.relationship, "relationship " + lk.relationship);
        add("delete" + lk.relationship, "relationship " + lk.relationship);
      }
    }
    // members of the entity struct
    std::set<std::string> members{"key"};
    for (const auto& a : e.attrs)
      if (!members.insert(a.member).second)
        uses["member " + a.member + " of " + E].push_back(what);
    for (const auto& o : e.owners)
      if (!members.insert(o.member).second)
        uses["member " + o.member + " of " + E].push_back(what);
  }
  std::vector<erd::ValidationError> out;
  for (const auto& [name, who] : uses) {
    bool member = name.rfind("member ", 0) == 0;
    if (member || who.size() > 1) {
      std::string users;
      for (const auto& w : who) users += (users.empty() ? "" : ", ") + w;
      out.push_back({"generated name " + name + " is defined more than once (" + users + ")"});
    }
  }
  return out;
}

class Out {
 public:
  Out& operator()(const std::string& line = {}) {
    s_ += line;
    s_ += '\n';
    return *this;
  }
  std::string str() const { return s_; }

 private:
  std::string s_;
};

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

// ---- models ------------------------------------------------------------------

inline std::string genModel(const Model& m) {
  const std::string N = m.erd.name, n = lowerFirst(N);
  Out o;
  o("#pragma once");
  o();
  o("// Data model of the " + N + " application: entity types, transactions and");
  o("// queries over the embedded database.");
  o();
  o("#include <algorithm>");
  o("#include <cstdint>");
  o("#include <limits>");
  o("#include <memory>");
  o("#include <optional>");
  o("#include <stdexcept>");
  o("#include <string>");
  o("#include <string_view>");
  o("#include <tuple>");
  o("#include <vector>");
  o();
  o("#include \"spicey/erd.hpp\"");
  o("#include \"spicey/persistence.hpp\"");
  o("#include \"spicey/scaffold.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("inline const spicey::erd::ERD& " + n + "ERD() {");
  o("  static const spicey::erd::ERD erd = spicey::erd::parseERD(" + rawString(erd::printERD(m.erd)) + ");");
  o("  return erd;");
  o("}");
  o();
  o("inline const spicey::db::Schema& " + n + "Schema() {");
  o("  static const spicey::db::Schema schema = spicey::db::deriveSchema(" + n + "ERD());");
  o("  return schema;");
  o("}");
  o();
  o("inline std::unique_ptr<spicey::db::Database>& " + n + "DatabaseSlot() {");
  o("  static std::unique_ptr<spicey::db::Database> db;");
  o("  return db;");
  o("}");
  o();
  o("// An empty path opens an in-memory database.");
  o("inline void open" + N + "Database(const std::string& path) {");
  o("  if (path.empty())");
  o("    " + n + "DatabaseSlot() = std::make_unique<spicey::db::Database>(" + n + "Schema());");
  o("  else");
  o("    " + n + "DatabaseSlot() = std::make_unique<spicey::db::Database>(" + n + "Schema(), path);");
  o("}");
  o();
  o("inline spicey::db::Database& " + n + "Database() {");
  o("  if (!" + n + "DatabaseSlot()) throw std::logic_error(\"" + N + " database is not open\");");
  o("  return *" + n + "DatabaseSlot();");
  o("}");
  o();
  o("template <class T>");
  o("spicey::db::TxResult<T> runT(const spicey::db::Tx<T>& t) {");
  o("  return " + n + "Database().runTransaction(t);");
  o("}");
  o();
  o("template <class T>");
  o("T runQ(const spicey::db::Query<T>& q) {");
  o("  return " + n + "Database().runQuery(q);");
  o("}");
  o();
  o("// ---- keys");
  for (const auto& e : m.entities) {
    const std::string K = e.key();
    o();
    o("struct " + K + " {");
    o("  std::int64_t id = 0;");
    o("  auto operator<=>(const " + K + "&) const = default;");
    o("};");
    o();
    o("inline std::string show" + K + "(const " + K + "& k) { return std::to_string(k.id); }");
    o();
    o("inline std::optional<" + K + "> read" + K + "(std::string_view s) {");
    o("  if (auto id = spicey::scaffold::readKeyId(s)) return " + K + "{*id};");
    o("  return std::nullopt;");
    o("}");
  }
  for (const auto& e : m.entities) {
    const std::string E = e.name, K = e.key();
    o();
    o("// ---- " + E);
    o();
    o("struct " + E + " {");
    o("  " + K + " key;");
    for (const auto& a : e.attrs) o("  " + a.type + " " + a.member + "{};");
    for (const auto& ow : e.owners)
      o("  " + (ow.required ? ow.owner + "Key" : "std::optional<" + ow.owner + "Key>") + " " + ow.member + "{};");
    o("  bool operator==(const " + E + "&) const = default;");
    o("};");
    o();
    o("inline " + E + " to" + E + "(const spicey::db::EntityValue& v) {");
    o("  " + E + " e;");
    o("  e.key = " + K + "{v.key.id};");
    for (std::size_t i = 0; i < e.attrs.size(); ++i)
      o("  e." + e.attrs[i].member + " = spicey::scaffold::fromValue<" + e.attrs[i].type + ">(v.attrs.at(" +
        std::to_string(i) + "));");
    for (const auto& ow : e.owners) {
      if (ow.required) {
        o("  e." + ow.member + " = " + ow.owner + "Key{v.owners.at(\"" + ow.relationship + "\").value_or(0)};");
      } else {
        o("  if (auto id = v.owners.at(\"" + ow.relationship + "\")) e." + ow.member + " = " + ow.owner +
          "Key{*id};");
      }
    }
    o("  return e;");
    o("}");
    o();
    o("inline spicey::db::EntityValue from" + E + "(const " + E + "& e) {");
    o("  spicey::db::EntityValue v;");
    o("  v.key = {\"" + E + "\", e.key.id};");
    std::vector<std::string> vals;
    for (const auto& a : e.attrs) vals.push_back(toValueCode(a, "e." + a.member));
    o("  v.attrs = {" + join(vals, ", ") + "};");
    for (const auto& ow : e.owners) {
      if (ow.required)
        o("  v.owners[\"" + ow.relationship + "\"] = e." + ow.member + ".id;");
      else
        o("  v.owners[\"" + ow.relationship + "\"] = spicey::scaffold::optionalId(e." + ow.member + ");");
    }
    o("  return v;");
    o("}");
    o();
    // new
    std::vector<std::string> params, attrVals, ownerVals;
    for (const auto& a : e.attrs) {
      params.push_back(a.type + " " + a.member);
      attrVals.push_back(toValueCode(a, a.member));
    }
    for (const auto& ow : e.owners) {
      params.push_back((ow.required ? ow.owner + "Key " : "std::optional<" + ow.owner + "Key> ") + ow.member);
      ownerVals.push_back("{\"" + ow.relationship + "\", " +
                          (ow.required ? ow.member + ".id" : "spicey::scaffold::optionalId(" + ow.member + ")") +
                          "}");
    }
    o("inline spicey::db::Tx<" + E + "> " + e.newName() + "(" + join(params, ", ") + ") {");
    o("  return [=](spicey::db::Transaction& tx) -> spicey::db::TxResult<" + E + "> {");
    o("    auto r = tx.newEntity(\"" + E + "\", {" + join(attrVals, ", ") + "}, {" + join(ownerVals, ", ") + "});");
    o("    if (!r.ok()) return spicey::db::TxResult<" + E + ">::failed(r.error());");
    o("    return to" + E + "(r.value());");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Tx<spicey::db::Unit> update" + E + "(const " + E + "& e) {");
    o("  return [e](spicey::db::Transaction& tx) { return tx.updateEntity(from" + E + "(e)); };");
    o("}");
    o();
    o("inline spicey::db::Tx<spicey::db::Unit> delete" + E + "(const " + E + "& e) {");
    o("  return [e](spicey::db::Transaction& tx) { return tx.deleteEntity({\"" + E + "\", e.key.id}); };");
    o("}");
    o();
    o("inline spicey::db::Query<std::vector<" + E + ">> queryAll" + e.plural + "() {");
    o("  return [](const spicey::db::Snapshot& s) {");
    o("    std::vector<" + E + "> out;");
    o("    for (const auto& v : s.all(\"" + E + "\")) out.push_back(to" + E + "(v));");
    o("    return out;");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Query<std::optional<" + E + ">> query" + E + "(" + K + " k) {");
    o("  return [k](const spicey::db::Snapshot& s) -> std::optional<" + E + "> {");
    o("    if (auto v = s.get({\"" + E + "\", k.id})) return to" + E + "(*v);");
    o("    return std::nullopt;");
    o("  };");
    o("}");
    o();
    o("inline std::optional<" + E + "> get" + E + "(" + K + " k) { return runQ(query" + E + "(k)); }");
    o();
    o("// Lexicographic order on the attributes.");
    std::vector<std::string> la, lb;
    for (const auto& a : e.attrs) {
      la.push_back("a." + a.member);
      lb.push_back("b." + a.member);
    }
    o("inline bool leq" + E + "(const " + E + "& a, const " + E + "& b) {");
    o("  return std::tie(" + join(la, ", ") + ") <= std::tie(" + join(lb, ", ") + ");");
    o("}");
  }
  // relationships
  for (const auto& s : m.shapes) {
    o();
    o("// ---- " + s.relationship);
    if (s.isOneToMany()) {
      const auto& owned = m.entity(s.many.entity);
      const OwnerInfo* ow = nullptr;
      for (const auto& x : owned.owners)
        if (x.relationship == s.relationship) ow = &x;
      o();
      o("inline spicey::db::Query<std::vector<" + owned.name + ">> " + ow->query + "(" + s.one.entity + "Key k) {");
      o("  return [k](const spicey::db::Snapshot& s) {");
      o("    std::vector<" + owned.name + "> out;");
      o("    for (const auto& v : s.referencing(\"" + s.relationship + "\", k.id)) out.push_back(to" + owned.name +
        "(v));");
      o("    return out;");
      o("  };");
      o("}");
      continue;
    }
    const std::string A = s.one.entity, B = s.many.entity, R = s.relationship;
    const auto& ea = m.entity(A);
    const auto& eb = m.entity(B);
    const LinkInfo* la2 = nullptr;
    const LinkInfo* lb2 = nullptr;
    for (const auto& l : ea.links)
      if (l.relationship == R && l.sideA) la2 = &l;
    for (const auto& l : eb.links)
      if (l.relationship == R && !l.sideA) lb2 = &l;
    o();
    o("// Replaces the " + B + " instances linked to an " + A + ".");
    o("inline spicey::db::Tx<spicey::db::Unit> set" + A + R + "Links(" + A + "Key k, std::vector<" + B + "Key> ks) {");
    o("  return [k, ks](spicey::db::Transaction& tx) -> spicey::db::TxResult<spicey::db::Unit> {");
    o("    auto cur = tx.view().get({\"" + A + "\", k.id});");
    o("    if (!cur) return spicey::db::TxResult<spicey::db::Unit>::failed(\"unknown key\");");
    o("    return tx.updateEntity(*cur, spicey::db::Links{{\"" + R + "\", spicey::scaffold::ids(ks)}});");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Tx<spicey::db::Unit> new" + R + "(" + A + "Key a, " + B + "Key b) {");
    o("  return [a, b](spicey::db::Transaction& tx) -> spicey::db::TxResult<spicey::db::Unit> {");
    o("    auto cur = tx.view().get({\"" + A + "\", a.id});");
    o("    if (!cur) return spicey::db::TxResult<spicey::db::Unit>::failed(\"unknown key\");");
    o("    auto ids = tx.view().linkedIds(*tx.view().schema().join(\"" + R + "\"), cur->key);");
    o("    ids.push_back(b.id);");
    o("    return tx.updateEntity(*cur, spicey::db::Links{{\"" + R + "\", ids}});");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Tx<spicey::db::Unit> delete" + R + "(" + A + "Key a, " + B + "Key b) {");
    o("  return [a, b](spicey::db::Transaction& tx) -> spicey::db::TxResult<spicey::db::Unit> {");
    o("    auto cur = tx.view().get({\"" + A + "\", a.id});");
    o("    if (!cur) return spicey::db::TxResult<spicey::db::Unit>::failed(\"unknown key\");");
    o("    auto ids = tx.view().linkedIds(*tx.view().schema().join(\"" + R + "\"), cur->key);");
    o("    ids.erase(std::remove(ids.begin(), ids.end(), b.id), ids.end());");
    o("    return tx.updateEntity(*cur, spicey::db::Links{{\"" + R + "\", ids}});");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Query<std::vector<" + B + ">> " + la2->query + "(" + A + "Key k) {");
    o("  return [k](const spicey::db::Snapshot& s) {");
    o("    std::vector<" + B + "> out;");
    o("    for (const auto& [a, b] : s.linkRows(\"" + R + "\"))");
    o("      if (a == k.id)");
    o("        if (auto v = s.get({\"" + B + "\", b})) out.push_back(to" + B + "(*v));");
    o("    return out;");
    o("  };");
    o("}");
    o();
    o("inline spicey::db::Query<std::vector<" + A + ">> " + lb2->query + "(" + B + "Key k) {");
    o("  return [k](const spicey::db::Snapshot& s) {");
    o("    std::vector<" + A + "> out;");
    o("    for (const auto& [a, b] : s.linkRows(\"" + R + "\"))");
    o("      if (b == k.id)");
    o("        if (auto v = s.get({\"" + A + "\", a})) out.push_back(to" + A + "(*v));");
    o("    return out;");
    o("  };");
    o("}");
  }
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

// ---- entity rendering ----------------------------------------------------------

inline std::string genEntitiesToHtml(const Model& m, const GenOptions& opt) {
  const std::string N = m.erd.name;
  Out o;
  o("#pragma once");
  o();
  o("// How " + N + " entities are shown: labels, short views, list rows and");
  o("// detail tables. Adapt this file to change the default presentation.");
  o();
  o("#include <string>");
  o("#include <vector>");
  o();
  o("#include \"models/" + N + ".hpp\"");
  o("#include \"spicey/html.hpp\"");
  o("#include \"spicey/scaffold.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  for (const auto& e : m.entities) {
    const std::string E = e.name, l = e.lower;
    std::vector<std::string> labels;
    for (const auto& a : e.attrs) labels.push_back(cppString(a.attr.name));
    for (const auto& ow : e.owners) labels.push_back(cppString(ow.label));
    for (const auto* lk : e.formLinks()) labels.push_back(cppString(lk->label));
    o();
    o("// ---- " + E);
    o();
    o("inline const std::vector<std::string>& " + l + "LabelList() {");
    o("  static const std::vector<std::string> labels{" + join(labels, ", ") + "};");
    o("  return labels;");
    o("}");
    o();
    if (e.uniqueAttr) {
      o("inline std::string " + l + "ToShortView(const " + E + "& e) {");
      o("  return spicey::scaffold::showField(e." + e.attrs[*e.uniqueAttr].member + ");");
      o("}");
    } else {
      o("// No unique attribute: the key identifies the entity.");
      o("inline std::string " + l + "ToShortView(const " + E + "& e) { return \"" + E + " \" + show" + e.key() +
        "(e.key); }");
    }
    o();
    std::size_t cols = std::min(opt.listColumns, e.attrs.size());
    o("inline std::vector<std::vector<spicey::HtmlExp>> " + l + "ToListView(const " + E + "& e) {");
    o("  return {");
    for (std::size_t i = 0; i < cols; ++i)
      o("      {spicey::htxt(spicey::scaffold::showField(e." + e.attrs[i].member + "))},");
    o("  };");
    o("}");
    o();
    o("// Label and value rows for all attributes.");
    o("inline std::vector<std::vector<std::vector<spicey::HtmlExp>>> " + l + "ToDetailsView(const " + E + "& e) {");
    o("  const auto& labels = " + l + "LabelList();");
    o("  return {");
    for (std::size_t i = 0; i < e.attrs.size(); ++i)
      o("      {{spicey::htxt(labels[" + std::to_string(i) + "])}, {spicey::htxt(spicey::scaffold::showField(e." +
        e.attrs[i].member + "))}},");
    o("  };");
    o("}");
  }
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

// ---- views ---------------------------------------------------------------------

inline std::string genView(const Model& m, const EntityInfo& e) {
  const std::string N = m.erd.name, E = e.name, l = e.lower, F = e.formType();
  auto links = e.formLinks();
  std::vector<std::string> types, widgets, choiceParams, choiceArgs;
  for (const auto& a : e.attrs) {
    types.push_back(a.type);
    widgets.push_back(widgetCode(a));
  }
  for (const auto& ow : e.owners) {
    const std::string O = ow.owner, lo = lowerFirst(O);
    if (ow.required) {
      types.push_back(O);
      widgets.push_back("spicey::wui::wSelect<" + O + ">(" + lo + "ToShortView, " + ow.choices + ")");
    } else {
      types.push_back("std::optional<" + O + ">");
      widgets.push_back("spicey::wui::wSelect<std::optional<" + O + ">>(spicey::scaffold::showOptional<" + O + ">(" +
                        lo + "ToShortView), spicey::scaffold::withNone(" + ow.choices + "))");
    }
    choiceParams.push_back("const std::vector<" + O + ">& " + ow.choices);
    choiceArgs.push_back(ow.choices);
  }
  for (const auto* lk : links) {
    types.push_back("std::vector<" + lk->other + ">");
    widgets.push_back("spicey::wui::wMultiSelect<" + lk->other + ">(" + lowerFirst(lk->other) + "ToShortView, " +
                      lk->choices + ")");
    choiceParams.push_back("const std::vector<" + lk->other + ">& " + lk->choices);
    choiceArgs.push_back(lk->choices);
  }

  Out o;
  o("#pragma once");
  o();
  o("// Forms and pages for " + E + " entities.");
  o();
  o("#include <functional>");
  o("#include <optional>");
  o("#include <string>");
  o("#include <tuple>");
  o("#include <vector>");
  o();
  o("#include \"spicey/context.hpp\"");
  o("#include \"spicey/html.hpp\"");
  o("#include \"spicey/scaffold.hpp\"");
  o("#include \"spicey/wui.hpp\"");
  o("#include \"views/" + N + "EntitiesToHtml.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("// Attributes, then related " + std::string(e.owners.empty() && links.empty() ? "entities (none)." : "entities."));
  o("using " + F + " = std::tuple<" + join(types, ", ") + ">;");
  o();
  o("inline spicey::wui::WuiSpec<" + F + "> w" + E + "(" + join(choiceParams, ", ") + ") {");
  o("  return spicey::wui::wTuple(");
  for (std::size_t i = 0; i < widgets.size(); ++i)
    o("             " + widgets[i] + (i + 1 < widgets.size() ? "," : ")"));
  o("      .withRendering(spicey::wui::renderLabels(" + l + "LabelList()));");
  o("}");
  o();
  // current values of an entity for the edit form
  std::vector<std::string> curParams{"const " + E + "& e"};
  std::vector<std::string> curVals;
  for (const auto& a : e.attrs) curVals.push_back("e." + a.member);
  for (const auto& ow : e.owners) {
    curParams.push_back((ow.required ? "const " + ow.owner + "& " : "const std::optional<" + ow.owner + ">& ") +
                        lowerFirst(ow.owner) + ow.relationship);
    curVals.push_back(lowerFirst(ow.owner) + ow.relationship);
  }
  for (const auto* lk : links) {
    curParams.push_back("const std::vector<" + lk->other + ">& " + lowerFirst(lk->other) + lk->relationship);
    curVals.push_back(lowerFirst(lk->other) + lk->relationship);
  }
  o("inline " + F + " " + l + "FormValue(" + join(curParams, ", ") + ") {");
  o("  return " + F + "{" + join(curVals, ", ") + "};");
  o("}");
  o();
  o("// Copies the form fields into `e`; the key is kept.");
  o("inline " + E + " apply" + E + "Form(" + E + " e, const " + F + "& v) {");
  std::size_t idx = 0;
  for (const auto& a : e.attrs) o("  e." + a.member + " = std::get<" + std::to_string(idx++) + ">(v);");
  for (const auto& ow : e.owners) {
    if (ow.required)
      o("  e." + ow.member + " = std::get<" + std::to_string(idx++) + ">(v).key;");
    else
      o("  e." + ow.member + " = spicey::scaffold::keyOf(std::get<" + std::to_string(idx++) + ">(v));");
  }
  o("  return e;");
  o("}");
  o();
  // create
  std::vector<std::string> initial;
  for (const auto& a : e.attrs) initial.push_back(initialCode(a));
  for (const auto& ow : e.owners)
    initial.push_back(ow.required ? ow.choices + ".front()" : "std::optional<" + ow.owner + ">()");
  for (const auto* lk : links) initial.push_back("std::vector<" + lk->other + ">()");
  std::vector<std::string> createParams = choiceParams;
  createParams.push_back("std::function<spicey::Controller(const " + F + "&)> store");
  o("// Required references need a nonempty choice list.");
  o("inline spicey::HtmlPage create" + E + "View(" + join(createParams, ", ") + ") {");
  o("  " + F + " initial{" + join(initial, ", ") + "};");
  o("  spicey::HtmlPage page{spicey::h1({spicey::htxt(\"New " + E + "\")})};");
  o("  return spicey::wui::runForm(w" + E + "(" + join(choiceArgs, ", ") + "), initial, std::move(store), \"create\", std::move(page));");
  o("}");
  o();
  std::vector<std::string> editParams{"const " + F + "& current"};
  for (const auto& p : choiceParams) editParams.push_back(p);
  editParams.push_back("std::function<spicey::Controller(const " + F + "&)> update");
  o("inline spicey::HtmlPage edit" + E + "View(" + join(editParams, ", ") + ") {");
  o("  spicey::HtmlPage page{spicey::h1({spicey::htxt(\"Edit " + E + "\")})};");
  o("  return spicey::wui::runForm(w" + E + "(" + join(choiceArgs, ", ") + "), current, std::move(update), \"change\", std::move(page));");
  o("}");
  o();
  // show
  std::vector<std::string> showParams{"const " + E + "& e"};
  for (const auto& ow : e.owners)
    showParams.push_back("const std::optional<" + ow.owner + ">& " + lowerFirst(ow.owner) + ow.relationship);
  for (const auto& lk : e.links)
    showParams.push_back("const std::vector<" + lk.other + ">& " + lowerFirst(lk.other) + lk.relationship +
                         (lk.sideA ? "" : "Sources"));
  o("inline spicey::HtmlPage show" + E + "View(" + join(showParams, ", ") + ") {");
  o("  auto rows = " + l + "ToDetailsView(e);");
  for (const auto& ow : e.owners) {
    const std::string v = lowerFirst(ow.owner) + ow.relationship;
    o("  rows.push_back({{spicey::htxt(" + cppString(ow.label) + ")}, {spicey::htxt(" + v + " ? " +
      lowerFirst(ow.owner) + "ToShortView(*" + v + ") : std::string())}});");
  }
  for (const auto& lk : e.links) {
    const std::string v = lowerFirst(lk.other) + lk.relationship + (lk.sideA ? "" : "Sources");
    o("  rows.push_back({{spicey::htxt(" + cppString(lk.label) + ")}, {spicey::htxt(spicey::scaffold::joinShown(" + v +
      ", " + lowerFirst(lk.other) + "ToShortView))}});");
  }
  o("  return {spicey::h1({spicey::htxt(\"" + E + " \" + " + l + "ToShortView(e))}), spicey::table(std::move(rows)),");
  o("          spicey::href(\"/list" + E + "\", {spicey::htxt(\"back to " + E + " list\")})};");
  o("}");
  o();
  // list
  std::size_t cols = std::min<std::size_t>(3, e.attrs.size());
  o("inline spicey::HtmlPage list" + E + "View(const std::vector<" + E + ">& entities,");
  o("                                  const std::function<spicey::Controller(const " + E + "&)>& showController,");
  o("                                  const std::function<spicey::Controller(const " + E + "&)>& editController,");
  o("                                  const std::function<spicey::Controller(const " + E + "&)>& deleteController) {");
  o("  std::vector<std::vector<std::vector<spicey::HtmlExp>>> rows;");
  o("  std::vector<std::vector<spicey::HtmlExp>> header;");
  o("  for (std::size_t i = 0; i < " + std::to_string(cols) + "; ++i) header.push_back({spicey::htxt(" + l +
    "LabelList()[i])});");
  o("  rows.push_back(std::move(header));");
  o("  for (const auto& e : spicey::scaffold::sortBy(entities, leq" + E + ")) {");
  o("    auto row = " + l + "ToListView(e);");
  o("    row.push_back({spicey::button(\"show\", spicey::nextController(showController(e))),");
  o("                   spicey::button(\"edit\", spicey::nextController(editController(e))),");
  o("                   spicey::button(\"delete\", spicey::nextController(deleteController(e)))});");
  o("    rows.push_back(std::move(row));");
  o("  }");
  o("  return {spicey::h1({spicey::htxt(\"" + E + " list\")}), spicey::table(std::move(rows))};");
  o("}");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

// ---- controllers -------------------------------------------------------------------

inline std::string genController(const Model& m, const EntityInfo& e) {
  const std::string E = e.name, l = e.lower, F = e.formType(), K = e.key();
  auto links = e.formLinks();
  auto access = [&](const std::string& kind, const std::string& arg) {
    return "[" + arg + "] { return " + l + "OperationAllowed(spicey::AccessType<" + E + ">::" + kind + "(" + arg +
           ")); }";
  };
  Out o;
  o("#pragma once");
  o();
  o("// Controllers for " + E + " entities.");
  o();
  o("#include <optional>");
  o("#include <string>");
  o("#include <vector>");
  o();
  o("#include \"config/AuthorizedOperations.hpp\"");
  o("#include \"models/" + m.erd.name + ".hpp\"");
  o("#include \"spicey/auth.hpp\"");
  o("#include \"spicey/context.hpp\"");
  o("#include \"spicey/process.hpp\"");
  o("#include \"spicey/scaffold.hpp\"");
  o("#include \"views/" + E + "View.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("inline spicey::Controller list" + E + "Controller();");
  o("inline spicey::Controller show" + E + "Controller(const " + E + "& e);");
  o("inline spicey::Controller edit" + E + "Controller(const " + E + "& e);");
  o("inline spicey::Controller delete" + E + "Controller(const " + E + "& e);");
  o();
  // list
  o("// Lists all " + E + " entities; /list" + E + "/<key> shows one.");
  o("inline spicey::Controller list" + E + "Controller() {");
  o("  return spicey::checkAuthorization(");
  o("      [] { return " + l + "OperationAllowed(spicey::AccessType<" + E + ">::listEntities()); }, [] {");
  o("        auto params = spicey::getControllerParams();");
  o("        if (!params.empty()) {");
  o("          auto key = read" + K + "(params[0]);");
  o("          auto e = key ? get" + E + "(*key) : std::nullopt;");
  o("          if (!e) return spicey::displayErrorPage(\"No " + E + " with key \" + params[0]);");
  o("          return show" + E + "Controller(*e)();");
  o("        }");
  o("        return list" + E + "View(runQ(queryAll" + e.plural + "()), show" + E + "Controller, edit" + E +
    "Controller,");
  o("                          delete" + E + "Controller);");
  o("      });");
  o("}");
  o();
  // create
  std::vector<std::string> newArgs;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < e.attrs.size(); ++i) newArgs.push_back("std::get<" + std::to_string(idx++) + ">(v)");
  for (const auto& ow : e.owners) {
    std::string g = "std::get<" + std::to_string(idx++) + ">(v)";
    newArgs.push_back(ow.required ? g + ".key" : "spicey::scaffold::keyOf(" + g + ")");
  }
  o("inline spicey::Controller create" + E + "Controller(const " + F + "& v) {");
  o("  return [v] {");
  if (links.empty()) {
    o("    auto result = runT(" + e.newName() + "(" + join(newArgs, ", ") + "));");
  } else {
    o("    spicey::db::Tx<spicey::db::Unit> tx = spicey::db::bindT(");
    o("        " + e.newName() + "(" + join(newArgs, ", ") + "),");
    o("        [v](const " + E + "& e) -> spicey::db::Tx<spicey::db::Unit> {");
    std::string chain = "spicey::db::returnT(spicey::db::Unit{})";
    std::size_t li = e.attrs.size() + e.owners.size();
    for (const auto* lk : links) {
      std::string step = "set" + E + lk->relationship + "Links(e.key, spicey::scaffold::keysOf(std::get<" +
                         std::to_string(li++) + ">(v)))";
      chain = chain == "spicey::db::returnT(spicey::db::Unit{})"
                  ? step
                  : "spicey::db::bindT(" + chain + ", [=](const spicey::db::Unit&) { return " + step + "; })";
    }
    o("          return " + chain + ";");
    o("        });");
    o("    auto result = runT(tx);");
  }
  o("    if (!result.ok()) return spicey::displayErrorPage(result.error());");
  o("    spicey::setPageMessage(\"" + E + " created\");");
  o("    return spicey::nextInProcessOr(list" + E + "Controller())();");
  o("  };");
  o("}");
  o();
  o("inline spicey::Controller new" + E + "Controller() {");
  o("  return spicey::checkAuthorization(");
  o("      [] { return " + l + "OperationAllowed(spicey::AccessType<" + E + ">::newEntity()); }, [] {");
  std::vector<std::string> choiceArgs;
  for (const auto& ow : e.owners) {
    o("        auto " + ow.choices + " = runQ(queryAll" + plural(ow.owner) + "());");
    if (ow.required) {
      o("        if (" + ow.choices + ".empty())");
      o("          return spicey::displayErrorPage(\"Cannot create a " + E + ": create a " + ow.owner +
        " first.\");");
    }
    choiceArgs.push_back(ow.choices);
  }
  for (const auto* lk : links) {
    o("        auto " + lk->choices + " = runQ(queryAll" + plural(lk->other) + "());");
    choiceArgs.push_back(lk->choices);
  }
  choiceArgs.push_back("create" + E + "Controller");
  o("        return create" + E + "View(" + join(choiceArgs, ", ") + ");");
  o("      });");
  o("}");
  o();
  // show
  o("inline spicey::Controller show" + E + "Controller(const " + E + "& e) {");
  o("  return spicey::checkAuthorization(" + access("showEntity", "e") + ", [e] {");
  o("    auto cur = get" + E + "(e.key);");
  o("    if (!cur) return spicey::displayErrorPage(\"This " + E + " no longer exists.\");");
  std::vector<std::string> showArgs{"*cur"};
  for (const auto& ow : e.owners) {
    const std::string v = lowerFirst(ow.owner) + ow.relationship;
    if (ow.required)
      o("    auto " + v + " = get" + ow.owner + "(cur->" + ow.member + ");");
    else
      o("    auto " + v + " = cur->" + ow.member + " ? get" + ow.owner + "(*cur->" + ow.member +
        ") : std::nullopt;");
    showArgs.push_back(v);
  }
  for (const auto& lk : e.links) {
    const std::string v = lowerFirst(lk.other) + lk.relationship + (lk.sideA ? "" : "Sources");
    o("    auto " + v + " = runQ(" + lk.query + "(cur->key));");
    showArgs.push_back(v);
  }
  o("    return show" + E + "View(" + join(showArgs, ", ") + ");");
  o("  });");
  o("}");
  o();
  // update
  o("inline spicey::Controller update" + E + "Controller(const " + E + "& e, const " + F + "& v) {");
  o("  return [e, v] {");
  o("    " + E + " updated = apply" + E + "Form(e, v);");
  if (links.empty()) {
    o("    auto result = runT(update" + E + "(updated));");
  } else {
    std::string chain = "update" + E + "(updated)";
    std::size_t li = e.attrs.size() + e.owners.size();
    for (const auto* lk : links) {
      std::string step = "set" + E + lk->relationship + "Links(updated.key, spicey::scaffold::keysOf(std::get<" +
                         std::to_string(li++) + ">(v)))";
      chain = "spicey::db::bindT(" + chain + ", [=](const spicey::db::Unit&) { return " + step + "; })";
    }
    o("    auto result = runT(" + chain + ");");
  }
  o("    if (!result.ok()) return spicey::displayErrorPage(result.error());");
  o("    spicey::setPageMessage(\"" + E + " updated\");");
  o("    return spicey::nextInProcessOr(list" + E + "Controller())();");
  o("  };");
  o("}");
  o();
  // edit
  o("inline spicey::Controller edit" + E + "Controller(const " + E + "& e) {");
  o("  return spicey::checkAuthorization(" + access("updateEntity", "e") + ", [e] {");
  o("    auto cur = get" + E + "(e.key);");
  o("    if (!cur) return spicey::displayErrorPage(\"This " + E + " no longer exists.\");");
  std::vector<std::string> formArgs{"*cur"}, editChoices;
  for (const auto& ow : e.owners) {
    const std::string v = lowerFirst(ow.owner) + ow.relationship;
    if (ow.required) {
      o("    auto " + v + " = get" + ow.owner + "(cur->" + ow.member + ");");
      o("    if (!" + v + ") return spicey::displayErrorPage(\"Missing " + ow.owner + " reference.\");");
      formArgs.push_back("*" + v);
    } else {
      o("    auto " + v + " = cur->" + ow.member + " ? get" + ow.owner + "(*cur->" + ow.member +
        ") : std::nullopt;");
      formArgs.push_back(v);
    }
    o("    auto " + ow.choices + " = runQ(queryAll" + plural(ow.owner) + "());");
    editChoices.push_back(ow.choices);
  }
  for (const auto* lk : links) {
    const std::string v = lowerFirst(lk->other) + lk->relationship;
    o("    auto " + v + " = runQ(" + lk->query + "(cur->key));");
    o("    auto " + lk->choices + " = runQ(queryAll" + plural(lk->other) + "());");
    formArgs.push_back(v);
    editChoices.push_back(lk->choices);
  }
  std::vector<std::string> editArgs{l + "FormValue(" + join(formArgs, ", ") + ")"};
  for (const auto& c : editChoices) editArgs.push_back(c);
  editArgs.push_back("[cur = *cur](const " + F + "& v) { return update" + E + "Controller(cur, v); }");
  o("    return edit" + E + "View(" + join(editArgs, ",\n                " ) + ");");
  o("  });");
  o("}");
  o();
  // delete
  o("// Runs after confirmation; the entity may have disappeared meanwhile.");
  o("inline spicey::Controller destroy" + E + "Controller(const " + E + "& e) {");
  o("  return spicey::checkAuthorization(" + access("deleteEntity", "e") + ", [e] {");
  o("    if (!get" + E + "(e.key)) {");
  o("      spicey::setPageMessage(\"" + E + " already deleted\");");
  o("      return list" + E + "Controller()();");
  o("    }");
  o("    auto result = runT(delete" + E + "(e));");
  o("    spicey::setPageMessage(result.ok() ? std::string(\"" + E + " deleted\") : result.error());");
  o("    return list" + E + "Controller()();");
  o("  });");
  o("}");
  o();
  o("inline spicey::Controller delete" + E + "Controller(const " + E + "& e) {");
  o("  return spicey::checkAuthorization(" + access("deleteEntity", "e") + ", [e] {");
  o("    return spicey::scaffold::confirmationPage(\"Really delete entity \\\"\" + " + l +
    "ToShortView(e) + \"\\\"?\",");
  o("                                              destroy" + E + "Controller(e), list" + E + "Controller());");
  o("  });");
  o("}");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

// ---- config ------------------------------------------------------------------------

inline std::string genControllerReference(const Model& m) {
  Out o;
  o("#pragma once");
  o();
  o("// Names of the controllers reachable from routes and processes.");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("enum class ControllerReference {");
  for (const auto& e : m.entities) {
    o("  List" + e.name + "Controller,");
    o("  New" + e.name + "Controller,");
  }
  o("  LoginController,");
  o("  ProcessListController,");
  o("  ErrorController,");
  o("};");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

inline std::string genRoutes(const Model& m) {
  Out o;
  o("#pragma once");
  o();
  o("// URL routes. The menu shows every Exact route in this order.");
  o();
  o("#include <vector>");
  o();
  o("#include \"config/ControllerReference.hpp\"");
  o("#include \"spicey/routing.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("inline std::vector<spicey::Route<ControllerReference>> getRoutes() {");
  o("  using spicey::RouteMatcher;");
  o("  return {");
  for (const auto& e : m.entities) {
    o("      {\"new " + e.name + "\", RouteMatcher::exact(\"new" + e.name + "\"), ControllerReference::New" +
      e.name + "Controller},");
    o("      {\"list " + e.name + "\", RouteMatcher::exact(\"list" + e.name + "\"), ControllerReference::List" +
      e.name + "Controller},");
  }
  o("      {\"Processes\", RouteMatcher::exact(\"processes\"), ControllerReference::ProcessListController},");
  o("      {\"Login\", RouteMatcher::exact(\"login\"), ControllerReference::LoginController},");
  o("      {\"default\", RouteMatcher::always(), ControllerReference::List" + m.entities.front().name +
    "Controller},");
  o("  };");
  o("}");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

inline std::string genAuthorizedOperations(const Model& m) {
  Out o;
  o("#pragma once");
  o();
  o("// Authorization policy per entity. Every operation is granted by default;");
  o("// return spicey::AccessResult::denied(reason) to forbid one.");
  o();
  o("#include \"models/" + m.erd.name + ".hpp\"");
  o("#include \"spicey/auth.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  for (const auto& e : m.entities) {
    o();
    o("inline spicey::AccessResult " + e.lower + "OperationAllowed(const spicey::AccessType<" + e.name + ">&) {");
    o("  return spicey::AccessResult::granted();");
    o("}");
  }
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

inline bool hasTagAndEntry(const Model& m) {
  bool tag = false, entry = false;
  for (const auto& e : m.entities) {
    tag = tag || e.name == "Tag";
    entry = entry || e.name == "Entry";
  }
  return m.erd.name == "Blog" && tag && entry;
}

inline std::string genUserProcesses(const Model& m) {
  Out o;
  o("#pragma once");
  o();
  o("// User processes: named multi-step interactions. States are integers;");
  o("// controllerOf names the controller of a state, next its successor.");
  o();
  o("#include <optional>");
  o();
  o("#include \"config/ControllerReference.hpp\"");
  o("#include \"spicey/process.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("inline spicey::Processes<int, ControllerReference> userProcesses() {");
  o("  spicey::Processes<int, ControllerReference> p;");
  if (hasTagAndEntry(m)) {
    o("  p.startStates = {{\"Insert new tag and entry\", 0}};");
    o("  p.controllerOf = [](const int& s) -> std::optional<ControllerReference> {");
    o("    switch (s) {");
    o("      case 0: return ControllerReference::NewTagController;");
    o("      case 1: return ControllerReference::NewEntryController;");
    o("      case 2: return ControllerReference::ListTagController;");
    o("    }");
    o("    return std::nullopt;");
    o("  };");
    o("  p.next = [](const int& s, const std::optional<spicey::ControllerResult>&) -> std::optional<int> {");
    o("    if (s == 0) return 1;");
    o("    if (s == 1) return 2;");
    o("    return std::nullopt;");
    o("  };");
  } else {
    o("  p.controllerOf = [](const int&) -> std::optional<ControllerReference> { return std::nullopt; };");
    o("  p.next = [](const int&, const std::optional<spicey::ControllerResult>&) -> std::optional<int> {");
    o("    return std::nullopt;");
    o("  };");
  }
  o("  return p;");
  o("}");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

// ---- system ----------------------------------------------------------------------------

inline std::string genApp(const Model& m) {
  const std::string N = m.erd.name, n = lowerFirst(N);
  Out o;
  o("#pragma once");
  o();
  o("// Assembles the " + N + " application: controller mapping, processes,");
  o("// credentials and the request handler configuration.");
  o();
  o("#include <filesystem>");
  o("#include <memory>");
  o("#include <string>");
  o();
  o("#include \"config/ControllerReference.hpp\"");
  o("#include \"config/RoutesData.hpp\"");
  o("#include \"config/UserProcesses.hpp\"");
  for (const auto& e : m.entities) o("#include \"controllers/" + e.name + "Controller.hpp\"");
  o("#include \"models/" + N + ".hpp\"");
  o("#include \"spicey/auth.hpp\"");
  o("#include \"spicey/process.hpp\"");
  o("#include \"spicey/runtime.hpp\"");
  o();
  o("namespace " + m.ns + " {");
  o();
  o("inline std::shared_ptr<spicey::CredentialStore>& " + n + "Credentials() {");
  o("  static std::shared_ptr<spicey::CredentialStore> store = std::make_shared<spicey::CredentialStore>(\"\");");
  o("  return store;");
  o("}");
  o();
  o("inline spicey::Controller getController(ControllerReference ref);");
  o();
  o("inline const spicey::ProcessEngine<int, ControllerReference>& " + n + "Processes() {");
  o("  static const spicey::ProcessEngine<int, ControllerReference> engine(");
  o("      userProcesses(), [](const ControllerReference& r) { return getController(r); });");
  o("  return engine;");
  o("}");
  o();
  o("inline spicey::Controller getController(ControllerReference ref) {");
  o("  switch (ref) {");
  for (const auto& e : m.entities) {
    o("    case ControllerReference::List" + e.name + "Controller: return list" + e.name + "Controller();");
    o("    case ControllerReference::New" + e.name + "Controller: return new" + e.name + "Controller();");
  }
  o("    case ControllerReference::LoginController:");
  o("      return spicey::loginController(" + n + "Credentials(), list" + m.entities.front().name +
    "Controller());");
  o("    case ControllerReference::ProcessListController: return " + n + "Processes().menu();");
  o("    case ControllerReference::ErrorController: break;");
  o("  }");
  o("  return spicey::displayError(\"Illegal URL\");");
  o("}");
  o();
  o("// Opens the database at `dbPath` (in memory when empty) and the");
  o("// credential file next to it.");
  o("inline void open" + N + "App(const std::string& dbPath) {");
  o("  std::filesystem::path db(dbPath);");
  o("  if (!dbPath.empty() && db.has_parent_path()) std::filesystem::create_directories(db.parent_path());");
  o("  open" + N + "Database(dbPath);");
  o("  " + n + "Credentials() = std::make_shared<spicey::CredentialStore>(");
  o("      dbPath.empty() ? std::filesystem::path() : db.parent_path() / \"" + N + ".auth\");");
  o("}");
  o();
  o("inline spicey::AppSpec<ControllerReference> " + n + "AppSpec(std::filesystem::path publicDir) {");
  o("  spicey::AppSpec<ControllerReference> spec;");
  o("  spec.title = " + cppString(N) + ";");
  o("  spec.routes = getRoutes;");
  o("  spec.resolve = [](const ControllerReference& r) { return getController(r); };");
  o("  spec.errorRef = ControllerReference::ErrorController;");
  o("  spec.publicDir = std::move(publicDir);");
  o("  spec.prepare = [](spicey::RequestContext& ctx) { " + n + "Processes().install(ctx); };");
  o("  return spec;");
  o("}");
  o();
  o("}  // namespace " + m.ns);
  return o.str();
}

inline std::string genMain(const Model& m) {
  const std::string N = m.erd.name, n = lowerFirst(N);
  Out o;
  o("// Entry point: serves the application over HTTP.");
  o("//   --port N (or SPICEY_PORT), --host ADDR, --db FILE, --add-user LOGIN");
  o();
  o("#include <exception>");
  o("#include <iostream>");
  o("#include <string>");
  o();
  o("#include \"spicey/server.hpp\"");
  o("#include \"system/App.hpp\"");
  o();
  o("#ifndef SPICEY_PUBLIC_DIR");
  o("#define SPICEY_PUBLIC_DIR \"public\"");
  o("#endif");
  o();
  o("int main(int argc, char** argv) {");
  o("  spicey::ServeOptions opts;");
  o("  opts.db = \"data/" + N + ".db\";");
  o("  if (auto code = spicey::parseServeOptions(argc, argv, opts, \"" + N + " web application\")) return *code;");
  o("  try {");
  o("    " + m.ns + "::open" + N + "App(opts.db);");
  o("    if (opts.addUser) {");
  o("      std::string password = spicey::makeRandomPassword(12);");
  o("      " + m.ns + "::" + n + "Credentials()->set(*opts.addUser, password);");
  o("      std::cout << \"created login \" << *opts.addUser << \" with password \" << password << '\\n';");
  o("      return 0;");
  o("    }");
  o("    spicey::App<" + m.ns + "::ControllerReference> app(" + m.ns + "::" + n + "AppSpec(SPICEY_PUBLIC_DIR));");
  o("    return spicey::serve(app, opts);");
  o("  } catch (const std::exception& e) {");
  o("    std::cerr << \"" + n + ": \" << e.what() << '\\n';");
  o("    return 1;");
  o("  }");
  o("}");
  return o.str();
}

inline std::string executableName(const Model& m) {
  std::string s;
  for (char c : m.erd.name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string genCMake(const Model& m) {
  const std::string x = executableName(m);
  Out o;
  o("cmake_minimum_required(VERSION 3.16)");
  o("project(" + m.erd.name + " CXX)");
  o();
  o("set(CMAKE_CXX_STANDARD 20)");
  o("set(CMAKE_CXX_STANDARD_REQUIRED ON)");
  o();
  o("set(SPICEY_ROOT \"\" CACHE PATH \"Spicey source tree providing include/ and vendor/\")");
  o("if(NOT SPICEY_ROOT)");
  o("  message(FATAL_ERROR \"set SPICEY_ROOT to the Spicey source tree\")");
  o("endif()");
  o();
  o("find_package(OpenSSL REQUIRED)");
  o("find_package(Threads REQUIRED)");
  o();
  o("add_executable(" + x + " system/main.cpp)");
  o("target_include_directories(" + x + " PRIVATE ${CMAKE_CURRENT_SOURCE_DIR} ${SPICEY_ROOT}/include ${SPICEY_ROOT}/vendor)");
  o("target_link_libraries(" + x + " PRIVATE OpenSSL::Crypto Threads::Threads)");
  o("target_compile_definitions(" + x + " PRIVATE SPICEY_PUBLIC_DIR=\"${CMAKE_CURRENT_SOURCE_DIR}/public\")");
  return o.str();
}

inline std::string genBuildScript() {
  Out o;
  o("#!/bin/sh");
  o("# Configures and builds the application into build/.");
  o("# SPICEY_ROOT must point at the Spicey source tree.");
  o("set -e");
  o("cd \"$(dirname \"$0\")/..\"");
  o(": \"${SPICEY_ROOT:?set SPICEY_ROOT to the Spicey source tree}\"");
  o("cmake -S . -B build -DSPICEY_ROOT=\"$SPICEY_ROOT\"");
  o("cmake --build build");
  return o.str();
}

inline std::string genRunScript(const Model& m) {
  Out o;
  o("#!/bin/sh");
  o("# Starts the server; extra arguments are passed through (e.g. --port 9000).");
  o("set -e");
  o("cd \"$(dirname \"$0\")/..\"");
  o("mkdir -p data");
  o("exec ./build/" + executableName(m) + " --db data/" + m.erd.name + ".db \"$@\"");
  return o.str();
}

inline std::string genStyle() {
  Out o;
  o("body { font-family: sans-serif; margin: 0; color: #222; }");
  o(".header { background: #3a5a80; color: #fff; padding: 0.5em 1em; }");
  o(".header h1 { margin: 0; font-size: 1.4em; }");
  o(".menubar { background: #e8edf3; padding: 0.3em 1em; }");
  o("ul.menu { list-style: none; margin: 0; padding: 0; }");
  o("ul.menu li { display: inline; margin-right: 1em; }");
  o(".message { color: #2a6a2a; padding: 0 1em; min-height: 1.2em; }");
  o(".content { padding: 0 1em; }");
  o("table { border-collapse: collapse; margin: 0.5em 0; }");
  o("td { border: 1px solid #bbb; padding: 0.2em 0.5em; }");
  o("tr:first-child td { background: #f0f0f0; font-weight: bold; }");
  o(".error, .wui-error { color: #b00; }");
  o(".wui-invalid { border-left: 3px solid #b00; padding-left: 0.5em; }");
  o(".footer { padding: 1em; font-size: 0.8em; color: #777; }");
  return o.str();
}

}  // namespace detail

// Generated identifiers that would collide; empty for every ERD the
// generator accepts.
inline std::vector<erd::ValidationError> checkGeneratable(const erd::ERD& erd) {
  auto errs = erd::validateERD(erd);
  if (!errs.empty()) return errs;
  return detail::nameCollisions(detail::buildModel(erd));
}

// Throws erd::InvalidErd when the ERD is invalid or cannot be generated.
inline GeneratedTree generate(const erd::ERD& erd, const GenOptions& opt = {}) {
  auto errs = checkGeneratable(erd);
  if (!errs.empty()) throw erd::InvalidErd(errs);
  detail::Model m = detail::buildModel(erd);
  GeneratedTree t;
  const std::string N = erd.name;
  t["CMakeLists.txt"] = detail::genCMake(m);
  t["models/" + N + ".hpp"] = detail::genModel(m);
  t["views/" + N + "EntitiesToHtml.hpp"] = detail::genEntitiesToHtml(m, opt);
  for (const auto& e : m.entities) {
    t["views/" + e.name + "View.hpp"] = detail::genView(m, e);
    t["controllers/" + e.name + "Controller.hpp"] = detail::genController(m, e);
  }
  t["config/ControllerReference.hpp"] = detail::genControllerReference(m);
  t["config/RoutesData.hpp"] = detail::genRoutes(m);
  t["config/AuthorizedOperations.hpp"] = detail::genAuthorizedOperations(m);
  t["config/UserProcesses.hpp"] = detail::genUserProcesses(m);
  t["system/App.hpp"] = detail::genApp(m);
  t["system/main.cpp"] = detail::genMain(m);
  t["scripts/build.sh"] = detail::genBuildScript();
  t["scripts/run.sh"] = detail::genRunScript(m);
  t["public/style.css"] = detail::genStyle();
  return t;
}

// Number of form components for an entity: attributes, owning one-to-many
// relationships, many-to-many relationships where it is the first end.
inline std::size_t formArity(const erd::ERD& erd, const std::string& entity) {
  return detail::buildModel(erd).entity(entity).formArity();
}

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes `tree` below `dir`. A nonempty `dir` is refused unless `force`.
inline void writeTree(const GeneratedTree& tree, const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_directory(dir, ec)) throw OutputError(dir.string() + " is not a directory");
  if (fs::is_directory(dir, ec) && !fs::is_empty(dir, ec) && !force)
    throw OutputError(dir.string() + " is not empty (use --force to overwrite)");
  for (const auto& [rel, contents] : tree) {
    fs::path p = dir / rel;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw OutputError("cannot create " + p.parent_path().string() + ": " + ec.message());
    {
      std::ofstream out(p, std::ios::binary | std::ios::trunc);
      out << contents;
      out.flush();
      if (!out) throw OutputError("cannot write " + p.string());
    }
    if (p.extension() == ".sh") {
      fs::permissions(p, fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                      fs::perm_options::add, ec);
    }
  }
}

}  // namespace spicey::gen
