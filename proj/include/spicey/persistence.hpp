#pragma once

// Embedded storage for ERD-derived schemas. Tables live in memory; committed
// transactions are appended to a checksummed log file (optional) and replayed
// on open. Every mutation keeps the ERD constraints: unique attributes,
// foreign keys, join rows and finite cardinality maxima.

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "calendar.hpp"
#include "erd.hpp"

namespace spicey::db {

using erd::DomainKind;

using Value = std::variant<std::monostate, std::int64_t, double, bool, std::string, CalendarTime>;

inline bool isNull(const Value& v) { return std::holds_alternative<std::monostate>(v); }

inline bool valueMatches(DomainKind k, const Value& v) {
  switch (k) {
    case DomainKind::Int: return std::holds_alternative<std::int64_t>(v);
    case DomainKind::Float: return std::holds_alternative<double>(v);
    case DomainKind::Bool: return std::holds_alternative<bool>(v);
    case DomainKind::String: return std::holds_alternative<std::string>(v);
    case DomainKind::Date: {
      auto* t = std::get_if<CalendarTime>(&v);
      return t && t->valid();
    }
  }
  return false;
}

inline Value fromLiteral(const erd::Literal& lit) {
  return std::visit([](const auto& x) { return Value(x); }, lit);
}

// Display form: empty for null, ISO for dates.
inline std::string showValue(const Value& v) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return erd::printLiteral(d); }
    std::string operator()(bool b) const { return b ? "True" : "False"; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const CalendarTime& t) const { return t.toIso(); }
  };
  return std::visit(V{}, v);
}

struct EntityKey {
  std::string entity;
  std::int64_t id = 0;
  auto operator<=>(const EntityKey&) const = default;
};

struct EntityValue {
  EntityKey key;
  std::vector<Value> attrs;  // declaration order
  // Owner key per OneToMany relationship where this entity is the many side.
  std::map<std::string, std::optional<std::int64_t>> owners;
  bool operator==(const EntityValue&) const = default;
};

struct Unit {
  bool operator==(const Unit&) const = default;
};

struct Failure {
  std::string reason;
};

template <class T>
class TxResult {
 public:
  TxResult(T value) : v_(std::move(value)) {}
  TxResult(Failure f) : v_(std::move(f)) {}
  static TxResult failed(std::string reason) { return TxResult(Failure{std::move(reason)}); }

  bool ok() const { return v_.index() == 0; }
  const T& value() const { return std::get<0>(v_); }
  T& value() { return std::get<0>(v_); }
  const std::string& error() const { return std::get<1>(v_).reason; }

 private:
  std::variant<T, Failure> v_;
};

// ---- schema -------------------------------------------------------------

struct Column {
  std::string name;
  DomainKind kind = DomainKind::String;
  bool nullable = false;
  bool unique = false;
  std::optional<Value> defaultValue;
};

struct ForeignKey {
  std::string relationship;
  std::string column;  // e.g. EntryCommentingKey
  std::string target;  // owning entity
  bool required = true;
  std::optional<std::uint32_t> maxPerOwner;
};

struct Table {
  std::string entity;
  std::vector<Column> columns;
  std::vector<ForeignKey> fks;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i].name == name) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> fk(std::string_view relationship) const {
    for (std::size_t i = 0; i < fks.size(); ++i)
      if (fks[i].relationship == relationship) return i;
    return std::nullopt;
  }
};

struct JoinTable {
  std::string relationship;  // also the table name
  std::string entityA, entityB;
  std::string columnA, columnB;
  std::optional<std::uint32_t> maxAPerB;  // from the cardinality at end A
  std::optional<std::uint32_t> maxBPerA;
};

struct Schema {
  std::string name;
  std::vector<Table> tables;
  std::vector<JoinTable> joins;

  const Table* table(std::string_view entity) const {
    for (const auto& t : tables)
      if (t.entity == entity) return &t;
    return nullptr;
  }
  const JoinTable* join(std::string_view relationship) const {
    for (const auto& j : joins)
      if (j.relationship == relationship) return &j;
    return nullptr;
  }

  // Stable text identifying the layout; stored in database files.
  std::string fingerprint() const {
    std::string out = name;
    for (const auto& t : tables) {
      out += "|" + t.entity + "(";
      for (const auto& c : t.columns)
        out += c.name + ":" + std::string(erd::domainKindName(c.kind)) + (c.nullable ? "?" : "") +
               (c.unique ? "!" : "") + ",";
      for (const auto& f : t.fks) out += f.column + "->" + f.target + ",";
      out += ")";
    }
    for (const auto& j : joins) out += "|" + j.relationship + "<" + j.entityA + "," + j.entityB + ">";
    return out;
  }
};

// Precondition: validateERD(erd) is empty; throws erd::InvalidErd otherwise.
inline Schema deriveSchema(const erd::ERD& erd) {
  if (auto errs = erd::validateERD(erd); !errs.empty()) throw erd::InvalidErd(std::move(errs));
  Schema s;
  s.name = erd.name;
  for (const auto& e : erd.entities) {
    Table t;
    t.entity = e.name;
    for (const auto& a : e.attributes) {
      Column c{a.name, a.domain.kind, a.nullAllowed, a.key == erd::KeyKind::Unique, std::nullopt};
      if (a.domain.defaultValue) c.defaultValue = fromLiteral(*a.domain.defaultValue);
      t.columns.push_back(std::move(c));
    }
    s.tables.push_back(std::move(t));
  }
  for (const auto& shape : erd::classifyRelationships(erd)) {
    if (shape.isOneToMany()) {
      auto& t = *std::find_if(s.tables.begin(), s.tables.end(),
                              [&](const Table& x) { return x.entity == shape.many.entity; });
      t.fks.push_back({shape.relationship, shape.one.entity + shape.relationship + "Key",
                       shape.one.entity, shape.ownerRequired(), shape.manyMax()});
    } else {
      JoinTable j;
      j.relationship = shape.relationship;
      j.entityA = shape.one.entity;
      j.entityB = shape.many.entity;
      j.columnA = j.entityA + "Key";
      j.columnB = j.entityB + "Key";
      if (j.columnA == j.columnB) {
        j.columnA = j.entityA + shape.one.role + "Key";
        j.columnB = j.entityB + shape.many.role + "Key";
      }
      j.maxAPerB = shape.one.cardinality.max;
      j.maxBPerA = shape.many.cardinality.max;
      s.joins.push_back(std::move(j));
    }
  }
  return s;
}

// ---- state and mutation log ----------------------------------------------

struct Row {
  std::vector<Value> attrs;
  std::vector<std::optional<std::int64_t>> fks;  // Table::fks order
  bool operator==(const Row&) const = default;
};

struct State {
  std::map<std::string, std::map<std::int64_t, Row>> rows;
  std::map<std::string, std::set<std::pair<std::int64_t, std::int64_t>>> links;
  std::map<std::string, std::int64_t> nextId;
};

struct Op {
  enum class Kind : char { Put = 'P', Erase = 'E', Link = 'L', Unlink = 'U', NextId = 'N' };
  Kind kind = Kind::Put;
  std::string name;  // entity, or relationship for link ops
  std::int64_t a = 0;
  std::int64_t b = 0;
  Row row;
};

inline void applyOp(State& s, const Op& op) {
  switch (op.kind) {
    case Op::Kind::Put: s.rows[op.name][op.a] = op.row; break;
    case Op::Kind::Erase: s.rows[op.name].erase(op.a); break;
    case Op::Kind::Link: s.links[op.name].insert({op.a, op.b}); break;
    case Op::Kind::Unlink: s.links[op.name].erase({op.a, op.b}); break;
    case Op::Kind::NextId: {
      auto& n = s.nextId[op.name];
      n = std::max(n, op.a);
      break;
    }
  }
}

namespace detail {

inline std::uint32_t fnv1a(std::string_view data) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : data) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_ += static_cast<char>(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xff);
  }
  void i64(std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_ += static_cast<char>((u >> (8 * i)) & 0xff);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void value(const Value& v) {
    u8(static_cast<std::uint8_t>(v.index()));
    struct V {
      Writer& w;
      void operator()(std::monostate) const {}
      void operator()(std::int64_t i) const { w.i64(i); }
      void operator()(double d) const {
        std::int64_t bits;
        std::memcpy(&bits, &d, sizeof d);
        w.i64(bits);
      }
      void operator()(bool b) const { w.u8(b ? 1 : 0); }
      void operator()(const std::string& s) const { w.str(s); }
      void operator()(const CalendarTime& t) const { w.i64(t.toEpochSeconds()); }
    };
    std::visit(V{*this}, v);
  }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  struct Truncated {};

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::int64_t i64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return static_cast<std::int64_t>(v);
  }
  std::string str() {
    std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  Value value() {
    switch (u8()) {
      case 0: return std::monostate{};
      case 1: return i64();
      case 2: {
        std::int64_t bits = i64();
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
      }
      case 3: return u8() != 0;
      case 4: return str();
      case 5: return CalendarTime::fromEpochSeconds(i64());
      default: throw std::runtime_error("corrupt value tag");
    }
  }
  std::size_t pos() const { return pos_; }
  bool atEnd() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Truncated{};
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

inline std::string encodeOps(const std::vector<Op>& ops) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(ops.size()));
  for (const auto& op : ops) {
    w.u8(static_cast<std::uint8_t>(op.kind));
    w.str(op.name);
    w.i64(op.a);
    w.i64(op.b);
    if (op.kind == Op::Kind::Put) {
      w.u32(static_cast<std::uint32_t>(op.row.attrs.size()));
      for (const auto& v : op.row.attrs) w.value(v);
      w.u32(static_cast<std::uint32_t>(op.row.fks.size()));
      for (const auto& f : op.row.fks) {
        w.u8(f ? 1 : 0);
        w.i64(f.value_or(0));
      }
    }
  }
  return std::move(w.bytes());
}

inline std::vector<Op> decodeOps(std::string_view payload) {
  Reader r(payload);
  std::vector<Op> ops(r.u32());
  for (auto& op : ops) {
    op.kind = static_cast<Op::Kind>(r.u8());
    op.name = r.str();
    op.a = r.i64();
    op.b = r.i64();
    if (op.kind == Op::Kind::Put) {
      op.row.attrs.resize(r.u32());
      for (auto& v : op.row.attrs) v = r.value();
      op.row.fks.resize(r.u32());
      for (auto& f : op.row.fks) {
        bool present = r.u8() != 0;
        std::int64_t id = r.i64();
        if (present) f = id;
      }
    }
  }
  return ops;
}

// Length-prefixed, checksummed record.
inline std::string frame(std::string_view payload) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.u32(fnv1a(payload));
  w.bytes() += payload;
  return std::move(w.bytes());
}

// Reads one record at `pos`; nullopt for a torn or corrupt tail.
inline std::optional<std::string_view> unframe(std::string_view data, std::size_t& pos) {
  if (data.size() - pos < 8) return std::nullopt;
  Reader r(data.substr(pos, 8));
  std::uint32_t len = r.u32(), sum = r.u32();
  if (data.size() - pos - 8 < len) return std::nullopt;
  std::string_view payload = data.substr(pos + 8, len);
  if (fnv1a(payload) != sum) return std::nullopt;
  pos += 8 + len;
  return payload;
}

inline std::string readAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void writeFully(int fd, std::string_view data, const std::filesystem::path& p) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) throw std::runtime_error("write failed: " + p.string());
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

inline int openOrThrow(const std::filesystem::path& p, int flags) {
  int fd = ::open(p.c_str(), flags | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + p.string());
  return fd;
}

}  // namespace detail

inline constexpr std::string_view kFileMagic = "SPCY1";

// ---- read access ---------------------------------------------------------

class Snapshot {
 public:
  Snapshot(const Schema& schema, const State& state) : schema_(&schema), state_(&state) {}

  const Schema& schema() const { return *schema_; }

  std::optional<EntityValue> get(const EntityKey& key) const {
    const Row* r = row(key.entity, key.id);
    if (!r) return std::nullopt;
    return toValue(key.entity, key.id, *r);
  }

  bool exists(std::string_view entity, std::int64_t id) const { return row(entity, id) != nullptr; }

  // All instances in ascending key order.
  std::vector<EntityValue> all(std::string_view entity) const {
    std::vector<EntityValue> out;
    if (auto t = state_->rows.find(std::string(entity)); t != state_->rows.end())
      for (const auto& [id, r] : t->second) out.push_back(toValue(std::string(entity), id, r));
    return out;
  }

  std::size_t count(std::string_view entity) const {
    auto t = state_->rows.find(std::string(entity));
    return t == state_->rows.end() ? 0 : t->second.size();
  }

  // Instances on the many side of `relationship` whose owner is `owner`.
  std::vector<EntityValue> referencing(std::string_view relationship, std::int64_t owner) const {
    std::vector<EntityValue> out;
    for (const auto& t : schema_->tables) {
      auto fk = t.fk(relationship);
      if (!fk) continue;
      for (const auto& v : all(t.entity))
        if (v.owners.at(std::string(relationship)) == owner) out.push_back(v);
    }
    return out;
  }

  // Instances linked to `key` through the ManyToMany `relationship`.
  std::vector<EntityValue> linked(std::string_view relationship, const EntityKey& key) const {
    std::vector<EntityValue> out;
    const JoinTable* j = schema_->join(relationship);
    if (!j) return out;
    for (std::int64_t id : linkedIds(*j, key)) {
      const std::string& other = key.entity == j->entityA ? j->entityB : j->entityA;
      if (auto v = get({other, id})) out.push_back(*v);
    }
    return out;
  }

  std::vector<std::int64_t> linkedIds(const JoinTable& j, const EntityKey& key) const {
    std::vector<std::int64_t> out;
    bool sideA = key.entity == j.entityA;
    if (!sideA && key.entity != j.entityB) return out;
    for (const auto& [a, b] : linkRows(j.relationship)) {
      if (sideA && a == key.id) out.push_back(b);
      else if (!sideA && b == key.id) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::set<std::pair<std::int64_t, std::int64_t>>& linkRows(std::string_view relationship) const {
    static const std::set<std::pair<std::int64_t, std::int64_t>> none;
    auto l = state_->links.find(std::string(relationship));
    return l == state_->links.end() ? none : l->second;
  }

  const Row* row(std::string_view entity, std::int64_t id) const {
    auto t = state_->rows.find(std::string(entity));
    if (t == state_->rows.end()) return nullptr;
    auto r = t->second.find(id);
    return r == t->second.end() ? nullptr : &r->second;
  }

  EntityValue toValue(const std::string& entity, std::int64_t id, const Row& r) const {
    EntityValue v{{entity, id}, r.attrs, {}};
    if (const Table* t = schema_->table(entity))
      for (std::size_t i = 0; i < t->fks.size() && i < r.fks.size(); ++i)
        v.owners[t->fks[i].relationship] = r.fks[i];
    return v;
  }

  // Deterministic text rendering of all rows and link rows.
  std::string dump() const {
    std::string out;
    for (const auto& t : schema_->tables) {
      out += "table " + t.entity + "\n";
      if (auto rs = state_->rows.find(t.entity); rs != state_->rows.end()) {
        for (const auto& [id, r] : rs->second) {
          out += "  " + std::to_string(id) + ":";
          for (const auto& v : r.attrs)
            out += " " + (isNull(v) ? std::string("null")
                                    : std::holds_alternative<std::string>(v)
                                          ? erd::quoteString(std::get<std::string>(v))
                                          : showValue(v));
          for (const auto& f : r.fks) out += " ->" + (f ? std::to_string(*f) : std::string("null"));
          out += "\n";
        }
      }
    }
    for (const auto& j : schema_->joins) {
      out += "join " + j.relationship + "\n";
      for (const auto& [a, b] : linkRows(j.relationship))
        out += "  " + std::to_string(a) + " " + std::to_string(b) + "\n";
    }
    return out;
  }

 private:
  const Schema* schema_;
  const State* state_;
};

template <class T>
using Query = std::function<T(const Snapshot&)>;

inline Query<std::vector<EntityValue>> queryAll(std::string entity) {
  return [entity = std::move(entity)](const Snapshot& s) { return s.all(entity); };
}

inline Query<std::vector<EntityValue>> queryWhere(std::string entity,
                                                  std::function<bool(const EntityValue&)> pred) {
  return [entity = std::move(entity), pred = std::move(pred)](const Snapshot& s) {
    auto all = s.all(entity);
    std::vector<EntityValue> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), pred);
    return out;
  };
}

inline Query<std::optional<EntityValue>> queryGet(EntityKey key) {
  return [key = std::move(key)](const Snapshot& s) { return s.get(key); };
}

inline Query<std::vector<EntityValue>> queryReferencing(std::string relationship, std::int64_t owner) {
  return [relationship = std::move(relationship), owner](const Snapshot& s) {
    return s.referencing(relationship, owner);
  };
}

inline Query<std::vector<EntityValue>> queryLinked(std::string relationship, EntityKey key) {
  return [relationship = std::move(relationship), key = std::move(key)](const Snapshot& s) {
    return s.linked(relationship, key);
  };
}

template <class T, class F>
auto mapQuery(Query<T> q, F f) -> Query<std::invoke_result_t<F, T>> {
  return [q = std::move(q), f = std::move(f)](const Snapshot& s) { return f(q(s)); };
}

// ---- transactions --------------------------------------------------------

using Links = std::map<std::string, std::vector<std::int64_t>>;
using Owners = std::map<std::string, std::optional<std::int64_t>>;

class Transaction {
 public:
  Transaction(const Schema& schema, State& state) : schema_(&schema), state_(&state) {}

  Snapshot view() const { return Snapshot(*schema_, *state_); }

  // `links` maps ManyToMany relationships to keys on the other side. For a
  // relationship between an entity and itself the new instance is end A.
  TxResult<EntityValue> newEntity(const std::string& entity, std::vector<Value> attrs,
                                  const Owners& owners = {}, const Links& links = {}) {
    const Table* t = schema_->table(entity);
    if (!t) return fail<EntityValue>("unknown entity " + entity);
    if (auto e = checkAttrs(*t, attrs)) return fail<EntityValue>(*e);
    if (auto e = checkUnique(*t, attrs, std::nullopt)) return fail<EntityValue>(*e);
    std::vector<std::optional<std::int64_t>> fks(t->fks.size());
    if (auto e = resolveOwners(*t, owners, std::nullopt, fks)) return fail<EntityValue>(*e);
    if (auto e = checkLinks(entity, std::nullopt, links)) return fail<EntityValue>(*e);

    std::int64_t id = state_->nextId[entity] + 1;

    record({Op::Kind::NextId, entity, id, 0, {}});
    record({Op::Kind::Put, entity, id, 0, Row{std::move(attrs), std::move(fks)}});
    setLinks(entity, id, links);
    return view().get({entity, id}).value();
  }

  // Missing relationships in value.owners keep their current owner; `links`
  // (when given) replaces the link sets of the listed relationships.
  TxResult<Unit> updateEntity(const EntityValue& value, const std::optional<Links>& links = std::nullopt) {
    const Table* t = schema_->table(value.key.entity);
    if (!t) return fail<Unit>("unknown entity " + value.key.entity);
    const Row* old = view().row(value.key.entity, value.key.id);
    if (!old) return fail<Unit>("unknown key");
    if (auto e = checkAttrs(*t, value.attrs)) return fail<Unit>(*e);
    if (auto e = checkUnique(*t, value.attrs, value.key.id)) return fail<Unit>(*e);
    std::vector<std::optional<std::int64_t>> fks = old->fks;
    if (auto e = resolveOwners(*t, value.owners, value.key.id, fks)) return fail<Unit>(*e);
    if (links)
      if (auto e = checkLinks(value.key.entity, value.key.id, *links)) return fail<Unit>(*e);

    Row updated{value.attrs, std::move(fks)};
    if (updated != *old) record({Op::Kind::Put, value.key.entity, value.key.id, 0, std::move(updated)});
    if (links) setLinks(value.key.entity, value.key.id, *links);
    return Unit{};
  }

  // Rejects deletion while a required foreign key points at `key`; optional
  // references are cleared and link rows removed.
  TxResult<Unit> deleteEntity(const EntityKey& key) {
    if (!schema_->table(key.entity) || !view().exists(key.entity, key.id)) return fail<Unit>("unknown key");
    std::vector<std::pair<std::string, std::size_t>> optionalRefs;
    for (const auto& t : schema_->tables) {
      for (std::size_t i = 0; i < t.fks.size(); ++i) {
        if (t.fks[i].target != key.entity) continue;
        std::size_t n = countReferencing(t, i, key.id, std::nullopt);
        if (n == 0) continue;
        if (t.fks[i].required)
          return fail<Unit>("entity still referenced by " + std::to_string(n) + " " + t.entity +
                            " instance(s)");
        optionalRefs.emplace_back(t.entity, i);
      }
    }
    for (const auto& [entity, i] : optionalRefs) {
      for (const auto& [id, r] : state_->rows[entity]) {
        if (r.fks[i] != key.id) continue;
        Row cleared = r;
        cleared.fks[i] = std::nullopt;
        record({Op::Kind::Put, entity, id, 0, std::move(cleared)});
      }
    }
    for (const auto& j : schema_->joins) {
      std::vector<std::pair<std::int64_t, std::int64_t>> drop;
      for (const auto& [a, b] : view().linkRows(j.relationship))
        if ((j.entityA == key.entity && a == key.id) || (j.entityB == key.entity && b == key.id))
          drop.emplace_back(a, b);
      for (const auto& [a, b] : drop) record({Op::Kind::Unlink, j.relationship, a, b, {}});
    }
    record({Op::Kind::Erase, key.entity, key.id, 0, {}});
    return Unit{};
  }

  void rollback() {
    for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) applyOp(*state_, *it);
    undo_.clear();
  }

  const std::vector<Op>& redo() const { return redo_; }

 private:
  template <class T>
  static TxResult<T> fail(std::string reason) {
    return TxResult<T>::failed(std::move(reason));
  }

  void record(Op op) {
    switch (op.kind) {
      case Op::Kind::Put: {
        const Row* old = view().row(op.name, op.a);
        if (old) undo_.push_back({Op::Kind::Put, op.name, op.a, 0, *old});
        else undo_.push_back({Op::Kind::Erase, op.name, op.a, 0, {}});
        break;
      }
      case Op::Kind::Erase:
        undo_.push_back({Op::Kind::Put, op.name, op.a, 0, *view().row(op.name, op.a)});
        break;
      case Op::Kind::Link: undo_.push_back({Op::Kind::Unlink, op.name, op.a, op.b, {}}); break;
      case Op::Kind::Unlink: undo_.push_back({Op::Kind::Link, op.name, op.a, op.b, {}}); break;
      case Op::Kind::NextId: break;  // keys are never reused, even after rollback
    }
    applyOp(*state_, op);
    redo_.push_back(std::move(op));
  }

  std::optional<std::string> checkAttrs(const Table& t, const std::vector<Value>& attrs) const {
    if (attrs.size() != t.columns.size())
      return "expected " + std::to_string(t.columns.size()) + " attributes for " + t.entity;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      const Column& c = t.columns[i];
      if (isNull(attrs[i])) {
        if (!c.nullable) return "missing value for " + t.entity + "." + c.name;
      } else if (!valueMatches(c.kind, attrs[i])) {
        return "type mismatch on " + t.entity + "." + c.name;
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> checkUnique(const Table& t, const std::vector<Value>& attrs,
                                         std::optional<std::int64_t> self) const {
    auto rows = state_->rows.find(t.entity);
    if (rows == state_->rows.end()) return std::nullopt;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (!t.columns[i].unique || isNull(attrs[i])) continue;
      for (const auto& [id, r] : rows->second)
        if (id != self && r.attrs[i] == attrs[i]) return "unique violation on " + t.entity + "." + t.columns[i].name;
    }
    return std::nullopt;
  }

  std::size_t countReferencing(const Table& t, std::size_t fk, std::int64_t owner,
                               std::optional<std::int64_t> except) const {
    std::size_t n = 0;
    if (auto rows = state_->rows.find(t.entity); rows != state_->rows.end())
      for (const auto& [id, r] : rows->second) n += (id != except && r.fks[fk] == owner);
    return n;
  }

  std::optional<std::string> resolveOwners(const Table& t, const Owners& owners,
                                           std::optional<std::int64_t> self,
                                           std::vector<std::optional<std::int64_t>>& fks) const {
    for (const auto& [rel, _] : owners)
      if (!t.fk(rel)) return "unknown relationship " + rel + " for " + t.entity;
    for (std::size_t i = 0; i < t.fks.size(); ++i) {
      const ForeignKey& fk = t.fks[i];
      auto given = owners.find(fk.relationship);
      std::optional<std::int64_t> before = fks[i];
      if (given != owners.end()) fks[i] = given->second;
      if (!fks[i]) {
        if (fk.required) return "missing required " + fk.target + " reference";
        continue;
      }
      if (!view().exists(fk.target, *fks[i])) return std::string("dangling key");
      if (fk.maxPerOwner && (!self || before != fks[i]) &&
          countReferencing(t, i, *fks[i], self) + 1 > *fk.maxPerOwner)
        return std::string("cardinality bound exceeded");
    }
    return std::nullopt;
  }

  static std::vector<std::int64_t> dedupe(std::vector<std::int64_t> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  std::optional<std::string> checkLinks(const std::string& entity, std::optional<std::int64_t> self,
                                        const Links& links) const {
    for (const auto& [rel, rawIds] : links) {
      const JoinTable* j = schema_->join(rel);
      if (!j || (j->entityA != entity && j->entityB != entity))
        return "unknown relationship " + rel + " for " + entity;
      bool sideA = j->entityA == entity;
      const std::string& other = sideA ? j->entityB : j->entityA;
      auto ids = dedupe(rawIds);
      std::optional<std::uint32_t> ownMax = sideA ? j->maxBPerA : j->maxAPerB;
      std::optional<std::uint32_t> otherMax = sideA ? j->maxAPerB : j->maxBPerA;
      if (ownMax && ids.size() > *ownMax) return std::string("cardinality bound exceeded");
      for (std::int64_t o : ids) {
        if (!view().exists(other, o)) return std::string("dangling key");
        if (!otherMax) continue;
        std::size_t n = 0;
        bool already = false;
        for (const auto& [a, b] : view().linkRows(rel)) {
          std::int64_t mine = sideA ? a : b, theirs = sideA ? b : a;
          if (theirs != o) continue;
          if (mine == self) already = true;
          else ++n;
        }
        if (!already && n + 1 > *otherMax) return std::string("cardinality bound exceeded");
      }
    }
    return std::nullopt;
  }

  void setLinks(const std::string& entity, std::int64_t id, const Links& links) {
    for (const auto& [rel, rawIds] : links) {
      const JoinTable& j = *schema_->join(rel);
      bool sideA = j.entityA == entity;
      auto want = dedupe(rawIds);
      std::vector<std::pair<std::int64_t, std::int64_t>> drop;
      std::set<std::int64_t> have;
      for (const auto& [a, b] : view().linkRows(rel)) {
        if ((sideA ? a : b) != id) continue;
        std::int64_t o = sideA ? b : a;
        if (std::binary_search(want.begin(), want.end(), o)) have.insert(o);
        else drop.emplace_back(a, b);
      }
      for (const auto& [a, b] : drop) record({Op::Kind::Unlink, rel, a, b, {}});
      for (std::int64_t o : want)
        if (!have.count(o)) record({Op::Kind::Link, rel, sideA ? id : o, sideA ? o : id, {}});
    }
  }

  const Schema* schema_;
  State* state_;
  std::vector<Op> undo_;
  std::vector<Op> redo_;
};

// ---- composable transactions ----------------------------------------------

// A transaction as a value: run it with Database::runTransaction.
template <class T>
using Tx = std::function<TxResult<T>(Transaction&)>;

template <class T>
Tx<T> returnT(T value) {
  return [value = std::move(value)](Transaction&) { return TxResult<T>(value); };
}

template <class T>
Tx<T> failT(std::string reason) {
  return [reason = std::move(reason)](Transaction&) { return TxResult<T>::failed(reason); };
}

// Runs `t`, then the transaction `f` builds from its result; the first
// failure ends the sequence.
template <class A, class F>
auto bindT(Tx<A> t, F f) -> decltype(f(std::declval<const A&>())) {
  using TB = decltype(f(std::declval<const A&>()));
  using RB = std::invoke_result_t<TB, Transaction&>;
  return TB([t = std::move(t), f = std::move(f)](Transaction& tx) -> RB {
    auto r = t(tx);
    if (!r.ok()) return RB::failed(r.error());
    return f(r.value())(tx);
  });
}

// ---- database --------------------------------------------------------------

class Database {
 public:
  // In-memory database.
  explicit Database(Schema schema) : schema_(std::move(schema)) {}

  // File-backed database; creates the file if missing and replays it
  // otherwise. A journal file (<file>.journal) sits alongside.
  Database(Schema schema, std::filesystem::path file) : schema_(std::move(schema)), file_(std::move(file)) {
    open();
  }

  ~Database() {
    if (fd_ >= 0) ::close(fd_);
  }
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;

  const Schema& schema() const { return schema_; }
  const std::optional<std::filesystem::path>& file() const { return file_; }

  // Runs `f(Transaction&)` atomically. `f` returns a TxResult; a failed result
  // (or an exception) rolls back every mutation made by `f`.
  template <class F>
  auto runTransaction(F&& f) -> std::invoke_result_t<F, Transaction&> {
    std::unique_lock lock(mu_);
    Transaction tx(schema_, state_);
    try {
      auto result = f(tx);
      if (!result.ok()) {
        tx.rollback();
        persistBurntKeys(tx.redo());
        return result;
      }
      if (!tx.redo().empty()) append(tx.redo());
      return result;
    } catch (...) {
      tx.rollback();
      throw;
    }
  }

  TxResult<EntityValue> newEntity(const std::string& entity, std::vector<Value> attrs,
                                  const Owners& owners = {}, const Links& links = {}) {
    return runTransaction([&](Transaction& tx) { return tx.newEntity(entity, std::move(attrs), owners, links); });
  }
  TxResult<Unit> updateEntity(const EntityValue& v, const std::optional<Links>& links = std::nullopt) {
    return runTransaction([&](Transaction& tx) { return tx.updateEntity(v, links); });
  }
  TxResult<Unit> deleteEntity(const EntityKey& key) {
    return runTransaction([&](Transaction& tx) { return tx.deleteEntity(key); });
  }

  template <class T>
  T runQuery(const Query<T>& q) const {
    std::shared_lock lock(mu_);
    return q(Snapshot(schema_, state_));
  }

  // Calls f(const Snapshot&) under a read lock.
  template <class F>
  auto read(F&& f) const {
    std::shared_lock lock(mu_);
    return f(Snapshot(schema_, state_));
  }

  std::string dumpState() const {
    std::shared_lock lock(mu_);
    return Snapshot(schema_, state_).dump();
  }

 private:
  std::filesystem::path journalPath() const { return file_->string() + ".journal"; }

  std::string header() const {
    detail::Writer w;
    w.bytes() += kFileMagic;
    w.str(schema_.fingerprint());
    return std::move(w.bytes());
  }

  void open() {
    if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
    std::string data = std::filesystem::exists(*file_) ? detail::readAll(*file_) : std::string();
    std::string head = header();
    std::size_t pos = 0, validEnd = 0;
    std::string_view lastRecord;
    if (data.empty()) {
      int fd = detail::openOrThrow(*file_, O_WRONLY | O_CREAT | O_TRUNC);
      detail::writeFully(fd, head, *file_);
      ::fsync(fd);
      ::close(fd);
      data = head;
    } else if (data.compare(0, kFileMagic.size(), kFileMagic) != 0) {
      throw std::runtime_error(file_->string() + ": not a database file");
    } else if (data.compare(0, head.size(), head) != 0) {
      throw std::runtime_error(file_->string() + ": schema does not match the database file");
    }
    pos = validEnd = head.size();
    while (auto payload = detail::unframe(data, pos)) {
      replay(*payload);
      lastRecord = std::string_view(data).substr(validEnd, pos - validEnd);
      validEnd = pos;
    }
    if (validEnd != data.size()) std::filesystem::resize_file(*file_, validEnd);

    std::string pending;
    if (std::filesystem::exists(journalPath())) {
      std::string journal = detail::readAll(journalPath());
      std::size_t jpos = 0;
      if (auto payload = detail::unframe(journal, jpos); payload && journal.substr(0, jpos) != lastRecord) {
        replay(*payload);
        pending = journal.substr(0, jpos);
      }
    }
    fd_ = detail::openOrThrow(*file_, O_WRONLY | O_APPEND);
    if (!pending.empty()) {
      detail::writeFully(fd_, pending, *file_);
      ::fsync(fd_);
    }
    std::filesystem::remove(journalPath());
  }

  void replay(std::string_view payload) {
    try {
      for (const auto& op : detail::decodeOps(payload)) {
        applyOp(state_, op);
        if (op.kind == Op::Kind::Put) applyOp(state_, {Op::Kind::NextId, op.name, op.a, 0, {}});
      }
    } catch (const detail::Reader::Truncated&) {
      throw std::runtime_error(file_->string() + ": corrupt record");
    }
  }

  // Journal first, then the log, then drop the journal.
  void append(const std::vector<Op>& ops) {
    if (!file_) return;
    std::string rec = detail::frame(detail::encodeOps(ops));
    int j = detail::openOrThrow(journalPath(), O_WRONLY | O_CREAT | O_TRUNC);
    detail::writeFully(j, rec, journalPath());
    ::fsync(j);
    ::close(j);
    detail::writeFully(fd_, rec, *file_);
    ::fsync(fd_);
    std::filesystem::remove(journalPath());
  }

  void persistBurntKeys(const std::vector<Op>& redo) {
    std::vector<Op> keys;
    for (const auto& op : redo)
      if (op.kind == Op::Kind::NextId) keys.push_back(op);
    if (!keys.empty()) append(keys);
  }

  Schema schema_;
  std::optional<std::filesystem::path> file_;
  int fd_ = -1;
  mutable std::shared_mutex mu_;
  State state_;
};

}  // namespace spicey::db
