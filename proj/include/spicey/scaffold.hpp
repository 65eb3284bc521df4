#pragma once

// Small helpers shared by generated applications: attribute conversions,
// display strings, ordering and the delete confirmation page.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auth.hpp"
#include "calendar.hpp"
#include "context.hpp"
#include "persistence.hpp"
#include "process.hpp"
#include "wui.hpp"

namespace spicey::scaffold {

// ---- attribute values --------------------------------------------------------

inline db::Value toValue(const std::string& s) { return s; }
inline db::Value toValue(std::int64_t v) { return v; }
inline db::Value toValue(double v) { return v; }
inline db::Value toValue(bool v) { return v; }
inline db::Value toValue(const CalendarTime& v) { return v; }
template <class T>
db::Value toValue(const std::optional<T>& v) {
  return v ? toValue(*v) : db::Value();
}

// Nullable strings store the empty string as null.
inline db::Value toNullableString(const std::string& s) { return s.empty() ? db::Value() : db::Value(s); }

template <class T>
struct FromValue {
  static T get(const db::Value& v) {
    if (const T* x = std::get_if<T>(&v)) return *x;
    return T{};
  }
};
template <class T>
struct FromValue<std::optional<T>> {
  static std::optional<T> get(const db::Value& v) {
    if (db::isNull(v)) return std::nullopt;
    return FromValue<T>::get(v);
  }
};

template <class T>
T fromValue(const db::Value& v) {
  return FromValue<T>::get(v);
}

// ---- display ---------------------------------------------------------------

inline std::string showField(const std::string& s) { return s; }
inline std::string showField(std::int64_t v) { return std::to_string(v); }
inline std::string showField(double v) { return wui::detail::showFloat(v); }
inline std::string showField(bool v) { return v ? "yes" : "no"; }
inline std::string showField(const CalendarTime& t) {
  std::string s = t.toIso();
  s[10] = ' ';
  return s;
}
template <class T>
std::string showField(const std::optional<T>& v) {
  return v ? showField(*v) : std::string();
}

// ---- keys ------------------------------------------------------------------

inline std::optional<std::int64_t> readKeyId(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v <= 0) return std::nullopt;
  return v;
}

template <class E>
auto keyOf(const std::optional<E>& e) -> std::optional<decltype(e->key)> {
  if (!e) return std::nullopt;
  return e->key;
}

template <class E>
auto keysOf(const std::vector<E>& es) -> std::vector<decltype(es.front().key)> {
  std::vector<decltype(es.front().key)> out;
  for (const auto& e : es) out.push_back(e.key);
  return out;
}

template <class K>
std::optional<std::int64_t> optionalId(const std::optional<K>& k) {
  if (!k) return std::nullopt;
  return k->id;
}

template <class K>
std::vector<std::int64_t> ids(const std::vector<K>& ks) {
  std::vector<std::int64_t> out;
  for (const auto& k : ks) out.push_back(k.id);
  return out;
}

// ---- lists -----------------------------------------------------------------

// Stable sort by a "less or equal" relation.
template <class T, class Leq>
std::vector<T> sortBy(std::vector<T> xs, Leq leq) {
  std::stable_sort(xs.begin(), xs.end(), [&](const T& a, const T& b) { return !leq(b, a); });
  return xs;
}

// Choice list for an optional reference: "no selection" comes first.
template <class T>
std::vector<std::optional<T>> withNone(const std::vector<T>& xs) {
  std::vector<std::optional<T>> out{std::nullopt};
  for (const auto& x : xs) out.emplace_back(x);
  return out;
}

template <class T>
std::function<std::string(const std::optional<T>&)> showOptional(std::function<std::string(const T&)> show) {
  return [show = std::move(show)](const std::optional<T>& x) { return x ? show(*x) : std::string("(none)"); };
}

template <class T, class Show>
std::string joinShown(const std::vector<T>& xs, Show show) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ", ";
    out += show(x);
  }
  return out;
}

// Current time in UTC, whole seconds.
inline CalendarTime currentTime() {
  auto now = std::chrono::system_clock::now();
  return CalendarTime::fromEpochSeconds(
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

// ---- pages -----------------------------------------------------------------

inline HtmlPage confirmationPage(const std::string& question, Controller yes, Controller no) {
  return {h1({htxt(question)}), button("Yes", nextController(std::move(yes))),
          button("No", nextController(std::move(no)))};
}

}  // namespace spicey::scaffold
