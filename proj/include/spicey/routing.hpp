#pragma once

// Route tables: a route names a controller reference and says which first
// path segments select it. Dispatch picks the first matching route.

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "html.hpp"

namespace spicey {

struct RouteMatcher {
  enum class Kind { Exact, Prefix, Always, Custom };
  Kind kind = Kind::Always;
  std::string name;
  std::function<bool(std::string_view)> predicate;

  static RouteMatcher exact(std::string n) { return {Kind::Exact, std::move(n), {}}; }
  static RouteMatcher prefix(std::string n) { return {Kind::Prefix, std::move(n), {}}; }
  static RouteMatcher always() { return {Kind::Always, {}, {}}; }
  static RouteMatcher custom(std::function<bool(std::string_view)> p) { return {Kind::Custom, {}, std::move(p)}; }

  bool matches(std::string_view path) const {
    switch (kind) {
      case Kind::Exact: return path == name;
      case Kind::Prefix: return path.substr(0, name.size()) == name;
      case Kind::Always: return true;
      case Kind::Custom: return predicate && predicate(path);
    }
    return false;
  }
};

template <class Ref>
struct Route {
  std::string displayName;
  RouteMatcher matcher;
  Ref target;
};

// `path` is the first URL path segment (possibly empty).
template <class Ref>
Ref dispatch(std::string_view path, const std::vector<Route<Ref>>& routes, Ref errorRef) {
  for (const auto& r : routes)
    if (r.matcher.matches(path)) return r.target;
  return errorRef;
}

// Navigation list with one link per Exact route, in route order.
template <class Ref>
HtmlExp menuFromRoutes(const std::vector<Route<Ref>>& routes) {
  std::vector<std::vector<HtmlExp>> items;
  for (const auto& r : routes)
    if (r.matcher.kind == RouteMatcher::Kind::Exact)
      items.push_back({href("/" + r.matcher.name, {htxt(r.displayName)})});
  return ulist(std::move(items)).addClass("menu");
}

}  // namespace spicey
