#pragma once

// Typed web user interfaces. A WuiSpec<V> renders a widget tree for a value
// of type V and decodes submitted form data back into a V, reporting invalid
// input inline next to the widget that produced it.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "calendar.hpp"
#include "context.hpp"
#include "html.hpp"

namespace spicey::wui {

// Position of a widget in a form: the child indices from the root.
class FieldPath {
 public:
  static FieldPath root() { return FieldPath(); }

  FieldPath child(std::size_t i) const {
    FieldPath p = *this;
    p.indices_.push_back(i);
    return p;
  }

  // "f", "f0", "f0_2_1", ...
  std::string name() const {
    std::string out = "f";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i > 0) out += '_';
      out += std::to_string(indices_[i]);
    }
    return out;
  }

  const std::vector<std::size_t>& indices() const { return indices_; }
  bool operator==(const FieldPath&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

// Combines the top-level widgets of a spec into one HtmlExp.
struct Arrangement {
  std::function<HtmlExp(std::vector<HtmlExp>)> arrange;
  std::optional<std::size_t> widgetCount;  // required widget count, if any
};

inline Arrangement identityArrangement() {
  return {[](std::vector<HtmlExp> parts) {
            if (parts.size() == 1) return std::move(parts.front());
            return HtmlExp::element("span", {}, std::move(parts));
          },
          std::nullopt};
}

inline Arrangement verticalArrangement() {
  return {[](std::vector<HtmlExp> parts) {
            std::vector<HtmlExp> rows;
            for (auto& p : parts)
              rows.push_back(HtmlExp::element("div", {{"class", "wui-row"}}, {std::move(p)}));
            return HtmlExp::element("div", {{"class", "wui-tuple"}}, std::move(rows));
          },
          std::nullopt};
}

// Two-column table: one row per (label, widget).
inline Arrangement renderLabels(std::vector<std::string> labels) {
  std::size_t n = labels.size();
  return {[labels = std::move(labels)](std::vector<HtmlExp> parts) {
            std::vector<std::vector<std::vector<HtmlExp>>> rows;
            for (std::size_t i = 0; i < parts.size(); ++i) {
              std::string label = i < labels.size() ? labels[i] : std::string();
              rows.push_back({{HtmlExp::element("label", {}, {htxt(label)})}, {std::move(parts[i])}});
            }
            return table(std::move(rows)).addClass("wui-labels");
          },
          n};
}

inline HtmlExp errorSpan(const std::string& msg) {
  return HtmlExp::element("span", {{"class", "wui-error"}}, {htxt(msg)});
}

template <class V>
class Decoded {
 public:
  Decoded(std::optional<V> value, HtmlExp form, int errors)
      : value_(std::move(value)), form_(std::move(form)), errors_(errors) {}

  bool ok() const { return value_.has_value(); }
  const V& value() const { return *value_; }
  const std::optional<V>& maybeValue() const { return value_; }
  // The widget re-rendered from the submitted data, with inline errors.
  const HtmlExp& form() const { return form_; }
  int errorCount() const { return errors_; }

 private:
  std::optional<V> value_;
  HtmlExp form_;
  int errors_;
};

inline constexpr const char* kDefaultErrorMessage = "Illegal input";

template <class V>
class WuiSpec {
 public:
  using value_type = V;
  using Parts = std::vector<HtmlExp>;
  struct PartsDecode {
    std::optional<V> value;
    Parts parts;
    int errors = 0;
  };
  using RenderParts = std::function<Parts(const FieldPath&, const V&)>;
  using DecodeParts = std::function<PartsDecode(const FieldPath&, const FormEnv&)>;

  WuiSpec(std::size_t arity, RenderParts render, DecodeParts decode, Arrangement arrangement)
      : arity_(arity),
        renderParts_(std::move(render)),
        decodeParts_(std::move(decode)),
        arrangement_(std::move(arrangement)) {}

  std::size_t arity() const { return arity_; }
  const std::string& errorMessage() const { return errorMessage_; }

  HtmlExp render(const FieldPath& path, const V& value) const {
    return arrangement_.arrange(renderParts_(path, value));
  }

  Decoded<V> decode(const FieldPath& path, const FormEnv& env) const {
    PartsDecode d = decodeParts_(path, env);
    HtmlExp arranged = arrangement_.arrange(std::move(d.parts));
    if (d.value && !satisfied(*d.value)) {
      return Decoded<V>(std::nullopt,
                        HtmlExp::element("div", {{"class", "wui-invalid"}},
                                         {errorSpan(errorMessage_), std::move(arranged)}),
                        d.errors + 1);
    }
    return Decoded<V>(std::move(d.value), std::move(arranged), d.errors);
  }

  // Accept only values satisfying `pred` (in addition to existing conditions).
  WuiSpec withCondition(std::function<bool(const V&)> pred) const {
    WuiSpec s = *this;
    s.conditions_.push_back(std::move(pred));
    return s;
  }

  WuiSpec withErrorMessage(std::string msg) const {
    WuiSpec s = *this;
    s.errorMessage_ = std::move(msg);
    return s;
  }

  // Throws std::invalid_argument when the arrangement expects a different
  // number of widgets than this spec has.
  WuiSpec withRendering(Arrangement arrangement) const {
    if (arrangement.widgetCount && *arrangement.widgetCount != arity_)
      throw std::invalid_argument("arrangement expects " + std::to_string(*arrangement.widgetCount) +
                                  " widgets but the spec has " + std::to_string(arity_));
    WuiSpec s = *this;
    s.arrangement_ = std::move(arrangement);
    return s;
  }

  bool satisfied(const V& v) const {
    return std::all_of(conditions_.begin(), conditions_.end(), [&](const auto& c) { return c(v); });
  }

 private:
  std::size_t arity_;
  RenderParts renderParts_;
  DecodeParts decodeParts_;
  Arrangement arrangement_;
  std::vector<std::function<bool(const V&)>> conditions_;
  std::string errorMessage_ = kDefaultErrorMessage;
};

namespace detail {

// A single-widget spec. `read` yields the value or an error message; `show`
// renders a widget from the raw submitted form data.
template <class V>
struct LeafResult {
  std::optional<V> value;
  std::string error;
};

template <class V>
WuiSpec<V> leaf(std::function<HtmlExp(const FieldPath&, const V&)> renderValue,
                std::function<LeafResult<V>(const FieldPath&, const FormEnv&)> read,
                std::function<HtmlExp(const FieldPath&, const FormEnv&)> renderRaw) {
  auto render = [renderValue](const FieldPath& p, const V& v) {
    return std::vector<HtmlExp>{renderValue(p, v)};
  };
  auto decode = [read, renderRaw](const FieldPath& p, const FormEnv& env) {
    typename WuiSpec<V>::PartsDecode out;
    LeafResult<V> r = read(p, env);
    HtmlExp widget = renderRaw(p, env);
    if (r.value) {
      out.value = std::move(r.value);
      out.parts.push_back(std::move(widget));
    } else {
      out.errors = 1;
      out.parts.push_back(HtmlExp::element("span", {{"class", "wui-invalid"}},
                                           {std::move(widget), errorSpan(r.error)}));
    }
    return out;
  };
  return WuiSpec<V>(1, render, decode, identityArrangement());
}

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

inline std::optional<std::int64_t> parseInt(std::string_view raw) {
  std::string s = trim(raw);
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  if (v.empty() || v.front() == '+') return std::nullopt;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

inline std::optional<double> parseFloat(std::string_view raw) {
  std::string s = trim(raw);
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  if (v.empty()) return std::nullopt;
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) return std::nullopt;
  return out;
}

inline std::string showFloat(double d) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

template <class V>
std::optional<std::size_t> indexOf(const std::vector<V>& choices, const V& v) {
  if constexpr (std::equality_comparable<V>) {
    for (std::size_t i = 0; i < choices.size(); ++i)
      if (choices[i] == v) return i;
  }
  return std::nullopt;
}

}  // namespace detail

inline WuiSpec<std::string> wString() {
  return detail::leaf<std::string>(
      [](const FieldPath& p, const std::string& v) { return textField(p.name(), v); },
      [](const FieldPath& p, const FormEnv& env) {
        return detail::LeafResult<std::string>{env.value(p.name()), {}};
      },
      [](const FieldPath& p, const FormEnv& env) { return textField(p.name(), env.value(p.name())); });
}

inline WuiSpec<std::string> wRequiredString() {
  return wString()
      .withCondition([](const std::string& s) { return !s.empty(); })
      .withErrorMessage("Missing input");
}

// Password input; the current value is never echoed back.
inline WuiSpec<std::string> wPassword() {
  return detail::leaf<std::string>(
      [](const FieldPath& p, const std::string&) { return passwordField(p.name()); },
      [](const FieldPath& p, const FormEnv& env) {
        return detail::LeafResult<std::string>{env.value(p.name()), {}};
      },
      [](const FieldPath& p, const FormEnv&) { return passwordField(p.name()); });
}

inline WuiSpec<std::int64_t> wInt() {
  return detail::leaf<std::int64_t>(
      [](const FieldPath& p, const std::int64_t& v) { return textField(p.name(), std::to_string(v)); },
      [](const FieldPath& p, const FormEnv& env) {
        auto v = detail::parseInt(env.value(p.name()));
        return detail::LeafResult<std::int64_t>{v, v ? "" : "not an integer"};
      },
      [](const FieldPath& p, const FormEnv& env) { return textField(p.name(), env.value(p.name())); });
}

inline WuiSpec<double> wFloat() {
  return detail::leaf<double>(
      [](const FieldPath& p, const double& v) { return textField(p.name(), detail::showFloat(v)); },
      [](const FieldPath& p, const FormEnv& env) {
        auto v = detail::parseFloat(env.value(p.name()));
        return detail::LeafResult<double>{v, v ? "" : "not a number"};
      },
      [](const FieldPath& p, const FormEnv& env) { return textField(p.name(), env.value(p.name())); });
}

// Checkbox; an unchecked box submits nothing and decodes to false.
inline WuiSpec<bool> wBool() {
  return detail::leaf<bool>(
      [](const FieldPath& p, const bool& v) { return checkBox(p.name(), "True", v); },
      [](const FieldPath& p, const FormEnv& env) {
        auto vs = env.values(p.name());
        if (vs.empty()) return detail::LeafResult<bool>{false, {}};
        if (std::all_of(vs.begin(), vs.end(), [](const auto& s) { return s == "True"; }))
          return detail::LeafResult<bool>{true, {}};
        return detail::LeafResult<bool>{std::nullopt, "not a boolean"};
      },
      [](const FieldPath& p, const FormEnv& env) {
        return checkBox(p.name(), "True", env.value(p.name()) == "True");
      });
}

// Six numeric sub-fields: year, month, day, hour, minute, second.
inline WuiSpec<CalendarTime> wDateType() {
  auto widget = [](const FieldPath& p, const std::array<std::string, 6>& fields) {
    static constexpr const char* seps[] = {"", "-", "-", " ", ":", ":"};
    std::vector<HtmlExp> parts;
    for (std::size_t i = 0; i < 6; ++i) {
      if (*seps[i]) parts.push_back(htxt(seps[i]));
      parts.push_back(
          textField(p.child(i).name(), fields[i]).addAttr("size", i == 0 ? "4" : "2"));
    }
    return HtmlExp::element("span", {{"class", "wui-date"}}, std::move(parts));
  };
  auto raw = [](const FieldPath& p, const FormEnv& env) {
    std::array<std::string, 6> f;
    for (std::size_t i = 0; i < 6; ++i) f[i] = env.value(p.child(i).name());
    return f;
  };
  return detail::leaf<CalendarTime>(
      [widget](const FieldPath& p, const CalendarTime& t) {
        return widget(p, {std::to_string(t.year), std::to_string(t.month), std::to_string(t.day),
                          std::to_string(t.hour), std::to_string(t.minute), std::to_string(t.second)});
      },
      [raw](const FieldPath& p, const FormEnv& env) {
        auto f = raw(p, env);
        int v[6];
        for (std::size_t i = 0; i < 6; ++i) {
          auto n = detail::parseInt(f[i]);
          if (!n || *n < -99999 || *n > 99999)
            return detail::LeafResult<CalendarTime>{std::nullopt, "invalid date"};
          v[i] = static_cast<int>(*n);
        }
        CalendarTime t{v[0], v[1], v[2], v[3], v[4], v[5]};
        if (!t.valid()) return detail::LeafResult<CalendarTime>{std::nullopt, "invalid date"};
        return detail::LeafResult<CalendarTime>{t, {}};
      },
      [widget, raw](const FieldPath& p, const FormEnv& env) { return widget(p, raw(p, env)); });
}

// Selection box; the submitted value is the index of the chosen element.
// Throws std::invalid_argument for an empty choice list.
template <class V>
WuiSpec<V> wSelect(std::function<std::string(const V&)> show, std::vector<V> choices) {
  if (choices.empty()) throw std::invalid_argument("wSelect: empty choice list");
  auto cs = std::make_shared<const std::vector<V>>(std::move(choices));
  auto widget = [cs, show](const FieldPath& p, std::optional<std::size_t> selected) {
    std::vector<SelectOption> opts;
    for (std::size_t i = 0; i < cs->size(); ++i)
      opts.push_back({std::to_string(i), show((*cs)[i]), selected == i});
    return selectField(p.name(), opts);
  };
  auto readIndex = [cs](const FieldPath& p, const FormEnv& env) -> std::optional<std::size_t> {
    auto n = detail::parseInt(env.value(p.name()));
    if (!n || *n < 0 || static_cast<std::size_t>(*n) >= cs->size()) return std::nullopt;
    return static_cast<std::size_t>(*n);
  };
  return detail::leaf<V>(
      [cs, widget](const FieldPath& p, const V& v) { return widget(p, detail::indexOf(*cs, v)); },
      [cs, readIndex](const FieldPath& p, const FormEnv& env) {
        auto i = readIndex(p, env);
        if (!i) return detail::LeafResult<V>{std::nullopt, "invalid selection"};
        return detail::LeafResult<V>{(*cs)[*i], {}};
      },
      [widget, readIndex](const FieldPath& p, const FormEnv& env) {
        return widget(p, readIndex(p, env));
      });
}

// Multiple selection; decodes to the chosen elements in choice-list order,
// without duplicates. An empty choice list renders an empty box.
template <class V>
WuiSpec<std::vector<V>> wMultiSelect(std::function<std::string(const V&)> show,
                                     std::vector<V> choices) {
  auto cs = std::make_shared<const std::vector<V>>(std::move(choices));
  auto widget = [cs, show](const FieldPath& p, const std::set<std::size_t>& selected) {
    std::vector<SelectOption> opts;
    for (std::size_t i = 0; i < cs->size(); ++i)
      opts.push_back({std::to_string(i), show((*cs)[i]), selected.count(i) > 0});
    return selectField(p.name(), opts, true);
  };
  auto readIndices = [cs](const FieldPath& p, const FormEnv& env) {
    std::set<std::size_t> idx;
    bool bad = false;
    for (const auto& raw : env.values(p.name())) {
      auto n = detail::parseInt(raw);
      if (!n || *n < 0 || static_cast<std::size_t>(*n) >= cs->size()) bad = true;
      else idx.insert(static_cast<std::size_t>(*n));
    }
    return std::pair{idx, bad};
  };
  return detail::leaf<std::vector<V>>(
      [cs, widget](const FieldPath& p, const std::vector<V>& vs) {
        std::set<std::size_t> sel;
        for (const auto& v : vs)
          if (auto i = detail::indexOf(*cs, v)) sel.insert(*i);
        return widget(p, sel);
      },
      [cs, readIndices](const FieldPath& p, const FormEnv& env) {
        auto [idx, bad] = readIndices(p, env);
        if (bad) return detail::LeafResult<std::vector<V>>{std::nullopt, "invalid selection"};
        std::vector<V> out;
        for (std::size_t i : idx) out.push_back((*cs)[i]);
        return detail::LeafResult<std::vector<V>>{std::move(out), {}};
      },
      [widget, readIndices](const FieldPath& p, const FormEnv& env) {
        return widget(p, readIndices(p, env).first);
      });
}

// Optional value: a checkbox enables the inner widget. Unchecked decodes to
// nullopt; the inner widget then shows `dflt` (or its submitted text).
template <class V>
WuiSpec<std::optional<V>> wCheckMaybe(WuiSpec<V> inner, std::string label, V dflt) {
  auto in = std::make_shared<const WuiSpec<V>>(std::move(inner));
  auto render = [in, label, dflt](const FieldPath& p, const std::optional<V>& v) {
    return std::vector<HtmlExp>{HtmlExp::element(
        "span", {{"class", "wui-maybe"}},
        {checkBox(p.child(0).name(), "True", v.has_value()), htxt(label),
         in->render(p.child(1), v ? *v : dflt)})};
  };
  auto decode = [in, label, dflt](const FieldPath& p, const FormEnv& env) {
    typename WuiSpec<std::optional<V>>::PartsDecode out;
    bool checked = env.value(p.child(0).name()) == "True";
    Decoded<V> d = in->decode(p.child(1), env);
    HtmlExp innerWidget = d.form();
    if (checked) {
      if (d.ok()) out.value = std::optional<V>(d.value());
      out.errors = d.errorCount();
    } else {
      out.value = std::optional<V>();
      if (!d.ok()) innerWidget = in->render(p.child(1), dflt);
    }
    out.parts.push_back(HtmlExp::element(
        "span", {{"class", "wui-maybe"}},
        {checkBox(p.child(0).name(), "True", checked), htxt(label), std::move(innerWidget)}));
    return out;
  };
  return WuiSpec<std::optional<V>>(1, render, decode, identityArrangement());
}

// Maps a spec over A to a spec over B through a bijection-like pair.
template <class A, class B>
WuiSpec<B> transformWSpec(std::function<B(const A&)> toB, std::function<A(const B&)> toA,
                          WuiSpec<A> spec) {
  auto in = std::make_shared<const WuiSpec<A>>(std::move(spec));
  auto render = [in, toA](const FieldPath& p, const B& b) {
    return std::vector<HtmlExp>{in->render(p, toA(b))};
  };
  auto decode = [in, toB](const FieldPath& p, const FormEnv& env) {
    typename WuiSpec<B>::PartsDecode out;
    Decoded<A> d = in->decode(p, env);
    if (d.ok()) out.value = toB(d.value());
    out.errors = d.errorCount();
    out.parts.push_back(d.form());
    return out;
  };
  return WuiSpec<B>(1, render, decode, identityArrangement());
}

// Tuples of any arity; component i lives under path.child(i).
template <class... Ts>
WuiSpec<std::tuple<Ts...>> wTuple(WuiSpec<Ts>... specs) {
  using Tup = std::tuple<Ts...>;
  auto ss = std::make_shared<const std::tuple<WuiSpec<Ts>...>>(std::move(specs)...);
  constexpr std::size_t N = sizeof...(Ts);
  auto render = [ss](const FieldPath& p, const Tup& v) {
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
      return std::vector<HtmlExp>{std::get<I>(*ss).render(p.child(I), std::get<I>(v))...};
    }(std::make_index_sequence<N>{});
  };
  auto decode = [ss](const FieldPath& p, const FormEnv& env) {
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
      auto ds = std::make_tuple(std::get<I>(*ss).decode(p.child(I), env)...);
      typename WuiSpec<Tup>::PartsDecode out;
      out.errors = (std::get<I>(ds).errorCount() + ... + 0);
      out.parts = std::vector<HtmlExp>{std::get<I>(ds).form()...};
      if ((std::get<I>(ds).ok() && ...)) out.value = Tup(std::get<I>(ds).value()...);
      return out;
    }(std::make_index_sequence<N>{});
  };
  return WuiSpec<Tup>(N, render, decode, verticalArrangement());
}

template <class A, class B>
WuiSpec<std::tuple<A, B>> wPair(WuiSpec<A> a, WuiSpec<B> b) {
  return wTuple(std::move(a), std::move(b));
}
template <class A, class B, class C>
WuiSpec<std::tuple<A, B, C>> wTriple(WuiSpec<A> a, WuiSpec<B> b, WuiSpec<C> c) {
  return wTuple(std::move(a), std::move(b), std::move(c));
}
template <class A, class B, class C, class D>
WuiSpec<std::tuple<A, B, C, D>> w4Tuple(WuiSpec<A> a, WuiSpec<B> b, WuiSpec<C> c, WuiSpec<D> d) {
  return wTuple(std::move(a), std::move(b), std::move(c), std::move(d));
}
template <class A, class B, class C, class D, class E>
WuiSpec<std::tuple<A, B, C, D, E>> w5Tuple(WuiSpec<A> a, WuiSpec<B> b, WuiSpec<C> c, WuiSpec<D> d,
                                           WuiSpec<E> e) {
  return wTuple(std::move(a), std::move(b), std::move(c), std::move(d), std::move(e));
}
template <class A, class B, class C, class D, class E, class F>
WuiSpec<std::tuple<A, B, C, D, E, F>> w6Tuple(WuiSpec<A> a, WuiSpec<B> b, WuiSpec<C> c,
                                              WuiSpec<D> d, WuiSpec<E> e, WuiSpec<F> f) {
  return wTuple(std::move(a), std::move(b), std::move(c), std::move(d), std::move(e), std::move(f));
}

template <class V>
WuiSpec<V> withCondition(const WuiSpec<V>& spec, std::function<bool(const V&)> pred) {
  return spec.withCondition(std::move(pred));
}
template <class V>
WuiSpec<V> withRendering(const WuiSpec<V>& spec, Arrangement a) {
  return spec.withRendering(std::move(a));
}
template <class V>
WuiSpec<V> withErrorMessage(const WuiSpec<V>& spec, std::string msg) {
  return spec.withErrorMessage(std::move(msg));
}

namespace detail {

template <class V>
HtmlPage formPage(std::shared_ptr<const WuiSpec<V>> spec, HtmlExp widget,
                  std::shared_ptr<const std::function<Controller(const V&)>> onSubmit,
                  std::string submitLabel, std::shared_ptr<const HtmlPage> header) {
  HandlerRef h = registerHandler([spec, onSubmit, submitLabel, header](const FormEnv& env) {
    Decoded<V> d = spec->decode(FieldPath::root(), env);
    if (d.ok()) return (*onSubmit)(d.value())();
    return formPage(spec, d.form(), onSubmit, submitLabel, header);
  });
  HtmlPage page = *header;
  page.push_back(HtmlExp::element("div", {{"class", "wui-form"}}, {std::move(widget)}));
  page.push_back(button(submitLabel, h));
  return page;
}

}  // namespace detail

// Renders `spec` for `initial` plus a submit button. Submitting decodes the
// form; valid input continues with onSubmit(value), invalid input re-displays
// the form with inline errors and a fresh handler. `header` precedes the form
// on every display. Requires an active request.
template <class V>
HtmlPage runForm(const WuiSpec<V>& spec, const std::type_identity_t<V>& initial,
                 std::type_identity_t<std::function<Controller(const V&)>> onSubmit,
                 std::string submitLabel = "submit", HtmlPage header = {}) {
  auto s = std::make_shared<const WuiSpec<V>>(spec);
  auto k = std::make_shared<const std::function<Controller(const V&)>>(std::move(onSubmit));
  return detail::formPage(s, s->render(FieldPath::root(), initial), k, std::move(submitLabel),
                          std::make_shared<const HtmlPage>(std::move(header)));
}

}  // namespace spicey::wui
