#pragma once

// HTML documents as value trees. Text leaves hold already-quoted content;
// structures hold a tag, attributes, and children.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "url.hpp"

namespace spicey {

using HtmlAttrs = std::vector<std::pair<std::string, std::string>>;

class HtmlExp {
 public:
  HtmlExp() = default;

  static HtmlExp quotedText(std::string content) {
    HtmlExp h;
    h.text_ = std::move(content);
    return h;
  }
  static HtmlExp element(std::string tag, HtmlAttrs attrs = {}, std::vector<HtmlExp> children = {}) {
    HtmlExp h;
    h.isStruct_ = true;
    h.tag_ = std::move(tag);
    h.attrs_ = std::move(attrs);
    h.children_ = std::move(children);
    return h;
  }

  bool isText() const { return !isStruct_; }
  bool isStruct() const { return isStruct_; }
  const std::string& text() const { return text_; }
  const std::string& tag() const { return tag_; }
  const HtmlAttrs& attrs() const { return attrs_; }
  const std::vector<HtmlExp>& children() const { return children_; }

  const std::string* attr(std::string_view name) const {
    for (const auto& [k, v] : attrs_)
      if (k == name) return &v;
    return nullptr;
  }

  HtmlExp& addAttr(std::string name, std::string value) {
    attrs_.emplace_back(std::move(name), std::move(value));
    return *this;
  }
  HtmlExp& addClass(std::string_view cls) {
    for (auto& [k, v] : attrs_)
      if (k == "class") {
        v += " ";
        v += cls;
        return *this;
      }
    attrs_.emplace_back("class", std::string(cls));
    return *this;
  }
  HtmlExp& append(HtmlExp child) {
    children_.push_back(std::move(child));
    return *this;
  }

  bool operator==(const HtmlExp&) const = default;

 private:
  bool isStruct_ = false;
  std::string text_;
  std::string tag_;
  HtmlAttrs attrs_;
  std::vector<HtmlExp> children_;
};

using HtmlPage = std::vector<HtmlExp>;

inline std::string htmlQuote(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline HtmlExp htxt(std::string_view s) { return HtmlExp::quotedText(htmlQuote(s)); }

inline HtmlExp par(std::vector<HtmlExp> children) { return HtmlExp::element("p", {}, std::move(children)); }
inline HtmlExp italic(std::vector<HtmlExp> children) { return HtmlExp::element("i", {}, std::move(children)); }
inline HtmlExp bold(std::vector<HtmlExp> children) { return HtmlExp::element("b", {}, std::move(children)); }
inline HtmlExp h1(std::vector<HtmlExp> children) { return HtmlExp::element("h1", {}, std::move(children)); }
inline HtmlExp h2(std::vector<HtmlExp> children) { return HtmlExp::element("h2", {}, std::move(children)); }
inline HtmlExp block(std::vector<HtmlExp> children) { return HtmlExp::element("div", {}, std::move(children)); }
inline HtmlExp spanWithClass(std::string cls, std::vector<HtmlExp> children) {
  return HtmlExp::element("span", {{"class", std::move(cls)}}, std::move(children));
}
inline HtmlExp breakline() { return HtmlExp::element("br"); }

inline HtmlExp href(std::string url, std::vector<HtmlExp> children) {
  return HtmlExp::element("a", {{"href", std::move(url)}}, std::move(children));
}

inline HtmlExp ulist(std::vector<std::vector<HtmlExp>> items) {
  std::vector<HtmlExp> lis;
  for (auto& item : items) lis.push_back(HtmlExp::element("li", {}, std::move(item)));
  return HtmlExp::element("ul", {}, std::move(lis));
}

// Rows of cells; each cell is a list of HtmlExp.
inline HtmlExp table(std::vector<std::vector<std::vector<HtmlExp>>> rows) {
  std::vector<HtmlExp> trs;
  for (auto& row : rows) {
    std::vector<HtmlExp> tds;
    for (auto& cell : row) tds.push_back(HtmlExp::element("td", {}, std::move(cell)));
    trs.push_back(HtmlExp::element("tr", {}, std::move(tds)));
  }
  return HtmlExp::element("table", {}, std::move(trs));
}

// Reference to a server-side event handler registered in the session.
struct HandlerRef {
  enum class Kind { SubmitButton, HiddenForm };
  std::string token;
  Kind kind = Kind::SubmitButton;
  bool operator==(const HandlerRef&) const = default;
};

inline constexpr std::string_view kHandlerFieldPrefix = "__h_";
inline constexpr std::string_view kFormTokenField = "__form";

inline std::string handlerFieldName(const HandlerRef& h) {
  return std::string(kHandlerFieldPrefix) + h.token;
}

inline HtmlExp button(std::string label, const HandlerRef& handler) {
  return HtmlExp::element(
      "input", {{"type", "submit"}, {"name", handlerFieldName(handler)}, {"value", std::move(label)}});
}

inline HtmlExp textField(std::string name, std::string value) {
  return HtmlExp::element("input",
                          {{"type", "text"}, {"name", std::move(name)}, {"value", std::move(value)}});
}

inline HtmlExp passwordField(std::string name) {
  return HtmlExp::element("input", {{"type", "password"}, {"name", std::move(name)}, {"value", ""}});
}

inline HtmlExp hiddenField(std::string name, std::string value) {
  return HtmlExp::element("input",
                          {{"type", "hidden"}, {"name", std::move(name)}, {"value", std::move(value)}});
}

inline HtmlExp checkBox(std::string name, std::string value, bool checked) {
  HtmlExp h = HtmlExp::element(
      "input", {{"type", "checkbox"}, {"name", std::move(name)}, {"value", std::move(value)}});
  if (checked) h.addAttr("checked", "checked");
  return h;
}

// Options are (submitted value, shown label, selected).
struct SelectOption {
  std::string value;
  std::string label;
  bool selected = false;
};

inline HtmlExp selectField(std::string name, const std::vector<SelectOption>& options,
                           bool multiple = false) {
  std::vector<HtmlExp> opts;
  for (const auto& o : options) {
    HtmlExp opt = HtmlExp::element("option", {{"value", o.value}}, {htxt(o.label)});
    if (o.selected) opt.addAttr("selected", "selected");
    opts.push_back(std::move(opt));
  }
  HtmlAttrs attrs{{"name", std::move(name)}};
  if (multiple) attrs.emplace_back("multiple", "multiple");
  return HtmlExp::element("select", std::move(attrs), std::move(opts));
}

inline std::string textOf(const HtmlExp& h) {
  if (h.isText()) return h.text();
  std::string out;
  for (const auto& c : h.children()) out += textOf(c);
  return out;
}

inline std::string textOf(const std::vector<HtmlExp>& hs) {
  std::string out;
  for (const auto& h : hs) out += textOf(h);
  return out;
}

inline bool isVoidElement(std::string_view tag) {
  return tag == "input" || tag == "br" || tag == "img" || tag == "hr" || tag == "meta" ||
         tag == "link";
}

inline void showHtmlTo(const HtmlExp& h, std::string& out) {
  if (h.isText()) {
    out += h.text();
    return;
  }
  out += '<';
  out += h.tag();
  for (const auto& [k, v] : h.attrs()) {
    out += ' ';
    out += k;
    out += "=\"";
    out += htmlQuote(v);
    out += '"';
  }
  if (isVoidElement(h.tag())) {
    out += "/>";
    return;
  }
  out += '>';
  for (const auto& c : h.children()) showHtmlTo(c, out);
  out += "</";
  out += h.tag();
  out += '>';
}

inline std::string showHtml(const HtmlExp& h) {
  std::string out;
  showHtmlTo(h, out);
  return out;
}

inline std::string showHtml(const std::vector<HtmlExp>& hs) {
  std::string out;
  for (const auto& h : hs) showHtmlTo(h, out);
  return out;
}

// Everything around the body of a page.
struct PageLayout {
  std::string title = "Spicey application";
  std::string stylesheet = "/public/style.css";
  HtmlExp menu = HtmlExp::element("ul", {{"class", "menu"}});
  std::string message;
  std::string formToken;  // value of the hidden __form field
  std::string formAction = "/";
  std::vector<HtmlExp> footer;
};

inline constexpr std::string_view kLayoutMarkerId = "spicey-page";

// Full HTML page. The body is wrapped in a single POST form so that buttons
// anywhere on the page can submit to their registered handlers.
inline std::string renderDocument(const PageLayout& layout, const std::vector<HtmlExp>& body) {
  std::vector<HtmlExp> formContent;
  formContent.push_back(hiddenField(std::string(kFormTokenField), layout.formToken));
  for (const auto& h : body) formContent.push_back(h);

  HtmlExp head = HtmlExp::element(
      "head", {},
      {HtmlExp::element("meta", {{"charset", "utf-8"}}),
       HtmlExp::element("title", {}, {htxt(layout.title)}),
       HtmlExp::element("link", {{"rel", "stylesheet"}, {"href", layout.stylesheet}})});
  std::vector<HtmlExp> messageRegion;
  if (!layout.message.empty()) messageRegion.push_back(htxt(layout.message));
  HtmlExp page = HtmlExp::element(
      "div", {{"id", std::string(kLayoutMarkerId)}},
      {HtmlExp::element("div", {{"class", "header"}}, {h1({htxt(layout.title)})}),
       HtmlExp::element("nav", {{"class", "menubar"}}, {layout.menu}),
       HtmlExp::element("div", {{"class", "message"}}, std::move(messageRegion)),
       HtmlExp::element("div", {{"class", "content"}},
                        {HtmlExp::element("form",
                                          {{"method", "post"},
                                           {"action", layout.formAction},
                                           {"enctype", "application/x-www-form-urlencoded"}},
                                          std::move(formContent))}),
       HtmlExp::element("div", {{"class", "footer"}}, layout.footer)});
  HtmlExp html = HtmlExp::element("html", {{"lang", "en"}},
                                  {std::move(head), HtmlExp::element("body", {}, {std::move(page)})});
  return "<!DOCTYPE html>\n" + showHtml(html) + "\n";
}

// Submitted form fields; absent names read as empty.
class FormEnv {
 public:
  FormEnv() = default;
  explicit FormEnv(std::vector<std::pair<std::string, std::string>> fields)
      : fields_(std::move(fields)) {}

  static FormEnv fromUrlEncoded(std::string_view body) { return FormEnv(parseUrlEncoded(body)); }

  std::vector<std::string> values(std::string_view name) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : fields_)
      if (k == name) out.push_back(v);
    return out;
  }
  // First value or nullptr.
  const std::string* first(std::string_view name) const {
    for (const auto& [k, v] : fields_)
      if (k == name) return &v;
    return nullptr;
  }
  std::string value(std::string_view name) const {
    const std::string* v = first(name);
    return v ? *v : std::string();
  }
  void add(std::string name, std::string value) { fields_.emplace_back(std::move(name), std::move(value)); }
  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace spicey
