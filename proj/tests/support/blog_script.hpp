#pragma once

// Scripted interactions with the generated Blog application, shared by the
// in-process tests and the HTTP acceptance run.

#include <stdexcept>
#include <string>
#include <vector>

#include "support/browser.hpp"

namespace spicey::testing::blogscript {

// Value of the option labelled `label` in the select named `select`.
inline std::string optionValue(const Page& p, const std::string& select, const std::string& label) {
  for (const Node* s : p.doc.findAll("select"))
    if (s->attrOr("name") == select)
      for (const Node* o : s->findAll("option"))
        if (o->textContent() == label) return o->attrOr("value");
  throw std::runtime_error("no option " + label + " in " + select);
}

inline std::vector<Edit> dateEdits(const std::string& field, int y, int mo, int d) {
  return {{field + "_0", {std::to_string(y)}}, {field + "_1", {std::to_string(mo)}}, {field + "_2", {std::to_string(d)}},
          {field + "_3", {"12"}},              {field + "_4", {"0"}},              {field + "_5", {"0"}}};
}

inline Page createTag(Browser& b, const std::string& name) {
  Page form = b.get("/newTag");
  return b.press(form, "create", {{"f0", {name}}});
}

inline Page createEntry(Browser& b, const std::string& title, const std::string& text, const std::string& author,
                        const std::vector<std::string>& tags = {}) {
  Page form = b.get("/newEntry");
  std::vector<Edit> edits{{"f0", {title}}, {"f1", {text}}, {"f2", {author}}};
  for (auto& e : dateEdits("f3", 2024, 5, 17)) edits.push_back(e);
  Edit tagEdit{"f4", {}};
  for (const auto& t : tags) tagEdit.values.push_back(optionValue(form, "f4", t));
  edits.push_back(tagEdit);
  return b.press(form, "create", edits);
}

inline Page createComment(Browser& b, const std::string& text, const std::string& author, const std::string& entry) {
  Page form = b.get("/newComment");
  std::vector<Edit> edits{{"f0", {text}}, {"f1", {author}}, {"f3", {optionValue(form, "f3", entry)}}};
  for (auto& e : dateEdits("f2", 2024, 5, 18)) edits.push_back(e);
  return b.press(form, "create", edits);
}

inline Page editEntryTags(Browser& b, const std::string& title, const std::vector<std::string>& tags) {
  Page list = b.get("/listEntry");
  Page form = b.press(list, "edit", {}, title);
  Edit tagEdit{"f4", {}};
  for (const auto& t : tags) tagEdit.values.push_back(optionValue(form, "f4", t));
  return b.press(form, "change", {tagEdit});
}

// Presses "delete" in the row showing `row`, then confirms when asked.
inline Page deleteRow(Browser& b, const std::string& listPath, const std::string& row) {
  Page list = b.get(listPath);
  Page next = b.press(list, "delete", {}, row);
  if (next.heading().rfind("Really delete", 0) != 0) return next;
  return b.press(next, "Yes");
}

}  // namespace spicey::testing::blogscript
