#pragma once

// Forms and pages for Entry entities.

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "spicey/context.hpp"
#include "spicey/html.hpp"
#include "spicey/scaffold.hpp"
#include "spicey/wui.hpp"
#include "views/BlogEntitiesToHtml.hpp"

namespace blog {

// Attributes, then related entities.
using EntryFormValue = std::tuple<std::string, std::string, std::string, spicey::CalendarTime, std::vector<Tag>>;

inline spicey::wui::WuiSpec<EntryFormValue> wEntry(const std::vector<Tag>& tagTaggingChoices) {
  return spicey::wui::wTuple(
             spicey::wui::wRequiredString(),
             spicey::wui::wRequiredString(),
             spicey::wui::wRequiredString(),
             spicey::wui::wDateType(),
             spicey::wui::wMultiSelect<Tag>(tagToShortView, tagTaggingChoices))
      .withRendering(spicey::wui::renderLabels(entryLabelList()));
}

inline EntryFormValue entryFormValue(const Entry& e, const std::vector<Tag>& tagTagging) {
  return EntryFormValue{e.entryTitle, e.entryText, e.entryAuthor, e.entryDate, tagTagging};
}

// Copies the form fields into `e`; the key is kept.
inline Entry applyEntryForm(Entry e, const EntryFormValue& v) {
  e.entryTitle = std::get<0>(v);
  e.entryText = std::get<1>(v);
  e.entryAuthor = std::get<2>(v);
  e.entryDate = std::get<3>(v);
  return e;
}

// Required references need a nonempty choice list.
inline spicey::HtmlPage createEntryView(const std::vector<Tag>& tagTaggingChoices, std::function<spicey::Controller(const EntryFormValue&)> store) {
  EntryFormValue initial{std::string(), std::string(), std::string(), spicey::scaffold::currentTime(), std::vector<Tag>()};
  spicey::HtmlPage page{spicey::h1({spicey::htxt("New Entry")})};
  return spicey::wui::runForm(wEntry(tagTaggingChoices), initial, std::move(store), "create", std::move(page));
}

inline spicey::HtmlPage editEntryView(const EntryFormValue& current, const std::vector<Tag>& tagTaggingChoices, std::function<spicey::Controller(const EntryFormValue&)> update) {
  spicey::HtmlPage page{spicey::h1({spicey::htxt("Edit Entry")})};
  return spicey::wui::runForm(wEntry(tagTaggingChoices), current, std::move(update), "change", std::move(page));
}

inline spicey::HtmlPage showEntryView(const Entry& e, const std::vector<Tag>& tagTagging) {
  auto rows = entryToDetailsView(e);
  rows.push_back({{spicey::htxt("tagged")}, {spicey::htxt(spicey::scaffold::joinShown(tagTagging, tagToShortView))}});
  return {spicey::h1({spicey::htxt("Entry " + entryToShortView(e))}), spicey::table(std::move(rows)),
          spicey::href("/listEntry", {spicey::htxt("back to Entry list")})};
}

inline spicey::HtmlPage listEntryView(const std::vector<Entry>& entities,
                                  const std::function<spicey::Controller(const Entry&)>& showController,
                                  const std::function<spicey::Controller(const Entry&)>& editController,
                                  const std::function<spicey::Controller(const Entry&)>& deleteController) {
  std::vector<std::vector<std::vector<spicey::HtmlExp>>> rows;
  std::vector<std::vector<spicey::HtmlExp>> header;
  for (std::size_t i = 0; i < 3; ++i) header.push_back({spicey::htxt(entryLabelList()[i])});
  rows.push_back(std::move(header));
  for (const auto& e : spicey::scaffold::sortBy(entities, leqEntry)) {
    auto row = entryToListView(e);
    row.push_back({spicey::button("show", spicey::nextController(showController(e))),
                   spicey::button("edit", spicey::nextController(editController(e))),
                   spicey::button("delete", spicey::nextController(deleteController(e)))});
    rows.push_back(std::move(row));
  }
  return {spicey::h1({spicey::htxt("Entry list")}), spicey::table(std::move(rows))};
}

}  // namespace blog
