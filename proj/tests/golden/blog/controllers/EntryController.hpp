#pragma once

// Controllers for Entry entities.

#include <optional>
#include <string>
#include <vector>

#include "config/AuthorizedOperations.hpp"
#include "models/Blog.hpp"
#include "spicey/auth.hpp"
#include "spicey/context.hpp"
#include "spicey/process.hpp"
#include "spicey/scaffold.hpp"
#include "views/EntryView.hpp"

namespace blog {

inline spicey::Controller listEntryController();
inline spicey::Controller showEntryController(const Entry& e);
inline spicey::Controller editEntryController(const Entry& e);
inline spicey::Controller deleteEntryController(const Entry& e);

// Lists all Entry entities; /listEntry/<key> shows one.
inline spicey::Controller listEntryController() {
  return spicey::checkAuthorization(
      [] { return entryOperationAllowed(spicey::AccessType<Entry>::listEntities()); }, [] {
        auto params = spicey::getControllerParams();
        if (!params.empty()) {
          auto key = readEntryKey(params[0]);
          auto e = key ? getEntry(*key) : std::nullopt;
          if (!e) return spicey::displayErrorPage("No Entry with key " + params[0]);
          return showEntryController(*e)();
        }
        return listEntryView(runQ(queryAllEntries()), showEntryController, editEntryController,
                          deleteEntryController);
      });
}

inline spicey::Controller createEntryController(const EntryFormValue& v) {
  return [v] {
    spicey::db::Tx<spicey::db::Unit> tx = spicey::db::bindT(
        newEntry(std::get<0>(v), std::get<1>(v), std::get<2>(v), std::get<3>(v)),
        [v](const Entry& e) -> spicey::db::Tx<spicey::db::Unit> {
          return setEntryTaggingLinks(e.key, spicey::scaffold::keysOf(std::get<4>(v)));
        });
    auto result = runT(tx);
    if (!result.ok()) return spicey::displayErrorPage(result.error());
    spicey::setPageMessage("Entry created");
    return spicey::nextInProcessOr(listEntryController())();
  };
}

inline spicey::Controller newEntryController() {
  return spicey::checkAuthorization(
      [] { return entryOperationAllowed(spicey::AccessType<Entry>::newEntity()); }, [] {
        auto tagTaggingChoices = runQ(queryAllTags());
        return createEntryView(tagTaggingChoices, createEntryController);
      });
}

inline spicey::Controller showEntryController(const Entry& e) {
  return spicey::checkAuthorization([e] { return entryOperationAllowed(spicey::AccessType<Entry>::showEntity(e)); }, [e] {
    auto cur = getEntry(e.key);
    if (!cur) return spicey::displayErrorPage("This Entry no longer exists.");
    auto tagTagging = runQ(queryTaggingTagsOfEntry(cur->key));
    return showEntryView(*cur, tagTagging);
  });
}

inline spicey::Controller updateEntryController(const Entry& e, const EntryFormValue& v) {
  return [e, v] {
    Entry updated = applyEntryForm(e, v);
    auto result = runT(spicey::db::bindT(updateEntry(updated), [=](const spicey::db::Unit&) { return setEntryTaggingLinks(updated.key, spicey::scaffold::keysOf(std::get<4>(v))); }));
    if (!result.ok()) return spicey::displayErrorPage(result.error());
    spicey::setPageMessage("Entry updated");
    return spicey::nextInProcessOr(listEntryController())();
  };
}

inline spicey::Controller editEntryController(const Entry& e) {
  return spicey::checkAuthorization([e] { return entryOperationAllowed(spicey::AccessType<Entry>::updateEntity(e)); }, [e] {
    auto cur = getEntry(e.key);
    if (!cur) return spicey::displayErrorPage("This Entry no longer exists.");
    auto tagTagging = runQ(queryTaggingTagsOfEntry(cur->key));
    auto tagTaggingChoices = runQ(queryAllTags());
    return editEntryView(entryFormValue(*cur, tagTagging),
                tagTaggingChoices,
                [cur = *cur](const EntryFormValue& v) { return updateEntryController(cur, v); });
  });
}

// Runs after confirmation; the entity may have disappeared meanwhile.
inline spicey::Controller destroyEntryController(const Entry& e) {
  return spicey::checkAuthorization([e] { return entryOperationAllowed(spicey::AccessType<Entry>::deleteEntity(e)); }, [e] {
    if (!getEntry(e.key)) {
      spicey::setPageMessage("Entry already deleted");
      return listEntryController()();
    }
    auto result = runT(deleteEntry(e));
    spicey::setPageMessage(result.ok() ? std::string("Entry deleted") : result.error());
    return listEntryController()();
  });
}

inline spicey::Controller deleteEntryController(const Entry& e) {
  return spicey::checkAuthorization([e] { return entryOperationAllowed(spicey::AccessType<Entry>::deleteEntity(e)); }, [e] {
    return spicey::scaffold::confirmationPage("Really delete entity \"" + entryToShortView(e) + "\"?",
                                              destroyEntryController(e), listEntryController());
  });
}

}  // namespace blog
