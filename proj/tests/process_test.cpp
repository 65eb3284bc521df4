#include <gtest/gtest.h>

#include <random>

#include "spicey/process.hpp"
#include "support/form_driver.hpp"

using namespace spicey;
using spicey::testing::PageDriver;
using spicey::testing::pageText;

namespace {

enum class Ref { NewTag, NewEntry, ListTag };

// The tag-then-entry process: 0 -> 1 -> 2.
Processes<int, Ref> tagAndEntry() {
  Processes<int, Ref> p;
  p.startStates = {{"Insert new tag and entry", 0}};
  p.controllerOf = [](const int& s) -> std::optional<Ref> {
    switch (s) {
      case 0: return Ref::NewTag;
      case 1: return Ref::NewEntry;
      case 2: return Ref::ListTag;
    }
    return std::nullopt;
  };
  p.next = [](const int& s, const std::optional<ControllerResult>&) -> std::optional<int> {
    if (s == 0) return 1;
    if (s == 1) return 2;
    return std::nullopt;
  };
  return p;
}

// Each "new" page has a Save button that continues the process or falls
// back to its own list page.
struct Controllers {
  std::vector<std::string> trail;
  Controller resolve(Ref r) {
    switch (r) {
      case Ref::NewTag: return page("new tag", "tag list");
      case Ref::NewEntry: return page("new entry", "entry list");
      case Ref::ListTag: return [this] {
        trail.push_back("tag list");
        return HtmlPage{htxt("tag list")};
      };
    }
    return displayError("?");
  }
  Controller page(std::string title, std::string fallback) {
    return [this, title, fallback] {
      trail.push_back(title);
      return HtmlPage{htxt(title), button("Save", nextController(nextInProcessOr([this, fallback] {
                                                   trail.push_back(fallback);
                                                   return HtmlPage{htxt(fallback)};
                                                 })))};
    };
  }
};

}  // namespace

TEST(Process, TagThenEntryWalkthrough) {
  Controllers cs;
  ProcessEngine<int, Ref> engine(tagAndEntry(), [&](const Ref& r) { return cs.resolve(r); });
  PageDriver d;
  engine.install(d.ctx);
  RequestScope scope(d.ctx);

  HtmlPage p0 = engine.start(0)();
  EXPECT_EQ(engine.current(), 0);
  HtmlPage p1 = d.press(p0, "Save");
  EXPECT_EQ(engine.current(), 1);
  HtmlPage p2 = d.press(p1, "Save");
  EXPECT_EQ(pageText(p2), "tag list");
  EXPECT_EQ(engine.current(), std::nullopt);  // state 2 is final
  EXPECT_EQ(cs.trail, (std::vector<std::string>{"new tag", "new entry", "tag list"}));
}

TEST(Process, WithoutActiveProcessControllersUseTheirDefault) {
  Controllers cs;
  ProcessEngine<int, Ref> engine(tagAndEntry(), [&](const Ref& r) { return cs.resolve(r); });
  PageDriver d;
  engine.install(d.ctx);
  RequestScope scope(d.ctx);
  HtmlPage p = cs.resolve(Ref::NewTag)();
  EXPECT_EQ(pageText(d.press(p, "Save")), "tag list");
  EXPECT_EQ(cs.trail, (std::vector<std::string>{"new tag", "tag list"}));
  EXPECT_EQ(engine.current(), std::nullopt);
}

TEST(Process, NoHookInstalledRunsDefault) {
  PageDriver d;
  RequestScope scope(d.ctx);
  EXPECT_EQ(pageText(nextInProcessOr([] { return HtmlPage{htxt("dflt")}; })()), "dflt");
}

TEST(Process, ResultSelectsBranch) {
  Processes<int, int> p;
  p.startStates = {{"branch", 0}};
  p.controllerOf = [](const int& s) -> std::optional<int> { return s; };
  p.next = [](const int& s, const std::optional<ControllerResult>& r) -> std::optional<int> {
    if (s != 0) return std::nullopt;
    return r == "left" ? 1 : 2;
  };
  p.isFinal = [](const int& s) { return s != 0; };
  std::vector<int> ran;
  ProcessEngine<int, int> engine(p, [&](const int& r) -> Controller {
    return [&ran, r] {
      ran.push_back(r);
      return HtmlPage{};
    };
  });
  PageDriver d;
  engine.install(d.ctx);
  RequestScope scope(d.ctx);
  engine.start(0)();
  nextInProcessOr([] { return HtmlPage{}; }, "left")();
  engine.start(0)();
  nextInProcessOr([] { return HtmlPage{}; }, "right")();
  EXPECT_EQ(ran, (std::vector<int>{0, 1, 0, 2}));
}

TEST(Process, MenuListsStartLinks) {
  Controllers cs;
  ProcessEngine<int, Ref> engine(tagAndEntry(), [&](const Ref& r) { return cs.resolve(r); });
  PageDriver d;
  RequestScope scope(d.ctx);
  d.ctx.segments = {"processes"};
  auto doc = spicey::testing::parseHtmlDocument(showHtml(engine.menu()()));
  auto links = doc.findAll("a");
  ASSERT_EQ(links.size(), 1u);
  EXPECT_EQ(links[0]->attrOr("href"), "/processes/start/0");
  EXPECT_EQ(links[0]->textContent(), "Insert new tag and entry");

  d.ctx.segments = {"processes", "start", "0"};
  EXPECT_EQ(pageText(engine.menu()()).substr(0, 7), "new tag");
  EXPECT_EQ(engine.current(), 0);

  d.ctx.segments = {"processes", "start", "7"};
  EXPECT_NE(pageText(engine.menu()()).find("no such process"), std::string::npos);
  d.ctx.segments = {"processes", "start", "x"};
  EXPECT_NE(pageText(engine.menu()()).find("no such process"), std::string::npos);
}

TEST(Process, EmptySpecification) {
  Processes<int, Ref> p = tagAndEntry();
  p.startStates.clear();
  ProcessEngine<int, Ref> engine(p, [](const Ref&) { return displayError("x"); });
  PageDriver d;
  RequestScope scope(d.ctx);
  EXPECT_NE(pageText(engine.menu()()).find("No processes"), std::string::npos);
}

TEST(Process, StateWithoutControllerEndsProcess) {
  Processes<int, Ref> p = tagAndEntry();
  p.startStates = {{"broken", 9}};
  ProcessEngine<int, Ref> engine(p, [](const Ref&) { return displayError("x"); });
  PageDriver d;
  RequestScope scope(d.ctx);
  EXPECT_NE(pageText(engine.start(0)()).find("no controller"), std::string::npos);
  EXPECT_EQ(engine.current(), std::nullopt);
}

TEST(Process, CorruptStoredStateTerminates) {
  Controllers cs;
  ProcessEngine<int, Ref> engine(tagAndEntry(), [&](const Ref& r) { return cs.resolve(r); });
  PageDriver d;
  engine.install(d.ctx);
  RequestScope scope(d.ctx);
  putSessionData(std::string("garbage"), activeProcess);
  EXPECT_EQ(engine.advance(std::nullopt), std::nullopt);
  EXPECT_EQ(getSessionData(activeProcess), std::nullopt);
}

TEST(Process, NonIntegralStatesNeedCodec) {
  Processes<std::string, Ref> p;
  p.next = [](const std::string&, const std::optional<ControllerResult>&) { return std::optional<std::string>(); };
  EXPECT_THROW((ProcessEngine<std::string, Ref>(p, [](const Ref&) { return displayError("x"); })),
               std::invalid_argument);
}

// Along a random chain 0 -> 1 -> ... -> n-1, the active state after k steps
// is k while k < n - 1, and nothing afterwards.
TEST(Process, RandomChainsProperty) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 8);
    Processes<int, int> p;
    p.startStates = {{"chain", 0}};
    p.controllerOf = [](const int& s) -> std::optional<int> { return s; };
    p.next = [n](const int& s, const std::optional<ControllerResult>&) -> std::optional<int> {
      return s + 1 < n ? std::optional<int>(s + 1) : std::nullopt;
    };
    std::vector<int> ran;
    ProcessEngine<int, int> engine(p, [&](const int& r) -> Controller {
      return [&ran, r] {
        ran.push_back(r);
        return HtmlPage{};
      };
    });
    PageDriver d;
    engine.install(d.ctx);
    RequestScope scope(d.ctx);
    engine.start(0)();
    for (int k = 0; k < n + 2; ++k) {
      if (k < n - 1)
        ASSERT_EQ(engine.current(), k);
      else
        ASSERT_EQ(engine.current(), std::nullopt);
      nextInProcessOr([&ran] {
        ran.push_back(-1);
        return HtmlPage{};
      })();
    }
    std::vector<int> expected;
    for (int i = 0; i < n; ++i) expected.push_back(i);
    expected.insert(expected.end(), 3, -1);  // n - 1 advances, then defaults
    ASSERT_EQ(ran, expected);
  }
}
