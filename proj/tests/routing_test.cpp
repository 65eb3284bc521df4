#include <gtest/gtest.h>

#include <random>

#include "spicey/routing.hpp"
#include "support/html_parser.hpp"

using namespace spicey;
using spicey::testing::parseHtmlDocument;

namespace {

enum class Ref { Error, EntryList, EntryNew, Tag, Login, Default };

std::vector<Route<Ref>> blogRoutes() {
  return {
      {"List Entry", RouteMatcher::exact("Entry"), Ref::EntryList},
      {"New Entry", RouteMatcher::exact("newEntry"), Ref::EntryNew},
      {"Tags", RouteMatcher::prefix("Tag"), Ref::Tag},
      {"Login", RouteMatcher::exact("login"), Ref::Login},
      {"default", RouteMatcher::always(), Ref::Default},
  };
}

}  // namespace

TEST(Dispatch, Examples) {
  auto routes = blogRoutes();
  EXPECT_EQ(dispatch("Entry", routes, Ref::Error), Ref::EntryList);
  EXPECT_EQ(dispatch("newEntry", routes, Ref::Error), Ref::EntryNew);
  EXPECT_EQ(dispatch("Tag", routes, Ref::Error), Ref::Tag);
  EXPECT_EQ(dispatch("Tagged", routes, Ref::Error), Ref::Tag);
  EXPECT_EQ(dispatch("Entr", routes, Ref::Error), Ref::Default);
  EXPECT_EQ(dispatch("", routes, Ref::Error), Ref::Default);
  EXPECT_EQ(dispatch("login", routes, Ref::Error), Ref::Login);
}

TEST(Dispatch, NoMatchGivesErrorRef) {
  std::vector<Route<Ref>> routes{{"x", RouteMatcher::exact("Entry"), Ref::EntryList}};
  EXPECT_EQ(dispatch("Comment", routes, Ref::Error), Ref::Error);
  EXPECT_EQ(dispatch("x", std::vector<Route<Ref>>{}, Ref::Error), Ref::Error);
}

TEST(Dispatch, CustomMatcher) {
  std::vector<Route<Ref>> routes{
      {"num", RouteMatcher::custom([](std::string_view p) { return !p.empty() && p.find_first_not_of("0123456789") == std::string_view::npos; }),
       Ref::Tag}};
  EXPECT_EQ(dispatch("123", routes, Ref::Error), Ref::Tag);
  EXPECT_EQ(dispatch("12a", routes, Ref::Error), Ref::Error);
  std::vector<Route<Ref>> empty{{"none", RouteMatcher::custom({}), Ref::Tag}};
  EXPECT_EQ(dispatch("x", empty, Ref::Error), Ref::Error);
}

// First-match semantics against a linear scan written independently.
TEST(Dispatch, FirstMatchWinsProperty) {
  std::mt19937 rng(99);
  auto word = [&] {
    std::string s(rng() % 4, 'a');
    for (auto& c : s) c = "ab"[rng() % 2];
    return s;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Route<int>> routes;
    std::vector<std::pair<int, std::string>> plain;  // kind, name
    int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      int kind = static_cast<int>(rng() % 3);
      std::string w = word();
      plain.emplace_back(kind, w);
      routes.push_back({"r", kind == 0 ? RouteMatcher::exact(w) : kind == 1 ? RouteMatcher::prefix(w) : RouteMatcher::always(), i});
    }
    std::string path = word();
    int expected = -1;
    for (int i = 0; i < n && expected < 0; ++i) {
      auto [kind, w] = plain[i];
      bool hit = kind == 2 || (kind == 0 && path == w) ||
                 (kind == 1 && path.size() >= w.size() && std::equal(w.begin(), w.end(), path.begin()));
      if (hit) expected = i;
    }
    ASSERT_EQ(dispatch(path, routes, -1), expected) << "path=" << path;
  }
}

TEST(Menu, OnlyExactRoutesInOrder) {
  auto doc = parseHtmlDocument(showHtml(menuFromRoutes(blogRoutes())));
  auto links = doc.findAll("a");
  ASSERT_EQ(links.size(), 3u);
  EXPECT_EQ(links[0]->attrOr("href"), "/Entry");
  EXPECT_EQ(links[0]->textContent(), "List Entry");
  EXPECT_EQ(links[1]->attrOr("href"), "/newEntry");
  EXPECT_EQ(links[2]->attrOr("href"), "/login");
  auto lists = doc.findAll("ul");
  ASSERT_EQ(lists.size(), 1u);
  EXPECT_EQ(lists[0]->attrOr("class"), "menu");
}

TEST(Menu, EmptyTable) {
  auto doc = parseHtmlDocument(showHtml(menuFromRoutes(std::vector<Route<Ref>>{})));
  EXPECT_TRUE(doc.findAll("a").empty());
}
