#include <gtest/gtest.h>

#include <random>

#include "spicey/html.hpp"
#include "spicey/random.hpp"
#include "support/html_parser.hpp"

using namespace spicey;
using spicey::testing::parseHtmlDocument;
using spicey::testing::decodeEntities;

namespace {

std::string randomString(std::mt19937& rng) {
  static const std::string alphabet = "ab <>&\"'=/;#xyz\n";
  std::uniform_int_distribution<int> len(0, 12), pick(0, static_cast<int>(alphabet.size()) - 1);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s += alphabet[static_cast<std::size_t>(pick(rng))];
  if (rng() % 5 == 0) s += "ü€";
  return s;
}

HtmlExp randomTree(std::mt19937& rng, int depth) {
  static const char* tags[] = {"p", "i", "b", "div", "span", "td", "input", "br", "ul"};
  if (depth == 0 || rng() % 3 == 0) return htxt(randomString(rng));
  std::string tag = tags[rng() % 9];
  HtmlAttrs attrs;
  int na = static_cast<int>(rng() % 3);
  for (int i = 0; i < na; ++i) attrs.emplace_back("a" + std::to_string(i), randomString(rng));
  std::vector<HtmlExp> children;
  if (!isVoidElement(tag)) {
    int nc = static_cast<int>(rng() % 4);
    for (int i = 0; i < nc; ++i) children.push_back(randomTree(rng, depth - 1));
  }
  return HtmlExp::element(tag, std::move(attrs), std::move(children));
}

}  // namespace

TEST(Htxt, EscapesMarkupCharacters) {
  EXPECT_EQ(htxt("a<b").text(), "a&lt;b");
  EXPECT_EQ(htxt("").text(), "");
  EXPECT_EQ(htxt("x & y").text(), "x &amp; y");
  EXPECT_EQ(htxt("\"q\" > 'a'").text(), "&quot;q&quot; &gt; 'a'");
  EXPECT_TRUE(htxt("a").isText());
}

TEST(Htxt, EscapingRoundTripsThroughEntityDecoding) {
  std::mt19937 rng(1);
  for (int i = 0; i < 2000; ++i) {
    std::string s = randomString(rng);
    EXPECT_EQ(decodeEntities(showHtml(htxt(s))), s);
  }
}

TEST(Builders, StructNodes) {
  EXPECT_EQ(par({htxt("hi")}), HtmlExp::element("p", {}, {htxt("hi")}));
  EXPECT_EQ(italic({}), HtmlExp::element("i"));
  EXPECT_EQ(showHtml(italic({})), "<i></i>");
  EXPECT_EQ(showHtml(breakline()), "<br/>");
  EXPECT_EQ(showHtml(table({{{htxt("a")}, {htxt("b")}}, {{htxt("c")}}})),
            "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td></tr></table>");
}

TEST(Builders, ButtonEncodesHandlerToken) {
  HandlerRef h{randomToken(), HandlerRef::Kind::SubmitButton};
  auto doc = parseHtmlDocument(showHtml(button("delete", h)));
  ASSERT_EQ(doc.children.size(), 1u);
  const auto& input = doc.children[0];
  EXPECT_EQ(input.tag, "input");
  EXPECT_EQ(input.attrOr("type"), "submit");
  EXPECT_EQ(input.attrOr("name"), "__h_" + h.token);
  EXPECT_EQ(input.attrOr("value"), "delete");
  auto fields = spicey::testing::collectFormFields(doc, "__h_" + h.token);
  ASSERT_EQ(fields.size(), 1u);
  EXPECT_EQ(fields[0].first.substr(kHandlerFieldPrefix.size()), h.token);
}

TEST(Builders, FormControls) {
  auto doc = parseHtmlDocument(showHtml(std::vector<HtmlExp>{
      textField("t", "a\"b"), hiddenField("h", "1"), checkBox("c", "True", true),
      checkBox("d", "True", false),
      selectField("s", {{"0", "zero", false}, {"1", "one", true}}),
      selectField("m", {{"0", "x", true}, {"1", "y", false}, {"2", "z", true}}, true),
      selectField("n", {{"0", "first", false}})}));
  auto fields = spicey::testing::collectFormFields(doc);
  spicey::testing::FormFields expected{{"t", "a\"b"}, {"h", "1"}, {"c", "True"}, {"s", "1"},
                                      {"m", "0"},     {"m", "2"}, {"n", "0"}};
  EXPECT_EQ(fields, expected);
}

TEST(TextOf, ExtractsTextualContent) {
  EXPECT_EQ(textOf(par({htxt("This is an "), italic({htxt("example")})})), "This is an example");
  EXPECT_EQ(textOf(HtmlExp::quotedText("")), "");
}

TEST(TextOf, WrapperTransparencyAndConcatenation) {
  std::mt19937 rng(2);
  for (int i = 0; i < 500; ++i) {
    HtmlExp h = randomTree(rng, 3);
    EXPECT_EQ(textOf(HtmlExp::element("div", {{"k", "v"}}, {h})), textOf(h));
    std::vector<HtmlExp> xs, ys;
    for (int j = static_cast<int>(rng() % 3); j > 0; --j) xs.push_back(randomTree(rng, 2));
    for (int j = static_cast<int>(rng() % 3); j > 0; --j) ys.push_back(randomTree(rng, 2));
    std::vector<HtmlExp> both = xs;
    both.insert(both.end(), ys.begin(), ys.end());
    EXPECT_EQ(textOf(HtmlExp::element("p", {}, both)),
              textOf(HtmlExp::element("p", {}, xs)) + textOf(HtmlExp::element("p", {}, ys)));
  }
}

TEST(ShowHtml, OutputIsWellFormed) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    HtmlExp h = randomTree(rng, 4);
    std::string s = showHtml(h);
    ASSERT_NO_THROW(parseHtmlDocument(s)) << s;
  }
}

TEST(ShowHtml, AttributesAreQuotedAndEscaped) {
  EXPECT_EQ(showHtml(HtmlExp::element("a", {{"href", "/x?a=1&b=\"2\""}}, {htxt("l")})),
            "<a href=\"/x?a=1&amp;b=&quot;2&quot;\">l</a>");
}

TEST(RenderDocument, EmptyBodySkeleton) {
  PageLayout layout;
  layout.formToken = "t0";
  std::string page = renderDocument(layout, {});
  EXPECT_EQ(page.rfind("<!DOCTYPE html>\n", 0), 0u);
  auto doc = parseHtmlDocument(page);
  EXPECT_EQ(doc.findAll("link").size(), 1u);
  EXPECT_EQ(doc.findAll("link")[0]->attrOr("href"), "/public/style.css");
  ASSERT_NE(doc.findById(kLayoutMarkerId), nullptr);
  auto forms = doc.findAll("form");
  ASSERT_EQ(forms.size(), 1u);
  ASSERT_EQ(forms[0]->children.size(), 1u);  // only the __form token
  EXPECT_EQ(forms[0]->children[0].attrOr("name"), "__form");
  EXPECT_EQ(forms[0]->children[0].attrOr("value"), "t0");
}

TEST(RenderDocument, BodyContentAndMessage) {
  PageLayout layout;
  layout.message = "Logged in as <bob>";
  layout.menu = ulist({{href("/listEntry", {htxt("list Entry")})}});
  std::string page = renderDocument(layout, {h1({htxt("Entry list")}), table({{{htxt("x")}}})});
  auto doc = parseHtmlDocument(page);
  EXPECT_EQ(doc.findAll("table").size(), 1u);
  EXPECT_NE(page.find("Logged in as &lt;bob&gt;"), std::string::npos);
  EXPECT_EQ(doc.findAll("a")[0]->attrOr("href"), "/listEntry");
  // Exactly one layout marker.
  int markers = 0;
  doc.visit([&](const auto& n) { markers += (!n.isText && n.attrOr("id") == kLayoutMarkerId); });
  EXPECT_EQ(markers, 1);
}

TEST(RenderDocument, Deterministic) {
  PageLayout layout;
  layout.formToken = "abc";
  std::vector<HtmlExp> body{par({htxt("x")})};
  EXPECT_EQ(renderDocument(layout, body), renderDocument(layout, body));
}

TEST(FormEnv, AbsentFieldsReadEmpty) {
  FormEnv env = FormEnv::fromUrlEncoded("a=1&b=x+y&a=2&c=%26%3D");
  EXPECT_EQ(env.values("a"), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(env.value("b"), "x y");
  EXPECT_EQ(env.value("c"), "&=");
  EXPECT_TRUE(env.values("missing").empty());
  EXPECT_EQ(env.value("missing"), "");
}

TEST(Url, SplitPathDecodesSegments) {
  EXPECT_EQ(splitPath("/listComment/42"), (std::vector<std::string>{"listComment", "42"}));
  EXPECT_EQ(splitPath("/listEntry"), (std::vector<std::string>{"listEntry"}));
  EXPECT_EQ(splitPath("/listComment/a%20b/c"), (std::vector<std::string>{"listComment", "a b", "c"}));
  EXPECT_EQ(splitPath("/"), std::vector<std::string>{});
  EXPECT_EQ(splitPath("/x?y=1"), (std::vector<std::string>{"x"}));
}
