// Each application generated from the corpus starts, serves its pages and
// shuts down cleanly.

#include <gtest/gtest.h>

#include <filesystem>
#include <unistd.h>

#include "support/browser.hpp"
#include "support/server_process.hpp"

using namespace spicey::testing;
namespace fs = std::filesystem;

namespace {

struct AppBinary {
  const char* name;
  const char* path;
};

void PrintTo(const AppBinary& a, std::ostream* os) { *os << a.name; }

const std::vector<AppBinary> kApps = SPICEY_APPS;

class Boot : public ::testing::TestWithParam<AppBinary> {};

}  // namespace

TEST_P(Boot, ServesEveryMenuPage) {
  const auto& app = GetParam();
  fs::path dir = fs::temp_directory_path() / ("spicey_boot_" + std::string(app.name) + std::to_string(::getpid()));
  fs::remove_all(dir);
  int port = freePort();
  ServerProcess server(app.path, {"--port", std::to_string(port), "--host", "127.0.0.1", "--db",
                                  (dir / "app.db").string()});
  ASSERT_TRUE(server.waitListening()) << server.output();

  Browser b(httpTransport(port));
  Page home = b.get("/");
  EXPECT_EQ(home.status, 200);
  std::vector<std::string> links;
  for (const auto* ul : home.doc.findAll("ul"))
    if (ul->attrOr("class") == "menu")
      for (const auto* a : ul->findAll("a")) links.push_back(a->attrOr("href"));
  EXPECT_GE(links.size(), 4u);
  for (const auto& l : links) {
    Page p = b.get(l);
    EXPECT_EQ(p.status, 200) << l;
    EXPECT_NE(p.heading(), "Internal server error") << l;
  }
  EXPECT_EQ(b.get("/public/style.css").status, 200);
  EXPECT_EQ(server.stop(), 0);
  EXPECT_TRUE(fs::exists(dir / "app.db"));
  fs::remove_all(dir);
}

TEST_P(Boot, RejectsBadPort) {
  ServerProcess server(GetParam().path, {"--port", "70000"});
  EXPECT_FALSE(server.waitListening(std::chrono::seconds(5)));
  EXPECT_NE(server.stop(), 0);
}

INSTANTIATE_TEST_SUITE_P(Corpus, Boot, ::testing::ValuesIn(kApps),
                         [](const auto& info) { return std::string(info.param.name); });
