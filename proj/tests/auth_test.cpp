#include <gtest/gtest.h>

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "spicey/auth.hpp"
#include "support/form_driver.hpp"

using namespace spicey;
using spicey::testing::PageDriver;
using spicey::testing::pageText;

namespace {

struct Item {
  int id;
};
using Access = AccessType<Item>;

std::string sha256(const std::string& data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, EVP_sha256(), nullptr);
  return std::string(reinterpret_cast<char*>(out), len);
}

// Textbook HMAC over plain SHA-256, independent of the HMAC() entry point.
std::string hmacOracle(std::string key, const std::string& msg) {
  if (key.size() > 64) key = sha256(key);
  key.resize(64, '\0');
  std::string ipad(64, 0), opad(64, 0);
  for (int i = 0; i < 64; ++i) {
    ipad[i] = static_cast<char>(key[i] ^ 0x36);
    opad[i] = static_cast<char>(key[i] ^ 0x5c);
  }
  std::string raw = sha256(opad + sha256(ipad + msg));
  return toHex(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size());
}

std::filesystem::path tempFile(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spicey_auth_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(AccessResult, DeniedWithoutReasonGetsDefault) {
  EXPECT_EQ(AccessResult::denied("").reason(), "access denied");
  EXPECT_EQ(AccessResult::denied("no").reason(), "no");
  EXPECT_TRUE(AccessResult::granted().isGranted());
  EXPECT_FALSE(AccessResult::denied("x").isGranted());
}

TEST(DisallowDelete, OnlyDeleteIsDenied) {
  Item it{1};
  EXPECT_TRUE(disallowDelete(Access::newEntity()).isGranted());
  EXPECT_TRUE(disallowDelete(Access::listEntities()).isGranted());
  EXPECT_TRUE(disallowDelete(Access::showEntity(it)).isGranted());
  EXPECT_TRUE(disallowDelete(Access::updateEntity(it)).isGranted());
  auto r = disallowDelete(Access::deleteEntity(it));
  EXPECT_FALSE(r.isGranted());
  EXPECT_EQ(r.reason(), "Delete not allowed!");
}

TEST(CheckAuthorization, PolicyEvaluatedAtCallTime) {
  bool allow = false;
  int runs = 0;
  Controller c = checkAuthorization([&] { return allow ? AccessResult::granted() : AccessResult::denied("nope"); },
                                    [&] {
                                      ++runs;
                                      return HtmlPage{htxt("inner")};
                                    });
  EXPECT_EQ(pageText(c()), "Errornope");
  EXPECT_EQ(runs, 0);
  allow = true;
  EXPECT_EQ(pageText(c()), "inner");
  EXPECT_EQ(runs, 1);
}

TEST(CheckAuthorization, DeniedDeleteShowsMessageAndSkipsController) {
  int runs = 0;
  Controller c = checkAuthorization(disallowDelete(Access::deleteEntity(Item{3})), [&] {
    ++runs;
    return HtmlPage{};
  });
  EXPECT_NE(pageText(c()).find("Delete not allowed!"), std::string::npos);
  EXPECT_EQ(runs, 0);
}

TEST(HashCredential, OracleAgreesWithPublishedVector) {
  // RFC 4231, test case 2
  EXPECT_EQ(hmacOracle("Jefe", "what do ya want for nothing?"),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(HashCredential, MatchesHmacOfLengthPrefixedInput) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint8_t> salt(16 + rng() % 8);
    for (auto& b : salt) b = static_cast<std::uint8_t>(rng());
    std::string login(rng() % 12, 'a'), pw(rng() % 12, 'b');
    for (auto& ch : login) ch = static_cast<char>(' ' + rng() % 90);
    for (auto& ch : pw) ch = static_cast<char>(' ' + rng() % 90);
    std::string msg;
    auto n = static_cast<std::uint32_t>(login.size());
    msg += static_cast<char>(n >> 24);
    msg += static_cast<char>(n >> 16);
    msg += static_cast<char>(n >> 8);
    msg += static_cast<char>(n);
    msg += login + pw;
    EXPECT_EQ(hashCredential(login, pw, salt), hmacOracle(std::string(salt.begin(), salt.end()), msg));
  }
}

TEST(HashCredential, ShortSaltRejected) {
  EXPECT_THROW(hashCredential("a", "b", std::vector<std::uint8_t>(15)), std::invalid_argument);
}

TEST(HashCredential, NoCollisionsOverRandomPairs) {
  std::mt19937 rng(12345);
  std::vector<std::uint8_t> salt(16, 0x42);
  std::set<std::pair<std::string, std::string>> inputs;
  std::set<std::string> hashes;
  auto word = [&] {
    std::string s(rng() % 6, 'x');
    for (auto& ch : s) ch = "abc"[rng() % 3];
    return s;
  };
  while (inputs.size() < 10000) {
    auto p = std::make_pair(word(), word());
    if (inputs.insert(p).second) hashes.insert(hashCredential(p.first, p.second, salt));
  }
  EXPECT_EQ(hashes.size(), inputs.size());
  // Concatenation-ambiguous pairs are kept apart by the length prefix.
  EXPECT_NE(hashCredential("ab", "c", salt), hashCredential("a", "bc", salt));
}

TEST(RandomPassword, AlphabetLengthAndSpread) {
  const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  std::map<char, int> counts;
  for (int i = 0; i < 1000; ++i) {
    std::string p = makeRandomPassword(62);
    ASSERT_EQ(p.size(), 62u);
    for (char c : p) {
      ASSERT_NE(alphabet.find(c), std::string::npos);
      ++counts[c];
    }
  }
  ASSERT_EQ(counts.size(), 62u);
  // 1000 expected per symbol; sd about 31.
  for (auto [c, n] : counts) {
    EXPECT_GT(n, 850) << c;
    EXPECT_LT(n, 1150) << c;
  }
  EXPECT_EQ(makeRandomPassword(0), "");
}

TEST(CredentialStore, SetVerifyReload) {
  auto file = tempFile("Blog.auth");
  {
    CredentialStore s(file);
    s.set("alice", "secret");
    s.set("bob", "hunter2");
    EXPECT_TRUE(s.verify("alice", "secret"));
    EXPECT_FALSE(s.verify("alice", "Secret"));
    EXPECT_FALSE(s.verify("carol", "secret"));
  }
  CredentialStore again(file);
  EXPECT_TRUE(again.verify("bob", "hunter2"));
  again.remove("bob");
  EXPECT_FALSE(CredentialStore(file).contains("bob"));
  EXPECT_TRUE(CredentialStore(file).contains("alice"));
  EXPECT_FALSE(std::filesystem::exists(file.string() + ".tmp"));
}

TEST(CredentialStore, FileNeverHoldsPlaintext) {
  auto file = tempFile("plain.auth");
  CredentialStore s(file);
  s.set("alice", "verysecretpassword");
  std::ifstream in(file);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(all.find("verysecretpassword"), std::string::npos);
  EXPECT_EQ(all.rfind("alice:", 0), 0u);
}

TEST(CredentialStore, SameSecretDifferentSalts) {
  auto file = tempFile("salt.auth");
  CredentialStore s(file);
  s.set("a", "pw");
  s.set("b", "pw");
  std::ifstream in(file);
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  EXPECT_NE(l1.substr(2), l2.substr(2));
}

TEST(CredentialStore, RejectsLoginWithSeparator) {
  CredentialStore s(tempFile("bad.auth"));
  EXPECT_THROW(s.set("a:b", "x"), std::invalid_argument);
  EXPECT_THROW(s.set("", "x"), std::invalid_argument);
}

TEST(LoginController, WrongPasswordThenSuccess) {
  auto creds = std::make_shared<CredentialStore>(tempFile("login.auth"));
  creds->set("alice", "pw1");
  PageDriver d;
  RequestScope scope(d.ctx);
  Controller home = [] { return HtmlPage{htxt("home")}; };
  HtmlPage form = loginController(creds, home)();
  HtmlPage bad = d.press(form, "Login", {{"f0", "alice"}, {"f1", "wrong"}});
  EXPECT_NE(pageText(bad).find("Wrong login name or password"), std::string::npos);
  EXPECT_EQ(getSessionLogin(), std::nullopt);

  HtmlPage ok = d.press(bad, "Login", {{"f0", "alice"}, {"f1", "pw1"}});
  EXPECT_EQ(pageText(ok), "home");
  EXPECT_EQ(getSessionLogin(), "alice");
  EXPECT_EQ(getPageMessage(), "Logged in as alice");

  HtmlPage status = loginController(creds, home)();
  EXPECT_NE(pageText(status).find("Logged in as alice"), std::string::npos);
  d.press(status, "Logout");
  EXPECT_EQ(getSessionLogin(), std::nullopt);
  EXPECT_EQ(getPageMessage(), "Logged out");
}

TEST(LoginController, EmptyLoginIsAFormError) {
  auto creds = std::make_shared<CredentialStore>(tempFile("empty.auth"));
  PageDriver d;
  RequestScope scope(d.ctx);
  HtmlPage form = loginController(creds, [] { return HtmlPage{htxt("home")}; })();
  HtmlPage again = d.press(form, "Login", {{"f1", "x"}});
  EXPECT_NE(pageText(again).find("Missing input"), std::string::npos);
  EXPECT_EQ(getSessionLogin(), std::nullopt);
}

TEST(LogoutController, ClearsLogin) {
  PageDriver d;
  RequestScope scope(d.ctx);
  loginToSession("bob");
  logoutController([] { return HtmlPage{}; })();
  EXPECT_EQ(getSessionLogin(), std::nullopt);
  EXPECT_EQ(getPageMessage(), "Logged out");
  logoutController([] { return HtmlPage{}; })();
  EXPECT_EQ(getPageMessage(), "Not logged in");
}
