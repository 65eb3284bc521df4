#pragma once

// Authentication scaffold and authorization gate. Login state is a session
// slot; credentials live in a small text file next to the database.

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "random.hpp"
#include "wui.hpp"

namespace spicey {

class AccessResult {
 public:
  static AccessResult granted() { return AccessResult(true, {}); }
  static AccessResult denied(std::string reason) {
    if (reason.empty()) reason = "access denied";
    return AccessResult(false, std::move(reason));
  }
  bool isGranted() const { return granted_; }
  const std::string& reason() const { return reason_; }
  bool operator==(const AccessResult&) const = default;

 private:
  AccessResult(bool g, std::string r) : granted_(g), reason_(std::move(r)) {}
  bool granted_;
  std::string reason_;
};

template <class E>
struct AccessType {
  enum class Kind { NewEntity, ListEntities, ShowEntity, UpdateEntity, DeleteEntity };
  Kind kind;
  std::optional<E> entity;

  static AccessType newEntity() { return {Kind::NewEntity, std::nullopt}; }
  static AccessType listEntities() { return {Kind::ListEntities, std::nullopt}; }
  static AccessType showEntity(E e) { return {Kind::ShowEntity, std::move(e)}; }
  static AccessType updateEntity(E e) { return {Kind::UpdateEntity, std::move(e)}; }
  static AccessType deleteEntity(E e) { return {Kind::DeleteEntity, std::move(e)}; }
};

// Runs `ctrl` only when `policy` grants access; otherwise shows the reason.
inline Controller checkAuthorization(std::function<AccessResult()> policy, Controller ctrl) {
  return [policy = std::move(policy), ctrl = std::move(ctrl)] {
    AccessResult r = policy();
    if (r.isGranted()) return ctrl();
    return displayErrorPage(r.reason());
  };
}

inline Controller checkAuthorization(AccessResult result, Controller ctrl) {
  return checkAuthorization([result] { return result; }, std::move(ctrl));
}

template <class E>
AccessResult allowAll(const AccessType<E>&) {
  return AccessResult::granted();
}

template <class E>
AccessResult disallowDelete(const AccessType<E>& at) {
  if (at.kind == AccessType<E>::Kind::DeleteEntity) return AccessResult::denied("Delete not allowed!");
  return AccessResult::granted();
}

// ---- login state ----------------------------------------------------------

inline const SessionSlot<std::string> sessionLogin{"sessionLogin"};

inline std::optional<std::string> getSessionLogin() { return getSessionData(sessionLogin); }
inline void loginToSession(std::string login) { putSessionData(std::move(login), sessionLogin); }
inline void logoutFromSession() { removeSessionData(sessionLogin); }

// ---- credentials ------------------------------------------------------------

inline constexpr std::size_t kSaltBytes = 16;

// HMAC-SHA256 keyed by the salt over the length-prefixed login followed by
// the password, hex encoded.
inline std::string hashCredential(std::string_view login, std::string_view password,
                                  const std::vector<std::uint8_t>& salt) {
  if (salt.size() < kSaltBytes) throw std::invalid_argument("salt must have at least 16 bytes");
  std::string msg;
  auto n = static_cast<std::uint32_t>(login.size());
  for (int i = 3; i >= 0; --i) msg += static_cast<char>((n >> (8 * i)) & 0xff);
  msg += login;
  msg += password;
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!HMAC(EVP_sha256(), salt.data(), static_cast<int>(salt.size()),
            reinterpret_cast<const unsigned char*>(msg.data()), msg.size(), out, &len))
    throw std::runtime_error("HMAC failed");
  return toHex(out, len);
}

// Uniform over [A-Za-z0-9].
inline std::string makeRandomPassword(std::size_t length) {
  static constexpr std::string_view alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  std::string out;
  while (out.size() < length) {
    for (std::uint8_t b : randomBytes(length)) {
      if (b >= 248) continue;  // 248 = 4 * 62, keeps the draw uniform
      out += alphabet[b % alphabet.size()];
      if (out.size() == length) break;
    }
  }
  return out;
}

// Lines of the form login:saltHex:hashHex. An empty path keeps the
// credentials in memory only.
class CredentialStore {
 public:
  explicit CredentialStore(std::filesystem::path file) : file_(std::move(file)) { load(); }

  const std::filesystem::path& file() const { return file_; }

  bool verify(const std::string& login, const std::string& password) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(login);
    if (it == entries_.end()) return false;
    return hashCredential(login, password, it->second.salt) == it->second.hash;
  }

  bool contains(const std::string& login) const {
    std::lock_guard lock(mu_);
    return entries_.count(login) > 0;
  }

  // Adds or replaces a login with a fresh salt.
  void set(const std::string& login, const std::string& password) {
    if (login.empty() || login.find(':') != std::string::npos || login.find('\n') != std::string::npos)
      throw std::invalid_argument("invalid login name");
    std::lock_guard lock(mu_);
    auto salt = randomBytes(kSaltBytes);
    entries_[login] = {salt, hashCredential(login, password, salt)};
    save();
  }

  void remove(const std::string& login) {
    std::lock_guard lock(mu_);
    if (entries_.erase(login)) save();
  }

 private:
  struct Entry {
    std::vector<std::uint8_t> salt;
    std::string hash;
  };

  void load() {
    if (file_.empty()) return;
    std::ifstream in(file_);
    std::string line;
    while (std::getline(in, line)) {
      auto a = line.find(':'), b = line.rfind(':');
      if (a == std::string::npos || a == b) continue;
      try {
        entries_[line.substr(0, a)] = {fromHex(line.substr(a + 1, b - a - 1)), line.substr(b + 1)};
      } catch (const std::invalid_argument&) {
        // skip malformed lines
      }
    }
  }

  void save() const {
    if (file_.empty()) return;
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    auto tmp = file_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      for (const auto& [login, e] : entries_) out << login << ':' << toHex(e.salt) << ':' << e.hash << '\n';
    }
    std::filesystem::rename(tmp, file_);
  }

  std::filesystem::path file_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

// ---- login and logout controllers ---------------------------------------

inline Controller loginController(std::shared_ptr<CredentialStore> creds, Controller afterLogin);

namespace detail {
inline HtmlPage loginForm(std::shared_ptr<CredentialStore> creds, Controller afterLogin, std::string error) {
  using namespace wui;
  auto spec = wPair(wRequiredString(), wPassword()).withRendering(renderLabels({"Login name:", "Password:"}));
  HtmlPage page{h1({htxt("Login")})};
  if (!error.empty()) page.push_back(HtmlExp::element("p", {{"class", "error"}}, {htxt(error)}));
  HtmlPage form = runForm(
      spec, {"", ""},
      [creds, afterLogin](const std::tuple<std::string, std::string>& v) -> Controller {
        const auto& [login, password] = v;
        if (!creds->verify(login, password))
          return [creds, afterLogin] { return loginForm(creds, afterLogin, "Wrong login name or password"); };
        loginToSession(login);
        setPageMessage("Logged in as " + login);
        return afterLogin;
      },
      "Login");
  page.insert(page.end(), form.begin(), form.end());
  return page;
}
}  // namespace detail

// Shows the login form, or the current login with a logout button.
inline Controller loginController(std::shared_ptr<CredentialStore> creds, Controller afterLogin) {
  return [creds, afterLogin] {
    if (auto login = getSessionLogin()) {
      return HtmlPage{h1({htxt("Login")}), par({htxt("Logged in as " + *login)}),
                      button("Logout", nextController([afterLogin] {
                               logoutFromSession();
                               setPageMessage("Logged out");
                               return afterLogin();
                             }))};
    }
    return detail::loginForm(creds, afterLogin, "");
  };
}

inline Controller logoutController(Controller after) {
  return [after] {
    bool was = getSessionLogin().has_value();
    logoutFromSession();
    setPageMessage(was ? "Logged out" : "Not logged in");
    return after();
  };
}

}  // namespace spicey
