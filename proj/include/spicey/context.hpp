#pragma once

// The request a controller runs in. Controllers are plain functions returning
// page bodies; request-scoped operations (session data, handler registration,
// URL parameters) reach the active request through a thread-local pointer
// installed by RequestScope.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "html.hpp"
#include "session.hpp"

namespace spicey {

using Controller = std::function<HtmlPage()>;
using ControllerResult = std::string;

inline constexpr std::string_view kSessionCookie = "spicey_session";

inline std::map<std::string, std::string> parseCookies(std::string_view header) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < header.size()) {
    std::size_t semi = header.find(';', pos);
    if (semi == std::string_view::npos) semi = header.size();
    std::string_view part = header.substr(pos, semi - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    std::size_t eq = part.find('=');
    if (eq != std::string_view::npos) {
      std::string name(part.substr(0, eq));
      if (!out.count(name)) out.emplace(std::move(name), std::string(part.substr(eq + 1)));
    }
    pos = semi + 1;
  }
  return out;
}

inline std::string sessionCookieHeader(const SessionId& id) {
  return std::string(kSessionCookie) + "=" + id.str() + "; Path=/; HttpOnly";
}

struct RequestContext {
  std::string method = "GET";
  std::vector<std::string> segments;  // decoded URL path segments
  FormEnv form;
  std::map<std::string, std::string> cookies;
  std::size_t paramOffset = 1;  // segments[paramOffset..] are controller params

  SessionStore* sessions = nullptr;
  HandlerRegistry* handlers = nullptr;

  std::optional<SessionId> sessionId;
  bool newSessionCookie = false;

  // Installed by the application when a process specification exists.
  std::function<std::optional<Controller>(const std::optional<ControllerResult>&)> advanceProcess;
};

class NoActiveRequest : public std::logic_error {
 public:
  NoActiveRequest() : std::logic_error("operation requires an active request") {}
};

namespace detail {
inline RequestContext*& currentRequestSlot() {
  thread_local RequestContext* current = nullptr;
  return current;
}
}  // namespace detail

inline bool inRequest() { return detail::currentRequestSlot() != nullptr; }

inline RequestContext& currentRequest() {
  RequestContext* c = detail::currentRequestSlot();
  if (!c) throw NoActiveRequest();
  return *c;
}

// Installs `ctx` as the current request for the lifetime of the scope.
class RequestScope {
 public:
  explicit RequestScope(RequestContext& ctx) : previous_(detail::currentRequestSlot()) {
    detail::currentRequestSlot() = &ctx;
  }
  ~RequestScope() { detail::currentRequestSlot() = previous_; }
  RequestScope(const RequestScope&) = delete;
  RequestScope& operator=(const RequestScope&) = delete;

 private:
  RequestContext* previous_;
};

// The cookie's id when present and well-formed; otherwise a fresh id that is
// sent back with the response.
inline SessionId getSessionId() {
  RequestContext& ctx = currentRequest();
  if (!ctx.sessionId) {
    auto c = ctx.cookies.find(std::string(kSessionCookie));
    if (c != ctx.cookies.end()) ctx.sessionId = SessionId::parse(c->second);
    if (!ctx.sessionId) {
      ctx.sessionId = SessionId::fresh();
      ctx.newSessionCookie = true;
    }
  }
  return *ctx.sessionId;
}

namespace detail {
inline SessionStore& sessionStore() {
  RequestContext& ctx = currentRequest();
  if (!ctx.sessions) throw std::logic_error("request has no session store");
  return *ctx.sessions;
}
}  // namespace detail

template <class T>
std::optional<T> getSessionData(const SessionSlot<T>& slot) {
  return detail::sessionStore().get(slot, getSessionId());
}

template <class T>
void putSessionData(T value, const SessionSlot<T>& slot) {
  detail::sessionStore().put(slot, getSessionId(), std::move(value));
}

template <class T>
void removeSessionData(const SessionSlot<T>& slot) {
  detail::sessionStore().remove(slot, getSessionId());
}

inline void setPageMessage(std::string msg) { putSessionData(std::move(msg), pageMessage); }

// Read-once: returns the stored message and removes it.
inline std::string getPageMessage() {
  auto msg = detail::sessionStore().take(pageMessage, getSessionId());
  return msg ? *msg : std::string();
}

inline HandlerRef registerHandler(HtmlPageHandler handler,
                                  HandlerRef::Kind kind = HandlerRef::Kind::SubmitButton) {
  RequestContext& ctx = currentRequest();
  if (!ctx.handlers) throw std::logic_error("request has no handler registry");
  return ctx.handlers->add(getSessionId(), std::move(handler), kind);
}

// Registers `ctrl` as the continuation of a button or link.
inline HandlerRef nextController(Controller ctrl) {
  return registerHandler([ctrl = std::move(ctrl)](const FormEnv&) { return ctrl(); });
}

// URL path segments after the segment that selected the controller.
inline std::vector<std::string> getControllerParams() {
  RequestContext& ctx = currentRequest();
  if (ctx.paramOffset >= ctx.segments.size()) return {};
  return {ctx.segments.begin() + static_cast<std::ptrdiff_t>(ctx.paramOffset), ctx.segments.end()};
}

// Page body showing an error message; performs no state changes.
inline HtmlPage displayErrorPage(std::string_view msg) {
  std::string text = msg.empty() ? std::string("operation failed") : std::string(msg);
  return {h1({htxt("Error")}), HtmlExp::element("p", {{"class", "error"}}, {htxt(text)})};
}

inline Controller displayError(std::string msg) {
  return [msg = std::move(msg)] { return displayErrorPage(msg); };
}

}  // namespace spicey
