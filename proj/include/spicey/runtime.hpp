#pragma once

// Request handling for generated applications, independent of the HTTP
// server: static assets, handler continuations, dispatch and page layout.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "context.hpp"
#include "html.hpp"
#include "routing.hpp"
#include "session.hpp"
#include "url.hpp"

namespace spicey {

struct Request {
  std::string method = "GET";
  std::string target = "/";  // raw path plus optional query
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::string header(const std::string& name) const {
    auto it = headers.find(name);
    return it == headers.end() ? std::string() : it->second;
  }
};

struct Response {
  int status = 200;
  std::string contentType = "text/html; charset=utf-8";
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

template <class Ref>
struct AppSpec {
  std::string title = "Spicey application";
  // Consulted once per request, inside the request scope.
  std::function<std::vector<Route<Ref>>()> routes;
  std::function<Controller(const Ref&)> resolve;
  Ref errorRef{};
  std::filesystem::path publicDir = "public";
  // Per-request setup, e.g. installing the process hook.
  std::function<void(RequestContext&)> prepare;
};

inline constexpr std::string_view kPublicPrefix = "public";

inline std::string contentTypeFor(const std::filesystem::path& p) {
  static const std::map<std::string, std::string> types{
      {".css", "text/css"},          {".js", "text/javascript"},  {".html", "text/html; charset=utf-8"},
      {".txt", "text/plain"},        {".png", "image/png"},       {".jpg", "image/jpeg"},
      {".svg", "image/svg+xml"},     {".ico", "image/x-icon"},    {".json", "application/json"}};
  auto it = types.find(p.extension().string());
  return it == types.end() ? "application/octet-stream" : it->second;
}

inline HtmlPage expiredFormPage() {
  return {h1({htxt("Form expired")}),
          par({htxt("This form is no longer valid. Please reload the page and try again.")})};
}

template <class Ref>
class App {
 public:
  explicit App(AppSpec<Ref> spec, std::chrono::seconds horizon = kDefaultSessionHorizon,
               Clock clock = systemClock())
      : spec_(std::move(spec)),
        sessions_(horizon, clock),
        handlers_(kHandlerCapacity, horizon, clock) {}

  SessionStore& sessions() { return sessions_; }
  HandlerRegistry& handlers() { return handlers_; }

  Response handle(const Request& req) {
    auto segments = splitPath(req.target);
    if (!segments.empty() && segments[0] == kPublicPrefix) return serveStatic(segments);

    if (++requests_ % 256 == 0) {
      sessions_.purgeExpired();
      handlers_.purgeExpired();
    }

    RequestContext ctx;
    ctx.method = req.method;
    ctx.segments = segments;
    ctx.cookies = parseCookies(req.header("cookie"));
    ctx.sessions = &sessions_;
    ctx.handlers = &handlers_;
    if (req.method == "POST" &&
        req.header("content-type").rfind("application/x-www-form-urlencoded", 0) == 0)
      ctx.form = FormEnv::fromUrlEncoded(req.body);

    Response res;
    {
      RequestScope scope(ctx);
      try {
        if (spec_.prepare) spec_.prepare(ctx);
        sessions_.touch(getSessionId());
        auto routes = spec_.routes ? spec_.routes() : std::vector<Route<Ref>>{};
        HtmlPage body = run(ctx, routes);
        PageLayout layout;
        layout.title = spec_.title;
        layout.menu = menuFromRoutes(routes);
        layout.message = getPageMessage();
        layout.formToken = randomToken();
        layout.formAction = formAction(req.target);
        res.body = renderDocument(layout, body);
      } catch (const std::exception& e) {
        std::cerr << "spicey: internal error: " << e.what() << '\n';
        res = internalError();
      } catch (...) {
        std::cerr << "spicey: internal error\n";
        res = internalError();
      }
    }
    if (ctx.newSessionCookie && ctx.sessionId)
      res.headers.emplace_back("Set-Cookie", sessionCookieHeader(*ctx.sessionId));
    return res;
  }

 private:
  HtmlPage run(RequestContext& ctx, const std::vector<Route<Ref>>& routes) {
    if (ctx.method == "POST") {
      for (const auto& [name, value] : ctx.form.fields()) {
        if (name.rfind(kHandlerFieldPrefix, 0) != 0) continue;
        auto h = handlers_.find(getSessionId(), std::string_view(name).substr(kHandlerFieldPrefix.size()));
        if (!h) return expiredFormPage();
        // continuations do not see the parameters of the page URL
        ctx.paramOffset = ctx.segments.size();
        return (*h)(ctx.form);
      }
    }
    std::string first = ctx.segments.empty() ? std::string() : ctx.segments[0];
    ctx.paramOffset = 1;
    return spec_.resolve(dispatch(first, routes, spec_.errorRef))();
  }

  static std::string formAction(std::string_view target) {
    if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
    return target.empty() ? std::string("/") : std::string(target);
  }

  Response serveStatic(const std::vector<std::string>& segments) const {
    std::filesystem::path p = spec_.publicDir;
    for (std::size_t i = 1; i < segments.size(); ++i) {
      const auto& s = segments[i];
      if (s == ".." || s == "." || s.find('/') != std::string::npos || s.find('\\') != std::string::npos ||
          s.find('\0') != std::string::npos)
        return notFound();
      p /= s;
    }
    std::error_code ec;
    if (segments.size() < 2 || !std::filesystem::is_regular_file(p, ec)) return notFound();
    std::ifstream in(p, std::ios::binary);
    if (!in) return notFound();
    Response res;
    res.contentType = contentTypeFor(p);
    res.body.assign(std::istreambuf_iterator<char>(in), {});
    return res;
  }

  static Response notFound() {
    Response res;
    res.status = 404;
    res.contentType = "text/plain";
    res.body = "not found\n";
    return res;
  }

  Response internalError() const {
    Response res;
    res.status = 500;
    PageLayout layout;
    layout.title = spec_.title;
    res.body = renderDocument(layout, {h1({htxt("Internal server error")}),
                                       par({htxt("The request could not be processed.")})});
    return res;
  }

  AppSpec<Ref> spec_;
  SessionStore sessions_;
  HandlerRegistry handlers_;
  std::atomic<std::uint64_t> requests_{0};
};

}  // namespace spicey
