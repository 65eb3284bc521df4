#pragma once

// HTTP/1.1 front end for App, plus the command line every generated
// application shares.

#include <httplib.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "runtime.hpp"

namespace spicey {

struct ServeOptions {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string db;  // empty: application default
  std::optional<std::string> addUser;  // create a login and exit
};

// --port, --host, --db, --add-user; SPICEY_PORT when --port is absent.
// Returns an exit code when the process should stop right away.
inline std::optional<int> parseServeOptions(int argc, char** argv, ServeOptions& out,
                                            const std::string& description) {
  CLI::App cli{description};
  cli.add_option("--port", out.port, "TCP port")->envname("SPICEY_PORT")->check(CLI::Range(1, 65535));
  cli.add_option("--host", out.host, "bind address");
  cli.add_option("--db", out.db, "database file");
  std::string user;
  auto* add = cli.add_option("--add-user", user, "create a login with a random password and exit");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }
  if (add->count() > 0) out.addUser = user;
  return std::nullopt;
}

inline Request toRequest(const httplib::Request& r) {
  Request req;
  req.method = r.method;
  req.target = r.target.empty() ? r.path : r.target;
  for (const auto& [k, v] : r.headers) {
    std::string name = k;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    req.headers[name] = v;
  }
  req.body = r.body;
  return req;
}

namespace detail {
inline httplib::Server*& activeServer() {
  static httplib::Server* s = nullptr;
  return s;
}
inline void stopOnSignal(int) {
  if (activeServer()) activeServer()->stop();
}
}  // namespace detail

// Blocks until SIGINT/SIGTERM. Returns a process exit code.
template <class Ref>
int serve(App<Ref>& app, const ServeOptions& opts) {
  httplib::Server server;
  auto handler = [&app](const httplib::Request& r, httplib::Response& w) {
    Response res = app.handle(toRequest(r));
    w.status = res.status;
    for (const auto& [k, v] : res.headers) w.set_header(k, v);
    w.set_content(res.body, res.contentType);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);

  detail::activeServer() = &server;
  std::signal(SIGINT, detail::stopOnSignal);
  std::signal(SIGTERM, detail::stopOnSignal);
  if (!server.bind_to_port(opts.host, opts.port)) {
    std::cerr << "cannot bind " << opts.host << ":" << opts.port << '\n';
    detail::activeServer() = nullptr;
    return 2;
  }
  std::cout << "listening on http://" << opts.host << ":" << opts.port << '/' << std::endl;
  bool ok = server.listen_after_bind();
  detail::activeServer() = nullptr;
  return ok ? 0 : 1;
}

}  // namespace spicey
