// Entry point: serves the application over HTTP.
//   --port N (or SPICEY_PORT), --host ADDR, --db FILE, --add-user LOGIN

#include <exception>
#include <iostream>
#include <string>

#include "spicey/server.hpp"
#include "system/App.hpp"

#ifndef SPICEY_PUBLIC_DIR
#define SPICEY_PUBLIC_DIR "public"
#endif

int main(int argc, char** argv) {
  spicey::ServeOptions opts;
  opts.db = "data/Blog.db";
  if (auto code = spicey::parseServeOptions(argc, argv, opts, "Blog web application")) return *code;
  try {
    blog::openBlogApp(opts.db);
    if (opts.addUser) {
      std::string password = spicey::makeRandomPassword(12);
      blog::blogCredentials()->set(*opts.addUser, password);
      std::cout << "created login " << *opts.addUser << " with password " << password << '\n';
      return 0;
    }
    spicey::App<blog::ControllerReference> app(blog::blogAppSpec(SPICEY_PUBLIC_DIR));
    return spicey::serve(app, opts);
  } catch (const std::exception& e) {
    std::cerr << "blog: " << e.what() << '\n';
    return 1;
  }
}
