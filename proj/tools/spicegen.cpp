// spicegen: generates a web application from an ER model.
//
//   spicegen generate model.erdterm --out DIR [--force]
//   spicegen check model.erdterm
//   spicegen version
//
// Exit codes: 0 success, 1 invalid input, 2 I/O failure.

#include <CLI11.hpp>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "spicey/erd.hpp"
#include "spicey/gen.hpp"

namespace {

constexpr int kInvalidInput = 1;
constexpr int kIoFailure = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses and checks the model; prints diagnostics and returns nullopt when
// it cannot be generated.
std::optional<spicey::erd::ERD> load(const std::string& path, int& code) {
  std::string src;
  try {
    src = readInput(path);
  } catch (const InputError& e) {
    std::cerr << "spicegen: " << e.what() << '\n';
    code = kIoFailure;
    return std::nullopt;
  }
  spicey::erd::ERD erd;
  try {
    erd = spicey::erd::parseERD(src);
  } catch (const spicey::erd::ParseError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    code = kInvalidInput;
    return std::nullopt;
  }
  auto errs = spicey::gen::checkGeneratable(erd);
  if (!errs.empty()) {
    for (const auto& err : errs) std::cerr << path << ": " << err.message << '\n';
    code = kInvalidInput;
    return std::nullopt;
  }
  return erd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Generates a web application from an entity-relationship model"};
  cli.require_subcommand(1);

  std::string input, outDir;
  bool force = false;
  auto* gen = cli.add_subcommand("generate", "generate the application source tree");
  gen->add_option("model", input, "ER model in term syntax (.erdterm)")->required();
  gen->add_option("-o,--out", outDir, "output directory")->required();
  gen->add_flag("-f,--force", force, "write into a nonempty output directory");

  auto* check = cli.add_subcommand("check", "validate a model without generating");
  check->add_option("model", input, "ER model in term syntax (.erdterm)")->required();

  cli.add_subcommand("version", "print the generator version");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = cli.exit(e);
    return rc == 0 ? 0 : kInvalidInput;
  }

  if (cli.got_subcommand("version")) {
    std::cout << "spicegen " << spicey::gen::kGeneratorVersion << '\n';
    return 0;
  }

  int code = 0;
  auto erd = load(input, code);
  if (!erd) return code;

  if (cli.got_subcommand("check")) {
    std::cout << input << ": ok (" << erd->entities.size() << " entities, " << erd->relationships.size()
              << " relationships)\n";
    return 0;
  }

  spicey::gen::GeneratedTree tree;
  try {
    tree = spicey::gen::generate(*erd);
  } catch (const spicey::erd::InvalidErd& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  try {
    spicey::gen::writeTree(tree, outDir, force);
  } catch (const std::exception& e) {
    std::cerr << "spicegen: " << e.what() << '\n';
    return kIoFailure;
  }
  for (const auto& [path, contents] : tree) std::cout << path << '\n';
  return 0;
}
