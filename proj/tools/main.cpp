#include <iostream>

#include <CLI11.hpp>

#include "cli_support.hpp"

namespace bushy::cli {
void register_bigness(CLI::App& app, Globals& g);
void register_forcing(CLI::App& app, Globals& g);
void register_splitting(CLI::App& app, Globals& g);
}  // namespace bushy::cli

namespace {

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bushy::cli;
  CLI::App app{"Bushy-tree forcing combinatorics at desk scale"};
  app.set_help_flag("--help", "print help and exit");
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--space", g.space_text, "bounded space W0,W1,.../D");
  app.add_option("--seed", g.seed, "seed for generator-backed verbs");
  app.add_option("--emit-dot", g.dot_path, "write the main result tree as Graphviz here");
  app.add_flag("--json", g.as_json, "print a JSON record instead of text");
  register_bigness(app, g);
  register_forcing(app, g);
  register_splitting(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "usage", e.what());
  } catch (const bushy::ParseError& e) {
    return fail(2, "parse", e.what());
  } catch (const bushy::DomainError& e) {
    return fail(1, "domain", e.what());
  } catch (const bushy::InvariantError& e) {
    return fail(1, "invariant", e.what());
  } catch (const std::exception& e) {
    return fail(1, "domain", e.what());
  }
  return 0;
}
