#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Unified proximal SGD experiments"};
  app.require_subcommand(1);
  std::string spec_file;
  for (const char* name : {"run", "rates", "check", "solve"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("spec", spec_file, "experiment spec file")->required()->check(CLI::ExistingFile);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : unisgd::cli::ExitCode::spec_error;
  }
  return unisgd::cli::dispatch(app.get_subcommands().front()->get_name(), spec_file, std::cout, std::cerr);
}
