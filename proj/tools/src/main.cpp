#include <iostream>

#include "frtsim_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return frtsim::cli::run_command(args, std::cout, std::cerr);
}
