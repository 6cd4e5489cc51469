#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto r = ualg::cli::run_command(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit;
}
