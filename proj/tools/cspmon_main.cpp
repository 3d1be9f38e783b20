#include <iostream>

#include "cspmon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cspmon::run_cli(args, std::cout, std::cerr);
}
