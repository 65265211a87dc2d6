#include <iostream>
#include <string>
#include <vector>

#include "zaremba/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zaremba::run_cli(args, std::cout, std::cerr);
}
