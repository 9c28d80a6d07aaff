#include <iostream>
#include <string>
#include <vector>

#include "ellscope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ellscope::run_cli(args, std::cout, std::cerr);
}
