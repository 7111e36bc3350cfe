#include <iostream>
#include <string>
#include <vector>

#include "kgbench/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kgbench::cli::run(args, std::cout, std::cerr);
}
