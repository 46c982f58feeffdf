#include <iostream>
#include <string>
#include <vector>

#include "bmdist/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bmdist::cli::run(args, std::cout, std::cerr);
}
