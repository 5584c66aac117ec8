#include <iostream>
#include <string>
#include <vector>

#include "cheaptalk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cheaptalk::run_cli(args, std::cout, std::cerr);
}
