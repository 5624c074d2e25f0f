#include <iostream>
#include <string>
#include <vector>

#include "hceval/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hceval::run_cli(args, std::cout, std::cerr);
}
